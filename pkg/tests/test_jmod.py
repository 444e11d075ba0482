import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from artinres.decomp import ClassRegistry
from artinres.errors import NotSingleClass
from artinres.jmod import (
    FiniteOrbit,
    Torsion,
    TorsionExceeded,
    find_periodic_module,
    hypersurface_check,
    j_apply,
    j_class,
    j_equal,
    j_zero,
    orbit,
    torsion_test,
    verify_annihilator,
    _cosyzygy_class,
)
from artinres.laurent import LaurentPoly
from artinres.modules import (
    cyclic_module,
    direct_sum,
    free_module,
    random_module,
    residue_field,
    strip_free_summands,
    syzygy,
)

from conftest import ci, dual_numbers, square_zero, truncated

RINGS = {"A2": dual_numbers, "C4": truncated, "CI": ci, "B": square_zero}
_cache = {}


def ring(name):
    if name not in _cache:
        A = RINGS[name]()
        _cache[name] = (A, ClassRegistry(A))
    return _cache[name]


def test_free_modules_are_zero(CI):
    reg = ClassRegistry(CI)
    assert j_class(free_module(CI, 3), reg).is_zero()
    assert j_class(direct_sum(free_module(CI, 1), residue_field(CI)), reg) == j_class(residue_field(CI), reg)


def test_normal_form_serialization(C4):
    reg = ClassRegistry(C4)
    x = j_class(direct_sum(cyclic_module(C4, ["x"]), cyclic_module(C4, ["x"]), free_module(C4, 1)), reg)
    d = x.to_dict()
    assert d == {"classes": [{"id": 0, "representative_dims": [1, 0], "coefficient": 2}]}


def test_t_action_hypersurface(C4):
    reg = ClassRegistry(C4)
    x = j_class(cyclic_module(C4, ["x"]), reg)
    y = j_class(cyclic_module(C4, ["x^3"]), reg)
    assert j_apply("t", x) == y and j_apply("t^-1", x) == y
    assert j_apply("t^2", x) == x
    assert j_apply("1 - t^2", x).is_zero()
    assert j_apply(LaurentPoly.parse("t^-3"), x) == y


def test_square_zero_recurrence(B):
    reg = ClassRegistry(B)
    k = j_class(residue_field(B), reg)
    assert j_apply("t^-1", k) == 2 * k
    assert j_apply("1 - 2*t", k).is_zero()
    v = torsion_test(k, 8)
    assert isinstance(v, Torsion) and v.method == "recurrence"
    assert v.annihilator == LaurentPoly.parse("1 - 2*t")
    assert verify_annihilator(v.annihilator, k)


def test_orbit_not_single_class_over_square_zero(B):
    reg = ClassRegistry(B)
    k = j_class(residue_field(B), reg)
    with pytest.raises(NotSingleClass):
        orbit(next(iter(k.support)), 4, reg)


def test_torsion_exceeded_over_ci(CI):
    reg = ClassRegistry(CI)
    v = torsion_test(j_class(residue_field(CI), reg), 6)
    assert isinstance(v, TorsionExceeded)
    (betti,) = v.detail["betti"].values()
    assert betti == list(range(1, 8))


def test_zero_element(CI):
    reg = ClassRegistry(CI)
    v = torsion_test(j_zero(reg), 3)
    assert isinstance(v, Torsion) and v.annihilator == LaurentPoly({0: 1})


def test_orbit_invariant(C4):
    reg = ClassRegistry(C4)
    cid = next(iter(j_class(cyclic_module(C4, ["x"]), reg).support))
    orb = orbit(cid, 6, reg)
    assert isinstance(orb, FiniteOrbit) and orb.length == 2
    for a, b in zip(orb.cycle, orb.cycle[1:] + orb.cycle[:1]):
        assert _cosyzygy_class(reg, a).support == {b: 1}


def test_hypersurface_check(C4, CI, B):
    reg = ClassRegistry(C4)
    rep = hypersurface_check(C4, [cyclic_module(C4, [g]) for g in ("x", "x^2", "x^3")], reg)
    assert rep["passed"] and all(r["annihilated_by_1_minus_t2"] for r in rep["samples"])
    reg = ClassRegistry(CI)
    rep = hypersurface_check(CI, [residue_field(CI)], reg, budget=4)
    assert rep["passed"] and not rep["samples"][0]["annihilated_by_1_minus_t2"]


def test_find_periodic(C4, B):
    found = find_periodic_module(C4, 4, 6, ClassRegistry(C4))
    assert found is not None and found.period in (1, 2)
    assert find_periodic_module(B, 6, 4, ClassRegistry(B)) is None


def test_registry_mismatch(C4):
    x = j_class(residue_field(C4), ClassRegistry(C4))
    y = j_class(residue_field(C4), ClassRegistry(C4))
    with pytest.raises(ValueError):
        j_equal(x, y)


@given(name=st.sampled_from(sorted(RINGS)), seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_laws(name, seed):
    A, reg = ring(name)
    rng = np.random.default_rng(seed)
    M, N = random_module(A, rng), random_module(A, rng)
    x, y = j_class(M, reg), j_class(N, reg)
    assert j_class(direct_sum(M, N), reg) == x + y
    assert j_apply("t^-1", x) == j_class(syzygy(M), reg)
    assert x.is_zero() == (strip_free_summands(M)[0].dim == 0)
