"""The Grothendieck module J(R) in normal form.

Elements are finite integer combinations of isomorphism classes of
non-free indecomposable modules, as registered in a
:class:`~artinres.decomp.ClassRegistry`.  The variable ``t`` acts on a class
by cosyzygy and ``t^-1`` by syzygy; both are pushed down to the basis, so an
element never carries symbolic powers of ``t``.

Over a Gorenstein algebra these normal forms are free over ``Z`` and
equality of normal forms is equality in J(R).  Over other algebras the
syzygy relation still holds class by class, but distinct normal forms may
represent the same element; :func:`j_equal` is then only a sufficient test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import sympy

from . import linalg as la
from .algebra import Algebra
from .decomp import ClassRegistry, decompose
from .errors import NotGorenstein, NotSingleClass
from .laurent import ONE, LaurentPoly
from .modules import (
    Module,
    cyclic_module,
    free_envelope,
    residue_field,
    strip_free_summands,
)
from .resolution import Periodic, betti_sequence, detect_periodicity


class JElement:
    __slots__ = ("registry", "_coeffs")

    def __init__(self, registry: ClassRegistry, coeffs: Mapping[int, int] | None = None):
        self.registry = registry
        clean: dict[int, int] = {}
        for cid, c in (coeffs or {}).items():
            if registry.is_free_class(cid):
                continue
            clean[int(cid)] = clean.get(int(cid), 0) + int(c)
        self._coeffs = tuple(sorted((k, v) for k, v in clean.items() if v))

    @property
    def support(self) -> dict[int, int]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: "JElement") -> None:
        if other.registry is not self.registry:
            raise ValueError("elements come from different class registries")

    def __add__(self, other: "JElement") -> "JElement":
        self._check(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs:
            out[k] = out.get(k, 0) + v
        return JElement(self.registry, out)

    def __neg__(self) -> "JElement":
        return JElement(self.registry, {k: -v for k, v in self._coeffs})

    def __sub__(self, other: "JElement") -> "JElement":
        return self + (-other)

    def __mul__(self, n: int) -> "JElement":
        return JElement(self.registry, {k: v * int(n) for k, v in self._coeffs})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, JElement) and other.registry is self.registry and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "JElement(0)"
        return "JElement(" + " + ".join(f"{c}*[{k}]" for k, c in self._coeffs) + ")"

    def to_dict(self) -> dict:
        reg = self.registry
        return {
            "classes": [
                {
                    "id": k,
                    "representative_dims": [int(b.shape[1]) for b in reg.representative(k).radical_filtration],
                    "coefficient": c,
                }
                for k, c in self._coeffs
            ]
        }


def j_zero(reg: ClassRegistry) -> JElement:
    return JElement(reg)


def j_basis(reg: ClassRegistry, cid: int) -> JElement:
    return JElement(reg, {cid: 1})


def j_class(M: Module, reg: ClassRegistry) -> JElement:
    """Normal form of ``[M]``: strip free summands, then decompose."""
    key = ("class", id(reg))
    cached = M.__dict__.get("_jclass")
    if cached is not None and cached[0] == key:
        return cached[1]
    N, _ = strip_free_summands(M)
    counts: dict[int, int] = {}
    for S in decompose(N, reg.budget, reg.rng):
        cid = reg.canonical_id(S)
        counts[cid] = counts.get(cid, 0) + 1
    out = JElement(reg, counts)
    M.__dict__["_jclass"] = (key, out)
    return out


# ---------------------------------------------------------------------------
# t-action
# ---------------------------------------------------------------------------


def _omega_class(reg: ClassRegistry, cid: int) -> JElement:
    key = ("omega", cid)
    if key not in reg.cache:
        reg.cache[key] = j_class(reg.representative(cid).omega, reg)
    return reg.cache[key]


def _cosyzygy_class(reg: ClassRegistry, cid: int) -> JElement:
    """``t [C]``: valid whenever the free envelope of ``C`` is injective."""
    key = ("cosyzygy", cid)
    if key not in reg.cache:
        rep = reg.representative(cid)
        if not reg.algebra.profile.is_gorenstein and not free_envelope(rep).is_injective():
            raise NotGorenstein(
                f"free envelope of class {cid} is not injective; t[{cid}] is not a cosyzygy class"
            )
        reg.cache[key] = j_class(rep.cosyzygy, reg)
    return reg.cache[key]


def _apply_class_map(x: JElement, step) -> JElement:
    out = JElement(x.registry)
    for cid, c in x.support.items():
        out = out + step(x.registry, cid) * c
    return out


def t_power(x: JElement, a: int) -> JElement:
    step = _cosyzygy_class if a > 0 else _omega_class
    for _ in range(abs(a)):
        if x.is_zero():
            break
        x = _apply_class_map(x, step)
    return x


def j_apply(f: Union[LaurentPoly, int, str], x: JElement, reg: ClassRegistry | None = None) -> JElement:
    """``f(t) * x``.

    Over non-Gorenstein algebras positive powers are first traded for
    negative ones (``f x = t^N (t^-N f) x``), since only the syzygy relation
    is available there.  If ``y = t^-N f x`` is nonzero it is still zero in
    J(R) when some syzygy power kills it; otherwise ``t^N y`` is computed by
    cosyzygies, which needs injective free envelopes.
    """
    f = _as_laurent(f)
    reg = reg or x.registry
    gorenstein = reg.algebra.profile.is_gorenstein
    shift = 0 if gorenstein else max(0, f.max_exponent())
    out = JElement(x.registry)
    for e, c in f.items():
        out = out + t_power(x, e - shift) * c
    if shift and not out.is_zero():
        if _dies_under_syzygy(out):
            return JElement(x.registry)
        out = t_power(out, shift)
    return out


_SYZYGY_CLOSURE_CAP = 256


def _dies_under_syzygy(y: JElement) -> bool:
    """Whether ``t^-m y`` has zero normal form for some ``m``.

    Since ``t`` is a unit of J(R) this proves ``y = 0``.  If some power of
    the syzygy map kills ``y``, the power ``|S|`` does, where ``S`` is the
    set of classes reachable from the support of ``y``.
    """
    reg = y.registry
    seen = set(y.support)
    frontier = list(seen)
    while frontier:
        if len(seen) > _SYZYGY_CLOSURE_CAP:
            return False
        nxt = []
        for c in frontier:
            for d in _omega_class(reg, c).support:
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
        frontier = nxt
    cur = y
    for _ in range(len(seen)):
        cur = t_power(cur, -1)
        if cur.is_zero():
            return True
    return False


def j_equal(x: JElement, y: JElement) -> bool:
    x._check(y)
    return x == y


def _as_laurent(f) -> LaurentPoly:
    if isinstance(f, LaurentPoly):
        return f
    if isinstance(f, int):
        return LaurentPoly({0: f})
    return LaurentPoly.parse(str(f))


# ---------------------------------------------------------------------------
# orbits and torsion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteOrbit:
    class_id: int
    cycle: tuple[int, ...]
    tail: tuple[int, ...] = ()

    kind = "finite"

    @property
    def length(self) -> int:
        return len(self.cycle)

    def to_dict(self) -> dict:
        return {"status": "finite", "class_id": self.class_id, "cycle": list(self.cycle), "length": self.length, "tail": list(self.tail)}


@dataclass(frozen=True)
class OrbitExceeded:
    class_id: int
    visited: tuple[int, ...]
    dims: tuple[int, ...]

    kind = "exceeded"

    def to_dict(self) -> dict:
        return {"status": "exceeded_budget", "class_id": self.class_id, "visited": list(self.visited), "dims": list(self.dims)}


def orbit(cid: int, budget: int, reg: ClassRegistry) -> Union[FiniteOrbit, OrbitExceeded]:
    """Follow ``t`` from a basis class until it repeats or ``budget`` steps pass."""
    if reg.is_free_class(cid):
        raise ValueError("free classes are zero in J(R) and have no orbit")
    seen = [cid]
    for _ in range(budget):
        try:
            img = _cosyzygy_class(reg, seen[-1])
        except NotGorenstein as exc:
            raise NotSingleClass(str(exc) + "; use torsion_test", seen[-1]) from exc
        sup = img.support
        if len(sup) != 1 or next(iter(sup.values())) != 1:
            raise NotSingleClass(
                f"t[{seen[-1]}] = {img!r} is not a single class; use torsion_test",
                seen[-1],
                img,
            )
        nxt = next(iter(sup))
        if nxt in seen:
            i = seen.index(nxt)
            return FiniteOrbit(cid, tuple(seen[i:]), tuple(seen[:i]))
        seen.append(nxt)
    return OrbitExceeded(cid, tuple(seen), tuple(reg.representative(c).dim for c in seen))


@dataclass(frozen=True)
class Torsion:
    annihilator: LaurentPoly
    method: str
    detail: dict = field(default_factory=dict)

    kind = "torsion"

    def to_dict(self) -> dict:
        return {
            "verdict": "torsion",
            "annihilator": self.annihilator.to_dict(),
            "annihilator_text": str(self.annihilator),
            "method": self.method,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class TorsionExceeded:
    detail: dict

    kind = "exceeded"

    def to_dict(self) -> dict:
        return {"verdict": "exceeded_budget", "detail": self.detail}


TorsionVerdict = Union[Torsion, TorsionExceeded]


def torsion_test(x: JElement, budget: int, reg: ClassRegistry | None = None) -> TorsionVerdict:
    reg = reg or x.registry
    if x.is_zero():
        return Torsion(ONE, "zero")
    if reg.algebra.profile.is_gorenstein:
        return _torsion_by_orbits(x, budget, reg)
    return _torsion_by_recurrence(x, budget, reg)


def _betti_evidence(reg: ClassRegistry, ids: Iterable[int], steps: int) -> dict:
    return {str(c): betti_sequence(reg.representative(c), steps) for c in ids}


def _torsion_by_orbits(x: JElement, budget: int, reg: ClassRegistry) -> TorsionVerdict:
    lengths = {}
    for cid in x.support:
        orb = orbit(cid, budget, reg)
        if isinstance(orb, OrbitExceeded):
            return TorsionExceeded(
                {
                    "method": "orbit",
                    "class_id": cid,
                    "orbit": orb.to_dict(),
                    "betti": _betti_evidence(reg, x.support, budget),
                }
            )
        lengths[cid] = orb.length
    N = math.lcm(*lengths.values())
    ann = LaurentPoly({N: 1, 0: -1})
    return Torsion(ann, "orbit", {"orbit_lengths": {str(k): v for k, v in lengths.items()}})


def _torsion_by_recurrence(x: JElement, budget: int, reg: ClassRegistry) -> TorsionVerdict:
    order = list(x.support)
    images: dict[int, dict[int, int]] = {}
    i = 0
    while i < len(order):
        if len(order) > budget:
            return TorsionExceeded(
                {
                    "method": "recurrence",
                    "classes": order,
                    "betti": _betti_evidence(reg, x.support, min(budget, 8)),
                }
            )
        cid = order[i]
        img = _omega_class(reg, cid).support
        images[cid] = img
        for d in img:
            if d not in order:
                order.append(d)
        i += 1
    s = len(order)
    T = sympy.zeros(s, s)
    pos = {c: k for k, c in enumerate(order)}
    for c, img in images.items():
        for d, coef in img.items():
            T[pos[d], pos[c]] = coef
    t = sympy.Symbol("t")
    det = sympy.Poly(sympy.expand((sympy.eye(s) - t * T).det()), t)
    coeffs = {int(m[0]): int(c) for m, c in det.as_dict().items()}
    return Torsion(
        LaurentPoly(coeffs),
        "recurrence",
        {"classes": order, "transition": [[int(T[a, b]) for b in range(s)] for a in range(s)]},
    )


def verify_annihilator(ann: LaurentPoly, x: JElement, reg: ClassRegistry | None = None) -> bool:
    return j_apply(ann, x, reg).is_zero()


# ---------------------------------------------------------------------------
# ring-level checks
# ---------------------------------------------------------------------------


def hypersurface_check(A: Algebra, samples: Sequence[Module], reg: ClassRegistry, budget: int = 8) -> dict:
    prof = A.profile
    one_minus_t2 = LaurentPoly({0: 1, 2: -1})
    rows = []
    for i, M in enumerate(samples):
        x = j_class(M, reg)
        killed = j_apply(one_minus_t2, x, reg).is_zero()
        rows.append({"index": i, "class": x.to_dict(), "annihilated_by_1_minus_t2": killed})
    report = {
        "is_field": prof.is_field,
        "is_gorenstein": prof.is_gorenstein,
        "is_hypersurface": prof.is_hypersurface,
        "embedding_dim": prof.embedding_dim,
        "samples": rows,
    }
    if prof.is_hypersurface:
        report["claim"] = "(1 - t^2) kills every class"
        report["passed"] = all(r["annihilated_by_1_minus_t2"] for r in rows)
    elif prof.is_gorenstein:
        kv = torsion_test(j_class(residue_field(A), reg), budget, reg)
        report["claim"] = "[k] is not certified torsion"
        report["residue_field_torsion"] = kv.to_dict()
        report["passed"] = not isinstance(kv, Torsion)
    else:
        report["claim"] = "none (algebra is not Gorenstein)"
        report["passed"] = True
    return report


def _sweep_vectors(dim: int, p: int, limit: int, rng: np.random.Generator):
    """Nonzero coefficient vectors, normalized to leading coefficient 1."""
    count = 0
    for i in range(dim):
        v = np.zeros(dim, dtype=np.int64)
        v[i] = 1
        yield v
        count += 1
        if count >= limit:
            return
    for i in range(dim):
        for j in range(i + 1, dim):
            for c in range(1, p):
                v = np.zeros(dim, dtype=np.int64)
                v[i], v[j] = 1, c
                yield v
                count += 1
                if count >= limit:
                    return
    while count < limit:
        v = rng.integers(0, p, size=dim)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        v = v * la.inv_mod(v[nz[0]], p) % p
        yield v
        count += 1


@dataclass(frozen=True)
class PeriodicModuleFound:
    module: Module
    period: int
    generator: np.ndarray
    lead: int

    def to_dict(self) -> dict:
        return {
            "found": True,
            "period": self.period,
            "lead": self.lead,
            "generator": self.generator.tolist(),
            "dim": self.module.dim,
        }


def find_periodic_module(
    A: Algebra, generator_budget: int, period_budget: int, reg: ClassRegistry
) -> Optional[PeriodicModuleFound]:
    """Search cyclic modules ``R/(f)``, ``f`` in the maximal ideal, for periodic syzygies."""
    if A.profile.is_field:
        raise ValueError("a field has no non-free modules")
    rad = A.radical
    seen: set[bytes] = set()
    for coeffs in _sweep_vectors(rad.shape[1], A.p, generator_budget, reg.rng):
        f = rad @ coeffs % A.p
        M = cyclic_module(A, [f])
        key = np.ascontiguousarray(M.action).tobytes()
        if key in seen or M.dim == 0:
            continue
        seen.add(key)
        v = detect_periodicity(M, period_budget, reg)
        if isinstance(v, Periodic):
            periodic = M
            for _ in range(v.lead):
                periodic = periodic.omega
            if periodic.dim and not periodic.is_free:
                return PeriodicModuleFound(periodic, v.period, f, v.lead)
    return None
