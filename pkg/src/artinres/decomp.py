"""Isomorphism testing, Krull-Remak-Schmidt decomposition and class registry.

Verdicts are three-valued.  Every ``Iso`` carries an invertible intertwiner,
every ``NonIso`` names the invariant or exhaustive search that separates the
modules, and ``Unknown`` reports what was tried.  Randomness always comes
from an explicit ``numpy.random.Generator``.

Decomposition splits a module with Fitting's lemma applied to endomorphisms
whose characteristic polynomial has two coprime factors.  A summand is
declared indecomposable only with a certificate: either its endomorphism
ring is shown to be local (a nilpotent ideal of codimension one), or an
exhaustive sweep of the endomorphism ring finds no splitting element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from . import linalg as la
from .algebra import _roots_mod_p
from .errors import AlgebraMismatch, BudgetExceeded
from .modules import Module, _same_algebra, hom, submodule

DEFAULT_BUDGET = 256
FINGERPRINT_DEPTH = 2


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    nu: int
    socle_dim: int
    radical_layers: tuple[int, ...]
    end_dim: int
    betti: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "nu": self.nu,
            "socle_dim": self.socle_dim,
            "radical_layers": list(self.radical_layers),
            "end_dim": self.end_dim,
            "betti": list(self.betti),
        }


def fingerprint(M: Module, depth: int = FINGERPRINT_DEPTH) -> Fingerprint:
    betti = []
    cur = M
    for _ in range(depth + 1):
        betti.append(cur.nu)
        if cur.dim == 0:
            break
        cur = cur.omega
    return Fingerprint(
        dim=M.dim,
        nu=M.nu,
        socle_dim=int(M.socle.shape[1]),
        radical_layers=tuple(int(b.shape[1]) for b in M.radical_filtration),
        end_dim=M.end_dim,
        betti=tuple(betti),
    )


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Iso:
    witness: np.ndarray
    method: str

    kind = "iso"

    def to_dict(self) -> dict:
        return {"verdict": "iso", "method": self.method, "witness": self.witness.tolist()}


@dataclass(frozen=True)
class NonIso:
    reason: str
    detail: dict = field(default_factory=dict)

    kind = "noniso"

    def to_dict(self) -> dict:
        return {"verdict": "noniso", "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class Unknown:
    trials: int
    hom_dim: int

    kind = "unknown"

    def to_dict(self) -> dict:
        return {"verdict": "unknown", "trials": self.trials, "hom_dim": self.hom_dim}


IsoVerdict = Union[Iso, NonIso, Unknown]


# ---------------------------------------------------------------------------
# endomorphism ring analysis
# ---------------------------------------------------------------------------


def _splitting_matrix(f: np.ndarray, p: int) -> Optional[np.ndarray]:
    """A polynomial in ``f`` that is singular but not nilpotent, if one exists.

    Exists exactly when the characteristic polynomial of ``f`` has two
    distinct irreducible factors.
    """
    d = f.shape[0]
    cp = la.charpoly(f, p)
    roots = _roots_mod_p(cp, p)
    if roots:
        r = roots[0]
        g = (f - r * np.eye(d, dtype=np.int64)) % p
        if len(roots) > 1 or not la.is_nilpotent(g, p):
            return g
        return None
    factors = _irreducible_factors(cp, p)
    if len(factors) < 2:
        return None
    return la.poly_eval_matrix(factors[0], f, p)


def _irreducible_factors(cp: np.ndarray, p: int) -> list[list[int]]:
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([int(c) for c in cp])), x, modulus=p)
    facs = []
    for fac, _ in poly.factor_list()[1]:
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        facs.append(coeffs)
    facs.sort(key=lambda c: (len(c), list(reversed(c))))
    return facs


def _primary_factor(f: np.ndarray, p: int) -> list[int]:
    """The irreducible ``q`` with ``charpoly(f) = q^m``; assumes no splitting exists."""
    cp = la.charpoly(f, p)
    roots = _roots_mod_p(cp, p)
    if roots:
        return [(-roots[0]) % p, 1]
    return _irreducible_factors(cp, p)[0]


class EndInfo(NamedTuple):
    kind: str  # "split", "local" or "unknown"
    split: Optional[np.ndarray] = None
    ideal: Optional[np.ndarray] = None  # radical of End, flattened matrices as columns
    residue_degree: int = 1


def _analyze_end(M: Module) -> EndInfo:
    cache = M.__dict__.get("_end_info")
    if cache is not None:
        return cache
    info = _compute_end_info(M)
    M.__dict__["_end_info"] = info
    return info


_RESIDUE_SEARCH_CAP = 4096


def _compute_end_info(M: Module) -> EndInfo:
    """Split ``End(M)`` or certify that it is local.

    The local certificate: an element ``theta`` whose primary factor ``q``
    has the largest degree ``r``, and for every basis element ``E_b`` a
    polynomial ``c_b`` of degree < r with ``E_b - c_b(theta)`` nilpotent.
    If those differences span a nilpotent two-sided ideal of codimension
    ``r`` containing ``q(theta)``, the quotient is the field
    ``F_p[x]/(q)`` and the ideal is the radical.
    """
    p, d = M.p, M.dim
    E = hom(M, M).maps
    h = E.shape[0]
    eye = np.eye(d, dtype=np.int64)
    qs = []
    for b in range(h):
        s = _splitting_matrix(E[b], p)
        if s is not None:
            return EndInfo("split", split=s)
        qs.append(_primary_factor(E[b], p))
    t = max(range(h), key=lambda b: len(qs[b]))
    q, r = qs[t], len(qs[t]) - 1
    theta = E[t] if r > 1 else eye
    powers = [eye]
    for _ in range(r - 1):
        powers.append(la.matmul(powers[-1], theta, p))
    powers = np.stack(powers)
    if r > 1 and p ** r > _RESIDUE_SEARCH_CAP:
        return EndInfo("unknown")
    shifted = []
    for b in range(h):
        if r == 1:
            cands = [((-qs[b][0]) % p,)]
        else:
            cands = itertools.product(range(p), repeat=r)
        for c in cands:
            g = (E[b] - np.tensordot(np.asarray(c, dtype=np.int64), powers, axes=(0, 0))) % p
            if la.is_nilpotent(g, p):
                shifted.append(g)
                break
        else:
            return EndInfo("unknown")
    shifted = np.stack(shifted)
    ideal = la.column_space(shifted.reshape(h, -1).T, p)
    k = ideal.shape[1]
    if k != h - r:
        return EndInfo("unknown")
    if r > 1:
        qt = la.poly_eval_matrix(q, theta, p)
        if not _subspace_of(qt.reshape(-1, 1), ideal, p):
            return EndInfo("unknown")
    mats = ideal.T.reshape(k, d, d)
    if r > 1:
        sides = np.concatenate([np.einsum("ij,ajk->aik", theta, mats), np.einsum("aij,jk->aik", mats, theta)]) % p
        if not _subspace_of(sides.reshape(-1, d * d).T, ideal, p):
            return EndInfo("unknown")
    power = mats
    for _ in range(h + 1):
        if power.shape[0] == 0:
            return EndInfo("local", ideal=ideal, residue_degree=r)
        prods = np.einsum("aij,bjk->abik", power, mats) % p
        nxt = la.column_space(prods.reshape(-1, d * d).T, p)
        if not _subspace_of(nxt, ideal, p):
            return EndInfo("unknown")
        if nxt.shape[1] == power.shape[0]:
            return EndInfo("unknown")
        power = nxt.T.reshape(-1, d, d)
    return EndInfo("unknown")


def _subspace_of(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    if a.shape[1] == 0:
        return True
    if b.shape[1] == 0:
        return not np.any(a % p)
    return la.rank(np.concatenate([b, a], axis=1), p) == b.shape[1]


def _is_end_unit(M: Module, info: EndInfo, f: np.ndarray) -> bool:
    """For a local ``End(M)``: ``f`` is invertible iff it lies outside the radical."""
    return not _subspace_of(f.reshape(-1, 1) % M.p, info.ideal, M.p)


def _fitting_split(M: Module, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = M.p
    G = la.mat_pow(g, M.dim, p)
    ker = la.kernel_basis(G, p)
    img = la.column_space(G, p)
    return ker, img


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


class Summand(NamedTuple):
    module: Module
    basis: np.ndarray  # columns: embedding of the summand in the parent
    certificate: str


def _rng(rng) -> np.random.Generator:
    if rng is None:
        return np.random.default_rng(0)
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _search_split(M: Module, budget: int, rng: np.random.Generator) -> tuple[Optional[np.ndarray], Optional[str]]:
    """Look for a splitting endomorphism by exhaustion or random sampling.

    Returns ``(g, None)`` on success, ``(None, "exhaustive")`` when the
    whole ring was swept without success, ``(None, None)`` when giving up.
    """
    H = hom(M, M)
    E = H.maps
    h, p = E.shape[0], M.p
    if p ** h <= budget:
        for coeffs in itertools.product(range(p), repeat=h):
            f = np.tensordot(np.asarray(coeffs, dtype=np.int64), E, axes=(0, 0)) % p
            g = _splitting_matrix(f, p)
            if g is not None:
                return g, None
        return None, "exhaustive"
    for _ in range(budget):
        f = np.tensordot(rng.integers(0, p, size=h), E, axes=(0, 0)) % p
        g = _splitting_matrix(f, p)
        if g is not None:
            return g, None
    return None, None


def decompose_with_embeddings(M: Module, budget: int = DEFAULT_BUDGET, rng=None) -> list[Summand]:
    """Indecomposable summands of ``M`` with their embeddings and certificates."""
    rng = _rng(rng)
    if M.dim == 0:
        return []
    info = _analyze_end(M)
    g = info.split
    certificate = None
    if info.kind == "local":
        certificate = "local-endomorphism-ring"
    elif info.kind == "unknown":
        g, certificate = _search_split(M, budget, rng)
        if g is None and certificate is None:
            raise BudgetExceeded(
                "could not certify indecomposability",
                {"dim": M.dim, "end_dim": hom(M, M).dim, "budget": budget},
            )
    if g is None:
        return [Summand(M, np.eye(M.dim, dtype=np.int64), certificate)]
    out = []
    for part in _fitting_split(M, g):
        sub = submodule(M, part)
        for s in decompose_with_embeddings(sub, budget, rng):
            out.append(Summand(s.module, part @ s.basis % M.p, s.certificate))
    return out


def decompose(M: Module, budget: int = DEFAULT_BUDGET, rng=None) -> list[Module]:
    """Indecomposable summands of ``M`` (a multiset; order is deterministic)."""
    return [s.module for s in decompose_with_embeddings(M, budget, rng)]


def is_indecomposable(M: Module, budget: int = DEFAULT_BUDGET, rng=None) -> bool:
    return M.dim > 0 and len(decompose_with_embeddings(M, budget, rng)) == 1


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------


def _compare_fingerprints(M: Module, N: Module, depth: int) -> Optional[NonIso]:
    fm, fn = fingerprint(M, depth), fingerprint(N, depth)
    for name in ("dim", "nu", "socle_dim", "radical_layers", "end_dim", "betti"):
        a, b = getattr(fm, name), getattr(fn, name)
        if a != b:
            return NonIso(
                name,
                {"left": list(a) if isinstance(a, tuple) else a, "right": list(b) if isinstance(b, tuple) else b},
            )
    return None


def _invertible_in(H, p: int, coeffs) -> Optional[np.ndarray]:
    F = H.combine(coeffs)
    if la.is_invertible(F, p):
        return F
    return None


def is_isomorphic(
    M: Module,
    N: Module,
    budget: int = DEFAULT_BUDGET,
    rng=None,
    depth: int = FINGERPRINT_DEPTH,
    _krs: bool = True,
) -> IsoVerdict:
    _same_algebra(M, N)
    rng = _rng(rng)
    p = M.p
    if M.dim != N.dim:
        return NonIso("dim", {"left": M.dim, "right": N.dim})
    if M.dim == 0:
        return Iso(np.zeros((0, 0), dtype=np.int64), "zero")
    bad = _compare_fingerprints(M, N, depth)
    if bad is not None:
        return bad
    H = hom(M, N)
    if H.dim != M.end_dim:
        return NonIso("hom_dim", {"hom": H.dim, "end": M.end_dim})
    back = hom(N, M)
    if back.dim != N.end_dim:
        return NonIso("hom_dim_reverse", {"hom": back.dim, "end": N.end_dim})
    h = H.dim

    # tier 1: basis vectors, then random combinations
    trials = 0
    for b in range(h):
        trials += 1
        if la.is_invertible(H.maps[b], p):
            return Iso(H.maps[b].copy(), "basis")
    for _ in range(budget):
        trials += 1
        F = _invertible_in(H, p, rng.integers(0, p, size=h))
        if F is not None:
            return Iso(F, "random")

    # tier 2: local endomorphism ring -> composition pairing is exact
    info = _analyze_end(M)
    if info.kind == "local":
        for a in range(back.dim):
            for b in range(h):
                comp = back.maps[a] @ H.maps[b] % p
                if _is_end_unit(M, info, comp):
                    return Iso(H.maps[b].copy(), "radical-pairing")
        return NonIso("radical-pairing", {"hom_dim": h})

    # tier 3: compare Krull-Remak-Schmidt decompositions
    if _krs and info.kind == "split":
        verdict = _krs_compare(M, N, budget, rng, depth)
        if verdict is not None:
            return verdict

    # tier 4: exhaustive sweep of Hom(M, N)
    if p ** h <= budget:
        for coeffs in itertools.product(range(p), repeat=h):
            F = _invertible_in(H, p, coeffs)
            if F is not None:
                return Iso(F, "exhaustive")
        return NonIso("exhaustive", {"hom_dim": h})
    return Unknown(trials, h)


def _krs_compare(M: Module, N: Module, budget: int, rng, depth: int) -> Optional[IsoVerdict]:
    try:
        dm = decompose_with_embeddings(M, budget, rng)
        dn = decompose_with_embeddings(N, budget, rng)
    except BudgetExceeded:
        return None
    if len(dm) != len(dn):
        return NonIso("krs-count", {"left": len(dm), "right": len(dn)})
    p = M.p
    unused = list(range(len(dn)))
    blocks = []
    for s in dm:
        match = None
        for j in unused:
            v = is_isomorphic(s.module, dn[j].module, budget, rng, depth, _krs=False)
            if isinstance(v, Iso):
                match = (j, v.witness)
                break
            if isinstance(v, Unknown):
                return None
        if match is None:
            return NonIso("krs-multiplicity", {"summand_dim": s.module.dim})
        unused.remove(match[0])
        blocks.append((s, dn[match[0]], match[1]))
    src = np.concatenate([s.basis for s, _, _ in blocks], axis=1)
    dst = np.concatenate([t.basis for _, t, _ in blocks], axis=1)
    d = M.dim
    mid = np.zeros((d, d), dtype=np.int64)
    o = 0
    for s, _, w in blocks:
        k = s.module.dim
        mid[o:o + k, o:o + k] = w
        o += k
    F = dst @ mid % p @ la.inverse(src, p) % p
    return Iso(F, "krs")


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


@dataclass
class RegistryEntry:
    id: int
    module: Module
    fingerprint: Fingerprint
    is_free: bool


class ClassRegistry:
    """Canonical ids for isomorphism classes of indecomposable modules.

    Not thread-safe: one writer at a time.
    """

    def __init__(self, algebra, budget: int = DEFAULT_BUDGET, seed: int = 0, depth: int = FINGERPRINT_DEPTH):
        self.algebra = algebra
        self.budget = budget
        self.rng = np.random.default_rng(seed)
        self.depth = depth
        self.entries: list[RegistryEntry] = []
        self._by_fp: dict[Fingerprint, list[int]] = {}
        self.cache: dict = {}

    def __len__(self) -> int:
        return len(self.entries)

    def representative(self, class_id: int) -> Module:
        return self.entries[class_id].module

    def is_free_class(self, class_id: int) -> bool:
        return self.entries[class_id].is_free

    def lookup(self, M: Module) -> Optional[int]:
        fp = fingerprint(M, self.depth)
        for cid in self._by_fp.get(fp, []):
            v = is_isomorphic(M, self.entries[cid].module, self.budget, self.rng, self.depth)
            if isinstance(v, Iso):
                return cid
            if isinstance(v, Unknown):
                raise BudgetExceeded(
                    "isomorphism test inconclusive while registering a class",
                    {"candidate": cid, "trials": v.trials, "hom_dim": v.hom_dim},
                )
        return None

    def canonical_id(self, M: Module) -> int:
        if not M.algebra.same_as(self.algebra):
            raise AlgebraMismatch("module and registry use different algebras")
        cid = self.lookup(M)
        if cid is not None:
            return cid
        cid = len(self.entries)
        fp = fingerprint(M, self.depth)
        self.entries.append(RegistryEntry(cid, M, fp, M.is_free))
        self._by_fp.setdefault(fp, []).append(cid)
        return cid


def canonical_id(reg: ClassRegistry, M: Module) -> int:
    return reg.canonical_id(M)
