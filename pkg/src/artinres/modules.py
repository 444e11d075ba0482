"""Finitely generated modules over an :class:`~artinres.algebra.Algebra`.

A module of k-dimension ``d`` is stored as ``action[i]``, the ``d x d``
matrix of the algebra basis element ``e_i``.  Submodules are column bases,
homomorphisms are ``target.dim x source.dim`` matrices.  Free modules
``R^r`` use coordinates ``l * n + i`` for ``e_i`` in the ``l``-th copy.

Everything derived from a module (minimal cover, syzygy, Hom spaces, dual)
is cached on the instance, which is never mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, polynomial_element
from .errors import AlgebraMismatch, InvalidAction


class Module:
    def __init__(self, algebra: Algebra, action, check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        act = np.asarray(action, dtype=np.int64) % self.p
        n = algebra.dim
        if act.ndim != 3 or act.shape[0] != n or act.shape[1] != act.shape[2]:
            raise InvalidAction(
                f"expected {n} square action matrices, got array of shape {act.shape}"
            )
        act.setflags(write=False)
        self.action = act
        self.dim = int(act.shape[1])
        if check:
            self._check_axioms()

    def _check_axioms(self) -> None:
        A, act, p = self.algebra, self.action, self.p
        unit_act = np.tensordot(A.unit, act, axes=(0, 0)) % p
        if not np.array_equal(unit_act, np.eye(self.dim, dtype=np.int64)):
            raise InvalidAction("the unit does not act as the identity")
        for i in range(A.dim):
            lhs = np.einsum("ab,jbc->jac", act[i], act) % p
            rhs = np.tensordot(A.constants[i], act, axes=(1, 0)) % p
            if not np.array_equal(lhs, rhs):
                j = int(np.argwhere(np.any(lhs != rhs, axis=(1, 2)))[0][0])
                raise InvalidAction(
                    f"action(e_{i}) action(e_{j}) differs from action(e_{i} e_{j})"
                )

    def __repr__(self) -> str:
        return f"Module(dim={self.dim}, nu={self.nu}, p={self.p})"

    # -- elementary structure -------------------------------------------------

    def element_action(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) % self.p
        return np.tensordot(a, self.action, axes=(0, 0)) % self.p

    @cached_property
    def generator_action(self) -> np.ndarray:
        """Action of the chosen generators of the maximal ideal, ``(e, d, d)``."""
        g = self.algebra.generators
        if g.shape[1] == 0:
            return np.zeros((0, self.dim, self.dim), dtype=np.int64)
        return np.tensordot(g.T, self.action, axes=(1, 0)) % self.p

    def radical_image(self, basis: np.ndarray | None = None) -> np.ndarray:
        """Column basis of ``m U`` for the subspace ``U`` (default: the whole module)."""
        if basis is None:
            basis = np.eye(self.dim, dtype=np.int64)
        ga = self.generator_action
        if ga.shape[0] == 0 or basis.shape[1] == 0:
            return np.zeros((self.dim, 0), dtype=np.int64)
        imgs = np.concatenate([g @ basis % self.p for g in ga], axis=1)
        return la.column_space(imgs, self.p)

    @cached_property
    def radical_filtration(self) -> list[np.ndarray]:
        """Bases of ``M, mM, m^2 M, ...`` ending with the zero subspace."""
        layers = [np.eye(self.dim, dtype=np.int64)]
        while layers[-1].shape[1]:
            layers.append(self.radical_image(layers[-1]))
        return layers

    @cached_property
    def socle(self) -> np.ndarray:
        ga = self.generator_action
        if ga.shape[0] == 0:
            return np.eye(self.dim, dtype=np.int64)
        return la.kernel_basis(ga.reshape(-1, self.dim), self.p)

    @cached_property
    def nu(self) -> int:
        """Minimal number of generators, ``dim M / mM``."""
        if self.dim == 0:
            return 0
        return self.dim - self.radical_filtration[1].shape[1]

    @cached_property
    def cover_generators(self) -> np.ndarray:
        """Columns lifting a basis of ``M / mM`` (unit vectors, chosen canonically)."""
        comp = la.complement_coordinates(self.radical_filtration[1], self.p) if self.dim else []
        out = np.zeros((self.dim, len(comp)), dtype=np.int64)
        for j, c in enumerate(comp):
            out[c, j] = 1
        return out

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        """Matrix of the minimal free cover ``R^nu -> M``."""
        V = self.cover_generators
        n = self.algebra.dim
        # column l*n + i is e_i acting on the l-th generator
        cols = np.einsum("isa,al->sli", self.action, V) % self.p
        return cols.reshape(self.dim, self.nu * n)

    @cached_property
    def cover_section(self) -> np.ndarray:
        """A right inverse of :attr:`cover_matrix`."""
        phi = self.cover_matrix
        red = la.row_reduce(phi, self.p)
        piv = red.pivots
        S = np.zeros((phi.shape[1], self.dim), dtype=np.int64)
        if self.dim:
            S[piv, :] = la.inverse(phi[:, piv], self.p)
        return S

    @cached_property
    def syzygy_basis(self) -> np.ndarray:
        """Kernel of the minimal cover, as columns of ``R^nu``."""
        return la.kernel_basis(self.cover_matrix, self.p)

    @cached_property
    def omega(self) -> "Module":
        return submodule(free_module(self.algebra, self.nu), self.syzygy_basis)

    @cached_property
    def relations(self) -> np.ndarray:
        """Module generators of the syzygy, as columns of ``R^nu``."""
        return self.syzygy_basis @ self.omega.cover_generators % self.p

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def is_free(self) -> bool:
        return self.dim == self.nu * self.algebra.dim

    @cached_property
    def dual(self) -> "Module":
        return hom(self, free_module(self.algebra, 1)).module

    @cached_property
    def free_envelope_matrix(self) -> np.ndarray:
        return free_envelope(self).matrix

    @cached_property
    def cosyzygy(self) -> "Module":
        env = free_envelope(self)
        return quotient(env.target, la.column_space(env.matrix, self.p))[0]

    @cached_property
    def end_dim(self) -> int:
        return hom(self, self).dim

    def to_dict(self) -> dict:
        return {"dim": self.dim, "action": self.action.tolist()}


@dataclass(frozen=True)
class ModuleMap:
    source: Module
    target: Module
    matrix: np.ndarray

    def is_homomorphism(self) -> bool:
        p = self.source.p
        lhs = np.einsum("iab,bc->iac", self.target.action, self.matrix) % p
        rhs = np.einsum("ab,ibc->iac", self.matrix, self.source.action) % p
        return bool(np.array_equal(lhs, rhs))

    def is_injective(self) -> bool:
        return la.rank(self.matrix, self.source.p) == self.source.dim

    def is_surjective(self) -> bool:
        return la.rank(self.matrix, self.source.p) == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def kernel(self) -> Module:
        return submodule(self.source, la.kernel_basis(self.matrix, self.source.p))

    def cokernel(self) -> Module:
        return quotient(self.target, la.column_space(self.matrix, self.source.p))[0]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def zero_module(A: Algebra) -> Module:
    return Module(A, np.zeros((A.dim, 0, 0), dtype=np.int64), check=False)


def free_module(A: Algebra, rank: int) -> Module:
    cache = A.__dict__.setdefault("_free_cache", {})
    if rank not in cache:
        eye = np.eye(rank, dtype=np.int64)
        act = np.stack([np.kron(eye, A.mult[i]) for i in range(A.dim)])
        cache[rank] = Module(A, act, check=False)
    return cache[rank]


def residue_field(A: Algebra) -> Module:
    return Module(A, A.augmentation.reshape(A.dim, 1, 1), check=False)


def direct_sum(*mods: Module) -> Module:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    A = mods[0].algebra
    for M in mods[1:]:
        _same_algebra(mods[0], M)
    d = sum(M.dim for M in mods)
    act = np.zeros((A.dim, d, d), dtype=np.int64)
    o = 0
    for M in mods:
        act[:, o:o + M.dim, o:o + M.dim] = M.action
        o += M.dim
    return Module(A, act, check=False)


def submodule(M: Module, basis: np.ndarray) -> Module:
    """The submodule spanned by the (independent, invariant) columns ``basis``."""
    k = basis.shape[1]
    if k == 0:
        return zero_module(M.algebra)
    L = la.left_inverse(basis, M.p)
    act = np.einsum("ka,iab,bl->ikl", L, M.action, basis) % M.p
    return Module(M.algebra, act, check=False)


def quotient(M: Module, basis: np.ndarray) -> tuple[Module, np.ndarray]:
    """``M / span(basis)`` and the projection matrix onto it."""
    P, comp = la.quotient_projection(basis, M.p)
    act = np.einsum("ka,iab->ikb", P, M.action)[:, :, comp] % M.p
    return Module(M.algebra, act, check=False), P


def submodule_closure(M: Module, vectors: np.ndarray) -> np.ndarray:
    """Column basis of the submodule generated by the columns of ``vectors``."""
    span = la.column_space(np.asarray(vectors, dtype=np.int64) % M.p, M.p)
    ga = M.generator_action
    while True:
        if span.shape[1] == 0 or ga.shape[0] == 0:
            return span
        grown = np.concatenate([span] + [g @ span % M.p for g in ga], axis=1)
        new = la.column_space(grown, M.p)
        if new.shape[1] == span.shape[1]:
            return span
        span = new


def cyclic_module(A: Algebra, ideal_generators: Sequence) -> Module:
    """``R / I`` with ``I`` the ideal generated by the given elements."""
    R = free_module(A, 1)
    gens = [
        polynomial_element(A, g) if isinstance(g, str) else np.asarray(g, dtype=np.int64)
        for g in ideal_generators
    ]
    if not gens:
        return R
    ideal = submodule_closure(R, np.stack(gens, axis=1))
    return quotient(R, ideal)[0]


def raw_module(A: Algebra, action) -> Module:
    return Module(A, action, check=True)


def change_basis(M: Module, P: np.ndarray) -> Module:
    """The same module written in the basis given by the columns of ``P``."""
    Pinv = la.inverse(P, M.p)
    act = np.einsum("ka,iab,bl->ikl", Pinv, M.action, P) % M.p
    return Module(M.algebra, act, check=False)


def construct_module(A: Algebra, spec, named: Mapping[str, Module] | None = None) -> Module:
    """Build a module from a descriptor dictionary.

    ``{"type": "free", "rank": n}``, ``{"type": "cyclic", "generators": [...]}``,
    ``{"type": "residue_field"}``, ``{"type": "zero"}``,
    ``{"type": "direct_sum", "summands": [...]}`` and
    ``{"type": "raw", "action": [...]}``.  Summands may be nested descriptors or
    names resolved through ``named``.  Optional ``"syzygy": n`` or
    ``"cosyzygy": n`` keys post-compose with (co)syzygies.
    """
    named = named or {}
    if isinstance(spec, str):
        if spec not in named:
            raise KeyError(f"unknown module name {spec!r}")
        return named[spec]
    if not isinstance(spec, Mapping) or "type" not in spec:
        raise ValueError(f"module descriptor must be an object with a 'type': {spec!r}")
    kind = spec["type"]
    if kind == "free":
        M = free_module(A, int(spec.get("rank", 1)))
    elif kind == "cyclic":
        M = cyclic_module(A, spec.get("generators", []))
    elif kind == "residue_field":
        M = residue_field(A)
    elif kind == "zero":
        M = zero_module(A)
    elif kind == "direct_sum":
        parts = [construct_module(A, s, named) for s in spec.get("summands", [])]
        M = direct_sum(*parts) if parts else zero_module(A)
    elif kind == "raw":
        M = raw_module(A, spec["action"])
    else:
        raise ValueError(f"unknown module type {kind!r}")
    if spec.get("syzygy"):
        M = syzygy(M, int(spec["syzygy"]))
    if spec.get("cosyzygy"):
        M = cosyzygy(M, int(spec["cosyzygy"]))
    return M


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


class HomSpace:
    """``Hom_A(M, N)``, parametrized by images of the cover generators of ``M``."""

    def __init__(self, M: Module, N: Module):
        _same_algebra(M, N)
        self.source, self.target = M, N
        p, n = M.p, M.algebra.dim
        nu, dN = M.nu, N.dim
        self._nu = nu
        rel = M.relations
        if nu == 0 or dN == 0:
            Z = np.zeros((nu * dN, 0), dtype=np.int64)
        elif rel.shape[1] == 0:
            Z = np.eye(nu * dN, dtype=np.int64)
        else:
            # relation r kills W:  sum_{l,i} r[l n + i] act_N(e_i) W[:, l] = 0
            r = rel.T.reshape(-1, nu, n)
            blocks = np.einsum("rli,isa->rsla", r, N.action) % p
            system = blocks.reshape(rel.shape[1] * dN, nu * dN)
            Z = la.kernel_basis(system, p)
        self.param_basis = Z  # columns: vec(W) with index l * dN + s
        self.dim = Z.shape[1]

    @cached_property
    def maps(self) -> np.ndarray:
        """Hom basis as concrete matrices, shape ``(dim, N.dim, M.dim)``."""
        M, N = self.source, self.target
        p, n, nu, h = M.p, M.algebra.dim, self._nu, self.dim
        if h == 0:
            return np.zeros((0, N.dim, M.dim), dtype=np.int64)
        W = self.param_basis.T.reshape(h, nu, N.dim).transpose(0, 2, 1)
        G = np.einsum("isa,hal->hsli", N.action, W) % p
        G = G.reshape(h, N.dim, nu * n)
        return np.einsum("hsc,cm->hsm", G, M.cover_section) % p

    @cached_property
    def _coord_map(self) -> np.ndarray:
        return la.left_inverse(self.param_basis, self.source.p)

    def coordinates(self, F: np.ndarray) -> np.ndarray:
        """Coordinates of the homomorphism ``F`` in the basis :attr:`maps`."""
        W = F @ self.source.cover_generators % self.source.p
        return self._coord_map @ W.T.reshape(-1) % self.source.p

    def combine(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=np.int64) % self.source.p
        return np.tensordot(c, self.maps, axes=(0, 0)) % self.source.p

    @cached_property
    def module(self) -> Module:
        """The Hom space as an A-module, ``(a f)(m) = a f(m)``."""
        M, N = self.source, self.target
        A, p = M.algebra, M.p
        h = self.dim
        if h == 0:
            return zero_module(A)
        eye = np.eye(self._nu, dtype=np.int64)
        act = np.stack(
            [self._coord_map @ (np.kron(eye, N.action[i]) @ self.param_basis % p) % p for i in range(A.dim)]
        )
        return Module(A, act, check=False)


def hom(M: Module, N: Module) -> HomSpace:
    cache = M.__dict__.setdefault("_hom_cache", {})
    key = id(N)
    entry = cache.get(key)
    if entry is None or entry[0] is not N:
        entry = (N, HomSpace(M, N))
        cache[key] = entry
    return entry[1]


def hom_module(M: Module, N: Module) -> tuple[Module, list[ModuleMap]]:
    H = hom(M, N)
    return H.module, [ModuleMap(M, N, F) for F in H.maps]


def dual(M: Module) -> Module:
    return M.dual


def min_generators(M: Module) -> int:
    return M.nu


def free_cover(M: Module) -> ModuleMap:
    return ModuleMap(free_module(M.algebra, M.nu), M, M.cover_matrix)


def syzygy(M: Module, n: int = 1) -> Module:
    for _ in range(n):
        M = M.omega
    return M


def biduality_map(M: Module) -> ModuleMap:
    R = free_module(M.algebra, 1)
    H1 = hom(M, R)
    Mstar = H1.module
    H2 = hom(Mstar, R)
    F = H1.maps  # (h1, n, dM)
    cols = []
    for j in range(M.dim):
        ev = F[:, :, j].T  # n x h1: phi_b -> phi_b(e_j)
        cols.append(H2.coordinates(ev))
    mat = np.stack(cols, axis=1) if cols else np.zeros((H2.dim, 0), dtype=np.int64)
    return ModuleMap(M, H2.module, mat % M.p)


def free_envelope(M: Module) -> ModuleMap:
    """``M -> R^nu(M*)`` given by a minimal generating set of ``M*``."""
    A, p = M.algebra, M.p
    R = free_module(A, 1)
    H1 = hom(M, R)
    Mstar = H1.module
    U = Mstar.cover_generators  # columns in Hom-basis coordinates
    k = U.shape[1]
    target = free_module(A, k)
    if k == 0:
        return ModuleMap(M, target, np.zeros((0, M.dim), dtype=np.int64))
    psis = np.tensordot(U.T, H1.maps, axes=(1, 0)) % p  # (k, n, dM)
    return ModuleMap(M, target, psis.reshape(k * A.dim, M.dim))


def cosyzygy(M: Module, n: int = 1) -> Module:
    for _ in range(n):
        M = M.cosyzygy
    return M


def _unit_evaluation(M: Module):
    """``(F, j)`` with ``F: M -> R`` and ``F e_j`` a unit, or ``None``."""
    if M.dim == 0:
        return None
    H = hom(M, free_module(M.algebra, 1))
    if H.dim == 0:
        return None
    res = np.einsum("k,hkj->hj", M.algebra.augmentation, H.maps) % M.p
    hit = np.argwhere(res != 0)
    if hit.size == 0:
        return None
    b, j = hit[0]
    return H.maps[b], int(j)


def has_free_summand(M: Module) -> bool:
    return _unit_evaluation(M) is not None


def strip_free_summands_with_basis(M: Module) -> tuple[Module, int, np.ndarray]:
    """Like :func:`strip_free_summands`, also returning the embedding of ``N`` in ``M``."""
    basis = np.eye(M.dim, dtype=np.int64)
    r = 0
    cur = M
    while True:
        found = _unit_evaluation(cur)
        if found is None:
            return cur, r, basis
        F, _ = found
        K = la.kernel_basis(F, M.p)
        cur = submodule(cur, K)
        basis = basis @ K % M.p
        r += 1


def strip_free_summands(M: Module) -> tuple[Module, int]:
    """``(N, r)`` with ``M = N + R^r`` and ``N`` free of free summands."""
    N, r, _ = strip_free_summands_with_basis(M)
    return N, r


def random_module(A: Algebra, rng: np.random.Generator, max_generators: int = 2, max_relations: int = 3) -> Module:
    """A quotient of ``R^g`` by a few random elements of ``m R^g``.

    Each relation is drawn from a random radical power ``m^j R^g`` so that
    long and short Loewy layers both occur.
    """
    g = int(rng.integers(1, max_generators + 1))
    r = int(rng.integers(1, max_relations + 1))
    F = free_module(A, g)
    powers = [P for P in A.radical_powers[1:] if P.shape[1]]
    if not powers:
        return F
    vecs = []
    for _ in range(r):
        rad = powers[int(rng.integers(0, len(powers)))]
        coeff = rng.integers(0, A.p, size=(rad.shape[1], g))
        vecs.append((rad @ coeff % A.p).T.reshape(-1))
    sub = submodule_closure(F, np.stack(vecs, axis=1))
    return quotient(F, sub)[0]


def _same_algebra(M: Module, N: Module) -> None:
    if not M.algebra.same_as(N.algebra):
        raise AlgebraMismatch("modules are over different algebras")
