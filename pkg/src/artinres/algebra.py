"""Finite-dimensional commutative local algebras over F_p.

An :class:`Algebra` is given by structure constants ``c[i, j, k]`` with
``e_i * e_j = sum_k c[i, j, k] e_k``.  Construction validates the ring
axioms and locality; the local data (maximal ideal, socle, embedding
dimension, Loewy length) is computed once and cached on the instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import linalg as la
from .errors import (
    BadUnit,
    NotAssociative,
    NotCommutative,
    NotFiniteDimensional,
    NotLocal,
)


@dataclass(frozen=True)
class LocalProfile:
    radical_basis: np.ndarray
    embedding_dim: int
    socle_dim: int
    loewy_length: int
    is_field: bool
    is_gorenstein: bool
    is_hypersurface: bool
    dim: int
    p: int

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "radical_dim": int(self.radical_basis.shape[1]),
            "embedding_dim": self.embedding_dim,
            "socle_dim": self.socle_dim,
            "loewy_length": self.loewy_length,
            "is_field": self.is_field,
            "is_gorenstein": self.is_gorenstein,
            "is_hypersurface": self.is_hypersurface,
        }


class Algebra:
    """A validated commutative local F_p-algebra with residue field F_p."""

    def __init__(self, p: int, basis_names: Sequence[str], structure_constants, unit):
        self.p = la.check_prime(p)
        names = tuple(str(b) for b in basis_names)
        n = len(names)
        if n == 0:
            raise NotLocal("the zero ring is not local")
        c = np.asarray(structure_constants, dtype=np.int64)
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}, got {c.shape}")
        c = c % self.p
        u = np.asarray(unit, dtype=np.int64).reshape(-1) % self.p
        if u.shape != (n,):
            raise ValueError(f"unit must have length {n}")
        c.setflags(write=False)
        u.setflags(write=False)
        self.basis_names = names
        self.dim = n
        self.constants = c
        self.unit = u
        self._validate()

    # -- construction helpers -------------------------------------------------

    def _validate(self) -> None:
        c, p, n = self.constants, self.p, self.dim
        if not np.array_equal(c, c.transpose(1, 0, 2)):
            i, j = np.argwhere(np.any(c != c.transpose(1, 0, 2), axis=2))[0]
            raise NotCommutative(f"e_{i} e_{j} != e_{j} e_{i}")
        left = np.einsum("ijl,lkm->ijkm", c, c) % p
        right = np.einsum("jkl,ilm->ijkm", c, c) % p
        if not np.array_equal(left, right):
            i, j, k = np.argwhere(np.any(left != right, axis=3))[0]
            raise NotAssociative(f"(e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k})")
        if not np.array_equal(self.element_matrix(self.unit), np.eye(n, dtype=np.int64)):
            raise BadUnit("unit vector does not act as the identity")
        self._augmentation = self._find_augmentation()

    def _find_augmentation(self) -> np.ndarray:
        """Residue map e_i -> the unique eigenvalue of multiplication by e_i."""
        p, n = self.p, self.dim
        lam = np.zeros(n, dtype=np.int64)
        for i in range(n):
            cp = la.charpoly(self.mult[i], p)
            root = _single_root(cp, p)
            if root is None:
                raise NotLocal(
                    f"multiplication by {self.basis_names[i]} has no single eigenvalue in F_{p}"
                )
            lam[i] = root
        # residue map must be a ring map: eps(e_i e_j) = eps(e_i) eps(e_j)
        prod = (self.constants @ lam) % p
        if not np.array_equal(prod, np.outer(lam, lam) % p):
            raise NotLocal("nilpotent elements do not form an ideal")
        if int(lam @ self.unit % p) != 1:
            raise NotLocal("residue map does not send 1 to 1")
        return lam

    # -- arithmetic --------------------------------------------------------------

    @cached_property
    def mult(self) -> np.ndarray:
        """``mult[i]`` is the matrix of multiplication by ``e_i``."""
        m = np.ascontiguousarray(self.constants.transpose(0, 2, 1))
        m.setflags(write=False)
        return m

    def element_matrix(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64) % self.p
        return np.tensordot(a, self.mult, axes=(0, 0)) % self.p

    def multiply(self, a, b) -> np.ndarray:
        return self.element_matrix(a) @ (np.asarray(b, dtype=np.int64) % self.p) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def residue(self, a) -> int:
        """Image of ``a`` in the residue field F_p."""
        return int(np.asarray(a, dtype=np.int64) @ self._augmentation % self.p)

    @property
    def augmentation(self) -> np.ndarray:
        return self._augmentation

    def is_unit(self, a) -> bool:
        return self.residue(a) != 0

    def format_element(self, a) -> str:
        a = np.asarray(a, dtype=np.int64) % self.p
        terms = []
        for coef, name in zip(a, self.basis_names):
            if coef == 0:
                continue
            if name == "1":
                terms.append(str(int(coef)))
            elif coef == 1:
                terms.append(name)
            else:
                terms.append(f"{int(coef)}*{name}")
        return " + ".join(terms) if terms else "0"

    # -- local structure -----------------------------------------------------------

    @cached_property
    def radical(self) -> np.ndarray:
        """Columns spanning the maximal ideal (kernel of the residue map)."""
        return la.kernel_basis(self._augmentation.reshape(1, -1), self.p)

    def ideal_product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Column basis of the product of two subspaces (given as columns)."""
        if a.shape[1] == 0 or b.shape[1] == 0:
            return np.zeros((self.dim, 0), dtype=np.int64)
        prods = np.einsum("ia,jb,ijk->kab", a, b, self.constants).reshape(self.dim, -1) % self.p
        return la.column_space(prods, self.p)

    @cached_property
    def radical_powers(self) -> list[np.ndarray]:
        """``[m^0, m^1, ..., m^L]`` with ``m^L = 0``."""
        powers = [np.eye(self.dim, dtype=np.int64), self.radical]
        while powers[-1].shape[1]:
            powers.append(self.ideal_product(powers[-1], self.radical))
        return powers

    @cached_property
    def generators(self) -> np.ndarray:
        """Columns in ``m`` whose images form a basis of ``m / m^2``."""
        m = self.radical
        sq = self.radical_powers[2] if len(self.radical_powers) > 2 else np.zeros((self.dim, 0), dtype=np.int64)
        chosen: list[np.ndarray] = []
        span = sq
        for j in range(m.shape[1]):
            v = m[:, j]
            if not la.in_span(span, v, self.p):
                chosen.append(v)
                span = np.concatenate([span, v.reshape(-1, 1)], axis=1)
        if not chosen:
            return np.zeros((self.dim, 0), dtype=np.int64)
        return np.stack(chosen, axis=1)

    @cached_property
    def generator_matrices(self) -> np.ndarray:
        """Multiplication matrices of :attr:`generators`, shape ``(e, n, n)``."""
        g = self.generators
        return np.stack([self.element_matrix(g[:, j]) for j in range(g.shape[1])]) if g.shape[1] else np.zeros((0, self.dim, self.dim), dtype=np.int64)

    @cached_property
    def socle(self) -> np.ndarray:
        gm = self.generator_matrices
        if gm.shape[0] == 0:
            return np.eye(self.dim, dtype=np.int64)
        return la.kernel_basis(gm.reshape(-1, self.dim), self.p)

    @cached_property
    def profile(self) -> LocalProfile:
        e = int(self.generators.shape[1])
        soc = int(self.socle.shape[1])
        return LocalProfile(
            radical_basis=self.radical,
            embedding_dim=e,
            socle_dim=soc,
            loewy_length=len(self.radical_powers) - 1,
            is_field=self.dim == 1,
            is_gorenstein=soc == 1,
            is_hypersurface=e <= 1,
            dim=self.dim,
            p=self.p,
        )

    def __repr__(self) -> str:
        return f"Algebra(p={self.p}, dim={self.dim}, basis={list(self.basis_names)})"

    def same_as(self, other: "Algebra") -> bool:
        return self is other or (
            self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.constants, other.constants)
            and np.array_equal(self.unit, other.unit)
        )


def _single_root(cp: np.ndarray, p: int) -> int | None:
    """If ``cp`` (monic, low degree first) equals ``(x - r)^n``, return ``r``."""
    n = len(cp) - 1
    if n == 0:
        return 0
    # -n r = coefficient of x^(n-1); fall back to search when p | n
    if n % p:
        r = (-int(cp[n - 1]) * pow(n, p - 2, p)) % p
        candidates = [r]
    else:
        candidates = _roots_mod_p(cp, p)
    for r in candidates:
        if np.array_equal(_binomial_power(r, n, p), cp % p):
            return int(r)
    return None


def _roots_mod_p(cp: np.ndarray, p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(cp.tolist()):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def _binomial_power(r: int, n: int, p: int) -> np.ndarray:
    """Coefficients of ``(x - r)^n`` mod p, lowest degree first."""
    out = np.zeros(n + 1, dtype=np.int64)
    out[0] = 1
    for _ in range(n):
        shifted = np.concatenate([[0], out[:-1]])
        out = (shifted - r * out) % p
    return out


def build_algebra(p: int, basis_names: Sequence[str], structure_constants, unit) -> Algebra:
    """Validate structure constants and return the algebra."""
    return Algebra(p, basis_names, structure_constants, unit)


# ---------------------------------------------------------------------------
# polynomial quotients
# ---------------------------------------------------------------------------

Monomial = tuple[int, ...]


def parse_polynomial(expr, variables: Sequence[str], p: int) -> dict[Monomial, int]:
    """Parse a polynomial given as a string or ``{exponents: coeff}`` mapping."""
    if isinstance(expr, Mapping):
        out: dict[Monomial, int] = {}
        for mono, coef in expr.items():
            if isinstance(mono, str):
                mono = tuple(int(x) for x in mono.split(","))
            mono = tuple(int(x) for x in mono)
            if len(mono) != len(variables):
                raise ValueError(f"exponent tuple {mono} has wrong length")
            out[mono] = (out.get(mono, 0) + int(coef)) % p
        return {m: c for m, c in out.items() if c}
    import sympy

    syms = sympy.symbols(list(variables))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    text = str(expr).replace("^", "**")
    local = {str(s): s for s in syms}
    try:
        parsed = sympy.sympify(text, locals=local)
        poly = sympy.Poly(parsed, *syms)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise ValueError(f"cannot parse polynomial {expr!r}: {exc}") from exc
    out = {}
    for mono, coef in poly.as_dict().items():
        coef = sympy.Rational(coef)
        if coef.q != 1:
            coef = sympy.Integer(coef.p) * pow(int(coef.q), p - 2, p)
        c = int(coef) % p
        if c:
            out[tuple(int(e) for e in mono)] = c
    return out


def monomial_name(mono: Monomial, variables: Sequence[str]) -> str:
    parts = []
    for v, e in zip(variables, mono):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def _grlex_key(mono: Monomial):
    return (sum(mono), tuple(-e for e in mono))


def _monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    monos = [
        m for m in itertools.product(range(degree + 1), repeat=nvars) if sum(m) <= degree
    ]
    return sorted(monos, key=_grlex_key, reverse=True)


def _pure_power_bounds(
    polys: list[dict[Monomial, int]], nvars: int, p: int, degree_cap: int
) -> list[int]:
    """Smallest ``d_i`` with ``x_i^{d_i}`` in the ideal, found by degree-bounded linear algebra."""
    if not polys:
        raise NotFiniteDimensional("no generators: the polynomial ring is infinite dimensional")
    start = max(max(sum(m) for m in f) for f in polys)
    for D in range(max(start, 1), degree_cap + 1):
        monos = _monomials_up_to(nvars, D)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for f in polys:
            fdeg = max(sum(m) for m in f)
            for shift in _monomials_up_to(nvars, D - fdeg):
                row = np.zeros(len(monos), dtype=np.int64)
                for m, c in f.items():
                    row[index[tuple(a + b for a, b in zip(m, shift))]] = c
                rows.append(row)
        span = la.column_space(np.stack(rows, axis=1), p)
        bounds = []
        for i in range(nvars):
            found = None
            for d in range(1, D + 1):
                target = np.zeros(len(monos), dtype=np.int64)
                mono = tuple(d if j == i else 0 for j in range(nvars))
                target[index[mono]] = 1
                if la.in_span(span, target, p):
                    found = d
                    break
            if found is None:
                break
            bounds.append(found)
        if len(bounds) == nvars:
            return bounds
    raise NotFiniteDimensional(
        f"no pure power of some variable lies in the ideal up to degree {degree_cap}"
    )


def quotient_from_polynomials(
    p: int,
    variables: Sequence[str],
    generators: Sequence,
    degree_cap: int = 24,
) -> Algebra:
    """The algebra ``F_p[variables] / (generators)``, local at the origin.

    Generators are strings such as ``"x^2 - y^3"`` or exponent mappings.  The
    ideal is closed under multiplication by variables inside the box of
    monomials below the detected pure-power bounds; the basis is the set of
    grlex standard monomials, listed in increasing grlex order.
    """
    p = la.check_prime(p)
    variables = [str(v) for v in variables]
    nvars = len(variables)
    polys = [parse_polynomial(g, variables, p) for g in generators]
    polys = [f for f in polys if f]
    if nvars == 0:
        if polys:
            raise NotLocal("a nonzero constant generates the unit ideal")
        return Algebra(p, ["1"], [[[1]]], [1])
    if any(() in f or tuple([0] * nvars) in f for f in polys):
        raise NotLocal("a generator has a nonzero constant term; the ideal is not inside (variables)")
    bounds = _pure_power_bounds(polys, nvars, p, degree_cap)

    box = sorted(
        itertools.product(*[range(b) for b in bounds]), key=_grlex_key, reverse=True
    )
    index = {m: i for i, m in enumerate(box)}
    nb = len(box)

    def to_box(f: dict[Monomial, int]) -> np.ndarray:
        v = np.zeros(nb, dtype=np.int64)
        for m, c in f.items():
            if m in index:
                v[index[m]] = (v[index[m]] + c) % p
        return v

    var_mats = []
    for i in range(nvars):
        mat = np.zeros((nb, nb), dtype=np.int64)
        for m, j in index.items():
            up = tuple(e + (1 if k == i else 0) for k, e in enumerate(m))
            if up in index:
                mat[index[up], j] = 1
        var_mats.append(mat)

    ideal = la.column_space(np.stack([to_box(f) for f in polys], axis=1), p)
    while True:
        grown = np.concatenate([ideal] + [mat @ ideal % p for mat in var_mats], axis=1)
        new = la.column_space(grown, p)
        if new.shape[1] == ideal.shape[1]:
            break
        ideal = new

    proj, comp = la.quotient_projection(ideal, p)
    if not comp:
        raise NotLocal("the ideal is the whole ring")
    order = sorted(range(len(comp)), key=lambda k: _grlex_key(box[comp[k]]))
    basis = [box[comp[k]] for k in order]
    proj = proj[order]
    n = len(basis)
    consts = np.zeros((n, n, n), dtype=np.int64)
    for a, ma in enumerate(basis):
        for b, mb in enumerate(basis):
            prod = tuple(x + y for x, y in zip(ma, mb))
            if prod in index:
                consts[a, b] = proj[:, index[prod]]
    unit = np.zeros(n, dtype=np.int64)
    unit[basis.index(tuple([0] * nvars))] = 1
    alg = Algebra(p, [monomial_name(m, variables) for m in basis], consts, unit)
    alg.variables = tuple(variables)
    alg.monomials = tuple(basis)
    alg._projection = (proj, index)
    return alg


def polynomial_element(alg: Algebra, expr) -> np.ndarray:
    """Coordinates of a polynomial expression in an algebra built by :func:`quotient_from_polynomials`."""
    variables = getattr(alg, "variables", None)
    if variables is None:
        raise ValueError("algebra was not built from polynomials; give coordinate vectors")
    poly = parse_polynomial(expr, variables, alg.p)
    proj, index = alg._projection
    v = np.zeros(alg.dim, dtype=np.int64)
    for m, c in poly.items():
        # monomials outside the box contain a vanishing variable power
        if m in index:
            v = (v + c * proj[:, index[m]]) % alg.p
    return v
