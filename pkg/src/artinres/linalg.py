"""Dense exact linear algebra over the prime field F_p.

Matrices are plain ``numpy.int64`` arrays whose entries live in ``[0, p)``;
the modulus travels alongside as an explicit argument.  Vectors are columns:
``m @ x`` is the action of ``m`` on ``x``.  Pivoting always takes the first
nonzero entry, so every result here is a deterministic function of its input.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import ModulusError


class RowReduction(NamedTuple):
    rref: np.ndarray
    rank: int
    pivots: list[int]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ModulusError(f"modulus {p} is not prime")
    # int64 products of two residues must not overflow
    if p >= 1 << 31:
        raise ModulusError(f"modulus {p} too large for int64 kernels")
    return p


def as_matrix(m, p: int) -> np.ndarray:
    """Return ``m`` as a fresh int64 array reduced mod ``p``."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=np.int64)
    return a % p


def inv_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def row_reduce(m: np.ndarray, p: int) -> RowReduction:
    a = np.array(m, dtype=np.int64, copy=True) % p
    if a.size == 0:
        return RowReduction(a, 0, [])
    rank, piv = _kernels.rref_inplace(a, p)
    return RowReduction(a, int(rank), [int(c) for c in piv])


def rank(m: np.ndarray, p: int) -> int:
    return row_reduce(m, p).rank


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return _kernels.matmul_mod(np.ascontiguousarray(a), np.ascontiguousarray(b), p)


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right null space of ``m``."""
    rows, cols = m.shape
    red = row_reduce(m, p)
    free = [c for c in range(cols) if c not in set(red.pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(red.pivots):
            basis[c, j] = (-red.rref[i, f]) % p
    return basis


def solve(m: np.ndarray, b, p: int) -> Optional[np.ndarray]:
    """Some ``x`` with ``m @ x = b`` (free variables zero), or ``None``."""
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim != 1 or b.shape[0] != m.shape[0]:
        raise ValueError(f"right-hand side of length {b.shape} does not match {m.shape}")
    cols = m.shape[1]
    aug = np.concatenate([np.asarray(m, dtype=np.int64) % p, b.reshape(-1, 1)], axis=1)
    red = row_reduce(aug, p)
    if red.pivots and red.pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(red.pivots):
        x[c] = red.rref[i, cols]
    return x


def is_invertible(m: np.ndarray, p: int) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"is_invertible needs a square matrix, got {m.shape}")
    return rank(m, p) == m.shape[0]


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    red = row_reduce(np.concatenate([m % p, np.eye(n, dtype=np.int64)], axis=1), p)
    if red.rank < n or red.pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular mod p")
    return red.rref[:, n:].copy()


def column_space(m: np.ndarray, p: int) -> np.ndarray:
    """A canonical basis (as columns) of the column space of ``m``."""
    if m.shape[1] == 0:
        return np.zeros((m.shape[0], 0), dtype=np.int64)
    red = row_reduce(m.T, p)
    return red.rref[: red.rank].T.copy()


def left_inverse(basis: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``L @ basis = I`` for a full column rank ``basis``.

    ``L @ v`` gives coordinates of any ``v`` in the span of ``basis``.
    """
    n, k = basis.shape
    if k == 0:
        return np.zeros((0, n), dtype=np.int64)
    red = row_reduce(basis.T, p)
    if red.rank != k:
        raise ValueError("basis is not linearly independent")
    rows = red.pivots
    sub_inv = inverse(basis[rows, :], p)
    out = np.zeros((k, n), dtype=np.int64)
    out[:, rows] = sub_inv
    return out


def complement_coordinates(basis: np.ndarray, p: int) -> list[int]:
    """Standard coordinates whose unit vectors complete ``basis`` to a basis."""
    n = basis.shape[0]
    if basis.shape[1] == 0:
        return list(range(n))
    piv = set(row_reduce(basis.T, p).pivots)
    return [c for c in range(n) if c not in piv]


def quotient_projection(basis: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Projection onto ``F_p^n / span(basis)``.

    Returns ``(P, comp)``: ``P`` is ``len(comp) x n`` and sends ``v`` to
    its coordinates in the quotient w.r.t. the images of the unit vectors
    indexed by ``comp``.
    """
    n = basis.shape[0]
    if basis.shape[1] == 0:
        return np.eye(n, dtype=np.int64), list(range(n))
    red = row_reduce(basis.T, p)
    rows = red.rref[: red.rank]
    piv = red.pivots
    comp = [c for c in range(n) if c not in set(piv)]
    # v - rows^T v[piv] has zeros on pivot coordinates
    reducer = np.eye(n, dtype=np.int64)
    for i, c in enumerate(piv):
        reducer[:, c] = (reducer[:, c] - rows[i]) % p
    return reducer[comp, :] % p, comp


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[1] == 0:
        return not np.any(np.asarray(v) % p)
    return solve(basis, v, p) is not None


def mat_pow(m: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(m.shape[0], dtype=np.int64)
    base = m % p
    while e:
        if e & 1:
            result = matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    return result


def is_nilpotent(m: np.ndarray, p: int) -> bool:
    n = m.shape[0]
    if n == 0:
        return True
    return not np.any(mat_pow(m, n, p))


def charpoly(m: np.ndarray, p: int) -> np.ndarray:
    """Monic characteristic polynomial, lowest-degree coefficient first."""
    if m.shape[0] == 0:
        return np.ones(1, dtype=np.int64)
    return _kernels.charpoly_mod(np.ascontiguousarray(m % p), p)


def poly_eval_matrix(coeffs, m: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a polynomial (lowest degree first) at a square matrix."""
    n = m.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in reversed(list(coeffs)):
        out = (matmul(out, m, p) + int(c) * eye) % p
    return out
