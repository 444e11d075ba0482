"""Hot modular-arithmetic kernels.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy
version.  The compiled path is used unless numba is missing or the
environment variable ``ARTINRES_DISABLE_NUMBA`` is set to a truthy value
when this module is first imported.  Both paths produce identical results;
the test-suite checks this and ``benchmarks/bench_kernels.py`` times them.

All arrays are ``int64`` with entries already reduced into ``[0, p)``.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("ARTINRES_DISABLE_NUMBA", "").strip().lower()
_WANT_NUMBA = _FLAG in ("", "0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False


# --------------------------------------------------------------------------
# pure numpy path
# --------------------------------------------------------------------------


def _inv_mod_py(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref_numpy(a: np.ndarray, p: int):
    """Reduce ``a`` in place to reduced row-echelon form mod ``p``.

    Returns ``(rank, pivots)`` with ``pivots`` an int64 array.
    """
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = _inv_mod_py(a[r, c], p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def matmul_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # object-free exact product: entries < p so int64 is safe for p < 2**31
    # as long as the inner dimension keeps n * p**2 below 2**63.
    return (a @ b) % p


def charpoly_numpy(a: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomial of a square matrix mod ``p``.

    Coefficients are returned lowest degree first; the result is monic of
    length ``n + 1``.
    """
    h = a.copy()
    n = h.shape[0]
    # Hessenberg reduction by similarity transforms.
    for j in range(n - 2):
        nz = np.flatnonzero(h[j + 1:, j])
        if nz.size == 0:
            continue
        i = j + 1 + nz[0]
        if i != j + 1:
            h[[i, j + 1]] = h[[j + 1, i]]
            h[:, [i, j + 1]] = h[:, [j + 1, i]]
        inv = _inv_mod_py(h[j + 1, j], p)
        for k in range(j + 2, n):
            if h[k, j] == 0:
                continue
            u = (h[k, j] * inv) % p
            h[k] = (h[k] - u * h[j + 1]) % p
            h[:, j + 1] = (h[:, j + 1] + u * h[:, k]) % p
    return _hessenberg_charpoly_py(h, p)


def _hessenberg_charpoly_py(h: np.ndarray, p: int) -> np.ndarray:
    n = h.shape[0]
    polys = [np.array([1], dtype=np.int64)]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = np.zeros(m + 1, dtype=np.int64)
        cur[1:] = prev
        cur[: m] = (cur[: m] - h[m - 1, m - 1] * prev) % p
        t = 1
        for i in range(1, m):
            t = (t * h[m - i, m - i - 1]) % p
            coef = (t * h[m - i - 1, m - 1]) % p
            if coef:
                q = polys[m - i - 1]
                cur[: q.size] = (cur[: q.size] - coef * q) % p
        polys.append(cur % p)
    return polys[n]


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _inv_mod(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def rref_numba(a, p):
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            i = r
            while i < rows and a[i, c] == 0:
                i += 1
            if i == rows:
                continue
            if i != r:
                for k in range(cols):
                    tmp = a[r, k]
                    a[r, k] = a[i, k]
                    a[i, k] = tmp
            inv = _inv_mod(a[r, c], p)
            for k in range(c, cols):
                a[r, k] = (a[r, k] * inv) % p
            for i2 in range(rows):
                if i2 == r:
                    continue
                f = a[i2, c]
                if f == 0:
                    continue
                for k in range(c, cols):
                    v = a[r, k]
                    if v != 0:
                        a[i2, k] = (a[i2, k] - f * v) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

    @njit(cache=True)
    def matmul_numba(a, b, p):
        n, m = a.shape
        k = b.shape[1]
        out = np.zeros((n, k), dtype=np.int64)
        for i in range(n):
            for j in range(m):
                v = a[i, j]
                if v == 0:
                    continue
                for l in range(k):
                    out[i, l] += v * b[j, l]
            for l in range(k):
                out[i, l] %= p
        return out

    @njit(cache=True)
    def charpoly_numba(a, p):
        h = a.copy()
        n = h.shape[0]
        for j in range(n - 2):
            i = j + 1
            while i < n and h[i, j] == 0:
                i += 1
            if i == n:
                continue
            if i != j + 1:
                for k in range(n):
                    tmp = h[i, k]
                    h[i, k] = h[j + 1, k]
                    h[j + 1, k] = tmp
                for k in range(n):
                    tmp = h[k, i]
                    h[k, i] = h[k, j + 1]
                    h[k, j + 1] = tmp
            inv = _inv_mod(h[j + 1, j], p)
            for k in range(j + 2, n):
                if h[k, j] == 0:
                    continue
                u = (h[k, j] * inv) % p
                for c in range(n):
                    h[k, c] = (h[k, c] - u * h[j + 1, c]) % p
                for r in range(n):
                    h[r, j + 1] = (h[r, j + 1] + u * h[r, k]) % p
        polys = np.zeros((n + 1, n + 1), dtype=np.int64)
        polys[0, 0] = 1
        for m in range(1, n + 1):
            for d in range(m):
                polys[m, d + 1] = polys[m - 1, d]
            for d in range(m):
                polys[m, d] = (polys[m, d] - h[m - 1, m - 1] * polys[m - 1, d]) % p
            t = 1
            for i in range(1, m):
                t = (t * h[m - i, m - i - 1]) % p
                coef = (t * h[m - i - 1, m - 1]) % p
                if coef != 0:
                    for d in range(m - i):
                        polys[m, d] = (polys[m, d] - coef * polys[m - i - 1, d]) % p
        return polys[n].copy()

    rref_inplace = rref_numba
    matmul_mod = matmul_numba
    charpoly_mod = charpoly_numba
else:
    rref_inplace = rref_numpy
    matmul_mod = matmul_numpy
    charpoly_mod = charpoly_numpy


def backend() -> str:
    return "numba" if HAS_NUMBA else "numpy"
