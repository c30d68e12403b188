"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays whose entries are residues in
``[0, p)``.  Every function takes the modulus explicitly and returns fresh
arrays, so values can be shared freely between callers.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

DTYPE = np.int64


class RREF(NamedTuple):
    reduced: np.ndarray
    pivots: tuple[int, ...]
    rank: int


def as_mat(entries, p: int, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    """Coerce nested lists (or an array) to a reduced residue matrix."""
    m = np.array(entries, dtype=DTYPE)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot compose {a.shape} after {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def rref(m: np.ndarray, p: int) -> RREF:
    """Reduced row-echelon form with leftmost pivots, first nonzero row."""
    a = np.array(m, dtype=DTYPE) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return RREF(a, tuple(pivots), len(pivots))


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p).rank


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the right null space of ``m``."""
    rows, cols = m.shape
    red, pivots, rk = rref(m, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-red[i, f]) % p
    return basis


def solve_linear(m: np.ndarray, target: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Return some ``x`` with ``m @ x == target`` or ``None`` if there is none.

    ``target`` may be a vector or a matrix (solved column by column).
    """
    target = np.asarray(target, dtype=DTYPE)
    vector = target.ndim == 1
    t = target.reshape(-1, 1) if vector else target
    if m.shape[0] != t.shape[0]:
        raise ValueError(f"row mismatch: {m.shape} vs target {t.shape}")
    cols = m.shape[1]
    if t.shape[1] == 0:
        x = zeros(cols, 0)
        return x.reshape(-1) if vector else x
    aug = np.hstack([m % p, t % p])
    red, pivots, rk = rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    x = zeros(cols, t.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols:]
    return x.reshape(-1) if vector else x


def image_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Independent columns of ``m`` spanning its column space (pivot columns)."""
    if m.shape[1] == 0 or m.shape[0] == 0:
        return zeros(m.shape[0], 0)
    pivots = rref(m, p).pivots
    return np.array(m[:, list(pivots)], dtype=DTYPE).reshape(m.shape[0], len(pivots))


def complement_basis(sub: np.ndarray, p: int) -> np.ndarray:
    """Standard basis vectors completing the independent columns of ``sub``."""
    n = sub.shape[0]
    if sub.shape[1] == 0:
        return identity(n)
    pivots = set(rref(np.hstack([sub, identity(n)]), p).pivots)
    extra = [c - sub.shape[1] for c in sorted(pivots) if c >= sub.shape[1]]
    out = zeros(n, len(extra))
    for j, e in enumerate(extra):
        out[e, j] = 1
    return out


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0)
    red, pivots, rk = rref(np.hstack([m, identity(n)]), p)
    if rk < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return red[:, n:].copy()


def is_invertible(m: np.ndarray, p: int) -> bool:
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def canonical_span(cols: np.ndarray, p: int) -> np.ndarray:
    """Canonical row basis (nonzero RREF rows) of the span of the columns."""
    n = cols.shape[0]
    if cols.shape[1] == 0:
        return zeros(0, n)
    red, pivots, rk = rref(cols.T, p)
    return red[:rk].copy()


def coordinates(basis: np.ndarray, vectors: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of ``vectors`` (columns) in an independent column ``basis``."""
    x = solve_linear(basis, vectors, p)
    if x is None:
        raise ValueError("vectors are not in the span of the basis")
    return x


def mat_power(m: np.ndarray, k: int, p: int) -> np.ndarray:
    result = identity(m.shape[0])
    base = m % p
    while k:
        if k & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return result


def all_vectors(dim: int, p: int):
    """Every vector of F_p^dim, in lexicographic order (as int rows)."""
    if dim == 0:
        yield np.zeros(0, dtype=DTYPE)
        return
    for k in range(p ** dim):
        v = np.zeros(dim, dtype=DTYPE)
        for i in range(dim - 1, -1, -1):
            k, v[i] = divmod(k, p)
        yield v


def projective_points(dim: int, p: int):
    """Nonzero vectors of F_p^dim whose first nonzero entry is 1."""
    for v in all_vectors(dim, p):
        nz = np.nonzero(v)[0]
        if nz.size and v[nz[0]] == 1:
            yield v
