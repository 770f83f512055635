"""Exact rational and integer linear algebra for small homology computations."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.sparse as sp


def _sparse_rows(mat) -> list[dict[int, Fraction]]:
    m = sp.csr_matrix(mat)
    rows = []
    for i in range(m.shape[0]):
        lo, hi = m.indptr[i], m.indptr[i + 1]
        rows.append({int(c): Fraction(v) for c, v in zip(m.indices[lo:hi], m.data[lo:hi]) if v != 0})
    return rows


class _Echelon:
    """Incremental row echelon form over Q keyed by pivot column."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = dict(row)
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            f = row[c] / piv[c]
            for k, v in piv.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict[int, Fraction]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rational_rank(mat) -> int:
    """Rank over Q of an integer (or exactly representable float) matrix."""
    m = sp.csr_matrix(mat)
    # eliminate along the orientation with fewer entries per row
    if m.shape[0] > 0 and m.shape[1] > 0 and m.getnnz() / m.shape[0] > m.getnnz() / m.shape[1]:
        m = m.T.tocsr()
    ech = _Echelon()
    for row in _sparse_rows(m):
        ech.add(row)
    return ech.rank


def rational_solvable(mat, rhs) -> bool:
    """True iff ``mat @ x = rhs`` has a rational solution."""
    m = sp.csc_matrix(mat)
    rhs = np.asarray(rhs)
    # columns of mat span the image; test membership of rhs
    ech = _Echelon()
    for j in range(m.shape[1]):
        lo, hi = m.indptr[j], m.indptr[j + 1]
        ech.add({int(r): Fraction(v) for r, v in zip(m.indices[lo:hi], m.data[lo:hi]) if v != 0})
    target = {int(i): Fraction(v) for i, v in enumerate(rhs) if v != 0}
    return not ech.reduce(target)


def rational_nullspace(mat) -> list[list[Fraction]]:
    """Basis of the right null space over Q (dense reduced row echelon)."""
    A = [[Fraction(v) for v in row] for row in np.asarray(mat).tolist()]
    n_rows = len(A)
    n_cols = len(A[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(n_rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][f]
        basis.append(v)
    return basis


def integer_vector(v) -> np.ndarray:
    """Scale a rational vector to a primitive integer vector."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    g = g or 1
    return np.array([x // g for x in ints], dtype=np.int64)


def hermite_rows(K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unimodular ``U`` with ``U @ K`` in row echelon form (Euclidean row operations).

    Returns ``(U, H)`` with ``H = U @ K``.
    """
    H = [list(map(int, row)) for row in np.asarray(K, dtype=object)]
    n = len(H)
    m = len(H[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, n) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, n):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if any(H[i][c] for i in range(r, n)):
            r += 1
        if r == n:
            break
    return np.array(U, dtype=object), np.array(H, dtype=object)


def integer_inverse(U: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix (exact)."""
    n = len(U)
    A = [[Fraction(int(x)) for x in row] for row in U]
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        I[c], I[p] = I[p], I[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        I[c] = [v * inv for v in I[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
                I[i] = [a - f * b for a, b in zip(I[i], I[c])]
    out = np.array([[int(v) for v in row] for row in I], dtype=np.int64)
    if any(v.denominator != 1 for row in I for v in row):
        raise ValueError("matrix is not unimodular")
    return out


def saturate(K: np.ndarray) -> np.ndarray:
    """Primitive integer basis (columns) of ``span_Q(K) ∩ Z^n``.

    ``K`` is ``n x r`` with independent integer columns.
    """
    K = np.asarray(K, dtype=np.int64)
    n, r = K.shape
    if r == 0:
        return K.reshape(n, 0)
    U, _ = hermite_rows(K)
    Uinv = integer_inverse(U)
    return Uinv[:, :r].astype(np.int64)


def complete_basis(K: np.ndarray) -> np.ndarray:
    """Extend a primitive lattice basis (columns of ``K``) to a basis of ``Z^n``."""
    K = np.asarray(K, dtype=np.int64)
    n, r = K.shape
    U, _ = hermite_rows(K)
    Uinv = integer_inverse(U)
    return np.concatenate([K, Uinv[:, r:]], axis=1)
