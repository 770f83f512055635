"""Finite-dimensional symplectic linear algebra.

A :class:`SymplecticSpace` is ``R^{2n}`` with a skew, non-degenerate pairing
matrix ``J``.  Subspaces are given by spanning columns.  All rank decisions
use a relative singular-value threshold (``RANK_TOL``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl

from .errors import BadPartition, DegeneratePairing, DimensionMismatch

RANK_TOL = 1e-8
LAGRANGIAN_TOL = 1e-12

NO = "No"
LAGRANGIAN = "Lagrangian"
COMPLETE = "CompleteLagrangian"


def canonical_J(n: int) -> np.ndarray:
    """``[[0, I], [-I, 0]]`` of size ``2n``."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def _numerical_rank(A: np.ndarray, tol: float = RANK_TOL) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int((s > tol * s[0]).sum()) if s[0] > 0 else 0


@dataclass(frozen=True)
class SymplecticSpace:
    J: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise DimensionMismatch("pairing matrix must be square")
        scale = max(np.abs(J).max(initial=0.0), 1.0)
        if np.abs(J + J.T).max(initial=0.0) > 1e-10 * scale:
            raise DegeneratePairing("pairing matrix is not skew")
        if J.shape[0] % 2 or _numerical_rank(J) < J.shape[0]:
            raise DegeneratePairing("pairing matrix is degenerate")
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 2

    def pair(self, u, v) -> float:
        return float(np.asarray(u) @ self.J @ np.asarray(v))

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        return cls(canonical_J(n))


@dataclass(frozen=True)
class Subspace:
    """Column span of ``B`` (columns are made independent on construction)."""

    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        if B.shape[1] and _numerical_rank(B) < B.shape[1]:
            B = sl.orth(B, rcond=RANK_TOL)
        object.__setattr__(self, "B", B)

    @property
    def dim(self) -> int:
        return self.B.shape[1]

    @property
    def ambient(self) -> int:
        return self.B.shape[0]

    def orthonormal(self) -> np.ndarray:
        if self.dim == 0:
            return self.B
        q, _ = np.linalg.qr(self.B)
        return q


def _check(space: SymplecticSpace, sub: Subspace) -> None:
    if sub.ambient != space.dim:
        raise DimensionMismatch(f"subspace lives in R^{sub.ambient}, space has dimension {space.dim}")


def isotropy_defect(space: SymplecticSpace, sub: Subspace) -> float:
    """``max |Q^T J Q|`` for an orthonormal basis ``Q`` of the subspace, relative to ``|J|``."""
    _check(space, sub)
    if sub.dim == 0:
        return 0.0
    Q = sub.orthonormal()
    return float(np.abs(Q.T @ space.J @ Q).max() / np.linalg.norm(space.J, 2))


def is_lagrangian(space: SymplecticSpace, sub: Subspace, tol: float = LAGRANGIAN_TOL) -> str:
    """``No``, ``Lagrangian`` (isotropic) or ``CompleteLagrangian`` (isotropic of half dimension).

    Raises:
        DimensionMismatch: the subspace does not live in the space.
    """
    if isotropy_defect(space, sub) > tol:
        return NO
    return COMPLETE if sub.dim == space.n else LAGRANGIAN


def symplectic_orthogonal(space: SymplecticSpace, sub: Subspace) -> Subspace:
    """``{u : [u, v] = 0 for all v in sub}`` as the null space of ``B^T J``."""
    _check(space, sub)
    if sub.dim == 0:
        return Subspace(np.eye(space.dim))
    A = sub.orthonormal().T @ space.J
    return Subspace(sl.null_space(A, rcond=RANK_TOL))


def contains(big: Subspace, small: Subspace) -> float:
    """Relative residual of projecting ``small`` onto ``big`` (0 means contained)."""
    if small.dim == 0:
        return 0.0
    if big.dim == 0:
        return 1.0
    Q = big.orthonormal()
    S = small.orthonormal()
    return float(np.linalg.norm(S - Q @ (Q.T @ S), 2))


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    return sl.subspace_angles(a.B, b.B)


def same_subspace(a: Subspace, b: Subspace, tol: float = 1e-8) -> bool:
    """Equality via principal angles (threshold in radians)."""
    if a.dim != b.dim:
        return False
    return bool(np.all(principal_angles(a, b) <= tol))


def symplectic_basis(space: SymplecticSpace) -> np.ndarray:
    """Skew Gram-Schmidt: ``U`` with ``U.T @ J @ U = [[0, I], [-I, 0]]``.

    Each step pairs the first remaining vector ``e`` with the remaining vector
    ``f`` of largest ``|[e, f]|``, rescales both by ``|[e, f]|^{-1/2}`` and
    projects the rest onto their symplectic complement.

    Raises:
        DegeneratePairing: no partner with a nonzero pairing exists.
    """
    J = space.J
    scale = np.abs(J).max()
    vecs = [np.eye(space.dim)[:, i] for i in range(space.dim)]
    es, fs = [], []
    while vecs:
        e = vecs[0]
        rest = vecs[1:]
        if not rest:
            raise DegeneratePairing("odd number of vectors left")
        w = np.array([e @ J @ v for v in rest])
        j = int(np.argmax(np.abs(w)))
        if abs(w[j]) <= RANK_TOL * scale:
            raise DegeneratePairing("pairing is degenerate")
        s = np.sqrt(abs(w[j]))
        e = e / s
        f = rest[j] * (np.sign(w[j]) / s)
        others = [v for i, v in enumerate(rest) if i != j]
        vecs = [v - (v @ J @ f) * e + (v @ J @ e) * f for v in others]
        es.append(e)
        fs.append(f)
    return np.column_stack(es + fs) if es else np.zeros((0, 0))


@dataclass(frozen=True)
class PartitionSpec:
    """Disjoint index sets ``I`` and ``I'`` (1-based) covering ``1..g``."""

    I: tuple
    I_prime: tuple
    g: int

    def __post_init__(self):
        I, Ip = tuple(sorted(self.I)), tuple(sorted(self.I_prime))
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "I_prime", Ip)
        full = set(range(1, self.g + 1))
        bad = [i for i in I + Ip if i not in full]
        if bad:
            raise BadPartition(f"partition indices {bad} outside 1..{self.g}")
        if set(I) & set(Ip):
            raise BadPartition(f"indices {sorted(set(I) & set(Ip))} appear in both I and I'")
        if set(I) | set(Ip) != full or len(I) != len(set(I)) or len(Ip) != len(set(Ip)):
            raise BadPartition(f"I and I' must partition 1..{self.g}")

    @classmethod
    def from_I(cls, I, g: int) -> "PartitionSpec":
        I = tuple(int(i) for i in I)
        bad = [i for i in I if not 1 <= i <= g]
        if bad:
            raise BadPartition(f"partition indices {bad} outside 1..{g}")
        return cls(I, tuple(i for i in range(1, g + 1) if i not in I), g)

    @classmethod
    def all_partitions(cls, g: int) -> list["PartitionSpec"]:
        out = []
        for mask in range(2 ** g):
            I = tuple(i + 1 for i in range(g) if mask >> i & 1)
            out.append(cls.from_I(I, g))
        return out


def partition_coefficients(partition: PartitionSpec) -> np.ndarray:
    """``2g x g`` coefficients of ``{kappa_i, i in I} + {-kappa'_i, i in I'}`` in a symplectic basis."""
    g = partition.g
    C = np.zeros((2 * g, g))
    for col, i in enumerate(range(1, g + 1)):
        if i in partition.I:
            C[i - 1, col] = 1.0
        else:
            C[g + i - 1, col] = -1.0
    return C


def lagrangian_from_partition(basis: np.ndarray, partition: PartitionSpec) -> Subspace:
    """Span of ``kappa_i`` (``i`` in ``I``) and ``-kappa'_i`` (``i`` in ``I'``).

    ``basis`` holds the ``2g`` symplectic basis vectors as columns, ordered
    ``kappa_1..kappa_g, kappa'_1..kappa'_g``.

    Raises:
        BadPartition: partition and basis disagree on ``g``.
    """
    basis = np.asarray(basis, dtype=float)
    if basis.shape[1] != 2 * partition.g:
        raise BadPartition(f"basis has {basis.shape[1]} vectors, partition expects {2 * partition.g}")
    return Subspace(basis @ partition_coefficients(partition))
