"""Wedge pairing, Hodge decomposition and harmonic forms on the boundary surface.

All inner products are the Galerkin Whitney mass matrices ``M0``, ``M1``,
``M2`` of the surface.  The wedge pairing matrix ``C`` is metric-free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionMismatch, SingularPeriods, SizeMismatch, SolverFailure
from .mesh_complex import SurfaceComplex, assemble_mass, assemble_wedge
from .surface_homology import CycleBasis, betti

SVD_GAP = 1e-8
DENSE_EDGE_LIMIT = 2000
TOL_CONSTANT = 1e-3


def _cached(surface: SurfaceComplex, key: str, build):
    val = surface.extras.get(key)
    if val is None:
        val = build()
        surface.extras[key] = val
    return val


def masses(surface: SurfaceComplex):
    """Cached ``(M0, M1, M2)`` of the surface."""
    return _cached(surface, "masses", lambda: tuple(assemble_mass(surface, k) for k in range(3)))


@dataclass(frozen=True)
class WedgePairing:
    C: sp.csr_matrix

    def __call__(self, omega, eta) -> float:
        return pairing(self.C, omega, eta)


def wedge_pairing(surface: SurfaceComplex) -> WedgePairing:
    """Skew matrix ``C[a, b] = int w_a ^ w_b`` over the boundary edges."""
    return WedgePairing(_cached(surface, "wedge", lambda: assemble_wedge(surface)))


def pairing(C, omega, eta) -> float:
    """``omega^T C eta``.

    Raises:
        SizeMismatch: cochain lengths do not match ``C``.
    """
    if isinstance(C, WedgePairing):
        C = C.C
    omega = np.asarray(omega, dtype=float)
    eta = np.asarray(eta, dtype=float)
    n = C.shape[0]
    if omega.shape[0] != n or eta.shape[0] != n:
        raise SizeMismatch(f"cochains of length {omega.shape[0]} and {eta.shape[0]} for {n} edges")
    return omega.T @ (C @ eta)


def mesh_tolerance(surface: SurfaceComplex, constant: float = TOL_CONSTANT) -> float:
    """``max(1e-8, constant * h^2)`` with ``h`` the longest boundary edge."""
    return max(1e-8, constant * surface.max_edge_length ** 2)


# ---------------------------------------------------------------------------
# Laplacian solves with per-component gauges


class _GaugedSolver:
    """Factorized ``A`` with one pinned unknown per connected component."""

    def __init__(self, A: sp.spmatrix, labels: np.ndarray, weights: np.ndarray):
        self.labels = labels
        self.weights = weights
        n_comp = int(labels.max()) + 1 if len(labels) else 0
        pins = np.array([int(np.nonzero(labels == c)[0][0]) for c in range(n_comp)], dtype=np.int64)
        keep = np.ones(A.shape[0], dtype=bool)
        keep[pins] = False
        self.keep = keep
        A = sp.csc_matrix(A)
        self.lu = spla.splu(A[keep][:, keep].tocsc()) if keep.any() else None
        self.n_comp = n_comp

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x = np.zeros(len(self.keep))
        if self.lu is not None:
            x[self.keep] = self.lu.solve(rhs[self.keep])
        if not np.all(np.isfinite(x)):
            raise SolverFailure("Laplacian solve produced non-finite values")
        # mean-free per component with the given weights
        for c in range(self.n_comp):
            m = self.labels == c
            x[m] -= (self.weights[m] @ x[m]) / self.weights[m].sum()
        return x


def _laplacian0(surface: SurfaceComplex) -> _GaugedSolver:
    def build():
        M0, M1, _ = masses(surface)
        L = (surface.d0.T @ M1 @ surface.d0).tocsc()
        w = np.asarray(M0.sum(axis=1)).ravel()
        return _GaugedSolver(L, surface.vertex_component, w)

    return _cached(surface, "lap0", build)


def _coexact_solver(surface: SurfaceComplex):
    """Factorized saddle system ``[[M1, -d1^T], [d1, 0]]`` with one pinned multiplier per component."""

    def build():
        _, M1, _ = masses(surface)
        d1 = surface.d1.astype(float)
        ne, nf = surface.n_edges, surface.n_triangles
        A = sp.bmat([[M1, -d1.T], [d1, None]]).tocsc()
        tri_comp = surface.triangle_component
        pins = np.array([int(np.nonzero(tri_comp == c)[0][0]) for c in range(surface.n_components)])
        keep = np.ones(ne + nf, dtype=bool)
        keep[ne + pins] = False
        return keep, spla.splu(A[keep][:, keep].tocsc())

    return _cached(surface, "coexact", build)


# ---------------------------------------------------------------------------
# harmonic space


@dataclass(frozen=True)
class HarmonicSpace:
    """``M1``-orthonormal basis (columns) of discrete harmonic 1-cochains."""

    H: np.ndarray
    method: str
    singular_values: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.H.shape[1]


def _m_orthonormalize(X: np.ndarray, M: sp.spmatrix) -> np.ndarray:
    if X.shape[1] == 0:
        return X
    G = X.T @ (M @ X)
    R = np.linalg.cholesky(0.5 * (G + G.T))
    return np.linalg.solve(R, X.T).T


def _harmonic_svd(surface: SurfaceComplex):
    _, M1, _ = masses(surface)
    A = sp.vstack([surface.d1.astype(float), surface.d0.T @ M1]).toarray()
    # balance the two row blocks
    A[surface.n_triangles:] /= max(np.abs(A[surface.n_triangles:]).max(), 1e-300)
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    ne = surface.n_edges
    s_full = np.zeros(ne)
    s_full[: len(s)] = s[:ne]
    null = s_full <= SVD_GAP * s_full[0]
    return vt[null].T, s_full


def _closed_generators(surface: SurfaceComplex) -> np.ndarray:
    """Closed cochains dual to the tree-cotree generators (one per generator edge)."""
    from .surface_homology import _vertex_adjacency

    ne, nf = surface.n_edges, surface.n_triangles
    nv = surface.n_vertices
    adj = _vertex_adjacency(surface)
    in_tree = np.zeros(ne, dtype=bool)
    seen_v = np.zeros(nv, dtype=bool)
    for root in range(nv):
        if seen_v[root]:
            continue
        seen_v[root] = True
        q = deque([root])
        while q:
            x = q.popleft()
            for y, e in adj[x]:
                if not seen_v[y]:
                    seen_v[y] = True
                    in_tree[e] = True
                    q.append(y)
    tri_edges = surface.tri_edges
    edge_tris = np.argsort(tri_edges.ravel(), kind="stable").reshape(-1, 2) // 3
    parent_edge = -np.ones(nf, dtype=np.int64)
    order = []
    seen = np.zeros(nf, dtype=bool)
    in_cotree = np.zeros(ne, dtype=bool)
    for root in range(nf):
        if seen[root]:
            continue
        seen[root] = True
        q = deque([root])
        while q:
            t = q.popleft()
            order.append(t)
            for e in sorted(tri_edges[t]):
                if in_tree[e]:
                    continue
                a, b = edge_tris[e]
                o = b if a == t else a
                if not seen[o]:
                    seen[o] = True
                    in_cotree[e] = True
                    parent_edge[o] = e
                    q.append(o)
    gens = np.nonzero(~in_tree & ~in_cotree)[0]
    d1 = surface.d1.tocsr()
    X = np.zeros((ne, len(gens)))
    X[gens, np.arange(len(gens))] = 1.0
    for t in reversed(order):
        e = parent_edge[t]
        if e < 0:
            continue
        cols = d1.indices[d1.indptr[t]:d1.indptr[t + 1]]
        vals = d1.data[d1.indptr[t]:d1.indptr[t + 1]]
        s = vals[cols == e][0]
        other = cols != e
        X[e] = -(vals[other] @ X[cols[other]]) / s
    return X


def harmonic_space(surface: SurfaceComplex, method: str = "auto") -> HarmonicSpace:
    """Basis of ``{h : d1 h = 0, d0^T M1 h = 0}``.

    ``method="svd"`` finds the null space of the stacked system by a dense
    SVD and a relative singular-value gap of ``1e-8``.  ``method="cotree"``
    projects the closed cochains dual to tree-cotree generators onto the
    co-closed subspace with one Laplacian solve each.  ``auto`` picks SVD up
    to ``DENSE_EDGE_LIMIT`` boundary edges.

    Raises:
        DimensionMismatch: the dimension differs from ``b1`` of the surface.
    """
    key = f"harmonic:{method}"
    cached = surface.extras.get(key)
    if cached is not None:
        return cached
    b1 = betti(surface).b1
    _, M1, _ = masses(surface)
    if method == "auto":
        method = "svd" if surface.n_edges <= DENSE_EDGE_LIMIT else "cotree"
    sv = None
    if method == "svd":
        N, sv = _harmonic_svd(surface)
    elif method == "cotree":
        X = _closed_generators(surface)
        lap = _laplacian0(surface)
        N = np.column_stack([x - surface.d0 @ lap.solve(surface.d0.T @ (M1 @ x)) for x in X.T]) if X.shape[1] else X
    else:
        raise ValueError(f"unknown method {method!r}")
    if N.shape[1] != b1:
        raise DimensionMismatch(f"harmonic space has dimension {N.shape[1]}, homology says {b1}")
    hs = HarmonicSpace(_m_orthonormalize(N, M1), method, sv)
    surface.extras[key] = hs
    return hs


# ---------------------------------------------------------------------------
# Hodge decomposition


@dataclass(frozen=True)
class HodgeSplit:
    """``omega = d0 @ alpha + coexact + h`` with ``coexact = M1^{-1} d1^T M2 beta``."""

    alpha: np.ndarray
    beta: np.ndarray
    h: np.ndarray
    exact: np.ndarray
    coexact: np.ndarray
    residual: float

    def parts(self):
        return self.exact, self.coexact, self.h


def hodge_decompose(surface: SurfaceComplex, omega, harmonic: HarmonicSpace | None = None) -> HodgeSplit:
    """Galerkin Hodge decomposition of a boundary 1-cochain.

    ``alpha`` is mean-free per component with respect to ``M0``; ``beta``
    is mean-free per component (``sum beta = 0``).

    Raises:
        SolverFailure: a linear solve failed.
        SizeMismatch: ``omega`` does not live on the boundary edges.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (surface.n_edges,):
        raise SizeMismatch(f"cochain of shape {omega.shape} for {surface.n_edges} boundary edges")
    M0, M1, M2 = masses(surface)
    alpha = _laplacian0(surface).solve(surface.d0.T @ (M1 @ omega))
    exact = surface.d0 @ alpha

    keep, lu = _coexact_solver(surface)
    ne, nf = surface.n_edges, surface.n_triangles
    rhs = np.concatenate([np.zeros(ne), surface.d1 @ omega])
    sol = np.zeros(ne + nf)
    sol[keep] = lu.solve(rhs[keep])
    if not np.all(np.isfinite(sol)):
        raise SolverFailure("co-exact saddle solve produced non-finite values")
    coexact = sol[:ne]
    mu = sol[ne:]
    area = surface.triangle_areas
    beta = area * mu  # mu = M2 beta with M2 = diag(1/area)
    for c in range(surface.n_components):
        m = surface.triangle_component == c
        # shift mu by a constant (kernel of d1^T) so that sum(beta) = 0
        mu_shift = beta[m].sum() / area[m].sum()
        beta[m] -= area[m] * mu_shift

    hs = harmonic if harmonic is not None else harmonic_space(surface)
    h = hs.H @ (hs.H.T @ (M1 @ omega))
    recon = exact + coexact + h
    res = float(np.linalg.norm(recon - omega) / max(np.linalg.norm(omega), 1e-300))
    return HodgeSplit(alpha=alpha, beta=beta, h=h, exact=exact, coexact=coexact, residual=res)


def coexact_from_beta(surface: SurfaceComplex, beta) -> np.ndarray:
    """``M1^{-1} d1^T M2 beta`` (sparse solve)."""
    _, M1, M2 = masses(surface)
    return spla.spsolve(M1.tocsc(), surface.d1.T @ (M2 @ np.asarray(beta, dtype=float)))


def m_inner(surface: SurfaceComplex, a, b) -> float:
    return float(np.asarray(a) @ (masses(surface)[1] @ np.asarray(b)))


# ---------------------------------------------------------------------------
# symplectic harmonic basis


@dataclass(frozen=True)
class SymplecticHarmonicBasis:
    """Harmonic cochains ``kappa_1..kappa_g, kappa'_1..kappa'_g`` normalized by periods.

    ``P[i, j]`` is the period of ``K[:, j]`` over cycle ``i`` of the
    canonical basis (``a_1..a_g, b_1..b_g``).  ``Gram = K^T C K``.
    """

    K: np.ndarray
    P: np.ndarray
    Gram: np.ndarray
    tol: float
    period_error: float
    gram_error: float

    @property
    def genus(self) -> int:
        return self.K.shape[1] // 2

    @property
    def kappa(self) -> np.ndarray:
        return self.K[:, : self.genus]

    @property
    def kappa_prime(self) -> np.ndarray:
        return self.K[:, self.genus:]


def symplectic_harmonic_basis(
    surface: SurfaceComplex, cycles: CycleBasis, harmonic: HarmonicSpace | None = None
) -> SymplecticHarmonicBasis:
    """Harmonic basis with unit periods on the dual cycle and zero elsewhere.

    Raises:
        SingularPeriods: the harmonic periods over the cycles are singular.
    """
    from .symplectic import canonical_J

    hs = harmonic if harmonic is not None else harmonic_space(surface)
    Z = np.asarray(cycles.cycles, dtype=float).reshape(-1, surface.n_edges)
    n = Z.shape[0]
    if n != hs.dim:
        raise SingularPeriods(f"{n} cycles for a {hs.dim}-dimensional harmonic space")
    tol = mesh_tolerance(surface)
    if n == 0:
        empty = np.zeros((0, 0))
        return SymplecticHarmonicBasis(np.zeros((surface.n_edges, 0)), empty, empty, tol, 0.0, 0.0)
    P0 = Z @ hs.H
    s = np.linalg.svd(P0, compute_uv=False)
    if s[-1] <= SVD_GAP * s[0]:
        raise SingularPeriods(f"period matrix is singular (smallest singular value {s[-1]:.3e})")
    K = hs.H @ np.linalg.inv(P0)
    P = Z @ K
    C = wedge_pairing(surface).C
    Gram = K.T @ (C @ K)
    g = n // 2
    return SymplecticHarmonicBasis(
        K=K,
        P=P,
        Gram=Gram,
        tol=tol,
        period_error=float(np.abs(P - np.eye(n)).max()),
        gram_error=float(np.abs(Gram - canonical_J(g)).max()),
    )


def discrete_star(surface: SurfaceComplex, omega) -> np.ndarray:
    """Quarter-turn rotation proxy: ``M1 (star omega) = C^T omega``."""
    _, M1, _ = masses(surface)
    C = wedge_pairing(surface).C
    lu = _cached(surface, "m1lu", lambda: spla.splu(M1.tocsc()))
    return lu.solve(np.asarray(C.T @ np.asarray(omega, dtype=float)))


def star_harmonic_defect(surface: SurfaceComplex, harmonic: HarmonicSpace | None = None) -> float:
    """Largest relative non-harmonic part of ``star h`` over the harmonic basis."""
    hs = harmonic if harmonic is not None else harmonic_space(surface)
    _, M1, _ = masses(surface)
    worst = 0.0
    for h in hs.H.T:
        s = discrete_star(surface, h)
        proj = hs.H @ (hs.H.T @ (M1 @ s))
        r = s - proj
        worst = max(worst, np.sqrt(r @ (M1 @ r)) / np.sqrt(s @ (M1 @ s)))
    return float(worst)


__all__ = [
    "HarmonicSpace",
    "HodgeSplit",
    "SymplecticHarmonicBasis",
    "WedgePairing",
    "coexact_from_beta",
    "discrete_star",
    "harmonic_space",
    "hodge_decompose",
    "masses",
    "mesh_tolerance",
    "pairing",
    "star_harmonic_defect",
    "symplectic_harmonic_basis",
    "wedge_pairing",
]
