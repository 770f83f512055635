"""Discrete self-adjoint curl operators and their spectra.

The domain ``V_L`` consists of volume edge cochains whose trace is closed
(or co-closed) and whose harmonic part lies in a complete Lagrangian
subspace ``L_H`` of the boundary harmonic forms.  The harmonic selection is
imposed as symplectic orthogonality ``kappa^T C T1 u = 0`` for ``kappa`` in
``L_H``.

Two discrete eigenproblems are offered.

``galerkin``
    ``C_L x = lam M_L x`` with ``C_L = N^T C3 N``, ``M_L = N^T M1 N``.  This
    is the restricted weak curl.  Its symmetry certifies the Lagrangian
    boundary condition.  Because field and curl share the edge space, its
    spectrum is polluted by spurious eigenvalues on tetrahedral meshes.

``helicity``
    ``K_L x = lam C_L x`` with the curl stiffness ``K_L = N^T K N``.  Here
    ``x`` is a vector potential and ``B = curl x`` the eigenfield in the face
    space, so ``curl B = lam B`` holds weakly.  Curl-free fields are removed
    exactly, and the nonzero spectrum converges to the Beltrami eigenvalues.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .boundary_hodge import (
    SymplecticHarmonicBasis,
    harmonic_space,
    masses,
    symplectic_harmonic_basis,
    wedge_pairing,
)
from .errors import EigenSolverFailure, IndefiniteMass, InvalidLagrangian, SpectralError
from .mesh_complex import (
    OrientedComplex3,
    SurfaceComplex,
    assemble_curl_stiffness,
    assemble_mass,
    assemble_weak_curl,
    extract_boundary,
)
from .surface_homology import Betti, CycleBasis, betti, cycle_basis
from .symplectic import (
    COMPLETE,
    PartitionSpec,
    Subspace,
    SymplecticSpace,
    is_lagrangian,
    partition_coefficients,
)

CLOSED = "closed"
COCLOSED = "coclosed"
DENSE_MAX = 5000
CONSTRAINT_TOL = 1e-11


@dataclass
class BoundaryData:
    """Everything computed on the boundary that the curl operators need."""

    cx: OrientedComplex3
    surface: SurfaceComplex
    betti: Betti
    cycles: CycleBasis
    basis: SymplecticHarmonicBasis

    @property
    def genus(self) -> int:
        return self.betti.genus


def prepare_boundary(cx: OrientedComplex3) -> BoundaryData:
    s = extract_boundary(cx)
    b = betti(s)
    cb = cycle_basis(s)
    hs = harmonic_space(s)
    return BoundaryData(cx=cx, surface=s, betti=b, cycles=cb, basis=symplectic_harmonic_basis(s, cb, hs))


@dataclass(frozen=True)
class BoundaryConditionSpec:
    """Trace class and harmonic selection.

    ``partition`` selects ``span{kappa_i, i in I} + span{-kappa'_i, i in I'}``.
    ``lagrangian`` gives explicit coefficient columns in the symplectic
    harmonic basis instead.  ``drop_row`` (1-based) removes one symplectic
    constraint row and is meant for negative controls only.
    """

    trace_class: str = CLOSED
    partition: PartitionSpec | None = None
    lagrangian: np.ndarray | None = None
    drop_row: int | None = None

    def __post_init__(self):
        if self.trace_class not in (CLOSED, COCLOSED):
            raise ValueError(f"trace class must be {CLOSED!r} or {COCLOSED!r}")


def selection_coefficients(spec: BoundaryConditionSpec, g: int) -> np.ndarray:
    if spec.lagrangian is not None:
        L = np.asarray(spec.lagrangian, dtype=float)
        if L.ndim == 1:
            L = L[:, None]
        if L.shape[0] != 2 * g:
            raise InvalidLagrangian(f"selection has {L.shape[0]} coefficients per vector, expected {2 * g}")
        return L
    if g == 0:
        return np.zeros((0, 0))
    part = spec.partition if spec.partition is not None else PartitionSpec.from_I(range(1, g + 1), g)
    if part.g != g:
        raise InvalidLagrangian(f"partition is for genus {part.g}, boundary has genus {g}")
    return partition_coefficients(part)


def _check_lagrangian(bd: BoundaryData, L: np.ndarray) -> str:
    if bd.genus == 0:
        return COMPLETE
    return is_lagrangian(SymplecticSpace(bd.basis.Gram), Subspace(L), tol=1e-10)


def constraint_rows(bd: BoundaryData, spec: BoundaryConditionSpec, validate: bool = True) -> sp.csr_matrix:
    """Constraint matrix acting on volume edge cochains.

    Closed traces: ``d1 T1``; co-closed traces: ``d0^T M1 T1``.  Below them
    the rows ``kappa^T C T1`` for the selected harmonic vectors.

    Raises:
        InvalidLagrangian: the selection is not a complete Lagrangian.
    """
    s = bd.surface
    L = selection_coefficients(spec, bd.genus)
    if validate and _check_lagrangian(bd, L) != COMPLETE:
        raise InvalidLagrangian("harmonic selection is not a complete Lagrangian subspace")
    _, M1b, _ = masses(s)
    if spec.trace_class == CLOSED:
        top = s.d1.astype(float) @ s.T1
    else:
        top = (s.d0.T @ M1b) @ s.T1
    sym = _symplectic_rows(bd, L, spec.drop_row)
    if sym.shape[0] == 0:
        return sp.csr_matrix(top)
    return sp.vstack([top, sp.csr_matrix(sym) @ s.T1]).tocsr()


def _symplectic_rows(bd: BoundaryData, L: np.ndarray, drop_row: int | None) -> np.ndarray:
    """Rows ``kappa^T C`` on boundary edges for the selected harmonic vectors."""
    s = bd.surface
    if L.size == 0:
        return np.zeros((0, s.n_edges))
    C = wedge_pairing(s).C
    kappas = bd.basis.K @ L
    rows = (C.T @ kappas).T
    if drop_row is not None:
        if not 1 <= drop_row <= rows.shape[0]:
            raise InvalidLagrangian(f"drop_row must lie in 1..{rows.shape[0]}")
        rows = np.delete(rows, drop_row - 1, axis=0)
    return rows


@dataclass
class ConstrainedSpace:
    """Columns of ``N`` span ``V_L`` inside the volume edge cochains.

    Layout: identity columns on interior edges, then lifted boundary
    columns ``T1^T N_b``.
    """

    N: sp.csr_matrix
    interior_edges: np.ndarray
    Nb: np.ndarray | sp.csr_matrix
    harmonic_coeffs: np.ndarray  # allowed harmonic coefficients (closed traces)
    n_gradient_columns: int
    trace_class: str
    residual: float

    @property
    def dim(self) -> int:
        return self.N.shape[1]


def _allowed_harmonic(bd: BoundaryData, L: np.ndarray, drop_row: int | None) -> np.ndarray:
    """Coefficients ``c`` with ``[kappa, K c] = 0`` for every selected ``kappa``."""
    g2 = 2 * bd.genus
    if g2 == 0:
        return np.zeros((0, 0))
    R = L.T @ bd.basis.Gram
    if drop_row is not None:
        R = np.delete(R, drop_row - 1, axis=0)
    if R.shape[0] == 0:
        return np.eye(g2)
    return sl.null_space(R, rcond=1e-8)


def build_constrained_space(bd: BoundaryData, spec: BoundaryConditionSpec, validate: bool = True) -> ConstrainedSpace:
    """Null space of :func:`constraint_rows`.

    Closed traces are handled by substitution: boundary gradients plus the
    allowed harmonic vectors span the admissible traces exactly.  Co-closed
    traces use a dense null space of the boundary rows.
    """
    cx, s = bd.cx, bd.surface
    rows = constraint_rows(bd, spec, validate=validate)
    L = selection_coefficients(spec, bd.genus)
    interior = np.setdiff1d(np.arange(cx.n_edges), s.bedges)
    if spec.trace_class == CLOSED:
        keep_v = np.ones(s.n_vertices, dtype=bool)
        for c in range(s.n_components):
            keep_v[np.nonzero(s.vertex_component == c)[0][0]] = False
        grad = s.d0[:, keep_v].astype(float)
        A = _allowed_harmonic(bd, L, spec.drop_row)
        harm = bd.basis.K @ A if A.size else np.zeros((s.n_edges, 0))
        Nb = sp.hstack([grad, sp.csr_matrix(harm)]).tocsr()
        n_grad = grad.shape[1]
    else:
        _, M1b, _ = masses(s)
        top = (s.d0.T @ M1b).toarray()
        sym = _symplectic_rows(bd, L, spec.drop_row)
        Nb = sl.null_space(np.concatenate([top, sym], axis=0), rcond=1e-10)
        A = np.zeros((0, 0))
        n_grad = 0
    lift = s.T1.T.tocsr() @ sp.csr_matrix(Nb)
    sel = sp.csr_matrix((np.ones(len(interior)), (interior, np.arange(len(interior)))), shape=(cx.n_edges, len(interior)))
    N = sp.hstack([sel, lift]).tocsr()
    num = abs(rows @ N).max() if rows.shape[0] and N.shape[1] else 0.0
    den = max(abs(rows).max() * max(abs(N).max(), 1e-300), 1e-300) if rows.shape[0] else 1.0
    return ConstrainedSpace(
        N=N,
        interior_edges=interior,
        Nb=Nb,
        harmonic_coeffs=A,
        n_gradient_columns=n_grad,
        trace_class=spec.trace_class,
        residual=float(num / den),
    )


def _inf_norm(A) -> float:
    if sp.issparse(A):
        return float(abs(A).sum(axis=1).max()) if A.shape[0] else 0.0
    return float(np.abs(A).sum(axis=1).max()) if A.shape[0] else 0.0


def relative_asymmetry(C) -> float:
    """``|C - C^T|_inf / |C|_inf``."""
    n = _inf_norm(C)
    return _inf_norm(C - C.T) / n if n > 0 else 0.0


@dataclass
class RestrictedOperator:
    C: sp.csr_matrix
    M: sp.csr_matrix
    asymmetry: float


def restricted_operator(cx: OrientedComplex3, space: ConstrainedSpace) -> RestrictedOperator:
    """``C_L = N^T C3 N`` and ``M_L = N^T M1 N`` with the relative asymmetry of ``C_L``."""
    C3 = _volume_cached(cx, "C3", lambda: assemble_weak_curl(cx))
    M1 = _volume_cached(cx, "M1", lambda: assemble_mass(cx, 1))
    N = space.N
    CL = (N.T @ C3 @ N).tocsr()
    ML = (N.T @ M1 @ N).tocsr()
    return RestrictedOperator(C=CL, M=ML, asymmetry=relative_asymmetry(CL))


_VOLUME_CACHE: "weakref.WeakKeyDictionary[OrientedComplex3, dict]" = weakref.WeakKeyDictionary()


def _volume_cached(cx: OrientedComplex3, key: str, build):
    store = _VOLUME_CACHE.setdefault(cx, {})
    if key not in store:
        store[key] = build()
    return store[key]


def validate_gkn(bd: BoundaryData, selection: np.ndarray, trace_class: str = CLOSED) -> tuple[str, float]:
    """Lagrangian verdict of a harmonic selection and the measured operator asymmetry."""
    sel = np.asarray(selection, dtype=float).reshape(2 * bd.genus, -1)
    verdict = _check_lagrangian(bd, sel) if sel.shape[1] else (COMPLETE if bd.genus == 0 else "Lagrangian")
    spec = BoundaryConditionSpec(trace_class=trace_class, lagrangian=sel)
    space = build_constrained_space(bd, spec, validate=False)
    op = restricted_operator(bd.cx, space)
    return verdict, op.asymmetry


# ---------------------------------------------------------------------------
# eigensolvers


@dataclass
class SpectrumReport:
    """Eigenpairs of a symmetric pencil.

    ``eigenvalues`` holds the nonzero eigenvalues in ascending order.
    ``eigenvectors`` are the matching columns, orthonormal in the pencil's
    mass.  ``residuals`` are relative backward errors
    ``|A x - lam B x| / ((|A| + |lam| |B|) |x|)``.
    """

    eigenvalues: np.ndarray
    zero_mode_count: int | None
    eigenvectors: np.ndarray
    residuals: np.ndarray
    gram_error: float
    asymmetry: float
    method: str
    pencil: str = "galerkin"
    extra: dict = field(default_factory=dict)

    @property
    def smallest_magnitude(self) -> float:
        return float(np.min(np.abs(self.eigenvalues))) if len(self.eigenvalues) else float("nan")


def _residuals(A, B, lam, X, multipliers: np.ndarray | None = None) -> np.ndarray:
    """Relative backward errors; ``multipliers`` spans the constraint forces removed from ``r``."""
    na, nb = _inf_norm(A), _inf_norm(B)
    out = []
    for k in range(len(lam)):
        x = X[:, k]
        r = A @ x - lam[k] * (B @ x)
        if multipliers is not None and multipliers.shape[1]:
            r = r - multipliers @ (multipliers.T @ r)
        out.append(np.linalg.norm(r, np.inf) / ((na + abs(lam[k]) * nb) * np.linalg.norm(x, np.inf)))
    return np.array(out)


def _pick(lam: np.ndarray, k: int | None) -> np.ndarray:
    idx = np.arange(len(lam))
    if k is not None and k < len(lam):
        idx = np.argsort(np.abs(lam), kind="stable")[:k]
    return idx[np.argsort(lam[idx], kind="stable")]


def solve_spectrum(
    C_L,
    M_L,
    k: int | None = None,
    zero_tol: float = 1e-6,
    sigma: float | None = None,
    seed: int = 0,
    dense_max: int = DENSE_MAX,
) -> SpectrumReport:
    """Generalized symmetric eigensolve of ``C_L x = lam M_L x``.

    ``C_L`` is symmetrized by averaging.  Dense up to ``dense_max`` unknowns;
    above that, shift-invert Lanczos around ``sigma``.  Eigenvalues with
    ``|lam| <= zero_tol * max|lam|`` are counted as kernel (dense path only).

    Raises:
        IndefiniteMass: ``M_L`` is not positive definite.
        EigenSolverFailure: the iterative solver did not converge.
    """
    asym = relative_asymmetry(C_L)
    C = 0.5 * (C_L + C_L.T)
    n = C.shape[0]
    if n <= dense_max:
        Cd = C.toarray() if sp.issparse(C) else np.asarray(C)
        Md = M_L.toarray() if sp.issparse(M_L) else np.asarray(M_L)
        try:
            lam, X = sl.eigh(Cd, Md)
        except np.linalg.LinAlgError as exc:
            raise IndefiniteMass(str(exc)) from exc
        rho = np.abs(lam).max() if n else 0.0
        nonzero = np.abs(lam) > zero_tol * rho
        zero_count = int((~nonzero).sum())
        lam_nz, X_nz = lam[nonzero], X[:, nonzero]
        idx = _pick(lam_nz, k)
        lam_out, X_out = lam_nz[idx], X_nz[:, idx]
        method = "dense"
        extra = {"spectral_radius": float(rho)}
    else:
        if sigma is None:
            raise EigenSolverFailure("sparse solve needs a shift (sigma)")
        if k is None:
            k = 6
        if np.any((M_L.diagonal() if sp.issparse(M_L) else np.diag(M_L)) <= 0):
            raise IndefiniteMass("mass matrix has a non-positive diagonal entry")
        v0 = np.random.default_rng(seed).standard_normal(n)
        try:
            lam, X = spla.eigsh(sp.csc_matrix(C), k=k, M=sp.csc_matrix(M_L), sigma=sigma, which="LM", v0=v0)
        except (spla.ArpackNoConvergence, RuntimeError) as exc:
            raise EigenSolverFailure(str(exc)) from exc
        order = np.argsort(lam, kind="stable")
        lam_out, X_out = lam[order], X[:, order]
        zero_count = None
        method = "shift-invert"
        extra = {"sigma": float(sigma)}
    X_out = _fix_signs(X_out)
    G = X_out.T @ (M_L @ X_out)
    gram = float(np.abs(G - np.eye(len(lam_out))).max()) if len(lam_out) else 0.0
    return SpectrumReport(
        eigenvalues=lam_out,
        zero_mode_count=zero_count,
        eigenvectors=X_out,
        residuals=_residuals(C, M_L, lam_out, X_out),
        gram_error=gram,
        asymmetry=asym,
        method=method,
        extra=extra,
    )


def _fix_signs(X: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each column positive (deterministic output)."""
    if X.size == 0:
        return X
    idx = np.argmax(np.abs(X), axis=0)
    s = np.sign(X[idx, np.arange(X.shape[1])])
    s[s == 0] = 1
    return X * s


# ---------------------------------------------------------------------------
# curl problem: operator assembly plus both pencils


class CurlProblem:
    """Self-adjoint curl with a given boundary condition on one mesh."""

    def __init__(self, bd: BoundaryData, spec: BoundaryConditionSpec, validate: bool = True):
        self.bd = bd
        self.spec = spec
        self.space = build_constrained_space(bd, spec, validate=validate)
        self._op: RestrictedOperator | None = None
        self._K: sp.csr_matrix | None = None

    @classmethod
    def from_complex(cls, cx: OrientedComplex3, spec: BoundaryConditionSpec, validate: bool = True) -> "CurlProblem":
        return cls(prepare_boundary(cx), spec, validate=validate)

    @property
    def cx(self) -> OrientedComplex3:
        return self.bd.cx

    @property
    def operator(self) -> RestrictedOperator:
        if self._op is None:
            self._op = restricted_operator(self.cx, self.space)
        return self._op

    @property
    def stiffness(self) -> sp.csr_matrix:
        """Curl stiffness restricted to ``V_L``."""
        if self._K is None:
            K = _volume_cached(self.cx, "K", lambda: assemble_curl_stiffness(self.cx))
            self._K = (self.space.N.T @ K @ self.space.N).tocsr()
        return self._K

    def galerkin_spectrum(self, k=None, zero_tol=1e-6, sigma=None, seed=0, dense_max=DENSE_MAX) -> SpectrumReport:
        op = self.operator
        rep = solve_spectrum(op.C, op.M, k=k, zero_tol=zero_tol, sigma=sigma, seed=seed, dense_max=dense_max)
        rep.pencil = "galerkin"
        return rep

    # -- helicity pencil -------------------------------------------------

    def helicity_spectrum(self, k=None, zero_tol=1e-6, seed=0, dense_max=DENSE_MAX) -> SpectrumReport:
        """Nonzero eigenvalues of ``K_L x = lam C_L x`` (smallest ``|lam|`` first when ``k`` is set)."""
        if self.space.dim <= dense_max:
            return self._helicity_dense(k, zero_tol)
        return self._helicity_sparse(k if k is not None else 6, seed)

    def _helicity_dense(self, k, zero_tol) -> SpectrumReport:
        K = self.stiffness.toarray()
        C = self.operator.C.toarray()
        asym = relative_asymmetry(C)
        C = 0.5 * (C + C.T)
        w, V = np.linalg.eigh(K)
        wmax = max(w.max(initial=0.0), 1e-300)
        rng = w > 1e-10 * wmax
        U = V[:, rng] / np.sqrt(w[rng])
        Z = V[:, ~rng]
        # curl-free fields must be C-orthogonal to eigenvectors; impose it when C does not kill them
        W = U.T @ (C @ Z)
        forces = None
        if Z.shape[1] and np.abs(W).max(initial=0.0) > 1e-10 * np.abs(C).max():
            P = sl.null_space(W.T, rcond=1e-10)
            U = U @ P
            forces = sl.orth(C @ Z, rcond=1e-10)
        nu, Y = np.linalg.eigh(U.T @ C @ U)
        numax = np.abs(nu).max(initial=0.0)
        keep = np.abs(nu) > zero_tol * numax
        lam = 1.0 / nu[keep]
        X = U @ Y[:, keep]
        idx = _pick(lam, k)
        lam, X = lam[idx], _fix_signs(X[:, idx])
        G = X.T @ K @ X
        return SpectrumReport(
            eigenvalues=lam,
            zero_mode_count=int((~rng).sum()),
            eigenvectors=X,
            residuals=_residuals(K, C, lam, X, forces),
            gram_error=float(np.abs(G - np.eye(len(lam))).max()) if len(lam) else 0.0,
            asymmetry=asym,
            method="dense",
            pencil="helicity",
            extra={"curl_free_dimension": int((~rng).sum())},
        )

    def quotient_basis(self) -> sp.csr_matrix:
        """Volume-edge basis of ``V_L`` modulo curl-free fields (tree gauge).

        Interior edges off a spanning forest rooted at the boundary, plus the
        lifted traces that no closed volume cochain can carry.
        """
        cx, s = self.cx, self.bd.surface
        g = self.bd.genus
        if self.spec.trace_class == COCLOSED and g > 0:
            raise SpectralError("sparse helicity solve supports co-closed traces only for genus 0")
        nv = cx.n_vertices
        on_boundary = np.zeros(nv, dtype=bool)
        on_boundary[s.bverts] = True
        adj = [[] for _ in range(nv)]
        interior = self.space.interior_edges
        for e in interior:
            a, b = cx.edges[e]
            adj[a].append((b, e))
            adj[b].append((a, e))
        seen = on_boundary.copy()
        queue = deque(np.nonzero(on_boundary)[0].tolist())
        tree = np.zeros(cx.n_edges, dtype=bool)
        while queue:
            x = queue.popleft()
            for y, e in sorted(adj[x]):
                if not seen[y]:
                    seen[y] = True
                    tree[e] = True
                    queue.append(y)
        if not seen.all():
            raise SpectralError("interior vertices not connected to the boundary")
        free = interior[~tree[interior]]
        cols = [sp.csr_matrix((np.ones(len(free)), (free, np.arange(len(free)))), shape=(cx.n_edges, len(free)))]
        if self.spec.trace_class == CLOSED:
            A = self.space.harmonic_coeffs
            if A.size:
                # drop the directions whose a-periods vanish: those traces extend to closed fields
                Aa = A[:g]
                comp = sl.orth(Aa.T, rcond=1e-8)
                harm = self.bd.basis.K @ (A @ comp)
                if harm.shape[1]:
                    cols.append(s.T1.T.tocsr() @ sp.csr_matrix(harm))
        else:
            cols.append(s.T1.T.tocsr() @ sp.csr_matrix(self.space.Nb))
        return sp.hstack(cols).tocsr()

    def _helicity_sparse(self, k: int, seed: int) -> SpectrumReport:
        Q = self.quotient_basis()
        K = _volume_cached(self.cx, "K", lambda: assemble_curl_stiffness(self.cx))
        C3 = _volume_cached(self.cx, "C3", lambda: assemble_weak_curl(self.cx))
        Kq = (Q.T @ K @ Q).tocsc()
        Cq = (Q.T @ C3 @ Q).tocsc()
        asym = relative_asymmetry(Cq)
        Cq = (0.5 * (Cq + Cq.T)).tocsc()
        v0 = np.random.default_rng(seed).standard_normal(Kq.shape[0])
        try:
            lu = spla.splu(Kq)
            Minv = spla.LinearOperator(Kq.shape, matvec=lu.solve, dtype=float)
            nu, Y = spla.eigsh(Cq, k=k, M=Kq, Minv=Minv, which="LM", v0=v0)
        except (spla.ArpackNoConvergence, RuntimeError) as exc:
            raise EigenSolverFailure(str(exc)) from exc
        lam = 1.0 / nu
        order = np.argsort(lam, kind="stable")
        lam, Y = lam[order], _fix_signs(Y[:, order])
        G = Y.T @ (Kq @ Y)
        return SpectrumReport(
            eigenvalues=lam,
            zero_mode_count=None,
            eigenvectors=np.asarray(Q @ Y),
            residuals=_residuals(Kq, Cq, lam, Y),
            gram_error=float(np.abs(G - np.eye(len(lam))).max()),
            asymmetry=asym,
            method="lanczos",
            pencil="helicity",
            extra={"quotient_dimension": int(Q.shape[1])},
        )


def spectrum(problem: CurlProblem, pencil: str = "helicity", **kw) -> SpectrumReport:
    if pencil == "helicity":
        kw.pop("sigma", None)
        return problem.helicity_spectrum(**kw)
    if pencil == "galerkin":
        return problem.galerkin_spectrum(**kw)
    raise ValueError(f"unknown pencil {pencil!r}")


def gradient_kernel_dimension(problem: CurlProblem) -> int:
    """Number of independent discrete gradients inside ``V_L``.

    Closed traces admit every gradient (``V - 1`` per connected volume).
    Co-closed traces admit gradients of potentials that are constant on
    each boundary component.
    """
    cx, s = problem.cx, problem.bd.surface
    n_int = cx.n_vertices - s.n_vertices
    if problem.spec.trace_class == CLOSED:
        return cx.n_vertices - 1
    return n_int + s.n_components - 1
