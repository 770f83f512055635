"""Classical curl-curl operators and squared-spectrum comparisons.

The Dirichlet operator (zero tangential trace) lives on interior edges, the
Neumann one on all edges.  Both use ``K = D1^T M2 D1`` and the edge mass.

:func:`dirichlet_mismatch_demo` compares the lowest curl-curl eigenvalues
with squares of self-adjoint curl eigenvalues on a sequence of ball meshes.
The curl-curl operators have no square root among the self-adjoint curls,
and the demo shows the gap numerically.  A numerical gap is an illustration,
not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sp

from .curl_spectral import (
    CLOSED,
    COCLOSED,
    BoundaryConditionSpec,
    CurlProblem,
    prepare_boundary,
)
from .mesh_complex import OrientedComplex3, assemble_curl_stiffness, assemble_mass, extract_boundary

DIRICHLET = "dirichlet"
NEUMANN = "neumann"

DISCLAIMER = "illustration only: a numerical gap is not a proof"


@dataclass
class CurlCurlOperator:
    K: sp.csr_matrix
    M: sp.csr_matrix
    bc: str
    dofs: np.ndarray


def assemble_curlcurl(cx: OrientedComplex3, bc: str = DIRICHLET) -> CurlCurlOperator:
    """Curl-curl stiffness and edge mass, restricted to interior edges for Dirichlet."""
    K = assemble_curl_stiffness(cx)
    M = assemble_mass(cx, 1)
    if bc == DIRICHLET:
        s = extract_boundary(cx)
        dofs = np.setdiff1d(np.arange(cx.n_edges), s.bedges)
    elif bc == NEUMANN:
        dofs = np.arange(cx.n_edges)
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    return CurlCurlOperator(K=K[dofs][:, dofs].tocsr(), M=M[dofs][:, dofs].tocsr(), bc=bc, dofs=dofs)


def curlcurl_spectrum(op: CurlCurlOperator, k: int = 6, zero_tol: float = 1e-8):
    """Dense eigensolve: ``(nonzero eigenvalues[:k], kernel dimension, min eigenvalue / |K|)``."""
    K = op.K.toarray()
    mu = sl.eigh(K, op.M.toarray(), eigvals_only=True)
    top = np.abs(mu).max() if len(mu) else 0.0
    zero = np.abs(mu) <= zero_tol * top
    return mu[~zero][:k], int(zero.sum()), float(mu.min() / top) if top else 0.0


def square_check(A, B, zero_tol: float = 1e-10) -> dict:
    """Compare ``eig(A B^-1 A, B)`` with ``eig(A, B)**2`` (dense).

    ``A`` is symmetrized first.  The mismatch is measured against the largest
    squared eigenvalue.  Zero modes of both pencils are counted on the
    squared scale, ``value <= zero_tol * max(lam^2)``.
    """
    Ad = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    Bd = B.toarray() if sp.issparse(B) else np.asarray(B, dtype=float)
    Ad = 0.5 * (Ad + Ad.T)
    lam = sl.eigh(Ad, Bd, eigvals_only=True)
    S = Ad @ sl.solve(Bd, Ad, assume_a="pos")
    S = 0.5 * (S + S.T)
    mu = sl.eigh(S, Bd, eigvals_only=True)
    sq = np.sort(lam ** 2)
    mu = np.sort(mu)
    scale = max(sq.max(initial=0.0), 1e-300)
    mism = float(np.abs(mu - sq).max(initial=0.0) / scale)
    z_lam = int((sq <= zero_tol * scale).sum())
    z_mu = int((np.abs(mu) <= zero_tol * scale).sum())
    return {
        "max_relative_mismatch": mism,
        "n_eigenvalues": int(len(lam)),
        "zero_modes_curl": z_lam,
        "zero_modes_square": z_mu,
        "squared_eigenvalues": sq,
        "square_eigenvalues": mu,
    }


def square_check_problem(problem: CurlProblem, pencil: str = "galerkin") -> dict:
    """Squared-spectrum identity for one of the two curl pencils.

    ``galerkin`` checks ``(C_L M_L^-1 C_L, M_L)`` against ``(C_L, M_L)``.
    ``helicity`` checks the reciprocal pencil ``(C, K)`` on the space with
    curl-free fields removed, whose eigenvalues are ``1/lam``.
    """
    if pencil == "galerkin":
        op = problem.operator
        return square_check(op.C, op.M)
    if pencil == "helicity":
        K = problem.stiffness.toarray()
        C = problem.operator.C.toarray()
        w, V = np.linalg.eigh(K)
        rng = w > 1e-10 * w.max()
        U = V[:, rng]
        return square_check(U.T @ C @ U, U.T @ K @ U)
    raise ValueError(f"unknown pencil {pencil!r}")


def _hausdorff(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        return float("nan")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def dirichlet_mismatch_demo(meshes: list[OrientedComplex3], k: int = 4) -> dict:
    """Lowest curl-curl eigenvalues next to squared self-adjoint curl eigenvalues.

    ``meshes`` is a refinement sequence of genus-0 meshes.  Error bars are
    the change of each quantity between the two finest meshes.
    """
    rows = []
    for cx in meshes:
        bd = prepare_boundary(cx)
        if bd.genus != 0:
            raise ValueError("the mismatch demo needs a genus-0 domain")
        entry = {"n_tets": cx.n_tets}
        for bc in (DIRICHLET, NEUMANN):
            mu, kern, _ = curlcurl_spectrum(assemble_curlcurl(cx, bc), k=k)
            entry[f"curlcurl_{bc}"] = [float(x) for x in mu]
            entry[f"curlcurl_{bc}_kernel"] = kern
        for tc in (CLOSED, COCLOSED):
            rep = CurlProblem(bd, BoundaryConditionSpec(tc)).helicity_spectrum(k=2 * k)
            lam2 = np.sort(np.unique(np.round(rep.eigenvalues ** 2, 10)))[:k]
            entry[f"curl_{tc}_squared"] = [float(x) for x in lam2]
        rows.append(entry)

    finest = rows[-1]
    prev = rows[-2] if len(rows) > 1 else rows[-1]
    keys = [f"curlcurl_{DIRICHLET}", f"curlcurl_{NEUMANN}", f"curl_{CLOSED}_squared", f"curl_{COCLOSED}_squared"]
    bars = {key: abs(finest[key][0] - prev[key][0]) for key in keys}
    comparisons = {}
    for cc in keys[:2]:
        for cs in keys[2:]:
            gap = abs(finest[cc][0] - finest[cs][0])
            comparisons[f"{cc}_vs_{cs}"] = {
                "lowest_gap": gap,
                "combined_error_bar": bars[cc] + bars[cs],
                "gap_exceeds_error_bars": bool(gap > bars[cc] + bars[cs]),
                "hausdorff": _hausdorff(finest[cc], finest[cs]),
            }
    return {
        "refinements": rows,
        "error_bars": bars,
        "comparisons": comparisons,
        "note": DISCLAIMER,
        "not_assembled": (
            "curl-curl extension whose domain adds fields outside H(curl); "
            "those fields have no Whitney representation"
        ),
    }
