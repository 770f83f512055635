import numpy as np
import pytest

from hodgecurl import meshgen
from hodgecurl.curl_spectral import CLOSED, COCLOSED, BoundaryConditionSpec, CurlProblem
from hodgecurl.curlcurl import (
    DIRICHLET,
    DISCLAIMER,
    NEUMANN,
    assemble_curlcurl,
    curlcurl_spectrum,
    dirichlet_mismatch_demo,
    square_check,
    square_check_problem,
)
from hodgecurl.mesh_complex import build_complex, extract_boundary
from hodgecurl.symplectic import PartitionSpec


@pytest.mark.parametrize("bc", [DIRICHLET, NEUMANN])
def test_operator_basics(ball, bc):
    op = assemble_curlcurl(ball, bc)
    assert abs(op.K - op.K.T).max() == 0
    grad = ball.D0[op.dofs]
    if bc == DIRICHLET:
        s = extract_boundary(ball)
        interior = np.setdiff1d(np.arange(ball.n_vertices), s.bverts)
        grad = grad[:, interior]
    assert abs(op.K @ grad).max() < 1e-12
    mu, kernel, min_rel = curlcurl_spectrum(op)
    assert mu[0] > 0
    assert min_rel >= -1e-10


def test_dirichlet_kernel_is_interior_gradients(ball):
    # potentials free on interior vertices plus one constant on the boundary, minus global constants
    s = extract_boundary(ball)
    _, kernel, _ = curlcurl_spectrum(assemble_curlcurl(ball, DIRICHLET))
    assert kernel == ball.n_vertices - s.n_vertices


def test_unknown_bc(ball):
    with pytest.raises(ValueError):
        assemble_curlcurl(ball, "robin")


@pytest.mark.parametrize("trace", [CLOSED, COCLOSED])
def test_square_identity_torus(torus_bd, trace):
    problem = CurlProblem(torus_bd, BoundaryConditionSpec(trace, PartitionSpec.from_I([1], 1)))
    rep = square_check_problem(problem, "galerkin")
    assert rep["max_relative_mismatch"] <= 1e-7
    assert rep["zero_modes_square"] == rep["zero_modes_curl"] > 0


def test_square_identity_helicity(ball_bd):
    rep = square_check_problem(CurlProblem(ball_bd, BoundaryConditionSpec(CLOSED)), "helicity")
    assert rep["max_relative_mismatch"] <= 1e-7


def test_pairs_square_to_doubles():
    A = np.diag([-2.0, 2.0, 0.0, 3.0])
    rep = square_check(A, np.eye(4))
    sq = rep["square_eigenvalues"]
    assert np.sum(np.isclose(sq, 4.0)) >= 2
    assert rep["zero_modes_curl"] == 1
    assert np.isclose(sq[0], 0.0)


def test_mismatch_demo_contract():
    meshes = [build_complex(*meshgen.ball(n)) for n in (2, 4)]
    rep = dirichlet_mismatch_demo(meshes, k=3)
    assert rep["note"] == DISCLAIMER
    assert len(rep["refinements"]) == 2
    row = rep["refinements"][-1]
    for key in ("curlcurl_dirichlet", "curlcurl_neumann", "curl_closed_squared", "curl_coclosed_squared"):
        assert len(row[key]) >= 1
        assert key in rep["error_bars"]
    for comp in rep["comparisons"].values():
        assert {"hausdorff", "lowest_gap", "combined_error_bar"} <= set(comp)


def test_mismatch_demo_rejects_torus(torus):
    with pytest.raises(ValueError):
        dirichlet_mismatch_demo([torus])
