import numpy as np
import pytest
import scipy.sparse as sp

from hodgecurl.curl_spectral import (
    CLOSED,
    COCLOSED,
    BoundaryConditionSpec,
    CurlProblem,
    build_constrained_space,
    constraint_rows,
    gradient_kernel_dimension,
    solve_spectrum,
    validate_gkn,
)
from hodgecurl.errors import IndefiniteMass, InvalidLagrangian
from hodgecurl.symplectic import COMPLETE, LAGRANGIAN, PartitionSpec

I1 = PartitionSpec.from_I([1], 1)
IP1 = PartitionSpec.from_I([], 1)


@pytest.mark.parametrize("trace", [CLOSED, COCLOSED])
def test_constrained_space_satisfies_constraints(torus_bd, trace):
    spec = BoundaryConditionSpec(trace, I1)
    space = build_constrained_space(torus_bd, spec)
    rows = constraint_rows(torus_bd, spec)
    assert space.residual < 1e-10
    assert abs(rows @ space.N).max() < 1e-10 * abs(rows).max()


@pytest.mark.parametrize("part", [I1, IP1])
def test_closed_torus_is_symmetric(torus_bd, part):
    problem = CurlProblem(torus_bd, BoundaryConditionSpec(CLOSED, part))
    assert problem.operator.asymmetry <= 1e-10


def test_partitions_give_different_spectra(torus_bd):
    a = CurlProblem(torus_bd, BoundaryConditionSpec(CLOSED, I1)).helicity_spectrum(k=4)
    b = CurlProblem(torus_bd, BoundaryConditionSpec(CLOSED, IP1)).helicity_spectrum(k=4)
    assert abs(a.smallest_magnitude - b.smallest_magnitude) > 0.1


def test_negative_control(torus_bd):
    spec = BoundaryConditionSpec(CLOSED, I1, drop_row=1)
    assert CurlProblem(torus_bd, spec).operator.asymmetry >= 1e-3


def test_non_lagrangian_rejected(torus_bd):
    both = np.eye(2)  # kappa and kappa' together are not isotropic
    with pytest.raises(InvalidLagrangian):
        CurlProblem(torus_bd, BoundaryConditionSpec(CLOSED, lagrangian=both))
    with pytest.raises(InvalidLagrangian):
        CurlProblem(torus_bd, BoundaryConditionSpec(CLOSED, lagrangian=np.ones(3)))


def test_validate_gkn(torus_bd):
    verdict, asym = validate_gkn(torus_bd, np.array([1.0, 0.0]))
    assert verdict == COMPLETE and asym < 1e-10
    verdict, asym = validate_gkn(torus_bd, np.zeros((2, 0)))
    assert verdict == LAGRANGIAN and asym > 1e-3


def test_ball_helicity_dense_matches_sparse(ball_bd):
    problem = CurlProblem(ball_bd, BoundaryConditionSpec(CLOSED))
    dense = problem.helicity_spectrum(k=6)
    sparse = problem._helicity_sparse(6, 0)
    assert np.allclose(dense.eigenvalues, sparse.eigenvalues, rtol=1e-8)
    lam = dense.eigenvalues
    # the lowest Beltrami mode is a triple pair +-lam
    assert np.allclose(np.abs(lam), np.abs(lam[0]), rtol=1e-6)
    assert (lam > 0).sum() == 3
    for rep in (dense, sparse):
        assert rep.residuals.max() <= 1e-8
        assert rep.gram_error <= 1e-8


def test_galerkin_zero_modes_cover_gradients(ball_bd):
    problem = CurlProblem(ball_bd, BoundaryConditionSpec(CLOSED))
    rep = problem.galerkin_spectrum()
    assert rep.zero_mode_count >= gradient_kernel_dimension(problem)
    assert rep.residuals.max() <= 1e-8
    assert rep.gram_error <= 1e-8


def test_shift_invert_matches_dense(ball_bd):
    problem = CurlProblem(ball_bd, BoundaryConditionSpec(CLOSED))
    op = problem.operator
    dense = solve_spectrum(op.C, op.M)
    target = dense.eigenvalues[np.argmin(np.abs(dense.eigenvalues - 3.0))]
    it = solve_spectrum(op.C, op.M, k=2, sigma=3.0, dense_max=0)
    assert np.min(np.abs(it.eigenvalues - target)) < 1e-8 * abs(target)


def test_indefinite_mass():
    A = sp.identity(3, format="csr")
    with pytest.raises(IndefiniteMass):
        solve_spectrum(A, -A)


def test_solve_spectrum_random_pencil(rng):
    X = rng.standard_normal((30, 30))
    A = X + X.T
    B = np.eye(30) + 0.1 * (X @ X.T) / 30
    rep = solve_spectrum(A, B)
    import scipy.linalg as sl

    ref = sl.eigh(A, B, eigvals_only=True)
    assert np.allclose(np.sort(rep.eigenvalues), np.sort(ref[np.abs(ref) > 1e-6 * np.abs(ref).max()]))
