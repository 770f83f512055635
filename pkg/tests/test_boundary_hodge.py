import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgecurl import meshgen
from hodgecurl.boundary_hodge import (
    coexact_from_beta,
    harmonic_space,
    hodge_decompose,
    m_inner,
    masses,
    mesh_tolerance,
    pairing,
    star_harmonic_defect,
    symplectic_harmonic_basis,
    wedge_pairing,
)
from hodgecurl.errors import SizeMismatch
from hodgecurl.mesh_complex import build_complex, extract_boundary
from hodgecurl.surface_homology import betti, cycle_basis
from hodgecurl.symplectic import canonical_J


@pytest.mark.parametrize("name,dim", [("tet", 0), ("ball", 0), ("torus", 2), ("genus2", 4)])
def test_harmonic_dimension(meshes, name, dim):
    s = extract_boundary(meshes[name])
    hs = harmonic_space(s)
    assert hs.dim == dim == betti(s).b1


def test_harmonic_is_closed_and_coclosed(torus_surface):
    s = torus_surface
    _, M1, _ = masses(s)
    H = harmonic_space(s).H
    assert np.abs(s.d1 @ H).max() < 1e-12
    assert np.abs(s.d0.T @ (M1 @ H)).max() < 1e-12
    assert np.allclose(H.T @ (M1 @ H), np.eye(2), atol=1e-12)


def test_svd_and_cotree_agree(torus_surface):
    _, M1, _ = masses(torus_surface)
    A = harmonic_space(torus_surface, "svd").H
    B = harmonic_space(torus_surface, "cotree").H
    # same space: the M1-projectors coincide
    PA = A @ A.T @ M1
    PB = B @ B.T @ M1
    assert np.abs(PA - PB).max() < 1e-10


def test_decomposition_parts(torus_surface, rng):
    s = torus_surface
    _, M1, _ = masses(s)
    C = wedge_pairing(s).C
    omega = rng.standard_normal(s.n_edges)
    dec = hodge_decompose(s, omega)
    assert dec.residual < 1e-12
    ex, co, h = dec.parts()
    assert np.allclose(ex, s.d0 @ dec.alpha)
    assert np.abs(s.d0.T @ (M1 @ co)).max() < 1e-10
    assert np.allclose(co, coexact_from_beta(s, dec.beta), atol=1e-10)
    scale = m_inner(s, omega, omega)
    for a, b in [(ex, co), (ex, h), (co, h)]:
        assert abs(m_inner(s, a, b)) < 1e-10 * scale
    other = hodge_decompose(s, rng.standard_normal(s.n_edges))
    assert abs(pairing(C, ex, other.exact)) <= 1e-12
    assert abs(pairing(C, h, other.exact)) <= 1e-9


_SURF = extract_boundary(build_complex(*meshgen.solid_torus(nu=6, nv=6, nw=3)))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_is_a_projection(seed):
    s = _SURF
    omega = np.random.default_rng(seed).standard_normal(s.n_edges)
    dec = hodge_decompose(s, omega)
    for part, idx in [(dec.exact, 0), (dec.coexact, 1), (dec.h, 2)]:
        again = hodge_decompose(s, part).parts()
        nrm = np.linalg.norm(part) + 1e-300
        for j, q in enumerate(again):
            target = part if j == idx else 0 * part
            assert np.linalg.norm(q - target) <= 1e-8 * max(nrm, 1.0)


def test_size_mismatch(torus_surface):
    C = wedge_pairing(torus_surface).C
    with pytest.raises(SizeMismatch):
        pairing(C, np.zeros(3), np.zeros(torus_surface.n_edges))
    with pytest.raises(SizeMismatch):
        hodge_decompose(torus_surface, np.zeros(3))


@pytest.mark.parametrize("surface_name", ["torus_surface", "genus2_surface"])
def test_symplectic_harmonic_basis(request, surface_name):
    s = request.getfixturevalue(surface_name)
    sb = symplectic_harmonic_basis(s, cycle_basis(s))
    g = sb.genus
    assert sb.tol == mesh_tolerance(s)
    assert np.abs(sb.P - np.eye(2 * g)).max() <= sb.tol
    assert np.abs(sb.Gram - canonical_J(g)).max() <= sb.tol
    assert sb.kappa.shape[1] == sb.kappa_prime.shape[1] == g


def test_star_maps_harmonic_close_to_harmonic():
    coarse = extract_boundary(build_complex(*meshgen.solid_torus(nu=8, nv=8, nw=4)))
    fine = extract_boundary(build_complex(*meshgen.solid_torus(nu=16, nv=16, nw=4)))
    d0, d1 = star_harmonic_defect(coarse), star_harmonic_defect(fine)
    assert d1 < d0 < 0.2
