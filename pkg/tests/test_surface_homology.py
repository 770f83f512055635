import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgecurl import meshgen
from hodgecurl.errors import OpenChain
from hodgecurl.exact import rational_rank
from hodgecurl.mesh_complex import build_complex, extract_boundary, surface_from_triangles
from hodgecurl.surface_homology import (
    EXTERIOR,
    INTERIOR,
    NEITHER,
    betti,
    canonical_dual_pairs,
    chain_boundary,
    classify_cycle,
    cycle_basis,
    fundamental_cycles,
    integer_symplectic_reduction,
    intersection_matrix,
    intersection_number,
    standard_symplectic,
)


def _homology_rank(s, cycles):
    """Rank of the cycles modulo boundaries (rational oracle)."""
    B = s.d1.T.toarray()
    both = np.hstack([B, np.asarray(cycles).T])
    return rational_rank(both) - rational_rank(B)


def _winding_about_z(s, chain):
    x = s.vertices
    a, b = s.edges_local[:, 0], s.edges_local[:, 1]
    d = np.arctan2(x[b, 1], x[b, 0]) - np.arctan2(x[a, 1], x[a, 0])
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(np.asarray(chain) @ d / (2 * np.pi))


@pytest.fixture(scope="module")
def torus7():
    return surface_from_triangles(*meshgen.torus7())


def test_betti(tet, torus_surface, genus2_surface, torus7):
    assert tuple(betti(extract_boundary(tet))) == (1, 0, 0)
    assert tuple(betti(torus_surface)) == (1, 2, 1)
    assert tuple(betti(genus2_surface)) == (1, 4, 2)
    assert tuple(betti(torus7)) == (1, 2, 1)


def test_sphere_has_no_cycles(ball):
    assert len(fundamental_cycles(extract_boundary(ball))) == 0


def test_torus7_cycles_closed(torus7):
    Z = fundamental_cycles(torus7)
    assert Z.shape == (2, 21)
    for z in Z:
        assert np.all(chain_boundary(torus7, z) == 0)
    assert _homology_rank(torus7, Z) == 2
    cb = canonical_dual_pairs(torus7, classify=False)
    assert np.array_equal(cb.intersection, standard_symplectic(1))


def test_genus2_cycles_independent(genus2_surface):
    Z = fundamental_cycles(genus2_surface)
    assert Z.shape[0] == 4
    assert np.issubdtype(Z.dtype, np.integer)
    assert _homology_rank(genus2_surface, Z) == 4


def test_torus_canonical_pairs(torus_surface):
    cb = cycle_basis(torus_surface)
    assert np.array_equal(cb.intersection, [[0, 1], [-1, 0]])
    assert cb.labels == [INTERIOR, EXTERIOR]
    # the interior cycle is a meridian, the exterior one goes once around the hole
    assert abs(_winding_about_z(torus_surface, cb.a_cycles[0])) < 1e-12
    assert abs(abs(_winding_about_z(torus_surface, cb.b_cycles[0])) - 1) < 1e-12
    assert classify_cycle(torus_surface, cb.a_cycles[0]) == INTERIOR
    assert classify_cycle(torus_surface, cb.b_cycles[0]) == EXTERIOR
    assert classify_cycle(torus_surface, cb.a_cycles[0] + cb.b_cycles[0]) == NEITHER


def test_genus2_canonical_pairs(genus2_surface):
    cb = cycle_basis(genus2_surface)
    J = standard_symplectic(2)
    assert np.array_equal(cb.intersection, J)
    assert np.array_equal(intersection_matrix(genus2_surface, cb.cycles), J)
    assert cb.labels == [INTERIOR] * 2 + [EXTERIOR] * 2


def test_genus2_random_basis_canonicalized(genus2_surface):
    cb = cycle_basis(genus2_surface)
    rng = np.random.default_rng(7)
    # random unimodular mix: product of elementary integer shears
    U = np.eye(4, dtype=np.int64)
    for _ in range(6):
        i, j = rng.choice(4, 2, replace=False)
        E = np.eye(4, dtype=np.int64)
        E[i, j] = rng.integers(-2, 3)
        U = U @ E
    mixed = U.T @ cb.cycles
    out = canonical_dual_pairs(genus2_surface, cycles=mixed, classify=False)
    Int = intersection_matrix(genus2_surface, out.cycles)
    assert np.array_equal(Int, standard_symplectic(2))


def test_canonical_input_is_kept(torus_surface):
    cb = cycle_basis(torus_surface)
    again = canonical_dual_pairs(torus_surface, cycles=cb.cycles)
    assert np.array_equal(again.cycles, cb.cycles)


def test_triangle_boundary_is_interior(torus_surface):
    c = torus_surface.d1.toarray()[0].astype(np.int64)
    assert classify_cycle(torus_surface, c) == INTERIOR


def test_open_chain_rejected(torus_surface):
    c = np.zeros(torus_surface.n_edges, dtype=np.int64)
    c[0] = 1
    with pytest.raises(OpenChain):
        intersection_number(torus_surface, c, c)
    with pytest.raises(OpenChain):
        classify_cycle(torus_surface, c)


def test_intersection_antisymmetric(genus2_surface):
    Z = fundamental_cycles(genus2_surface)
    M = intersection_matrix(genus2_surface, Z)
    assert np.array_equal(M, -M.T)
    assert np.all(np.diag(M) == 0)
    assert rational_rank(M) == 4


_TORUS_SURFACE = extract_boundary(build_complex(*meshgen.solid_torus(nu=6, nv=6, nw=3)))
_TORUS_BASIS = cycle_basis(_TORUS_SURFACE)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=8), st.lists(st.integers(-2, 2), min_size=8, max_size=8))
def test_intersection_homology_invariant(picks, coefs):
    s = _TORUS_SURFACE
    cb = _TORUS_BASIS
    d1 = s.d1.toarray().astype(np.int64)
    fan = sum(c * d1[p % s.n_triangles] for p, c in zip(picks, coefs))
    base = intersection_number(s, cb.a_cycles[0], cb.b_cycles[0])
    assert intersection_number(s, cb.a_cycles[0], cb.b_cycles[0] + fan) == base
    assert intersection_number(s, cb.a_cycles[0] + fan, cb.b_cycles[0]) == base


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_integer_symplectic_reduction(g, seed):
    rng = np.random.default_rng(seed)
    n = 2 * g
    U = np.eye(n, dtype=np.int64)
    for _ in range(3 * n):
        i, j = rng.choice(n, 2, replace=False)
        E = np.eye(n, dtype=np.int64)
        E[i, j] = rng.integers(-2, 3)
        U = U @ E
    omega = U.T @ standard_symplectic(g) @ U
    V = integer_symplectic_reduction(omega)
    assert np.array_equal(V.T @ omega @ V, standard_symplectic(g))
    assert abs(round(np.linalg.det(V.astype(float)))) == 1
