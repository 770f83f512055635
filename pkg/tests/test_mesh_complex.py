import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgecurl import meshgen
from hodgecurl.errors import DegenerateTet, NonManifold
from hodgecurl.mesh_complex import (
    assemble_curl_stiffness,
    assemble_mass,
    assemble_wedge,
    assemble_weak_curl,
    build_complex,
    extract_boundary,
    surface_from_triangles,
    wedge_local,
)

# degree-2 exact quadrature on a tetrahedron (independent of the barycentric-moment formulas)
_A, _B = 0.5854101966249685, 0.1381966011250105
TET_QP = np.array([[_A, _B, _B, _B], [_B, _A, _B, _B], [_B, _B, _A, _B], [_B, _B, _B, _A]])
# degree-2 exact on a triangle: edge midpoints, equal weights
TRI_QP = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])


def _grads(x):
    """Barycentric gradients of a tetrahedron with vertices ``x`` (4 x 3)."""
    A = np.vstack([np.ones(4), x.T])
    return np.linalg.inv(A)[:, 1:]


def _whitney(lam, g, i, j):
    return lam[i] * g[j] - lam[j] * g[i]


def _quadrature_local(cx, t):
    """Mass and weak curl on one tet by quadrature, in the complex's global edge numbering."""
    v = cx.tets[t]
    x = cx.vertices[v]
    g = _grads(x)
    vol = abs(np.linalg.det(x[1:] - x[0])) / 6
    loc = {}
    for a in range(4):
        for b in range(a + 1, 4):
            va, vb = v[a], v[b]
            lo, hi = (a, b) if va < vb else (b, a)
            e = int(np.flatnonzero((cx.edges[:, 0] == min(va, vb)) & (cx.edges[:, 1] == max(va, vb)))[0])
            loc[e] = (lo, hi)
    edges = sorted(loc)
    n = len(edges)
    M, C = np.zeros((n, n)), np.zeros((n, n))
    for lam in TET_QP:
        w = [_whitney(lam, g, *loc[e]) for e in edges]
        curl = [2 * np.cross(g[loc[e][0]], g[loc[e][1]]) for e in edges]
        for r in range(n):
            for c in range(n):
                M[r, c] += vol / 4 * w[r] @ w[c]
                C[r, c] += vol / 4 * curl[c] @ w[r]
    return edges, M, C


@pytest.mark.parametrize("name", ["tet", "cube", "ball", "torus", "genus2"])
def test_exact_sequence(meshes, name):
    cx = meshes[name]
    assert abs(cx.D1 @ cx.D0).max() == 0
    assert abs(cx.D2 @ cx.D1).max() == 0
    s = extract_boundary(cx)
    assert abs(s.d1 @ s.d0).max() == 0
    assert abs(s.T1 @ cx.D0 - s.d0 @ s.T0).max() == 0


def test_counts_and_euler(meshes):
    for name, chi in [("tet", 1), ("cube", 1), ("ball", 1), ("torus", 0), ("genus2", -1)]:
        assert meshes[name].euler_characteristic == chi
    assert meshes["cube"].n_tets == 6 * 8


def test_mass_matches_quadrature(two):
    cx = two
    M1 = assemble_mass(cx, 1).toarray()
    C3 = assemble_weak_curl(cx).toarray()
    Mq, Cq = np.zeros_like(M1), np.zeros_like(C3)
    for t in range(cx.n_tets):
        edges, M, C = _quadrature_local(cx, t)
        Mq[np.ix_(edges, edges)] += M
        Cq[np.ix_(edges, edges)] += C
    assert np.allclose(M1, Mq, atol=1e-14)
    assert np.allclose(C3, Cq, atol=1e-14)


@pytest.fixture(scope="module")
def two():
    rng = np.random.default_rng(3)
    v, t = meshgen.two_tets()
    return build_complex(v + 0.1 * rng.standard_normal(v.shape), t)


def test_vertex_mass_single_tet(tet):
    M0 = assemble_mass(tet, 0).toarray()
    vol = 1 / 6
    assert np.allclose(M0, vol / 20 * (np.ones((4, 4)) + np.eye(4)))


def test_masses_spd(ball):
    for k in range(4):
        M = assemble_mass(ball, k).toarray()
        assert np.allclose(M, M.T)
        assert np.linalg.eigvalsh(M).min() > 0


def test_stiffness_kills_gradients(ball):
    K = assemble_curl_stiffness(ball)
    C3 = assemble_weak_curl(ball)
    assert abs(K - K.T).max() < 1e-13
    assert abs(K @ ball.D0).max() < 1e-12
    assert abs(C3 @ ball.D0).max() < 1e-12


def test_green_identity(meshes):
    for cx in meshes.values():
        s = extract_boundary(cx)
        C3 = assemble_weak_curl(cx)
        Cb = assemble_wedge(s)
        lhs = (C3.T - C3) - s.T1.T @ Cb @ s.T1
        assert abs(lhs).max() <= 1e-12 * abs(C3).sum(axis=1).max()


def test_wedge_entries_and_flat_quadrature(tet):
    s = extract_boundary(tet)
    Cb = assemble_wedge(s).toarray()
    assert np.allclose(Cb, -Cb.T)
    nz = np.abs(Cb[np.abs(Cb) > 1e-15])
    # a single edge pair shares one or two triangles, entries are multiples of 1/6
    assert np.allclose(nz * 6, np.round(nz * 6))

    # one flat triangle: int w_a ^ w_b = int (w_a x w_b) . n over the triangle
    x = np.array([[0.0, 0.0, 0.0], [2.0, 0.3, 0.0], [0.4, 1.5, 0.0]])
    A = np.vstack([np.ones(3), x[:, :2].T])
    g2 = np.linalg.inv(A)[:, 1:]
    g = np.hstack([g2, np.zeros((3, 1))])
    area = 0.5 * abs(np.cross(x[1] - x[0], x[2] - x[0])[2])
    pairs = [(0, 1), (0, 2), (1, 2)]
    ref = np.zeros((3, 3))
    for lam in TRI_QP:
        w = [_whitney(lam, g, *p) for p in pairs]
        for r in range(3):
            for c in range(3):
                ref[r, c] += area / 3 * np.cross(w[r], w[c])[2]
    # counter-clockwise seen from +z, so the orientation sign is +1
    assert np.allclose(wedge_local(np.array([1.0]))[0], ref, atol=1e-14)
    assert np.allclose(np.abs(ref) * 6, np.round(np.abs(ref) * 6))


def test_boundary_orientation_outward(ball):
    s = extract_boundary(ball)
    centers = s.vertices[s.tri_local].mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", s.outward_normals, centers) > 0)


def test_degenerate_and_nonmanifold():
    v = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 0, 1.0]])
    with pytest.raises(DegenerateTet):
        build_complex(v, [[0, 1, 2, 3]])
    with pytest.raises(DegenerateTet):
        build_complex(v, [[0, 0, 2, 3]])
    vt, tt = meshgen.single_tet()
    with pytest.raises(NonManifold):
        build_complex(vt, [[0, 1, 2, 3], [3, 2, 1, 0]])
    # three tets sharing one face
    v3 = np.vstack([vt, [[1, 1, 1.0], [-1, -1, -1.0]]])
    with pytest.raises(NonManifold):
        build_complex(v3 + [0, 0, 0], [[0, 1, 2, 3], [1, 2, 3, 4], [1, 2, 3, 5]])


def test_inverted_tets_are_repaired():
    v, t = meshgen.single_tet()
    cx = build_complex(v, t[:, [1, 0, 2, 3]])
    assert cx.reoriented == 1
    assert np.linalg.det(cx.vertices[cx.tets[0, 1:]] - cx.vertices[cx.tets[0, 0]]) > 0


def test_surface_from_triangles_torus7():
    v, tri = meshgen.torus7()
    s = surface_from_triangles(v, tri)
    assert (s.n_vertices, s.n_edges, s.n_triangles) == (7, 21, 14)
    assert abs(s.d1 @ s.d0).max() == 0


@settings(max_examples=20, deadline=None)
@given(st.permutations(list(range(27))), st.integers(0, 2**31 - 1))
def test_exactness_under_relabeling_and_affine_maps(perm, seed):
    v, t = meshgen.cube(2)
    rng = np.random.default_rng(seed)
    A = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
    if np.linalg.det(A) < 0.2:
        A = np.eye(3)
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    cx = build_complex((v @ A.T)[perm], inv[t])
    s = extract_boundary(cx)
    assert abs(cx.D2 @ cx.D1).max() == 0
    assert abs(s.T1 @ cx.D0 - s.d0 @ s.T0).max() == 0
    C3 = assemble_weak_curl(cx)
    green = (C3.T - C3) - s.T1.T @ assemble_wedge(s) @ s.T1
    assert abs(green).max() <= 1e-12 * abs(C3).sum(axis=1).max()
