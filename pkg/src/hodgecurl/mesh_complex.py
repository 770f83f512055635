"""Oriented tetrahedral complexes, boundary surfaces and Whitney-form matrices.

Orientation conventions
-----------------------
* edges ``(a, b)`` with ``a < b`` are oriented from ``a`` to ``b``;
* faces ``(a, b, c)`` sorted, boundary ``[b,c] - [a,c] + [a,b]``;
* tetrahedra keep their positively oriented vertex tuple, ``D2`` carries the
  parity sign of the sorted tuple;
* boundary triangles inherit the outward orientation, stored as the sign of
  the sorted face tuple in ``SurfaceComplex.tri_sign``.

All Whitney integrands are polynomials in barycentric coordinates and are
integrated exactly with ``int lam_i lam_j = |K| (1 + delta_ij) / ((n+1)(n+2))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import DegenerateTet, NonManifold

DEGENERACY_TOL = 1e-14

_TET_EDGES = np.array(list(combinations(range(4), 2)))  # (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
_TET_FACES = np.array([[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]])  # face i omits vertex i
_TRI_EDGES = np.array([[0, 1], [0, 2], [1, 2]])


def _unique_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically sorted unique rows and the inverse index."""
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _signed_volumes(vertices: np.ndarray, tets: np.ndarray) -> np.ndarray:
    x = vertices[tets]
    a = x[:, 1] - x[:, 0]
    b = x[:, 2] - x[:, 0]
    c = x[:, 3] - x[:, 0]
    return np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0


def _incidence(n_rows, n_cols, rows, cols, vals) -> sp.csr_matrix:
    mat = sp.coo_matrix(
        (np.asarray(vals, dtype=np.int64).ravel(), (np.asarray(rows).ravel(), np.asarray(cols).ravel())),
        shape=(n_rows, n_cols),
    )
    return mat.tocsr()


@dataclass(frozen=True, eq=False)
class OrientedComplex3:
    """Tetrahedral 3-complex with canonical orientation.

    ``D0`` (E x V), ``D1`` (F x E) and ``D2`` (T x F) are the integer
    coboundary matrices, i.e. the discrete exterior derivative.
    """

    vertices: np.ndarray
    tets: np.ndarray  # positively oriented
    edges: np.ndarray
    faces: np.ndarray
    tet_faces: np.ndarray  # T x 4, face omitting local sorted vertex i
    tet_edges: np.ndarray  # T x 6, local sorted edge order
    tet_sign: np.ndarray  # +1 if the sorted tuple is positively oriented
    D0: sp.csr_matrix
    D1: sp.csr_matrix
    D2: sp.csr_matrix
    reoriented: int = 0

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_tets(self) -> int:
        return len(self.tets)

    @cached_property
    def sorted_tets(self) -> np.ndarray:
        return np.sort(self.tets, axis=1)

    @cached_property
    def volumes(self) -> np.ndarray:
        return np.abs(_signed_volumes(self.vertices, self.tets))

    @cached_property
    def face_tet_count(self) -> np.ndarray:
        return np.bincount(self.tet_faces.ravel(), minlength=self.n_faces)

    @cached_property
    def boundary_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_tet_count == 1)

    @cached_property
    def max_edge_length(self) -> float:
        d = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return float(np.sqrt((d * d).sum(axis=1)).max())

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces - self.n_tets

    def incidence_matrices(self):
        return self.D0, self.D1, self.D2


def build_complex(vertices, tets) -> OrientedComplex3:
    """Build the canonical oriented complex of a tetrahedral mesh.

    Inverted tetrahedra are repaired by swapping their last two vertices.

    Raises:
        DegenerateTet: a tetrahedron has (relative) zero volume.
        NonManifold: duplicate tetrahedra or a face shared by more than two.
    """
    vertices = np.ascontiguousarray(vertices, dtype=float)
    tets = np.array(tets, dtype=np.int64, copy=True)
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise ValueError("vertices must be an (N, 3) array")
    if tets.ndim != 2 or tets.shape[1] != 4:
        raise ValueError("tets must be a (T, 4) array")
    if len(tets) == 0:
        raise ValueError("empty mesh")
    if tets.min() < 0 or tets.max() >= len(vertices):
        raise ValueError("tet references a vertex that does not exist")

    sorted_tets = np.sort(tets, axis=1)
    if np.any(sorted_tets[:, 1:] == sorted_tets[:, :-1]):
        raise DegenerateTet("tetrahedron with a repeated vertex")
    if len(np.unique(sorted_tets, axis=0)) != len(tets):
        raise NonManifold("duplicate tetrahedra")

    scale = float(np.linalg.norm(np.ptp(vertices[np.unique(tets)], axis=0)))
    vol = _signed_volumes(vertices, tets)
    bad = np.abs(vol) <= DEGENERACY_TOL * max(scale, 1e-300) ** 3
    if np.any(bad):
        raise DegenerateTet(f"{int(bad.sum())} tetrahedra with zero volume (first: {int(np.flatnonzero(bad)[0])})")
    inverted = vol < 0
    tets[inverted] = tets[inverted][:, [0, 1, 3, 2]]

    # sign of the sorted tuple relative to the positive orientation
    tet_sign = np.where(_signed_volumes(vertices, sorted_tets) > 0, 1, -1).astype(np.int64)

    edges, e_inv = _unique_rows(sorted_tets[:, _TET_EDGES].reshape(-1, 2))
    tet_edges = e_inv.reshape(-1, 6)
    faces, f_inv = _unique_rows(sorted_tets[:, _TET_FACES].reshape(-1, 3))
    tet_faces = f_inv.reshape(-1, 4)

    counts = np.bincount(tet_faces.ravel(), minlength=len(faces))
    if np.any(counts > 2):
        raise NonManifold(f"{int((counts > 2).sum())} faces shared by more than two tetrahedra")

    nv, ne, nf, nt = len(vertices), len(edges), len(faces), len(tets)
    ar_e = np.arange(ne)
    D0 = _incidence(ne, nv, np.r_[ar_e, ar_e], np.r_[edges[:, 0], edges[:, 1]], np.r_[-np.ones(ne), np.ones(ne)])

    # face (a,b,c): [b,c] - [a,c] + [a,b]
    def edge_id(a, b):
        key = np.stack([a, b], axis=1)
        idx = np.searchsorted(edges[:, 0] * nv + edges[:, 1], key[:, 0] * nv + key[:, 1])
        return idx

    ar_f = np.arange(nf)
    fe = np.stack(
        [edge_id(faces[:, 1], faces[:, 2]), edge_id(faces[:, 0], faces[:, 2]), edge_id(faces[:, 0], faces[:, 1])],
        axis=1,
    )
    D1 = _incidence(nf, ne, np.repeat(ar_f, 3), fe, np.tile([1, -1, 1], nf))

    face_signs = np.array([1, -1, 1, -1])[None, :] * tet_sign[:, None]
    D2 = _incidence(nt, nf, np.repeat(np.arange(nt), 4), tet_faces, face_signs)

    return OrientedComplex3(
        vertices=vertices,
        tets=tets,
        edges=edges,
        faces=faces,
        tet_faces=tet_faces,
        tet_edges=tet_edges,
        tet_sign=tet_sign,
        D0=D0,
        D1=D1,
        D2=D2,
        reoriented=int(inverted.sum()),
    )


@dataclass(frozen=True, eq=False)
class SurfaceComplex:
    """Oriented boundary surface of an :class:`OrientedComplex3`.

    ``bverts``, ``bedges`` and ``btris`` index into the parent's vertex,
    edge and face arrays.  ``d0`` and ``d1`` are the surface coboundaries,
    ``T0`` and ``T1`` the trace (restriction) matrices.
    """

    parent: OrientedComplex3 | None
    bverts: np.ndarray
    bedges: np.ndarray
    btris: np.ndarray
    tri_sign: np.ndarray  # +1 if the sorted face tuple is outward oriented
    tri_local: np.ndarray  # Fb x 3 local vertex ids (sorted)
    tri_edges: np.ndarray  # Fb x 3 local edge ids, order (01, 02, 12)
    edges_local: np.ndarray  # Eb x 2 local vertex ids
    d0: sp.csr_matrix
    d1: sp.csr_matrix
    T0: sp.csr_matrix
    T1: sp.csr_matrix
    vertex_component: np.ndarray
    n_components: int
    extras: dict = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return len(self.bverts)

    @property
    def n_edges(self) -> int:
        return len(self.bedges)

    @property
    def n_triangles(self) -> int:
        return len(self.btris)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    @cached_property
    def vertices(self) -> np.ndarray:
        if self.parent is None:
            return self.extras["vertices"]
        return self.parent.vertices[self.bverts]

    @cached_property
    def oriented_triangles(self) -> np.ndarray:
        """Local vertex triples ordered along the outward orientation."""
        tri = self.tri_local.copy()
        flip = self.tri_sign < 0
        tri[flip] = tri[flip][:, [0, 2, 1]]
        return tri

    @cached_property
    def edge_component(self) -> np.ndarray:
        return self.vertex_component[self.edges_local[:, 0]]

    @cached_property
    def triangle_component(self) -> np.ndarray:
        return self.vertex_component[self.tri_local[:, 0]]

    def component_euler(self) -> np.ndarray:
        c = self.n_components
        return (
            np.bincount(self.vertex_component, minlength=c)
            - np.bincount(self.edge_component, minlength=c)
            + np.bincount(self.triangle_component, minlength=c)
        )

    @cached_property
    def max_edge_length(self) -> float:
        x = self.vertices
        d = x[self.edges_local[:, 1]] - x[self.edges_local[:, 0]]
        return float(np.sqrt((d * d).sum(axis=1)).max())

    @cached_property
    def triangle_areas(self) -> np.ndarray:
        x = self.vertices[self.tri_local]
        return 0.5 * np.linalg.norm(np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0]), axis=1)

    @cached_property
    def outward_normals(self) -> np.ndarray:
        x = self.vertices[self.oriented_triangles]
        n = np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0])
        return n / np.linalg.norm(n, axis=1)[:, None]


def extract_boundary(cx: OrientedComplex3) -> SurfaceComplex:
    """Boundary surface with outward induced orientation.

    Raises:
        NonManifold: the boundary is not a closed 2-manifold (edge with a
            triangle count other than two, or a pinched vertex).
    """
    btris = cx.boundary_faces
    if len(btris) == 0:
        raise NonManifold("complex has no boundary")
    # the unique tet of each boundary face supplies the induced sign
    tri_sign = np.asarray(cx.D2.T.tocsr()[btris].sum(axis=1)).ravel().astype(np.int64)

    faces = cx.faces[btris]
    bverts = np.unique(faces)
    vmap = -np.ones(cx.n_vertices, dtype=np.int64)
    vmap[bverts] = np.arange(len(bverts))
    tri_local = vmap[faces]

    nv = cx.n_vertices
    codes = cx.edges[:, 0] * nv + cx.edges[:, 1]
    pairs = faces[:, _TRI_EDGES]  # Fb x 3 x 2 global ids
    tri_edge_global = np.searchsorted(codes, pairs[..., 0] * nv + pairs[..., 1])
    bedges = np.unique(tri_edge_global)
    emap = -np.ones(cx.n_edges, dtype=np.int64)
    emap[bedges] = np.arange(len(bedges))
    tri_edges = emap[tri_edge_global]

    edge_count = np.bincount(tri_edges.ravel(), minlength=len(bedges))
    if np.any(edge_count != 2):
        raise NonManifold(f"{int((edge_count != 2).sum())} boundary edges not shared by exactly two boundary triangles")

    edges_local = vmap[cx.edges[bedges]]
    nvb, neb, nfb = len(bverts), len(bedges), len(btris)
    ar_e = np.arange(neb)
    d0 = _incidence(
        neb, nvb, np.r_[ar_e, ar_e], np.r_[edges_local[:, 0], edges_local[:, 1]], np.r_[-np.ones(neb), np.ones(neb)]
    )
    # local (01, 02, 12) -> boundary signs [b,c] - [a,c] + [a,b]
    d1 = _incidence(nfb, neb, np.repeat(np.arange(nfb), 3), tri_edges, (np.array([1, -1, 1])[None, :] * tri_sign[:, None]))

    if np.any(np.asarray(abs(d1).sum(axis=0)).ravel() != 2) or np.any(np.asarray(d1.sum(axis=0)).ravel() != 0):
        raise NonManifold("boundary triangles are not consistently oriented")

    T0 = _incidence(nvb, nv, np.arange(nvb), bverts, np.ones(nvb))
    T1 = _incidence(neb, cx.n_edges, ar_e, bedges, np.ones(neb))

    adj = abs(d0.T @ d0)
    n_comp, labels = connected_components(adj, directed=False)
    _check_vertex_links(tri_local, nvb)

    return SurfaceComplex(
        parent=cx,
        bverts=bverts,
        bedges=bedges,
        btris=btris,
        tri_sign=tri_sign,
        tri_local=tri_local,
        tri_edges=tri_edges,
        edges_local=edges_local,
        d0=d0,
        d1=d1,
        T0=T0,
        T1=T1,
        vertex_component=labels.astype(np.int64),
        n_components=int(n_comp),
    )


def surface_from_triangles(vertices, triangles) -> SurfaceComplex:
    """Standalone closed surface from a triangle list (no enclosing volume).

    Triangle orientations are made coherent by a breadth-first sweep over the
    dual graph, starting from the first triangle of each component as given.
    Such surfaces carry identity trace matrices and ``parent=None``.

    Raises:
        NonManifold: an edge is not shared by exactly two triangles, a vertex
            star is pinched, or the surface is not orientable.
    """
    vertices = np.asarray(vertices, dtype=float)
    tris_in = np.asarray(triangles, dtype=np.int64)
    tri_local = np.sort(tris_in, axis=1)
    if len(np.unique(tri_local, axis=0)) != len(tri_local):
        raise NonManifold("duplicate triangles")
    pairs = tri_local[:, _TRI_EDGES]
    edges_local, inv = _unique_rows(pairs.reshape(-1, 2))
    tri_edges = inv.reshape(-1, 3)
    nf, ne, nv = len(tri_local), len(edges_local), len(vertices)
    counts = np.bincount(tri_edges.ravel(), minlength=ne)
    if np.any(counts != 2):
        raise NonManifold("surface edge not shared by exactly two triangles")
    _check_vertex_links(tri_local, nv)

    # sign of the sorted tuple relative to the input orientation (seed only)
    parity = np.array([1 if _perm_sign(t, s) > 0 else -1 for t, s in zip(tris_in, tri_local)])
    local_sign = np.array([1, -1, 1])
    edge_tris = np.argsort(tri_edges.ravel(), kind="stable").reshape(-1, 2) // 3
    tri_sign = np.zeros(nf, dtype=np.int64)
    for seed in range(nf):
        if tri_sign[seed]:
            continue
        tri_sign[seed] = parity[seed]
        queue = [seed]
        while queue:
            t = queue.pop()
            for k in range(3):
                e = tri_edges[t, k]
                other = edge_tris[e, 0] if edge_tris[e, 1] == t else edge_tris[e, 1]
                kk = int(np.nonzero(tri_edges[other] == e)[0][0])
                want = -tri_sign[t] * local_sign[k] * local_sign[kk]
                if tri_sign[other] == 0:
                    tri_sign[other] = want
                    queue.append(other)
                elif tri_sign[other] != want:
                    raise NonManifold("surface is not orientable")

    ar_e = np.arange(ne)
    d0 = _incidence(ne, nv, np.r_[ar_e, ar_e], np.r_[edges_local[:, 0], edges_local[:, 1]], np.r_[-np.ones(ne), np.ones(ne)])
    d1 = _incidence(nf, ne, np.repeat(np.arange(nf), 3), tri_edges, local_sign[None, :] * tri_sign[:, None])
    n_comp, labels = connected_components(abs(d0.T @ d0), directed=False)
    return SurfaceComplex(
        parent=None,
        bverts=np.arange(nv),
        bedges=ar_e,
        btris=np.arange(nf),
        tri_sign=tri_sign,
        tri_local=tri_local,
        tri_edges=tri_edges,
        edges_local=edges_local,
        d0=d0,
        d1=d1,
        T0=sp.identity(nv, dtype=np.int64, format="csr"),
        T1=sp.identity(ne, dtype=np.int64, format="csr"),
        vertex_component=labels.astype(np.int64),
        n_components=int(n_comp),
        extras={"vertices": vertices},
    )


def _perm_sign(original, ordered) -> int:
    pos = [list(original).index(v) for v in ordered]
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if pos[i] > pos[j])
    return -1 if inversions % 2 else 1


def _check_vertex_links(tri_local: np.ndarray, nvb: int) -> None:
    """Every vertex star must be a single disk (no pinched vertices)."""
    # for vertex v, the link edges are the opposite edges of incident triangles;
    # a disk star gives a connected link cycle: #link vertices == #triangles
    star_v = tri_local.ravel()
    opp = np.stack([tri_local[:, [1, 2]], tri_local[:, [0, 2]], tri_local[:, [0, 1]]], axis=1).reshape(-1, 2)
    order = np.argsort(star_v, kind="stable")
    star_v, opp = star_v[order], opp[order]
    bounds = np.searchsorted(star_v, np.arange(nvb + 1))
    for v in range(nvb):
        link = opp[bounds[v]:bounds[v + 1]]
        nodes, inv = np.unique(link, return_inverse=True)
        inv = inv.reshape(-1, 2)
        if len(nodes) != len(link):
            raise NonManifold(f"boundary vertex {v} has a non-disk star")
        g = sp.coo_matrix((np.ones(len(inv)), (inv[:, 0], inv[:, 1])), shape=(len(nodes),) * 2)
        if connected_components(g, directed=False)[0] != 1:
            raise NonManifold(f"boundary vertex {v} is pinched")


# ---------------------------------------------------------------------------
# barycentric geometry and exact Whitney integrals


def _tet_gradients(cx: OrientedComplex3):
    """Barycentric gradients (T x 4 x 3) and volumes for the sorted tets."""
    x = cx.vertices[cx.sorted_tets]
    A = x[:, 1:] - x[:, :1]  # rows x_k - x_0
    B = np.linalg.inv(A)  # columns are grad lambda_1..3
    g = np.empty((len(x), 4, 3))
    g[:, 1:] = np.transpose(B, (0, 2, 1))
    g[:, 0] = -g[:, 1:].sum(axis=1)
    vol = np.abs(np.linalg.det(A)) / 6.0
    return g, vol


def _tri_gradients(x: np.ndarray):
    """Tangential barycentric gradients (F x 3 x 3) and areas of triangles."""
    e1 = x[:, 1] - x[:, 0]
    e2 = x[:, 2] - x[:, 0]
    G = np.stack(
        [
            np.stack([np.einsum("ij,ij->i", e1, e1), np.einsum("ij,ij->i", e1, e2)], axis=1),
            np.stack([np.einsum("ij,ij->i", e2, e1), np.einsum("ij,ij->i", e2, e2)], axis=1),
        ],
        axis=1,
    )
    Ginv = np.linalg.inv(G)
    E = np.stack([e1, e2], axis=1)
    g = np.empty((len(x), 3, 3))
    g[:, 1:] = np.einsum("fab,fbk->fak", Ginv, E)
    g[:, 0] = -g[:, 1] - g[:, 2]
    area = 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)
    return g, area


def _lambda_products(measure: np.ndarray, n: int) -> np.ndarray:
    """int lambda_i lambda_j over an n-simplex: |K| (1 + delta_ij) / ((n+1)(n+2))."""
    base = (np.ones((n + 1, n + 1)) + np.eye(n + 1)) / ((n + 1) * (n + 2))
    return measure[:, None, None] * base[None]


def _whitney1_mass_local(g: np.ndarray, lam: np.ndarray, local_edges: np.ndarray) -> np.ndarray:
    gd = np.einsum("kai,kbi->kab", g, g)
    i, j = local_edges[:, 0], local_edges[:, 1]
    I, K = np.meshgrid(i, i, indexing="ij")
    J, L = np.meshgrid(j, j, indexing="ij")
    return (
        lam[:, I, K] * gd[:, J, L]
        - lam[:, I, L] * gd[:, J, K]
        - lam[:, J, K] * gd[:, I, L]
        + lam[:, J, L] * gd[:, I, K]
    )


def _assemble(n: int, dofs: np.ndarray, local: np.ndarray) -> sp.csr_matrix:
    k = dofs.shape[1]
    rows = np.repeat(dofs, k, axis=1).ravel()
    cols = np.tile(dofs, (1, k)).ravel()
    mat = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n))
    # coo -> csr sums duplicates in a fixed (row-major, stable) order
    return mat.tocsr()


def assemble_mass(obj, degree: int) -> sp.csr_matrix:
    """Galerkin mass matrix of Whitney ``degree``-forms.

    ``obj`` is an :class:`OrientedComplex3` (degree 0..3) or a
    :class:`SurfaceComplex` (degree 0..2).
    """
    if isinstance(obj, OrientedComplex3):
        return _volume_mass(obj, degree)
    if isinstance(obj, SurfaceComplex):
        return _surface_mass(obj, degree)
    raise TypeError(f"cannot assemble a mass matrix for {type(obj).__name__}")


def _volume_mass(cx: OrientedComplex3, degree: int) -> sp.csr_matrix:
    g, vol = _tet_gradients(cx)
    if degree == 0:
        return _assemble(cx.n_vertices, cx.sorted_tets, _lambda_products(vol, 3))
    if degree == 1:
        lam = _lambda_products(vol, 3)
        return _assemble(cx.n_edges, cx.tet_edges, _whitney1_mass_local(g, lam, _TET_EDGES))
    if degree == 2:
        lam = _lambda_products(vol, 3)
        # w_abc = 2 sum_cyc lambda_a grad b x grad c
        terms = []
        for a, b, c in _TET_FACES[:, [0, 1, 2]]:
            cyc = [(a, b, c), (b, c, a), (c, a, b)]
            terms.append([(p, 2.0 * np.cross(g[:, q], g[:, r])) for p, q, r in cyc])
        # local faces must follow the sorted order of cx.tet_faces: face i omits vertex i
        local = np.zeros((len(vol), 4, 4))
        for fi in range(4):
            for fj in range(4):
                acc = np.zeros(len(vol))
                for p, u in terms[fi]:
                    for q, v in terms[fj]:
                        acc += lam[:, p, q] * np.einsum("ki,ki->k", u, v)
                local[:, fi, fj] = acc
        return _assemble(cx.n_faces, cx.tet_faces, local)
    if degree == 3:
        return sp.diags(1.0 / vol).tocsr()
    raise ValueError(f"degree must be 0..3 for a volume complex, got {degree}")


def _surface_mass(s: SurfaceComplex, degree: int) -> sp.csr_matrix:
    x = s.vertices[s.tri_local]
    g, area = _tri_gradients(x)
    if degree == 0:
        return _assemble(s.n_vertices, s.tri_local, _lambda_products(area, 2))
    if degree == 1:
        lam = _lambda_products(area, 2)
        return _assemble(s.n_edges, s.tri_edges, _whitney1_mass_local(g, lam, _TRI_EDGES))
    if degree == 2:
        return sp.diags(1.0 / area).tocsr()
    raise ValueError(f"degree must be 0..2 for a surface, got {degree}")


def _weak_curl_local(g: np.ndarray, vol: np.ndarray) -> np.ndarray:
    i, j = _TET_EDGES[:, 0], _TET_EDGES[:, 1]
    curl = 2.0 * np.cross(g[:, i], g[:, j])  # T x 6 x 3, constant per tet
    mean_w = (vol[:, None, None] / 4.0) * (g[:, j] - g[:, i])  # int w_e
    # local[r, c] = int curl w_c . w_r
    return np.einsum("kci,kri->krc", curl, mean_w)


def assemble_weak_curl(cx: OrientedComplex3) -> sp.csr_matrix:
    """``C3[i, j] = int_D curl w_j . w_i`` over Whitney edge functions.

    ``C3 @ x`` is the Galerkin projection of the curl of the edge field with
    coefficients ``x``; hence ``C3 @ D0 == 0``.  The boundary term obeys
    ``C3.T - C3 == T1.T @ Cb @ T1`` with ``Cb`` the outward wedge matrix.
    """
    g, vol = _tet_gradients(cx)
    return _assemble(cx.n_edges, cx.tet_edges, _weak_curl_local(g, vol))


def assemble_curl_stiffness(cx: OrientedComplex3) -> sp.csr_matrix:
    """``K[i, j] = int_D curl w_i . curl w_j`` by direct per-tet integration."""
    g, vol = _tet_gradients(cx)
    i, j = _TET_EDGES[:, 0], _TET_EDGES[:, 1]
    curl = 2.0 * np.cross(g[:, i], g[:, j])
    local = vol[:, None, None] * np.einsum("kai,kbi->kab", curl, curl)
    return _assemble(cx.n_edges, cx.tet_edges, local)


def wedge_local(tri_sign: np.ndarray) -> np.ndarray:
    """Exact ``int w_a ^ w_b`` over each triangle in local edge order (01, 02, 12).

    ``d lam_p ^ d lam_q = eps_pq / (2 |T|) dA`` with ``eps_01 = eps_12 = eps_20 = 1``
    on a positively oriented triangle, so every entry is metric free.
    """
    eps = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], dtype=float)
    lam = (np.ones((3, 3)) + np.eye(3)) / 12.0  # int lambda lambda / |T|
    ref = np.zeros((3, 3))
    for r, (a, b) in enumerate(_TRI_EDGES):
        for c, (p, q) in enumerate(_TRI_EDGES):
            ref[r, c] = (
                lam[a, p] * eps[b, q] - lam[a, q] * eps[b, p] - lam[b, p] * eps[a, q] + lam[b, q] * eps[a, p]
            ) / 2.0
    return tri_sign[:, None, None] * ref[None]


def assemble_wedge(s: SurfaceComplex) -> sp.csr_matrix:
    """Skew wedge pairing ``Cb[a, b] = int_{dD} w_a ^ w_b`` on boundary edges."""
    return _assemble(s.n_edges, s.tri_edges, wedge_local(s.tri_sign.astype(float)))
