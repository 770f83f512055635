"""Homology of the boundary surface: Betti numbers, cycle bases, intersections.

Chains on the surface are integer vectors over the boundary edges, with
each edge oriented from its lower to its higher vertex id.  The boundary of
a 1-chain ``c`` is ``d0.T @ c``.

Two classifications of boundary cycles are supported:

* *interior-bounding*: ``c`` is the boundary of a 2-chain of the volume mesh.
  This is decided exactly.  The volume is first collapsed (free faces, then
  free edges) and the few remaining faces are handled with rational
  elimination.
* *exterior-bounding*: ``c`` bounds in the complement of the domain.  By
  Alexander duality this holds iff the outward push-off of ``c`` has zero
  linking number with every boundary cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import HomologyError, NotClosedSurface, OpenChain, SingularPairing
from .exact import (
    complete_basis,
    hermite_rows,
    integer_inverse,
    integer_vector,
    rational_nullspace,
    rational_rank,
    saturate,
)
from .mesh_complex import SurfaceComplex

INTERIOR = "InteriorBounding"
EXTERIOR = "ExteriorBounding"
NEITHER = "Neither"


@dataclass(frozen=True)
class Betti:
    b0: int
    b1: int
    b2: int
    genus: int

    def __iter__(self):
        # unpacks as (b0, b1, genus)
        return iter((self.b0, self.b1, self.genus))


@dataclass
class CycleBasis:
    """Canonical cycle basis ``(a_1..a_g, b_1..b_g)``.

    ``cycles`` is a ``2g x Eb`` integer array.  ``intersection`` is the
    integer matrix ``Int(c_i, c_j)`` in that order.  ``change_of_basis`` maps
    the input cycles to the canonical ones: ``cycles = U.T @ input``.
    """

    cycles: np.ndarray
    labels: list
    pair_index: list
    intersection: np.ndarray
    change_of_basis: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=np.int64))

    @property
    def genus(self) -> int:
        return len(self.cycles) // 2

    @property
    def a_cycles(self) -> np.ndarray:
        return self.cycles[: self.genus]

    @property
    def b_cycles(self) -> np.ndarray:
        return self.cycles[self.genus:]


def _require_closed_surface(surface: SurfaceComplex) -> None:
    counts = np.asarray(abs(surface.d1).sum(axis=0)).ravel()
    if np.any(counts != 2):
        raise NotClosedSurface("every surface edge must border exactly two triangles")


def betti(surface: SurfaceComplex) -> Betti:
    """Betti numbers and genus from exact rational ranks of ``d0`` and ``d1``.

    Raises:
        NotClosedSurface: open or non-orientable surface.
    """
    _require_closed_surface(surface)
    r0 = rational_rank(surface.d0)
    r1 = rational_rank(surface.d1)
    b0 = surface.n_vertices - r0
    b1 = surface.n_edges - r0 - r1
    b2 = surface.n_triangles - r1
    if b2 != b0 or b1 % 2:
        raise NotClosedSurface(f"surface is not orientable (b0={b0}, b1={b1}, b2={b2})")
    return Betti(b0=b0, b1=b1, b2=b2, genus=b1 // 2)


def chain_boundary(surface: SurfaceComplex, chain) -> np.ndarray:
    return surface.d0.T @ np.asarray(chain, dtype=np.int64)


def _require_cycle(surface: SurfaceComplex, chain) -> np.ndarray:
    c = np.asarray(chain)
    if c.shape != (surface.n_edges,):
        raise OpenChain(f"chain has shape {c.shape}, expected ({surface.n_edges},)")
    if not np.all(np.equal(np.mod(c, 1), 0)):
        raise OpenChain("chain coefficients must be integers")
    c = c.astype(np.int64)
    if np.any(chain_boundary(surface, c) != 0):
        raise OpenChain("chain has a nonzero boundary")
    return c


# ---------------------------------------------------------------------------
# tree-cotree generators


def _vertex_adjacency(surface: SurfaceComplex):
    nv = surface.n_vertices
    adj = [[] for _ in range(nv)]
    for e, (a, b) in enumerate(surface.edges_local):
        adj[a].append((int(b), e))
        adj[b].append((int(a), e))
    for lst in adj:
        lst.sort()
    return adj


def _tree_path_chain(surface, parent, parent_edge, depth, u, w) -> dict[int, int]:
    """Chain of the tree path from ``u`` to ``w`` as {edge: coefficient}."""
    edges = surface.edges_local
    out: dict[int, int] = {}

    def step(x, sign):
        e = parent_edge[x]
        # traversal x -> parent[x] is positive if it follows the edge orientation
        s = 1 if edges[e, 0] == x else -1
        out[e] = out.get(e, 0) + sign * s
        return parent[x]

    while depth[u] > depth[w]:
        u = step(u, +1)
    while depth[w] > depth[u]:
        w = step(w, -1)
    while u != w:
        u = step(u, +1)
        w = step(w, -1)
    return out


def fundamental_cycles(surface: SurfaceComplex) -> np.ndarray:
    """``2g`` independent integer 1-cycles from a tree-cotree decomposition.

    The spanning tree is a breadth-first tree of the edge graph rooted at the
    smallest vertex of each component.  The cotree is a spanning tree of the
    dual graph avoiding tree edges.  Every remaining edge closes one cycle
    through the tree.
    """
    _require_closed_surface(surface)
    nv, ne = surface.n_vertices, surface.n_edges
    adj = _vertex_adjacency(surface)
    parent = -np.ones(nv, dtype=np.int64)
    parent_edge = -np.ones(nv, dtype=np.int64)
    depth = -np.ones(nv, dtype=np.int64)
    in_tree = np.zeros(ne, dtype=bool)
    for root in range(nv):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in adj[x]:
                if depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    parent_edge[y] = e
                    in_tree[e] = True
                    queue.append(y)

    tri_edges = surface.tri_edges
    edge_tris = np.argsort(tri_edges.ravel(), kind="stable").reshape(-1, 2) // 3
    seen = np.zeros(surface.n_triangles, dtype=bool)
    in_cotree = np.zeros(ne, dtype=bool)
    for root in range(surface.n_triangles):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for e in sorted(tri_edges[t]):
                if in_tree[e]:
                    continue
                a, b = edge_tris[e]
                o = b if a == t else a
                if not seen[o]:
                    seen[o] = True
                    in_cotree[e] = True
                    queue.append(o)

    generators = np.nonzero(~in_tree & ~in_cotree)[0]
    cycles = np.zeros((len(generators), ne), dtype=np.int64)
    for k, e in enumerate(generators):
        u, w = surface.edges_local[e]
        cycles[k, e] = 1
        for ee, coef in _tree_path_chain(surface, parent, parent_edge, depth, int(w), int(u)).items():
            cycles[k, ee] += coef
    return cycles


# ---------------------------------------------------------------------------
# intersection numbers


def _rotation(surface: SurfaceComplex) -> dict:
    """Counter-clockwise successor (seen from outside) of each neighbour around each vertex."""
    nxt: dict = {}
    for p, q, r in surface.oriented_triangles:
        p, q, r = int(p), int(q), int(r)
        nxt[(p, q)] = r
        nxt[(q, r)] = p
        nxt[(r, p)] = q
    return nxt


def _edge_lookup(surface: SurfaceComplex) -> dict:
    return {(int(a), int(b)): e for e, (a, b) in enumerate(surface.edges_local)}


def closed_walks(surface: SurfaceComplex, chain) -> list[list[int]]:
    """Split an integer cycle into closed vertex walks (Hierholzer)."""
    c = np.asarray(chain, dtype=np.int64)
    out_arcs: dict[int, list[int]] = {}
    for e in np.nonzero(c)[0]:
        a, b = (int(v) for v in surface.edges_local[e])
        if c[e] < 0:
            a, b = b, a
        for _ in range(abs(int(c[e]))):
            out_arcs.setdefault(a, []).append(b)
    for lst in out_arcs.values():
        lst.sort(reverse=True)
    walks = []
    for start in sorted(out_arcs):
        while out_arcs.get(start):
            stack = [start]
            path = []
            while stack:
                v = stack[-1]
                if out_arcs.get(v):
                    stack.append(out_arcs[v].pop())
                else:
                    path.append(stack.pop())
            walks.append(path[::-1])
    return walks


def crossing_cochain(surface: SurfaceComplex, chain, _cache=None) -> np.ndarray:
    """Integer cochain counting signed crossings with the left push-off of ``chain``.

    At each visit of a walk to vertex ``v`` (arriving from ``p``, leaving to
    ``n``) the push-off sweeps the edges strictly between ``n`` and ``p`` in
    counter-clockwise order.  An edge ``v -> x`` in that fan is crossed from
    right to left.
    """
    c = _require_cycle(surface, chain)
    nxt, lookup = _cache if _cache is not None else (_rotation(surface), _edge_lookup(surface))
    theta = np.zeros(surface.n_edges, dtype=np.int64)
    for walk in closed_walks(surface, c):
        k = len(walk) - 1  # walk[0] == walk[-1]
        for i in range(k):
            v = walk[i]
            prev = walk[i - 1] if i > 0 else walk[k - 1]
            nx = walk[i + 1]
            x = nxt[(v, nx)]
            while x != prev:
                e = lookup[(v, x) if v < x else (x, v)]
                theta[e] += 1 if v < x else -1
                x = nxt[(v, x)]
    return theta


def intersection_number(surface: SurfaceComplex, c1, c2) -> int:
    """Algebraic intersection number ``Int(c1, c2)`` of two integer cycles.

    Positive when ``c2`` crosses ``c1`` from its right to its left, with the
    outward normal pointing at the viewer.

    Raises:
        OpenChain: either chain is not a cycle.
    """
    c2 = _require_cycle(surface, c2)
    return int(crossing_cochain(surface, c1) @ c2)


def intersection_matrix(surface: SurfaceComplex, cycles) -> np.ndarray:
    cycles = np.asarray(cycles, dtype=np.int64).reshape(-1, surface.n_edges)
    if len(cycles) == 0:
        return np.zeros((0, 0), dtype=np.int64)
    for c in cycles:
        _require_cycle(surface, c)
    cache = (_rotation(surface), _edge_lookup(surface))
    thetas = np.array([crossing_cochain(surface, c, cache) for c in cycles])
    return thetas @ cycles.T


# ---------------------------------------------------------------------------
# interior-bounding test by collapse + exact elimination


class _VolumeCollapse:
    """Record of an elementary collapse of the volume mesh.

    After removing tetrahedra through free faces, faces are removed through
    free edges.  Reducing a 1-chain along the recorded (face, edge) pairs
    leaves an equivalent chain (modulo boundaries) on the residual complex.
    """

    def __init__(self, cx):
        D1 = cx.D1.tocsr()
        nf, nt = cx.n_faces, cx.n_tets
        face_edges = D1.indices.reshape(nf, 3)
        face_signs = D1.data.reshape(nf, 3).astype(np.int64)
        tet_faces = cx.tet_faces
        face_tets = [[] for _ in range(nf)]
        for t in range(nt):
            for f in tet_faces[t]:
                face_tets[f].append(t)
        count = np.array([len(x) for x in face_tets])
        tet_alive = np.ones(nt, dtype=bool)
        face_alive = np.ones(nf, dtype=bool)
        queue = deque(np.nonzero(count == 1)[0].tolist())
        while queue:
            f = queue.popleft()
            if not face_alive[f] or count[f] != 1:
                continue
            t = next(t for t in face_tets[f] if tet_alive[t])
            tet_alive[t] = False
            face_alive[f] = False
            for fo in tet_faces[t]:
                if fo != f:
                    count[fo] -= 1
                    if count[fo] == 1:
                        queue.append(fo)
        locked = np.zeros(nf, dtype=bool)
        for t in np.nonzero(tet_alive)[0]:
            locked[tet_faces[t]] = True

        D1c = D1.tocsc()
        ecount = np.zeros(cx.n_edges, dtype=np.int64)
        np.add.at(ecount, face_edges[face_alive].ravel(), 1)
        order = []
        queue = deque(np.nonzero(ecount == 1)[0].tolist())
        while queue:
            e = queue.popleft()
            if ecount[e] != 1:
                continue
            col = D1c.indices[D1c.indptr[e]:D1c.indptr[e + 1]]
            f = next(f for f in col if face_alive[f])
            if locked[f]:
                continue
            face_alive[f] = False
            order.append((int(f), int(e)))
            for eo in face_edges[f]:
                ecount[eo] -= 1
                if eo != e and ecount[eo] == 1:
                    queue.append(int(eo))
        self.order = order
        self.face_edges = face_edges
        self.face_signs = face_signs
        self.residual_faces = np.nonzero(face_alive)[0]
        self.n_edges = cx.n_edges

    def reduce(self, chain: np.ndarray) -> np.ndarray:
        c = np.array(chain, dtype=np.int64)
        fe, fs = self.face_edges, self.face_signs
        for f, e in self.order:
            coef = c[e]
            if coef:
                k = int(np.nonzero(fe[f] == e)[0][0])
                c[fe[f]] -= coef * fs[f, k] * fs[f]
        return c

    def residual_system(self, chains: np.ndarray):
        """Dense rational system ``[face boundaries | chains]`` restricted to touched edges."""
        chains = np.atleast_2d(chains)
        red = np.array([self.reduce(c) for c in chains])
        rf = self.residual_faces
        rows = set(np.nonzero(np.any(red != 0, axis=0))[0].tolist())
        for f in rf:
            rows.update(self.face_edges[f].tolist())
        rows = sorted(rows)
        pos = {e: i for i, e in enumerate(rows)}
        A = np.zeros((len(rows), len(rf) + len(red)), dtype=np.int64)
        for j, f in enumerate(rf):
            for e, s in zip(self.face_edges[f], self.face_signs[f]):
                A[pos[e], j] = s
        for j, c in enumerate(red):
            for e in np.nonzero(c)[0]:
                A[pos[e], len(rf) + j] = c[e]
        return A, len(rf)


def _collapse(surface: SurfaceComplex) -> _VolumeCollapse:
    if surface.parent is None:
        raise HomologyError("classification needs the enclosing volume mesh")
    cache = surface.extras.get("collapse")
    if cache is None:
        cache = _VolumeCollapse(surface.parent)
        surface.extras["collapse"] = cache
    return cache


def _to_volume(surface: SurfaceComplex, chains: np.ndarray) -> np.ndarray:
    chains = np.atleast_2d(np.asarray(chains, dtype=np.int64))
    out = np.zeros((len(chains), surface.parent.n_edges), dtype=np.int64)
    out[:, surface.bedges] = chains
    return out


def bounds_in_volume(surface: SurfaceComplex, cycle) -> bool:
    """Exact test whether the cycle is the boundary of a rational 2-chain of the volume."""
    c = _require_cycle(surface, cycle)
    col = _collapse(surface)
    A, nf = col.residual_system(_to_volume(surface, c))
    if not np.any(A[:, nf:]):
        return True
    if nf == 0:
        return False
    return rational_rank(A[:, :nf]) == rational_rank(A)


def interior_lattice(surface: SurfaceComplex, cycles) -> np.ndarray:
    """Primitive integer basis (columns) of combinations of ``cycles`` that bound inside."""
    cycles = np.atleast_2d(np.asarray(cycles, dtype=np.int64))
    col = _collapse(surface)
    A, nf = col.residual_system(_to_volume(surface, cycles))
    null = rational_nullspace(A)
    ys = [integer_vector([Fraction(x) for x in v[nf:]]) for v in null]
    ys = [y for y in ys if np.any(y)]
    if not ys:
        return np.zeros((len(cycles), 0), dtype=np.int64)
    Y = np.array(ys, dtype=np.int64)
    _, H = hermite_rows(Y)
    basis = [np.array(r, dtype=np.int64) for r in H if any(r)]
    return saturate(np.array(basis, dtype=np.int64).T)


# ---------------------------------------------------------------------------
# exterior-bounding test by linking numbers


def _vertex_normals(surface: SurfaceComplex) -> np.ndarray:
    x = surface.vertices[surface.oriented_triangles]
    n = np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0])
    acc = np.zeros((surface.n_vertices, 3))
    for k in range(3):
        np.add.at(acc, surface.oriented_triangles[:, k], n)
    return acc / np.linalg.norm(acc, axis=1)[:, None]


def _segments(points: np.ndarray, walks) -> tuple[np.ndarray, np.ndarray]:
    a, b = [], []
    for w in walks:
        a.append(points[w[:-1]])
        b.append(points[w[1:]])
    if not a:
        return np.zeros((0, 3)), np.zeros((0, 3))
    return np.concatenate(a), np.concatenate(b)


def linking_number(p1, p2, q1, q2) -> float:
    """Gauss linking number of two closed polygons given as segment arrays.

    Uses the exact signed solid angle of each segment pair.
    """
    P1, P2 = p1[:, None, :], p2[:, None, :]
    Q1, Q2 = q1[None, :, :], q2[None, :, :]
    r13, r14, r23, r24 = Q1 - P1, Q2 - P1, Q1 - P2, Q2 - P2

    def unit(v):
        n = np.linalg.norm(v, axis=-1, keepdims=True)
        return np.divide(v, n, out=np.zeros_like(v), where=n > 0)

    n1 = unit(np.cross(r13, r14))
    n2 = unit(np.cross(r14, r24))
    n3 = unit(np.cross(r24, r23))
    n4 = unit(np.cross(r23, r13))

    def asin_dot(u, v):
        return np.arcsin(np.clip((u * v).sum(-1), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    sign = np.sign((np.cross(Q2 - Q1, P2 - P1) * r13).sum(-1))
    return float((omega * sign).sum() / (4.0 * np.pi))


def linking_matrix(surface: SurfaceComplex, cycles, targets=None) -> np.ndarray:
    """Integer matrix ``lk(c_i^+, t_j)`` with ``c_i^+`` pushed slightly outward."""
    cycles = np.atleast_2d(np.asarray(cycles, dtype=np.int64))
    targets = cycles if targets is None else np.atleast_2d(np.asarray(targets, dtype=np.int64))
    x = surface.vertices
    el = surface.edges_local
    eps = 0.05 * float(np.linalg.norm(x[el[:, 1]] - x[el[:, 0]], axis=1).min())
    pushed = x + eps * _vertex_normals(surface)
    segs_c = [_segments(pushed, closed_walks(surface, c)) for c in cycles]
    segs_t = [_segments(x, closed_walks(surface, t)) for t in targets]
    L = np.zeros((len(cycles), len(targets)))
    for i, (a, b) in enumerate(segs_c):
        for j, (p, q) in enumerate(segs_t):
            L[i, j] = linking_number(a, b, p, q)
    R = np.rint(L)
    if np.max(np.abs(L - R), initial=0.0) > 0.1:
        raise HomologyError("linking numbers are not close to integers; push-off too large for this mesh")
    return R.astype(np.int64)


def exterior_lattice(surface: SurfaceComplex, cycles) -> np.ndarray:
    """Primitive integer basis (columns) of combinations of ``cycles`` that bound outside."""
    cycles = np.atleast_2d(np.asarray(cycles, dtype=np.int64))
    L = linking_matrix(surface, cycles)
    null = rational_nullspace(L.T)
    if not null:
        return np.zeros((len(cycles), 0), dtype=np.int64)
    Y = np.array([integer_vector(v) for v in null], dtype=np.int64)
    return saturate(Y.T)


def classify_cycle(surface: SurfaceComplex, cycle) -> str:
    """``InteriorBounding``, ``ExteriorBounding`` or ``Neither``.

    Cycles that bound on both sides (for instance null-homologous ones) are
    reported as interior-bounding.

    Raises:
        OpenChain: the chain is not closed.
    """
    c = _require_cycle(surface, cycle)
    if bounds_in_volume(surface, c):
        return INTERIOR
    gens = fundamental_cycles(surface)
    if len(gens) and not np.any(linking_matrix(surface, c[None, :], gens)):
        return EXTERIOR
    return NEITHER


# ---------------------------------------------------------------------------
# canonical dual pairs


def standard_symplectic(g: int) -> np.ndarray:
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = -np.eye(g, dtype=np.int64)
    return J


def _ext_gcd_combination(values) -> tuple[int, list[int]]:
    """``gcd`` of integers and coefficients ``x`` with ``sum x_i v_i = gcd``."""
    g, coeffs = 0, [0] * len(values)
    for i, v in enumerate(values):
        v = int(v)
        if v == 0:
            continue
        # extended Euclid for (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [old_s * x for x in coeffs]
        coeffs[i] = old_t
        g = old_r
    return g, coeffs


def integer_symplectic_reduction(omega: np.ndarray) -> np.ndarray:
    """Unimodular ``U`` with ``U.T @ omega @ U = [[0, I], [-I, 0]]``.

    ``omega`` is a skew integer matrix with determinant ``+-1``.

    Raises:
        SingularPairing: ``omega`` is not unimodular.
    """
    omega = np.asarray(omega, dtype=np.int64)
    n = len(omega)
    if n % 2:
        raise SingularPairing("odd-dimensional pairing")

    def w(u, v):
        return int(u @ omega @ v)

    vecs = [np.eye(n, dtype=np.int64)[:, i] for i in range(n)]
    es, fs = [], []
    while vecs:
        e = vecs[0]
        rest = vecs[1:]
        if not rest:
            raise SingularPairing("pairing is degenerate on the integer lattice")
        g, coef = _ext_gcd_combination([w(e, v) for v in rest])
        if g != 1:
            raise SingularPairing("pairing is not unimodular")
        f = sum(c * v for c, v in zip(coef, rest))
        projected = [v - w(v, f) * e + w(v, e) * f for v in rest]
        M = np.array(projected, dtype=np.int64)
        _, H = hermite_rows(M)
        vecs = [np.array(r, dtype=np.int64) for r in H if any(r)]
        es.append(e)
        fs.append(f)
    return np.array(es + fs, dtype=np.int64).T


def _lagrangian_completion(omega: np.ndarray, A: np.ndarray, B: np.ndarray | None) -> np.ndarray | None:
    """Columns ``b_j`` dual to the isotropic primitive lattice ``A`` with ``Int(b, b) = 0``."""
    if B is not None and B.shape[1] == A.shape[1]:
        P = A.T @ omega @ B
        if abs(round(np.linalg.det(P))) == 1:
            return B @ integer_inverse(P)
    C = complete_basis(A)[:, A.shape[1]:]
    P = A.T @ omega @ C
    if abs(round(np.linalg.det(P))) != 1:
        return None
    b0 = C @ integer_inverse(P)
    S = b0.T @ omega @ b0
    return b0 + A @ np.triu(S, 1)


def canonical_dual_pairs(surface: SurfaceComplex, cycles=None, intersection=None, classify: bool = True) -> CycleBasis:
    """Integer change of basis bringing the intersection matrix to ``[[0, I], [-I, 0]]``.

    With the enclosing volume available, ``a_i`` span the interior-bounding
    lattice and ``b_i`` the exterior-bounding one whenever both have rank g.

    Raises:
        SingularPairing: the intersection matrix does not have full rank.
    """
    if cycles is None:
        cycles = fundamental_cycles(surface)
    cycles = np.asarray(cycles, dtype=np.int64).reshape(-1, surface.n_edges)
    n = len(cycles)
    g = n // 2
    omega = intersection_matrix(surface, cycles) if intersection is None else np.asarray(intersection, dtype=np.int64)
    if n == 0:
        return CycleBasis(cycles, [], [], omega.reshape(0, 0), np.zeros((0, 0), dtype=np.int64))
    rank = rational_rank(sp.csr_matrix(omega))
    if n % 2 or rank < n:
        raise SingularPairing(f"intersection matrix of {n} cycles has rank {rank}")

    U = None
    labels = [None] * n
    if classify and surface.parent is not None:
        A = interior_lattice(surface, cycles)
        if A.shape[1] == g:
            B = exterior_lattice(surface, cycles)
            Bc = _lagrangian_completion(omega, A, B)
            if Bc is not None:
                U = np.concatenate([A, Bc], axis=1)
                exterior = B.shape[1] == g and np.array_equal(Bc, B @ integer_inverse(A.T @ omega @ B))
                labels = [INTERIOR] * g + [EXTERIOR if exterior else None] * g
    if U is None:
        U = integer_symplectic_reduction(omega)
    new = U.T @ cycles
    inter = U.T @ omega @ U
    if not np.array_equal(inter, standard_symplectic(g)):
        raise SingularPairing("integer symplectic reduction failed")
    if classify and surface.parent is not None:
        labels = [lab if lab is not None else classify_cycle(surface, c) for lab, c in zip(labels, new)]
    return CycleBasis(
        cycles=new,
        labels=labels,
        pair_index=list(range(1, g + 1)) * 2,
        intersection=inter,
        change_of_basis=U,
    )


def cycle_basis(surface: SurfaceComplex) -> CycleBasis:
    """Convenience: tree-cotree generators brought to canonical dual pairs."""
    return canonical_dual_pairs(surface, fundamental_cycles(surface))


def period(cochain, cycle) -> float:
    """Discrete integral of a 1-cochain over a 1-chain."""
    return float(np.asarray(cochain) @ np.asarray(cycle))
