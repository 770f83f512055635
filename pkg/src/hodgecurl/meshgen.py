"""Built-in tetrahedral mesh generators.

All generators return ``(vertices, tets)`` arrays; pass them to
:func:`hodgecurl.mesh_complex.build_complex`.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

_PERMS = list(permutations(range(3)))


def single_tet():
    vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    return vertices, np.array([[0, 1, 2, 3]])


def two_tets():
    vertices = np.array(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]]
    )
    return vertices, np.array([[0, 1, 2, 3], [1, 2, 3, 4]])


def _kuhn_grid(shape, keep=None, flips=None):
    """Split the cells of a structured grid into 6 tetrahedra each.

    ``flips(i, j, k)`` returns per-axis booleans that mirror the Kuhn
    pattern inside a cell; mirroring whole octants keeps the mesh conforming.
    """
    nx, ny, nz = shape
    idx = np.arange((nx + 1) * (ny + 1) * (nz + 1)).reshape(nx + 1, ny + 1, nz + 1)
    tets = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                if keep is not None and not keep[i, j, k]:
                    continue
                f = flips(i, j, k) if flips is not None else (False, False, False)
                start = np.array([1 if f[a] else 0 for a in range(3)])
                step = np.array([-1 if f[a] else 1 for a in range(3)])
                for perm in _PERMS:
                    p = start.copy()
                    path = [tuple(p)]
                    for axis in perm:
                        p = p.copy()
                        p[axis] += step[axis]
                        path.append(tuple(p))
                    tets.append([idx[i + a, j + b, k + c] for a, b, c in path])
    g = np.stack(
        np.meshgrid(np.arange(nx + 1), np.arange(ny + 1), np.arange(nz + 1), indexing="ij"), axis=-1
    ).reshape(-1, 3)
    tets = np.array(tets, dtype=np.int64)
    used = np.unique(tets)
    remap = -np.ones(len(g), dtype=np.int64)
    remap[used] = np.arange(len(used))
    return g[used].astype(float), remap[tets]


def cube(n: int = 2, length: float = 1.0):
    """Unit cube ``[0, length]^3`` with ``n^3`` cells and ``6 n^3`` tetrahedra."""
    pts, tets = _kuhn_grid((n, n, n))
    return pts * (length / n), tets


def ball(n: int = 8, radius: float = 1.0):
    """Ball from a cube ``[-1, 1]^3`` with ``n`` (even) cells per side.

    The Kuhn split is mirrored per octant so every tetrahedron touches the
    cube interior and the mesh is symmetric under all coordinate reflections.
    Points are pushed radially so the cube shell ``|p|_inf = t`` lands on the
    sphere of radius ``t * radius``.
    """
    if n < 2 or n % 2:
        raise ValueError("ball needs an even number of cells per side")
    h = n // 2
    pts, tets = _kuhn_grid((n, n, n), flips=lambda i, j, k: (i < h, j < h, k < h))
    p = pts / h - 1.0
    inf = np.abs(p).max(axis=1)
    two = np.linalg.norm(p, axis=1)
    scale = np.divide(inf, two, out=np.ones_like(inf), where=two > 0)
    return radius * p * scale[:, None], tets


def ball_refine_cells(refine: int) -> int:
    return 2 ** (refine + 1)


def handlebody(genus: int = 2, n: int = 2, height: int = 1):
    """Slab of ``(2g+1) x 3 x height`` unit blocks with ``g`` square through-holes.

    Each block is split into ``n^3`` cells.  The boundary is a closed
    surface of genus ``g``.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    bx, by, bz = 2 * genus + 1, 3, height
    keep = np.ones((bx * n, by * n, bz * n), dtype=bool)
    for hole in range(genus):
        i0 = (2 * hole + 1) * n
        keep[i0:i0 + n, n:2 * n, :] = False
    pts, tets = _kuhn_grid(keep.shape, keep=keep)
    return pts / n, tets


def genus2(n: int = 2):
    return handlebody(2, n)


def _disk_triangles(nv: int, nw: int, radius: float):
    pts = [(0.0, 0.0)]
    for k in range(1, nw + 1):
        rho = radius * k / nw
        for j in range(nv):
            th = 2.0 * np.pi * j / nv
            pts.append((rho * np.cos(th), rho * np.sin(th)))

    def ring(k, j):
        return 1 + (k - 1) * nv + (j % nv)

    tris = []
    for j in range(nv):
        tris.append((0, ring(1, j), ring(1, j + 1)))
    for k in range(1, nw):
        for j in range(nv):
            a, b, c, d = ring(k, j), ring(k + 1, j), ring(k + 1, j + 1), ring(k, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return np.array(pts), np.array(tris)


def _split_prism(v):
    """Dompierre's vertex-ordering split of prism (v0 v1 v2 | v3 v4 v5).

    Every quadrilateral face is cut through its smallest global id, which
    makes neighbouring prisms agree on shared faces.
    """
    v = list(v)
    m = int(np.argmin(v))
    # rotate/flip so that the smallest id is local vertex 0
    perms = {
        0: [0, 1, 2, 3, 4, 5],
        1: [1, 2, 0, 4, 5, 3],
        2: [2, 0, 1, 5, 3, 4],
        3: [3, 5, 4, 0, 2, 1],
        4: [4, 3, 5, 1, 0, 2],
        5: [5, 4, 3, 2, 1, 0],
    }
    w = [v[i] for i in perms[m]]
    if min(w[1], w[5]) < min(w[2], w[4]):
        return [[w[0], w[1], w[2], w[5]], [w[0], w[1], w[5], w[4]], [w[0], w[4], w[5], w[3]]]
    return [[w[0], w[1], w[2], w[4]], [w[0], w[4], w[2], w[5]], [w[0], w[4], w[5], w[3]]]


def solid_torus(R: float = 2.0, r: float = 1.0, nu: int = 8, nv: int = 8, nw: int = 4):
    """Solid torus: a triangulated disk of radius ``r`` swept around a circle of radius ``R``.

    ``nu`` toroidal slices, ``nv`` poloidal and ``nw`` radial divisions of the
    cross-section.  Prisms are split into tetrahedra by vertex ordering.
    """
    if nu < 3 or nv < 3 or nw < 1:
        raise ValueError("solid torus needs nu >= 3, nv >= 3, nw >= 1")
    if r >= R:
        raise ValueError("minor radius must be smaller than the major radius")
    disk, tris = _disk_triangles(nv, nw, r)
    n2 = len(disk)
    phi = 2.0 * np.pi * np.arange(nu) / nu
    rho = R + disk[:, 0]
    vertices = np.stack(
        [
            (rho[None, :] * np.cos(phi)[:, None]).ravel(),
            (rho[None, :] * np.sin(phi)[:, None]).ravel(),
            np.tile(disk[:, 1], nu),
        ],
        axis=1,
    )
    tets = []
    for u in range(nu):
        lo, hi = u * n2, ((u + 1) % nu) * n2
        for t in tris:
            tets.extend(_split_prism([lo + t[0], lo + t[1], lo + t[2], hi + t[0], hi + t[1], hi + t[2]]))
    return vertices, np.array(tets, dtype=np.int64)


def torus7(R: float = 2.0, r: float = 1.0):
    """The 7-vertex triangulated torus (a surface, not a volume mesh).

    Triangles ``(i, i+1, i+3)`` and ``(i, i+2, i+3)`` mod 7; every pair of
    vertices is joined by an edge.  Returns ``(vertices, triangles)`` with the
    vertices placed on a torus of radii ``R`` and ``r``.
    """
    i = np.arange(7)
    u = 2.0 * np.pi * i / 7
    v = 2.0 * np.pi * 3 * i / 7
    vertices = np.stack([(R + r * np.cos(v)) * np.cos(u), (R + r * np.cos(v)) * np.sin(u), r * np.sin(v)], axis=1)
    tris = [(k, (k + 1) % 7, (k + 3) % 7) for k in range(7)] + [(k, (k + 2) % 7, (k + 3) % 7) for k in range(7)]
    return vertices, np.array(tris, dtype=np.int64)


GENERATORS = {
    "tet": single_tet,
    "two-tets": two_tets,
    "cube": cube,
    "ball": ball,
    "solid-torus": solid_torus,
    "genus2": genus2,
    "handlebody": handlebody,
}
