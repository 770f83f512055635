"""Pipeline orchestration and deterministic JSON reports.

Every ``cmd_*`` function takes a :class:`RunConfig` and returns a plain
dictionary.  :func:`dumps` serializes it with sorted keys and 17
significant digits so that identical configurations give byte-identical
output.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import meshgen
from .boundary_hodge import (
    harmonic_space,
    hodge_decompose,
    mesh_tolerance,
    pairing,
    star_harmonic_defect,
    symplectic_harmonic_basis,
    wedge_pairing,
)
from .curl_spectral import (
    CLOSED,
    DENSE_MAX,
    BoundaryConditionSpec,
    CurlProblem,
    gradient_kernel_dimension,
    prepare_boundary,
    spectrum,
)
from .curlcurl import (
    DIRICHLET,
    NEUMANN,
    assemble_curlcurl,
    curlcurl_spectrum,
    dirichlet_mismatch_demo,
    square_check_problem,
)
from .errors import BadPartition
from .mesh_complex import OrientedComplex3, _signed_volumes, assemble_weak_curl, build_complex, extract_boundary
from .msh import read_msh
from .surface_homology import betti, chain_boundary, cycle_basis, intersection_matrix
from .symplectic import PartitionSpec, canonical_J

SCHEMA_VERSION = "1.0"
INLINE_LIMIT = 64

EXACT_TOL = 1e-12
PAIRING_TOL = 1e-9
GKN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
GRAM_TOL = 1e-8
SQUARE_TOL = 1e-7


@dataclass
class RunConfig:
    command: str = "info"
    mesh: str | None = None
    gen: str | None = None
    gen_params: dict = field(default_factory=dict)
    trace: str = CLOSED
    partition_I: tuple | None = None
    k: int = 6
    zero_tol: float = 1e-6
    dense_max: int = DENSE_MAX
    pencil: str = "helicity"
    sigma: float | None = None
    out: str | None = None
    sidecar: bool = False
    drop_symplectic_row: int | None = None
    seed: int = 0
    samples: int = 20
    demo: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.trace not in ("closed", "coclosed"):
            raise ValueError("trace must be 'closed' or 'coclosed'")
        if self.pencil not in ("helicity", "galerkin"):
            raise ValueError("pencil must be 'helicity' or 'galerkin'")
        if (self.mesh is None) == (self.gen is None):
            raise ValueError("give exactly one of --mesh and --gen")
        if self.gen is not None and self.gen not in meshgen.GENERATORS:
            raise ValueError(f"unknown generator {self.gen!r}; choose from {sorted(meshgen.GENERATORS)}")

    def public(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


# ---------------------------------------------------------------------------
# serialization


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _encode(obj, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(obj[k], level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, level + 1) for v in obj) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    """Deterministic JSON text (sorted keys, floats with 17 significant digits)."""
    return _encode(doc, 0) + "\n"


class _Sidecars:
    """Collects matrices too large to inline; written next to the report on request."""

    def __init__(self):
        self.arrays: dict[str, np.ndarray] = {}

    def write(self, out: str) -> list[str]:
        names = []
        for name, A in sorted(self.arrays.items()):
            path = Path(f"{out}.{name}.bin")
            A = np.ascontiguousarray(A, dtype="<f8")
            dims = np.array(A.shape if A.ndim == 2 else (A.shape[0], 1), dtype="<u8")
            path.write_bytes(dims.tobytes() + A.tobytes())
            names.append(path.name)
        return names


def matrix_entry(A, name: str | None = None, sidecars: _Sidecars | None = None):
    """Inline small matrices; summarize large ones by shape and norms."""
    A = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)
    if A.size <= INLINE_LIMIT:
        return A.tolist()
    entry = {
        "shape": list(A.shape),
        "max_abs": float(np.abs(A).max()),
        "frobenius": float(np.linalg.norm(A)),
    }
    if sidecars is not None and name is not None:
        sidecars.arrays[name] = A
        entry["sidecar"] = name
    return entry


def _check(name: str, value: float, threshold: float, le: bool = True) -> dict:
    value = float(value)
    passed = value <= threshold if le else value >= threshold
    return {"name": name, "value": value, "threshold": threshold, "passed": bool(passed and math.isfinite(value))}


def _exact_check(name: str, value: int) -> dict:
    return {"name": name, "value": int(value), "threshold": 0, "passed": int(value) == 0}


def _max_abs(A) -> float:
    if sp.issparse(A):
        return float(abs(A).max()) if A.nnz else 0.0
    A = np.asarray(A)
    return float(np.abs(A).max()) if A.size else 0.0


# ---------------------------------------------------------------------------
# pipeline pieces


def load_mesh(cfg: RunConfig) -> OrientedComplex3:
    if cfg.mesh is not None:
        return build_complex(*read_msh(cfg.mesh))
    p = dict(cfg.gen_params)
    name = cfg.gen
    if name == "ball":
        n = p.get("n") or meshgen.ball_refine_cells(int(p.get("refine", 2)))
        return build_complex(*meshgen.ball(int(n), float(p.get("radius", 1.0))))
    if name == "solid-torus":
        kw = {k: p[k] for k in ("R", "r") if k in p}
        kw.update({k: int(p[k]) for k in ("nu", "nv", "nw") if k in p})
        return build_complex(*meshgen.solid_torus(**kw))
    if name == "cube":
        return build_complex(*meshgen.cube(int(p.get("n", 2)), float(p.get("length", 1.0))))
    if name == "handlebody":
        return build_complex(*meshgen.handlebody(int(p.get("genus", 2)), int(p.get("n", 2))))
    if name == "genus2":
        return build_complex(*meshgen.genus2(int(p.get("n", 2))))
    return build_complex(*meshgen.GENERATORS[name]())


def mesh_stats(cx: OrientedComplex3) -> dict:
    s = extract_boundary(cx)
    chis = []
    for c in range(s.n_components):
        nv = int((s.vertex_component == c).sum())
        ne = int((s.edge_component == c).sum())
        nf = int((s.triangle_component == c).sum())
        chis.append(nv - ne + nf)
    return {
        "n_vertices": cx.n_vertices,
        "n_edges": cx.n_edges,
        "n_faces": cx.n_faces,
        "n_tets": cx.n_tets,
        "euler_characteristic": cx.n_vertices - cx.n_edges + cx.n_faces - cx.n_tets,
        "max_edge_length": float(cx.max_edge_length),
        "boundary": {
            "n_vertices": s.n_vertices,
            "n_edges": s.n_edges,
            "n_triangles": s.n_triangles,
            "n_components": s.n_components,
            "euler_characteristic": int(sum(chis)),
            "component_euler_characteristics": chis,
        },
    }


def exactness_checks(cx: OrientedComplex3) -> list[dict]:
    s = extract_boundary(cx)
    C3 = assemble_weak_curl(cx)
    C = wedge_pairing(s).C
    green = ((C3.T - C3) - s.T1.T @ C @ s.T1)
    n3 = _max_abs(abs(C3).sum(axis=1)) if C3.nnz else 1.0
    return [
        _exact_check("D1*D0 == 0", _max_abs(cx.D1 @ cx.D0)),
        _exact_check("D2*D1 == 0", _max_abs(cx.D2 @ cx.D1)),
        _exact_check("d1*d0 == 0 on boundary", _max_abs(s.d1 @ s.d0)),
        _exact_check("T1*D0 == d0*T0", _max_abs(s.T1 @ cx.D0 - s.d0 @ s.T0)),
        _check("C3*D0 == 0", _max_abs(C3 @ cx.D0), EXACT_TOL),
        _check("Green identity C3^T - C3 == T1^T C T1", _max_abs(abs(green).sum(axis=1)) / n3, EXACT_TOL),
    ]


def _partition(cfg: RunConfig, g: int) -> PartitionSpec | None:
    if g == 0:
        if cfg.partition_I:
            raise BadPartition(f"partition indices {list(cfg.partition_I)} outside 1..0 (boundary has genus 0)")
        return None
    I = range(1, g + 1) if cfg.partition_I is None else cfg.partition_I
    return PartitionSpec.from_I(I, g)


def _bc(cfg: RunConfig, g: int) -> BoundaryConditionSpec:
    return BoundaryConditionSpec(trace_class=cfg.trace, partition=_partition(cfg, g), drop_row=cfg.drop_symplectic_row)


def _base(cfg: RunConfig, cx: OrientedComplex3) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.public(), "mesh": mesh_stats(cx)}


def _finish(doc: dict) -> dict:
    checks = doc.get("checks", [])
    doc["all_passed"] = all(c["passed"] for c in checks)
    return doc


# ---------------------------------------------------------------------------
# commands


def cmd_info(cfg: RunConfig, cx: OrientedComplex3 | None = None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    s = extract_boundary(cx)
    # boundary orientation: every outward triangle normal points away from its tet
    cen_t = cx.vertices[cx.tets].mean(axis=1)
    face_tet = np.asarray(abs(cx.D2).T.tocsr()[s.btris].argmax(axis=1)).ravel()
    tri = s.vertices[s.tri_local]
    cen_f = tri.mean(axis=1)
    outward = np.einsum("ij,ij->i", s.outward_normals, cen_f - cen_t[face_tet])
    doc["orientation"] = {"reoriented_tets": int(cx.reoriented)}
    doc["checks"] = [
        _exact_check("tets with non-positive signed volume", int((_signed_volumes(cx.vertices, cx.tets) <= 0).sum())),
        _exact_check("boundary normals pointing inward", int((outward <= 0).sum())),
    ] + exactness_checks(cx)
    return _finish(doc)


def cmd_homology(cfg: RunConfig, cx: OrientedComplex3 | None = None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    s = extract_boundary(cx)
    b = betti(s)
    cb = cycle_basis(s)
    Z = np.asarray(cb.cycles).reshape(-1, s.n_edges)
    Int = intersection_matrix(s, Z) if len(Z) else np.zeros((0, 0))
    J = canonical_J(b.genus)
    open_count = sum(int(np.abs(chain_boundary(s, z)).sum()) for z in Z)
    doc["homology"] = {
        "betti": {"b0": b.b0, "b1": b.b1, "b2": b.b2},
        "genus": b.genus,
        "labels": list(cb.labels),
        "pair_index": [int(i) for i in cb.pair_index],
        "cycle_lengths": [int(np.abs(z).sum()) for z in Z],
        "intersection_matrix": Int.astype(int).tolist(),
    }
    doc["checks"] = [
        _exact_check("cycles are closed (total |boundary|)", open_count),
        _exact_check("b1 == 2g", b.b1 - 2 * b.genus),
        _exact_check("intersection matrix == J (max |Int - J|)", int(np.abs(Int - J).max(initial=0))),
        _exact_check(
            "g interior-bounding and g exterior-bounding labels",
            abs(list(cb.labels).count("InteriorBounding") - b.genus) + abs(list(cb.labels).count("ExteriorBounding") - b.genus),
        ),
    ]
    return _finish(doc)


def _hodge_section(cfg: RunConfig, s) -> tuple[dict, list[dict]]:
    hs = harmonic_space(s)
    C = wedge_pairing(s).C
    rng = np.random.default_rng(cfg.seed)
    stats = {k: 0.0 for k in ("residual", "exact_exact", "harmonic_exact", "harmonic_coexact", "coexact_coexact", "m_orthogonality")}
    from .boundary_hodge import m_inner

    for _ in range(cfg.samples):
        a = hodge_decompose(s, rng.standard_normal(s.n_edges), hs)
        bb = hodge_decompose(s, rng.standard_normal(s.n_edges), hs)
        nrm = math.sqrt(m_inner(s, a.exact + a.coexact + a.h, a.exact + a.coexact + a.h))
        stats["residual"] = max(stats["residual"], a.residual)
        stats["exact_exact"] = max(stats["exact_exact"], abs(pairing(C, a.exact, bb.exact)))
        stats["harmonic_exact"] = max(stats["harmonic_exact"], abs(pairing(C, a.h, bb.exact)))
        stats["harmonic_coexact"] = max(stats["harmonic_coexact"], abs(pairing(C, a.h, bb.coexact)))
        stats["coexact_coexact"] = max(stats["coexact_coexact"], abs(pairing(C, a.coexact, bb.coexact)))
        orth = max(abs(m_inner(s, a.exact, a.coexact)), abs(m_inner(s, a.exact, a.h)), abs(m_inner(s, a.coexact, a.h)))
        stats["m_orthogonality"] = max(stats["m_orthogonality"], orth / max(nrm * nrm, 1e-300))
    sec = {
        "harmonic_dimension": hs.dim,
        "harmonic_method": hs.method,
        "samples": cfg.samples,
        "star_harmonic_defect": float(star_harmonic_defect(s, hs)) if hs.dim else 0.0,
        "measured": stats,
        "diagnostics_not_gated": ["harmonic_coexact", "coexact_coexact"],
    }
    b = betti(s)
    checks = [
        _exact_check("harmonic dimension == b1", hs.dim - b.b1),
        _check("Hodge reconstruction residual", stats["residual"], PAIRING_TOL),
        _check("M-orthogonality of Hodge parts", stats["m_orthogonality"], PAIRING_TOL),
        _check("pairing(exact, exact)", stats["exact_exact"], EXACT_TOL),
        _check("pairing(harmonic, exact)", stats["harmonic_exact"], PAIRING_TOL),
    ]
    return sec, checks


def cmd_hodge(cfg: RunConfig, cx: OrientedComplex3 | None = None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    doc["hodge"], doc["checks"] = _hodge_section(cfg, extract_boundary(cx))
    return _finish(doc)


def _basis_section(s, sidecars=None) -> tuple[dict, list[dict]]:
    cb = cycle_basis(s)
    sb = symplectic_harmonic_basis(s, cb, harmonic_space(s))
    g = sb.genus
    sec = {
        "genus": g,
        "tolerance": sb.tol,
        "period_matrix": matrix_entry(sb.P, "period_matrix", sidecars),
        "gram_matrix": matrix_entry(sb.Gram, "gram_matrix", sidecars),
        "period_error": sb.period_error,
        "gram_error": sb.gram_error,
    }
    checks = [
        _check("period matrix == I", sb.period_error, sb.tol),
        _check("harmonic Gram == J", sb.gram_error, sb.tol),
    ]
    return sec, checks


def cmd_basis(cfg: RunConfig, cx: OrientedComplex3 | None = None, sidecars=None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    doc["basis"], doc["checks"] = _basis_section(extract_boundary(cx), sidecars)
    return _finish(doc)


def _spectrum_section(cfg: RunConfig, bd) -> tuple[dict, list[dict]]:
    problem = CurlProblem(bd, _bc(cfg, bd.genus))
    op = problem.operator
    kw = dict(k=cfg.k, zero_tol=cfg.zero_tol, seed=cfg.seed, dense_max=cfg.dense_max)
    if cfg.pencil == "galerkin":
        kw["sigma"] = cfg.sigma
    rep = spectrum(problem, cfg.pencil, **kw)
    lam = rep.eigenvalues
    pm = 0.0
    if len(lam):
        pm = max(float(np.min(np.abs(lam + x))) / abs(x) for x in lam)
    sec = {
        "trace_class": cfg.trace,
        "partition_I": None if problem.spec.partition is None else list(problem.spec.partition.I),
        "partition_I_prime": None if problem.spec.partition is None else list(problem.spec.partition.I_prime),
        "drop_symplectic_row": cfg.drop_symplectic_row,
        "space_dimension": problem.space.dim,
        "constraint_residual": problem.space.residual,
        "gkn_asymmetry": op.asymmetry,
        "pencil": rep.pencil,
        "method": rep.method,
        "eigenvalues": lam,
        "residuals": rep.residuals,
        "gram_error": rep.gram_error,
        "zero_mode_count": rep.zero_mode_count,
        "gradient_kernel_dimension": gradient_kernel_dimension(problem),
        "plus_minus_defect": pm,
        "extra": rep.extra,
    }
    checks = [
        _check("GKN asymmetry of restricted curl", op.asymmetry, GKN_TOL),
        _check("eigenpair residuals", float(np.max(rep.residuals, initial=0.0)), RESIDUAL_TOL),
        _check("eigenvector Gram == I", rep.gram_error, GRAM_TOL),
    ]
    return sec, checks


def cmd_spectrum(cfg: RunConfig, cx: OrientedComplex3 | None = None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    bd = prepare_boundary(cx)
    doc["spectrum"], doc["checks"] = _spectrum_section(cfg, bd)
    return _finish(doc)


def cmd_curlcurl(cfg: RunConfig, cx: OrientedComplex3 | None = None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    s = extract_boundary(cx)
    sec, checks = {}, []
    for bc in (DIRICHLET, NEUMANN):
        op = assemble_curlcurl(cx, bc)
        mu, kern, min_rel = curlcurl_spectrum(op, k=cfg.k)
        sec[bc] = {"eigenvalues": mu, "kernel_dimension": kern, "min_eigenvalue_relative": min_rel}
        checks.append(_check(f"{bc} curl-curl PSD (-min eig / |K|)", -min_rel, 1e-10))
        checks.append(_check(f"{bc} K symmetric", _max_abs(op.K - op.K.T), EXACT_TOL))
    sec[DIRICHLET]["interior_vertices"] = cx.n_vertices - s.n_vertices
    bd = prepare_boundary(cx)
    sq = square_check_problem(CurlProblem(bd, _bc(cfg, bd.genus)), "galerkin")
    sec["square_check"] = {
        "trace_class": cfg.trace,
        "max_relative_mismatch": sq["max_relative_mismatch"],
        "n_eigenvalues": sq["n_eigenvalues"],
        "zero_modes_curl": sq["zero_modes_curl"],
        "zero_modes_square": sq["zero_modes_square"],
    }
    checks.append(_check("spec(curl^2) == spec(curl)^2", sq["max_relative_mismatch"], SQUARE_TOL))
    if cfg.demo:
        sec["mismatch_demo"] = dirichlet_mismatch_demo([build_complex(*meshgen.ball(n)) for n in (4, 6, 8)])
    doc["curlcurl"], doc["checks"] = sec, checks
    return _finish(doc)


def cmd_verify(cfg: RunConfig, cx: OrientedComplex3 | None = None, sidecars=None) -> dict:
    cx = cx if cx is not None else load_mesh(cfg)
    doc = _base(cfg, cx)
    s = extract_boundary(cx)
    checks = exactness_checks(cx)
    hom = cmd_homology(cfg, cx)
    doc["homology"] = hom["homology"]
    checks += hom["checks"]
    doc["hodge"], c = _hodge_section(cfg, s)
    checks += c
    doc["basis"], c = _basis_section(s, sidecars)
    checks += c
    doc["spectrum"], c = _spectrum_section(cfg, prepare_boundary(cx))
    checks += c
    doc["checks"] = checks
    return _finish(doc)


COMMANDS = {
    "info": cmd_info,
    "homology": cmd_homology,
    "hodge": cmd_hodge,
    "basis": cmd_basis,
    "spectrum": cmd_spectrum,
    "curlcurl": cmd_curlcurl,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> tuple[dict, _Sidecars]:
    sidecars = _Sidecars()
    fn = COMMANDS[cfg.command]
    if fn in (cmd_basis, cmd_verify):
        doc = fn(cfg, sidecars=sidecars)
    else:
        doc = fn(cfg)
    return doc, sidecars
