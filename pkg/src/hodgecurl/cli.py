"""Command-line front end.

Exit codes:

====  ==========================================================
0     success (``verify``: every check passed)
1     configuration error (bad flag value, partition index, ...)
2     mesh parse or mesh validity error
3     homology error
4     Hodge / harmonic-basis error
5     spectral or symplectic solver error
6     ``verify`` ran but at least one check failed
====  ==========================================================

The report goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    BadPartition,
    HodgeError,
    HomologyError,
    InvalidLagrangian,
    MeshError,
    SpectralError,
    SymplecticError,
)
from .report import COMMANDS, RunConfig, dumps, run

EXIT_OK, EXIT_CONFIG, EXIT_PARSE, EXIT_HOMOLOGY, EXIT_HODGE, EXIT_SOLVER, EXIT_VERIFY = range(7)

GEN_PARAMS = {"radius": float, "refine": int, "n": int, "length": float, "R": float, "r": float,
              "nu": int, "nv": int, "nw": int, "genus": int}


def _partition(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"partition indices must be integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("mesh source")
    src.add_argument("--mesh", help="Gmsh MSH 2.2 ASCII file")
    src.add_argument("--gen", help="built-in generator: ball, solid-torus, cube, genus2, handlebody, tet, two-tets")
    for name, typ in GEN_PARAMS.items():
        src.add_argument(f"--{name}", type=typ, default=None, help=f"generator parameter {name}")
    opt = common.add_argument_group("problem and solver")
    opt.add_argument("--trace", choices=["closed", "coclosed"], default=None)
    opt.add_argument("--partition-I", type=_partition, default=None, dest="partition_I",
                     help="indices (1-based, comma separated) of the kappa vectors in the Lagrangian")
    opt.add_argument("--k", type=int, default=None, help="number of eigenpairs")
    opt.add_argument("--zero-tol", type=float, default=None, dest="zero_tol")
    opt.add_argument("--dense-max", type=int, default=None, dest="dense_max")
    opt.add_argument("--pencil", choices=["helicity", "galerkin"], default=None)
    opt.add_argument("--sigma", type=float, default=None, help="shift for the sparse Galerkin solve")
    opt.add_argument("--seed", type=int, default=None)
    opt.add_argument("--samples", type=int, default=None, help="random cochains for the Hodge checks")
    opt.add_argument("--drop-symplectic-row", type=int, nargs="?", const=1, default=None, dest="drop_symplectic_row",
                     help="test only: remove one symplectic constraint row (negative control)")
    opt.add_argument("--demo", action="store_true", default=None, help="curlcurl: run the ball refinement demo")
    out = common.add_argument_group("output")
    out.add_argument("--out", help="write the report here instead of stdout")
    out.add_argument("--sidecar", action="store_true", default=None, help="write large matrices as binary sidecars")
    out.add_argument("--config", help="key = value file; command-line flags take precedence")

    parser = argparse.ArgumentParser(prog="hodgecurl", description="Self-adjoint curl operators on tetrahedral meshes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments, optional quotes)."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("'\"")
    return out


def _coerce(key: str, value: str):
    if key in GEN_PARAMS:
        return GEN_PARAMS[key](value)
    if key == "partition_I":
        return _partition(value.strip("[]"))
    if key in ("k", "seed", "samples", "dense_max", "drop_symplectic_row"):
        return int(value)
    if key in ("zero_tol", "sigma"):
        return float(value)
    if key in ("demo", "sidecar"):
        return value.lower() in ("1", "true", "yes", "on")
    return value


def make_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        for key, value in read_config_file(args.config).items():
            if key not in vars(args) or key in ("command", "config"):
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _coerce(key, value)
    for key, value in vars(args).items():
        if value is not None and key != "config":
            values[key] = value
    gen_params = {k: values.pop(k) for k in list(values) if k in GEN_PARAMS}
    return RunConfig(gen_params=gen_params, **values)


def _fail(code: int, exc: BaseException) -> int:
    print(f"hodgecurl: error: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except (ValueError, TypeError, OSError) as exc:
        return _fail(EXIT_CONFIG, exc)
    try:
        doc, sidecars = run(cfg)
    except (BadPartition, InvalidLagrangian) as exc:
        return _fail(EXIT_CONFIG, exc)
    except MeshError as exc:
        return _fail(EXIT_PARSE, exc)
    except OSError as exc:
        return _fail(EXIT_PARSE, exc)
    except HomologyError as exc:
        return _fail(EXIT_HOMOLOGY, exc)
    except HodgeError as exc:
        return _fail(EXIT_HODGE, exc)
    except (SpectralError, SymplecticError) as exc:
        return _fail(EXIT_SOLVER, exc)
    if cfg.sidecar and cfg.out:
        written = sidecars.write(cfg.out)
        if written:
            print("sidecars: " + ", ".join(written), file=sys.stderr)
    text = dumps(doc)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    for c in doc.get("checks", []):
        if not c["passed"]:
            print(f"check failed: {c['name']} = {c['value']!r} (threshold {c['threshold']!r})", file=sys.stderr)
    if cfg.command == "verify" and not doc["all_passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
