"""Gmsh MSH 2.2 ASCII reader and writer (nodes and 4-node tetrahedra only).

Element tags are ignored.  Elements other than tetrahedra (points, lines,
triangles) are skipped.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ParseError

TET = 4
_NODES_PER_TYPE = {1: 2, 2: 3, 3: 4, 4: 4, 5: 8, 6: 6, 7: 5, 15: 1}


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, what: str) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise ParseError(f"unexpected end of file while reading {what}", self.pos)

    @property
    def lineno(self) -> int:
        return self.pos


def _ints(line: str, lines: _Lines, what: str) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise ParseError(f"expected integers in {what}, got {line!r}", lines.lineno) from None


def _expect(lines: _Lines, tag: str) -> None:
    line = lines.next(tag)
    if line != tag:
        raise ParseError(f"expected {tag}, got {line!r}", lines.lineno)


def parse_msh(text: str):
    """Return ``(vertices (n, 3), tets (m, 4))`` with 0-based vertex indices."""
    lines = _Lines(text)
    vertices = tets = None
    while lines.pos < len(lines.lines):
        try:
            head = lines.next("section")
        except ParseError:
            break
        if head == "$MeshFormat":
            parts = lines.next("mesh format").split()
            if len(parts) < 3 or not parts[0].startswith("2"):
                raise ParseError(f"unsupported mesh format {' '.join(parts)!r}", lines.lineno)
            if parts[1] != "0":
                raise ParseError("binary MSH files are not supported", lines.lineno)
            _expect(lines, "$EndMeshFormat")
        elif head == "$Nodes":
            n = _ints(lines.next("node count"), lines, "node count")
            if len(n) != 1 or n[0] < 0:
                raise ParseError("bad node count", lines.lineno)
            ids, xyz = [], []
            for _ in range(n[0]):
                line = lines.next("node")
                parts = line.split()
                if len(parts) != 4:
                    raise ParseError(f"node line needs 4 fields, got {len(parts)}", lines.lineno)
                try:
                    ids.append(int(parts[0]))
                    xyz.append([float(t) for t in parts[1:]])
                except ValueError:
                    raise ParseError(f"bad node line {line!r}", lines.lineno) from None
            _expect(lines, "$EndNodes")
            vertices = (np.array(ids, dtype=np.int64), np.array(xyz, dtype=float).reshape(-1, 3))
        elif head == "$Elements":
            n = _ints(lines.next("element count"), lines, "element count")
            if len(n) != 1 or n[0] < 0:
                raise ParseError("bad element count", lines.lineno)
            rows = []
            for _ in range(n[0]):
                vals = _ints(lines.next("element"), lines, "element")
                if len(vals) < 3:
                    raise ParseError("element line too short", lines.lineno)
                etype, ntags = vals[1], vals[2]
                nodes = vals[3 + ntags:]
                expected = _NODES_PER_TYPE.get(etype)
                if expected is not None and len(nodes) != expected:
                    raise ParseError(f"element type {etype} needs {expected} nodes, got {len(nodes)}", lines.lineno)
                if etype == TET:
                    rows.append((nodes, lines.lineno))
            _expect(lines, "$EndElements")
            tets = rows
        else:
            # skip unknown sections
            end = "$End" + head[1:] if head.startswith("$") else None
            if end is None:
                raise ParseError(f"unexpected line {head!r}", lines.lineno)
            while lines.next(end) != end:
                pass
    if vertices is None:
        raise ParseError("no $Nodes section", lines.lineno)
    if tets is None:
        raise ParseError("no $Elements section", lines.lineno)
    ids, xyz = vertices
    index = {int(i): k for k, i in enumerate(ids)}
    out = np.empty((len(tets), 4), dtype=np.int64)
    for r, (nodes, lineno) in enumerate(tets):
        try:
            out[r] = [index[i] for i in nodes]
        except KeyError as exc:
            raise ParseError(f"element refers to unknown node {exc.args[0]}", lineno) from None
    return xyz, out


def read_msh(path) -> tuple[np.ndarray, np.ndarray]:
    return parse_msh(Path(path).read_text())


def format_msh(vertices, tets) -> str:
    vertices = np.asarray(vertices, dtype=float)
    tets = np.asarray(tets)
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(vertices))]
    out += [f"{i + 1} {x!r} {y!r} {z!r}" for i, (x, y, z) in enumerate(vertices.tolist())]
    out += ["$EndNodes", "$Elements", str(len(tets))]
    out += [f"{i + 1} 4 2 0 1 " + " ".join(str(v + 1) for v in t) for i, t in enumerate(tets.tolist())]
    out += ["$EndElements"]
    return "\n".join(out) + "\n"


def write_msh(path, vertices, tets) -> None:
    Path(path).write_text(format_msh(vertices, tets))
