import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hodgecurl import meshgen
from hodgecurl.errors import ParseError
from hodgecurl.mesh_complex import build_complex
from hodgecurl.msh import format_msh, parse_msh, read_msh, write_msh

GOOD = """$MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
1
3 1 "vol"
$EndPhysicalNames
$Nodes
5
10 0 0 0
20 1 0 0
30 0 1 0
40 0 0 1
50 1 1 1
$EndNodes
$Elements
4
1 15 2 0 10 10
2 2 2 0 1 10 20 30
3 4 2 1 1 10 20 30 40
4 4 3 1 1 7 20 30 40 50
$EndElements
"""


def test_parse_good_file():
    v, t = parse_msh(GOOD)
    assert v.shape == (5, 3)
    assert t.tolist() == [[0, 1, 2, 3], [1, 2, 3, 4]]
    cx = build_complex(v, t)
    assert cx.n_tets == 2


@pytest.mark.parametrize(
    "text,line",
    [
        (GOOD.replace("20 1 0 0", "20 1 x 0"), 11),
        (GOOD.replace("2.2 0 8", "4.1 0 8"), 2),
        (GOOD.replace("2.2 0 8", "2.2 1 8"), 2),
        (GOOD.replace("4 4 3 1 1 7 20 30 40 50", "4 4 3 1 1 7 20 30 40 99"), 21),
        (GOOD.replace("3 4 2 1 1 10 20 30 40", "3 4 2 1 1 10 20 30"), 20),
        (GOOD.split("$Elements")[0], None),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_msh(text)
    if line is not None:
        assert info.value.line == line
        assert f"line {line}" in str(info.value)


def test_truncated_file():
    with pytest.raises(ParseError):
        parse_msh("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n")


def test_file_roundtrip(tmp_path):
    v, t = meshgen.cube(1)
    path = tmp_path / "cube.msh"
    write_msh(path, v, t)
    v2, t2 = read_msh(path)
    assert np.array_equal(v, v2) and np.array_equal(t, t2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.integers(1, 20), st.integers(0, 10**6))
def test_roundtrip_is_exact(nv, nt, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((nv + 3, 3)) * 10.0 ** rng.integers(-5, 5)
    t = np.stack([rng.choice(nv + 3, 4, replace=False) for _ in range(nt)])
    v2, t2 = parse_msh(format_msh(v, t))
    assert np.array_equal(v, v2)
    assert np.array_equal(t, t2)
