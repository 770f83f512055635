import numpy as np
import pytest

from hodgecurl import meshgen
from hodgecurl.curl_spectral import prepare_boundary
from hodgecurl.mesh_complex import build_complex, extract_boundary


@pytest.fixture(scope="session")
def tet():
    return build_complex(*meshgen.single_tet())


@pytest.fixture(scope="session")
def cube():
    return build_complex(*meshgen.cube(2))


@pytest.fixture(scope="session")
def ball():
    return build_complex(*meshgen.ball(4))


@pytest.fixture(scope="session")
def torus():
    return build_complex(*meshgen.solid_torus())


@pytest.fixture(scope="session")
def genus2():
    return build_complex(*meshgen.genus2())


@pytest.fixture(scope="session")
def meshes(tet, cube, ball, torus, genus2):
    return {"tet": tet, "cube": cube, "ball": ball, "torus": torus, "genus2": genus2}


@pytest.fixture(scope="session")
def torus_surface(torus):
    return extract_boundary(torus)


@pytest.fixture(scope="session")
def genus2_surface(genus2):
    return extract_boundary(genus2)


@pytest.fixture(scope="session")
def torus_bd(torus):
    return prepare_boundary(torus)


@pytest.fixture(scope="session")
def ball_bd(ball):
    return prepare_boundary(ball)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
