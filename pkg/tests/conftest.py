import random
import sys
from pathlib import Path

import pytest

# Ensure repo root is on sys.path so the packages import without installation
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from tmesh_spline.mesh import HierSpec, extend, generate  # noqa: E402

MESHES = ROOT / "meshes"

# two level-0 subdomains, then three of their level-1 children
BICUBIC_SCRIPT = [["1,1", "2,0"], ["1,1/0,0", "1,1/1,1", "2,0/0,0"]]


def bicubic_spec() -> HierSpec:
    return HierSpec(m=3, n=3, p=5, q=6, script=BICUBIC_SCRIPT)


def isolated_cell_spec() -> HierSpec:
    return HierSpec(m=2, n=2, p=3, q=3, script=[["1,1"]])


@pytest.fixture(scope="session")
def bicubic_mesh():
    return generate(bicubic_spec())


@pytest.fixture(scope="session")
def bicubic_extended(bicubic_mesh):
    return extend(bicubic_mesh.mesh, 3, 3)


@pytest.fixture(scope="session")
def isolated_cell():
    return generate(isolated_cell_spec())


@pytest.fixture
def rng():
    return random.Random(20240611)
