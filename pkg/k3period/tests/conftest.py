# k3period/tests/conftest.py
import json
import os
import random
import sys

import pytest
import yaml

from k3period.src.config_utils import PLANES_PATH, get_settings
from k3period.src.grassmann_utils import load_named_plane
from k3period.src.isometry_utils import reflection_word, sample_reflection_vector
from k3period.src.lattice_utils import build_e8, k3_lattice, u_vector
from k3period.src.period_utils import period_check

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))

# Load the named plane registry
with open(PLANES_PATH, "r") as file:
    planes_config = yaml.safe_load(file)


@pytest.fixture(scope="session")
def planes_registry():
    """Fixture providing the parsed config/planes.yaml registry."""
    return planes_config


@pytest.fixture(scope="session")
def k3():
    """Fixture providing the K3 lattice (−E8)⊕(−E8)⊕U⊕U⊕U."""
    return k3_lattice()


@pytest.fixture(scope="session")
def e8():
    """Fixture providing the positive definite E8 lattice."""
    return build_e8()


@pytest.fixture(scope="session")
def p0():
    """Fixture providing the reference plane span{e1+f1, e2+f2, e3+f3}."""
    return load_named_plane("p0")


@pytest.fixture(scope="session")
def p1():
    """Fixture providing the plane span{e1+2f1, e2+f2, e3+f3}."""
    return load_named_plane("p1")


@pytest.fixture(scope="session")
def smooth():
    """Fixture providing the frozen plane of the smooth locus."""
    return load_named_plane("smooth")


@pytest.fixture(scope="session")
def p0_verdict(p0):
    """Fixture providing the period verdict of the reference plane, computed once."""
    return period_check(p0)


@pytest.fixture
def rng():
    """Fixture providing a random generator seeded from `sampling.seed` (or K3_PERIOD_SEED)."""
    return random.Random(get_settings().seed)


@pytest.fixture
def root_u1(k3):
    """Fixture providing e1 − f1, the (−2)-root of the first U block."""
    return u_vector(k3, 1, 1, -1)


@pytest.fixture
def random_word(k3):
    """Fixture providing a sampler of reflection words of length 1..max_length."""

    def sample(rng, max_length=6):
        length = rng.randint(1, max_length)
        roots = [sample_reflection_vector(rng, k3) for _ in range(length)]
        return reflection_word(roots, k3)

    return sample


@pytest.fixture
def write_json(tmp_path):
    """Fixture providing a helper that writes a JSON document and returns its path."""

    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return write
