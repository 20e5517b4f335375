# k3period/tests/test_lattice_utils.py
import json

import pytest
from pydantic import ValidationError

from k3period.src.errors import LatticeMismatchError, PreconditionError, ShapeError
from k3period.src.lattice_utils import (
    basis_vector,
    build_a1,
    build_e8,
    build_u,
    builtin_names,
    direct_sum,
    discriminant_group,
    inner,
    is_root,
    k3_lattice,
    load_builtin_lattice,
    load_gram_file,
    negate,
    norm,
    u_vector,
    vector,
)
from k3period.src.linalg_utils import IntMatrix, det_exact
from k3period.src.models import Lattice


def test_build_e8():
    """Test the E8 Gram matrix.

    Verifies the Dynkin numbering (chain 0..6, branch node 7 on node 2),
    determinant 1, positive definiteness and evenness.
    """
    E8 = build_e8()
    assert (E8.gram[0, 0], E8.gram[0, 1], E8.gram[0, 2]) == (2, -1, 0)
    assert E8.gram[2, 7] == -1 and E8.gram[6, 7] == 0
    assert E8.det == 1
    assert E8.signature == (8, 0, 0)
    assert E8.even and E8.unimodular


def test_build_u():
    """Test the hyperbolic plane U."""
    U = build_u()
    assert U.gram.to_list() == [[0, 1], [1, 0]]
    assert U.signature == (1, 1, 0)
    assert U.even
    assert U.det == -1


def test_k3_lattice(k3):
    """Test the K3 lattice identity card.

    Verifies evenness, |det| = 1 (det = −1), signature (3, 19) and symmetry
    with exact assertions.
    """
    assert k3.rank == 22
    assert k3.signature == (3, 19, 0)
    assert k3.det == -1
    assert k3.even and k3.unimodular
    assert k3.gram.is_symmetric()
    assert k3_lattice() is k3


@pytest.mark.parametrize(
    "summands, rank, det, sig",
    [
        ((build_u(), build_u()), 4, 1, (2, 2, 0)),
        ((negate(build_e8()), build_u()), 10, -1, (1, 9, 0)),
        ((build_a1(), build_a1(), build_a1()), 3, 8, (3, 0, 0)),
    ],
)
def test_direct_sum(summands, rank, det, sig):
    """Test direct sums.

    Verifies that ranks add, determinants multiply and signatures add.
    """
    L = direct_sum(*summands)
    assert (L.rank, L.det, L.signature) == (rank, det, sig)


def test_direct_sum_with_rank_zero():
    """Test that a rank-0 summand leaves the lattice unchanged."""
    empty = Lattice(gram=IntMatrix([], cols=0))
    U = build_u()
    assert direct_sum(U, empty).gram == U.gram


def test_direct_sum_det_multiplicative(rng):
    """Test determinant multiplicativity on random small blocks."""
    for _ in range(50):
        blocks = []
        for _ in range(rng.randint(1, 3)):
            n = rng.randint(1, 3)
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = rng.randint(-3, 3)
            blocks.append(Lattice(gram=rows))
        expected = 1
        for block in blocks:
            expected *= det_exact(block.gram)
        assert direct_sum(*blocks).det == expected


@pytest.mark.parametrize(
    "left, right, expected",
    [
        ((1, 1, 0), (1, 0, 1), 1),
        ((1, 1, 0), (1, 1, 1), 1),
        ((1, 1, 1), (1, 1, 1), 2),
        ((1, 1, -1), (1, 1, -1), -2),
        ((2, 1, 1), (2, 1, 1), 2),
    ],
)
def test_inner_u_blocks(k3, left, right, expected):
    """Test pairings in the U blocks of the K3 lattice.

    Arguments are (block, e, f); verifies (e1, f1) = 1, (e1+f1)² = 2 and
    (e1−f1)² = −2.
    """
    assert inner(u_vector(k3, *left), u_vector(k3, *right)) == expected


def test_inner_e8_block(k3):
    """Test that the first −E8 basis vector has norm −2 in the K3 lattice."""
    b0 = vector(k3, basis_vector(k3, 0))
    assert norm(b0) == -2


def test_inner_bilinear_symmetric(k3, rng):
    """Test symmetry and bilinearity of the pairing on random vectors."""
    for _ in range(100):
        x, y, z = (vector(k3, [rng.randint(-4, 4) for _ in range(22)]) for _ in range(3))
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        combo = vector(k3, [a * u + b * v for u, v in zip(x.coords, y.coords)])
        assert inner(x, y) == inner(y, x)
        assert inner(combo, z) == a * inner(x, z) + b * inner(y, z)


def test_inner_mismatch(k3):
    """Test that pairing vectors of different lattices raises LatticeMismatchError."""
    with pytest.raises(LatticeMismatchError):
        inner(vector(build_u(), (1, 0)), vector(k3, basis_vector(k3, 16)))


@pytest.mark.parametrize(
    "e, f, expected",
    [
        (1, -1, (True, -2)),
        (1, 1, (False, 2)),
        (1, 0, (False, 0)),
    ],
)
def test_is_root(k3, e, f, expected):
    """Test root detection on e1 − f1, e1 + f1 and e1."""
    assert is_root(u_vector(k3, 1, e, f)) == expected


def test_vector_length_mismatch(k3):
    """Test that a wrong coordinate count raises ShapeError."""
    with pytest.raises(ShapeError):
        vector(k3, [1, 0, 0])


@pytest.mark.parametrize(
    "lattice, expected",
    [
        (build_a1(), [2]),
        (direct_sum(build_a1(), build_a1()), [2, 2]),
        (build_e8(), []),
        (Lattice(gram=[[2, 1], [1, 2]]), [3]),
    ],
)
def test_discriminant_group(lattice, expected):
    """Test discriminant groups through Smith invariant factors."""
    assert discriminant_group(lattice) == expected


def test_discriminant_group_k3(k3):
    """Test that the unimodular K3 lattice has trivial discriminant group."""
    assert discriminant_group(k3) == []


@pytest.mark.parametrize(
    "name, rank, signature",
    [
        ("k3", 22, (3, 19, 0)),
        ("e8", 8, (8, 0, 0)),
        ("-e8", 8, (0, 8, 0)),
        ("u", 2, (1, 1, 0)),
        ("a1", 1, (1, 0, 0)),
        ("-a1", 1, (0, 1, 0)),
    ],
)
def test_load_builtin_lattice(name, rank, signature):
    """Test the built-in lattice registry loaded from config/lattices.yaml."""
    L = load_builtin_lattice(name)
    assert (L.rank, L.signature, L.label) == (rank, signature, name)


def test_builtin_names():
    """Test that every documented built-in name is enabled in the registry."""
    assert set(builtin_names()) >= {"k3", "e8", "-e8", "u", "a1", "-a1"}


def test_load_builtin_lattice_unknown():
    """Test that an unknown name raises PreconditionError."""
    with pytest.raises(PreconditionError):
        load_builtin_lattice("d4")


def test_load_gram_file(tmp_path):
    """Test loading a custom lattice from a JSON Gram document."""
    path = tmp_path / "a2.json"
    path.write_text(json.dumps({"gram": [[2, -1], [-1, 2]]}))
    L = load_gram_file(path)
    assert L.det == 3
    assert L.label == "a2"


def test_load_gram_file_not_symmetric(tmp_path):
    """Test that a non-symmetric Gram document raises ShapeError."""
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"gram": [[2, 1], [0, 2]]}))
    with pytest.raises(ShapeError):
        load_gram_file(path)


def test_load_gram_file_rejects_fractions(tmp_path):
    """Test that non-integer Gram entries fail schema validation."""
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"gram": [["1/2", 0], [0, 2]]}))
    with pytest.raises(ValidationError):
        load_gram_file(path)
