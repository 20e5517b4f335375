# k3period/tests/test_grassmann_utils.py
import math
import random

import numpy as np
import pytest

from k3period.src import grassmann_utils
from k3period.src.errors import (
    DegenerateBasisError,
    ExactnessError,
    InternalCheckError,
    LatticeMismatchError,
    NotPositiveError,
    ShapeError,
)
from k3period.src.grassmann_utils import (
    apply,
    chart_dimension,
    distance,
    forget_orientation,
    frame_orientation,
    load_plane,
    named_planes,
    oriented_equal,
    orthonormalize,
    plane_from_basis,
    plane_from_document,
    plane_from_floats,
    planes_equal,
    projector,
    restricted_gram,
    sample_positive_plane,
)
from k3period.src.isometry_utils import identity, negative_identity, reflection
from k3period.src.lattice_utils import build_u, direct_sum, u_vector
from k3period.src.linalg_utils import RatMatrix, congruence_diagonalize, signature
from k3period.src.models import PlaneFile


def u_rows(k3, *rows):
    """Plane basis rows given as (block, e, f) triples."""
    return [list(u_vector(k3, *row).coords) for row in rows]


def rebase(rng, P):
    """The same plane with a random invertible integer change of its rows."""
    while True:
        M = RatMatrix([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
        if abs(np.linalg.det(M.to_float())) > 0.5:
            return plane_from_basis(M @ P.basis, lattice=P.lattice)


def test_reference_plane(p0):
    """Test the reference plane P0.

    Verifies that it validates and that its restricted Gram is 2·I3.
    """
    assert restricted_gram(p0).to_list() == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    assert p0.oriented


@pytest.mark.parametrize(
    "rows, error",
    [
        (((1, 1, 0), (2, 1, 1), (3, 1, 1)), NotPositiveError),
        (((1, 1, 1), (1, 2, 2), (2, 1, 1)), DegenerateBasisError),
        (((1, 1, -1), (2, 1, 1), (3, 1, 1)), NotPositiveError),
    ],
)
def test_plane_from_basis_rejects(k3, rows, error):
    """Test plane validation errors.

    Verifies not-positive for {e1, e2+f2, e3+f3}, degenerate-basis for
    {e1+f1, 2(e1+f1), e2+f2} and not-positive for a row of norm −2.
    """
    with pytest.raises(error):
        plane_from_basis(u_rows(k3, *rows), lattice=k3)


def test_plane_from_basis_wrong_shape(k3):
    """Test that a basis with two rows is a shape error."""
    with pytest.raises(ShapeError):
        plane_from_basis(u_rows(k3, (1, 1, 1), (2, 1, 1)), lattice=k3)


def test_plane_validation_soundness(k3, rng):
    """Test validation against congruence diagonalization.

    Verifies that plane_from_basis accepts a random basis exactly when the
    restricted Gram has signature (3, 0, 0).
    """
    accepted = rejected = 0
    for _ in range(200):
        rows = [[rng.randint(-2, 2) for _ in range(22)] for _ in range(3)]
        for i, row in enumerate(rows):
            push = rng.randint(0, 6)
            row[16 + 2 * i] += push
            row[17 + 2 * i] += push
        B = RatMatrix(rows, cols=22)
        diagonal, _ = congruence_diagonalize(B @ k3.gram @ B.T)
        positive = all(d > 0 for d in diagonal)
        try:
            plane_from_basis(B, lattice=k3)
            assert positive
            accepted += 1
        except (NotPositiveError, DegenerateBasisError):
            assert not positive
            rejected += 1
    assert accepted and rejected


def test_orthonormalize_reference_plane(p0):
    """Test that P0 orthonormalizes to the rows (e_i + f_i)/√2."""
    E = orthonormalize(p0)
    np.testing.assert_allclose(E, p0.basis.to_float() / math.sqrt(2), atol=1e-12)


def test_orthonormalize_rescales_first_row(p1):
    """Test that the first row e1 + 2f1 (norm 4) is divided by 2."""
    E = orthonormalize(p1)
    np.testing.assert_allclose(E[0], p1.basis.to_float()[0] / 2, atol=1e-12)


def test_orthonormal_frames(k3, rng):
    """Test E·G·Eᵀ = I3 on sampled planes."""
    for _ in range(50):
        P = sample_positive_plane(rng, k3)
        E = orthonormalize(P)
        np.testing.assert_allclose(E @ k3.gram.to_float() @ E.T, np.eye(3), atol=1e-9)


def test_orthonormalize_rejects_skewed_frame(p0, monkeypatch):
    """Test that a frame which stays off I3 after refinement is an internal error."""
    solve = grassmann_utils.sla.solve_triangular
    monkeypatch.setattr(
        grassmann_utils.sla, "solve_triangular", lambda *args, **kwargs: 1.1 * solve(*args, **kwargs)
    )
    with pytest.raises(InternalCheckError):
        orthonormalize(p0)


def test_planes_equal_permuted_rows(k3, p0):
    """Test that permuting the rows of P0 leaves the unoriented plane unchanged."""
    permuted = plane_from_basis(u_rows(k3, (2, 1, 1), (1, 1, 1), (3, 1, 1)), lattice=k3)
    assert planes_equal(p0, permuted)
    assert frame_orientation(p0, permuted) == -1


def test_minus_identity_flips_orientation(k3, p0):
    """Test the oriented-to-unoriented collapse.

    Verifies that −id maps P0 to the same unoriented plane with the opposite
    orientation, and that forgetting the orientation makes them equal.
    """
    image = apply(negative_identity(k3), p0)
    assert planes_equal(p0, image)
    assert not oriented_equal(p0, image)
    assert oriented_equal(forget_orientation(p0), image)
    assert not forget_orientation(p0).oriented


def test_planes_equal_distinct(p0, p1):
    """Test that P0 and the e1 + 2f1 plane differ."""
    assert not planes_equal(p0, p1)


def test_apply_examples(k3, p0, root_u1):
    """Test the isometry action on P0.

    Verifies that the identity and s_{e1−f1} fix P0 row by row.
    """
    assert apply(identity(k3), p0).basis == p0.basis
    assert apply(reflection(root_u1), p0).basis == p0.basis


def test_apply_lattice_mismatch(p0):
    """Test that acting with an isometry of another lattice is rejected."""
    U = build_u()
    with pytest.raises(LatticeMismatchError):
        apply(identity(U), p0)


def test_distance_examples(p0, p1):
    """Test distances.

    Verifies d(P, P) = 0 and d(P0, e1+2f1 plane) = ln 2 / 2 with a single
    nonzero hyperbolic angle.
    """
    assert distance(p0, p0).value == 0.0
    d = distance(p0, p1)
    assert abs(d.value - math.log(2) / 2) < 1e-9
    assert d.hyperbolic_angles[1] < 1e-12 and d.hyperbolic_angles[2] < 1e-12


def test_distance_matches_singular_values(k3, rng):
    """Test the exact 3×3 route against arccosh of cross-Gram singular values."""
    for _ in range(20):
        P, Q = sample_positive_plane(rng, k3), sample_positive_plane(rng, k3)
        M = orthonormalize(P) @ k3.gram.to_float() @ orthonormalize(Q).T
        sigma = np.clip(np.linalg.svd(M, compute_uv=False), 1.0, None)
        expected = float(np.linalg.norm(np.arccosh(sigma)))
        assert abs(distance(P, Q).value - expected) < 1e-6 * max(1.0, expected)


def test_distance_symmetry_and_indiscernibles(k3, rng):
    """Test symmetry and identity of indiscernibles.

    Verifies |d(P, Q) − d(Q, P)| < 1e-10, d(P, Q) < 1e-9 iff planes_equal,
    and d = 0 for a plane and a change of its basis.
    """
    for _ in range(50):
        P, Q = sample_positive_plane(rng, k3), sample_positive_plane(rng, k3)
        assert abs(distance(P, Q).value - distance(Q, P).value) < 1e-10
        assert (distance(P, Q).value < 1e-9) == planes_equal(P, Q, 1e-9)
        R = rebase(rng, P)
        assert distance(P, R).value < 1e-9
        assert planes_equal(P, R, 1e-9)


def test_triangle_inequality(k3, rng):
    """Test d(P, R) <= d(P, Q) + d(Q, R) + 1e-8 over 200 random triples."""
    for _ in range(200):
        P, Q, R = (sample_positive_plane(rng, k3) for _ in range(3))
        assert distance(P, R).value <= distance(P, Q).value + distance(Q, R).value + 1e-8


def test_projector_properties(k3, rng, p0):
    """Test the form-projector.

    Verifies Π·Π = Π and trace Π = 3 within 1e-10, and that Π does not
    depend on the basis of the plane.
    """
    for P in [p0] + [sample_positive_plane(rng, k3) for _ in range(20)]:
        Pi = projector(P).to_float()
        np.testing.assert_allclose(Pi @ Pi, Pi, atol=1e-10)
        assert abs(np.trace(Pi) - 3) < 1e-10
        assert projector(rebase(rng, P)) == projector(P)


def test_chart_dimension(k3):
    """Test the Grassmannian dimension 3·19 = 57."""
    assert chart_dimension(k3) == 57
    assert chart_dimension(direct_sum(build_u(), build_u(), build_u())) == 9


def test_sample_positive_plane_is_seeded(k3):
    """Test that the sampler is deterministic for a fixed seed."""
    first = sample_positive_plane(random.Random(7), k3)
    second = sample_positive_plane(random.Random(7), k3)
    assert first.basis == second.basis
    assert signature(restricted_gram(first)) == (3, 0, 0)


def test_named_planes(planes_registry):
    """Test that the registry in config/planes.yaml exposes p0, p1 and smooth."""
    assert named_planes() == [entry["name"] for entry in planes_registry["planes"]]
    assert {"p0", "p1", "smooth"} <= set(named_planes())


def test_load_plane_from_file(k3, p0, write_json):
    """Test loading a plane document with rational string entries."""
    rows = [["1/2" if x else "0" for x in row] for row in p0.basis.to_list()]
    path = write_json("half.json", {"basis": rows, "oriented": False})
    P, heuristic = load_plane(path, k3)
    assert not heuristic and not P.oriented
    assert planes_equal(P, p0)


def test_float_plane_requires_heuristic(k3):
    """Test that float entries are rejected without a denominator bound."""
    rows = [[0.0] * 22 for _ in range(3)]
    for i in range(3):
        rows[i][16 + 2 * i] = rows[i][17 + 2 * i] = 0.7071067811865476
    document = PlaneFile.model_validate({"basis": rows})
    with pytest.raises(ExactnessError):
        plane_from_document(document, k3)
    P, heuristic = plane_from_document(document, k3, heuristic_denominator=1000)
    assert heuristic
    assert planes_equal(plane_from_floats(rows, 1000, k3), P)
    assert distance(P, load_plane("p0", k3)[0]).value < 1e-9
