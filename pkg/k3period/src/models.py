# k3period/src/models.py
"""
Pydantic models for lattices, isometries, positive planes and period verdicts.

This module defines the validated domain objects (`Lattice`, `LatticeVector`,
`Isometry`, `OrbitResult`, `PositivePlane`, `ComponentClass`,
`FixedPlaneCertificate`, `PlaneDistance`, `OrthoSublattice`, `AdeComponent`,
`EnumerationStats`, `PeriodVerdict`) and the JSON file schemas accepted by the CLI. Exact data is
carried by `IntMatrix`/`RatMatrix`; rationals serialize as "p/q" strings and
integer matrices as nested arrays, so every emitted document can be read back.

Semantic checks that need the algorithms (positivity of a plane, the isometry
condition, root norms) live in the `*_utils` factories, which raise the typed
errors of `errors.py` before a model is built.

Dependencies:
    - pydantic: For data validation and serialization (version 2+).
    - fractions: For exact rational entries.

Usage:
    >>> from k3period.src.models import Lattice
    >>> Lattice(gram=[[0, 1], [1, 0]], label="u").signature
    (1, 1, 0)
"""

from fractions import Fraction
from functools import cached_property
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import (
    AliasChoices,
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

from k3period.src.errors import ShapeError
from k3period.src.linalg_utils import (
    IntMatrix,
    RatMatrix,
    det_exact,
    format_rational,
    parse_integer,
    parse_rational,
    signature,
)

Integer = Annotated[int, PlainValidator(parse_integer)]
Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
# Plane files may carry floats; those are only accepted in heuristic mode.
RationalOrFloat = Annotated[Union[Rational, float], Field(union_mode="left_to_right")]

# Root counts of the irreducible ADE systems.
E_ROOT_COUNTS = {6: 72, 7: 126, 8: 240}


def _as_int_matrix(value) -> IntMatrix:
    return value if isinstance(value, IntMatrix) else IntMatrix(value)


def _as_rat_matrix(value) -> RatMatrix:
    if isinstance(value, RatMatrix):
        return value
    if isinstance(value, IntMatrix):
        return RatMatrix(value.to_list(), cols=value.cols)
    return RatMatrix(value)


class Lattice(BaseModel):
    """
    An integral lattice given by its Gram matrix.

    Attributes:
        gram: Symmetric integer Gram matrix of the pairing (·,·).
        label: Optional name (e.g. "k3", "-e8").
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    gram: IntMatrix
    label: Optional[str] = None

    @field_validator("gram", mode="before")
    def coerce_gram(cls, value) -> IntMatrix:
        """Accept nested integer arrays and require a symmetric square matrix."""
        gram = _as_int_matrix(value)
        if not gram.is_symmetric():
            raise ShapeError("Gram matrix must be square and symmetric")
        return gram

    @field_serializer("gram")
    def serialize_gram(self, gram: IntMatrix) -> List[List[int]]:
        return gram.to_list()

    @cached_property
    def rank(self) -> int:
        return self.gram.rows

    @cached_property
    def signature(self) -> Tuple[int, int, int]:
        return signature(self.gram)

    @cached_property
    def det(self) -> int:
        return det_exact(self.gram)

    @cached_property
    def even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    def same_as(self, other: "Lattice") -> bool:
        """Whether both lattices have the same Gram matrix in the same basis."""
        return self is other or self.gram == other.gram


class LatticeVector(BaseModel):
    """
    An integer coordinate vector in a lattice basis.

    Attributes:
        coords: Integer coordinates, one per basis vector.
        lattice: The lattice the coordinates refer to (not serialized).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coords: Tuple[Integer, ...]
    lattice: Lattice = Field(exclude=True)

    @model_validator(mode="after")
    def check_length(self) -> "LatticeVector":
        if len(self.coords) != self.lattice.rank:
            raise ShapeError(
                f"vector has {len(self.coords)} coordinates, lattice rank is {self.lattice.rank}"
            )
        return self

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(coords=tuple(-c for c in self.coords), lattice=self.lattice)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(
            coords=tuple(a + b for a, b in zip(self.coords, other.coords)),
            lattice=self.lattice,
        )

    def __hash__(self):
        return hash(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.coords == other.coords and self.lattice.same_as(other.lattice)


class Isometry(BaseModel):
    """
    An integer matrix preserving the Gram form, acting on column coordinate vectors.

    Attributes:
        matrix: Square integer matrix m with mᵀ·G·m = G.
        lattice: The lattice whose form is preserved (not serialized).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    matrix: IntMatrix
    lattice: Lattice = Field(exclude=True)

    @field_validator("matrix", mode="before")
    def coerce_matrix(cls, value) -> IntMatrix:
        return _as_int_matrix(value)

    @field_serializer("matrix")
    def serialize_matrix(self, matrix: IntMatrix) -> List[List[int]]:
        return matrix.to_list()

    @model_validator(mode="after")
    def check_form(self) -> "Isometry":
        n = self.lattice.rank
        if self.matrix.shape != (n, n):
            raise ShapeError(f"isometry must be {n}x{n}, got {self.matrix.shape}")
        if self.matrix.T @ self.lattice.gram @ self.matrix != self.lattice.gram:
            raise ValueError("matrix does not preserve the Gram form")
        return self

    def __call__(self, v: LatticeVector) -> LatticeVector:
        return LatticeVector(
            coords=tuple(
                sum(self.matrix[i, j] * c for j, c in enumerate(v.coords) if c)
                for i in range(self.matrix.rows)
            ),
            lattice=self.lattice,
        )


class OrbitResult(BaseModel):
    """Vectors reached by an orbit search, in discovery order."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    vectors: List[LatticeVector]
    truncated: bool = False

    @field_serializer("vectors")
    def serialize_vectors(self, vectors: List[LatticeVector]) -> List[List[int]]:
        return [list(v.coords) for v in vectors]

    @computed_field
    @property
    def size(self) -> int:
        return len(self.vectors)


class ComponentClass(BaseModel):
    """
    Connected component of O(3,19) containing an isometry.

    Attributes:
        det: Determinant sign (+1 or -1).
        pos_orientation: Whether orientation of maximal positive subspaces is kept.
    """

    det: Literal[1, -1]
    pos_orientation: Literal["preserving", "reversing"]

    @computed_field
    @property
    def in_SO(self) -> bool:
        return self.det == 1

    @property
    def orientation_sign(self) -> int:
        return 1 if self.pos_orientation == "preserving" else -1

    def __mul__(self, other: "ComponentClass") -> "ComponentClass":
        sign = self.orientation_sign * other.orientation_sign
        return ComponentClass(
            det=self.det * other.det,
            pos_orientation="preserving" if sign > 0 else "reversing",
        )


class PositivePlane(BaseModel):
    """
    A positive-definite 3-plane given by a rational basis (rows).

    Use `grassmann_utils.plane_from_basis` to build one; it checks rank and
    positivity exactly before constructing the model.

    Attributes:
        basis: 3×n rational matrix whose rows span the plane.
        oriented: Whether the row order fixes an orientation.
        lattice: Ambient lattice (not serialized).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    basis: RatMatrix
    oriented: bool = True
    lattice: Lattice = Field(exclude=True)

    @field_validator("basis", mode="before")
    def coerce_basis(cls, value) -> RatMatrix:
        return _as_rat_matrix(value)

    @field_serializer("basis")
    def serialize_basis(self, basis: RatMatrix) -> List[List[str]]:
        return basis.to_strings()

    @model_validator(mode="after")
    def check_shape(self) -> "PositivePlane":
        if self.basis.rows != 3 or self.basis.cols != self.lattice.rank:
            raise ShapeError(
                f"plane basis must be 3x{self.lattice.rank}, got {self.basis.shape}"
            )
        return self


class FixedPlaneCertificate(BaseModel):
    """A positive plane fixed (setwise) by the reflection in `root`."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    root: LatticeVector
    plane: PositivePlane
    residual: float = Field(..., ge=0.0)

    @field_serializer("root")
    def serialize_root(self, root: LatticeVector) -> List[int]:
        return list(root.coords)

    @field_serializer("plane")
    def serialize_plane(self, plane: PositivePlane) -> List[List[str]]:
        return plane.basis.to_strings()


class PlaneDistance(BaseModel):
    """
    Symmetric-space distance between two positive planes.

    Attributes:
        value: Euclidean norm of the hyperbolic principal angles.
        hyperbolic_angles: The three angles, descending (serialized as "angles").
    """

    model_config = ConfigDict(populate_by_name=True)

    value: float = Field(..., ge=0.0)
    hyperbolic_angles: Tuple[float, float, float] = Field(..., alias="angles")

    @field_validator("hyperbolic_angles")
    def validate_angles(cls, value):
        if any(angle < 0 for angle in value):
            raise ValueError("hyperbolic angles must be nonnegative")
        return value

    @model_validator(mode="after")
    def check_norm(self) -> "PlaneDistance":
        norm = sum(angle * angle for angle in self.hyperbolic_angles) ** 0.5
        if abs(norm - self.value) > 1e-9 * max(1.0, norm):
            raise ValueError("distance must be the norm of its angle vector")
        return self


class OrthoSublattice(BaseModel):
    """
    The saturated sublattice τ^⊥ ∩ Λ of a rational positive plane.

    Attributes:
        basis: Rows form a primitive basis, in ambient coordinates.
        restricted_gram: K·G·Kᵀ (negative definite for a positive plane in signature (3, n)).
        plane_lattice: Saturated basis of τ ∩ Λ.
        discriminant: |det(restricted_gram)|, equal to |det| of the plane lattice.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    basis: IntMatrix
    restricted_gram: IntMatrix
    plane_lattice: IntMatrix
    discriminant: int = Field(..., ge=1)

    @field_serializer("basis", "restricted_gram", "plane_lattice")
    def serialize_matrix(self, matrix: IntMatrix) -> List[List[int]]:
        return matrix.to_list()

    @property
    def rank(self) -> int:
        return self.basis.rows


class AdeComponent(BaseModel):
    """An irreducible simply-laced root system A_n (n ≥ 1), D_n (n ≥ 4) or E_n (n = 6, 7, 8)."""

    type: Literal["A", "D", "E"]
    rank: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_rank(self) -> "AdeComponent":
        if self.type == "D" and self.rank < 4:
            raise ValueError("D_n requires n >= 4")
        if self.type == "E" and self.rank not in E_ROOT_COUNTS:
            raise ValueError("E_n requires n in {6, 7, 8}")
        return self

    @property
    def root_count(self) -> int:
        if self.type == "A":
            return self.rank * (self.rank + 1)
        if self.type == "D":
            return 2 * self.rank * (self.rank - 1)
        return E_ROOT_COUNTS[self.rank]

    def __str__(self) -> str:
        return f"{self.type}{self.rank}"


class EnumerationStats(BaseModel):
    """Work counters of one root enumeration."""

    nodes_visited: int = Field(0, ge=0)
    lll_swaps: int = Field(0, ge=0)
    wall_time: float = Field(0.0, ge=0.0, description="Seconds.")


class PeriodVerdict(BaseModel):
    """
    Smooth-vs-orbifold verdict for a positive plane.

    Attributes:
        in_T: True iff no root is orthogonal to the plane.
        root_count: Number of roots (both signs).
        roots: All γ with (γ, γ) = -2 orthogonal to the plane.
        ade: Irreducible components, sorted E, D, A and by descending rank.
        stats: Enumeration counters.
        heuristic: True when the plane was a rational approximation of float input.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    in_T: bool
    root_count: int = Field(..., ge=0)
    roots: List[LatticeVector]
    ade: List[AdeComponent]
    stats: EnumerationStats = Field(default_factory=EnumerationStats)
    heuristic: bool = False

    @field_serializer("roots")
    def serialize_roots(self, roots: List[LatticeVector]) -> List[List[int]]:
        return [list(root.coords) for root in roots]

    @model_validator(mode="after")
    def check_accounting(self) -> "PeriodVerdict":
        if self.in_T != (not self.roots):
            raise ValueError("in_T must hold exactly when there are no roots")
        if self.root_count != len(self.roots):
            raise ValueError("root_count must equal the number of roots")
        if sum(component.root_count for component in self.ade) != self.root_count:
            raise ValueError("ADE component root counts must add up to root_count")
        return self

    @computed_field
    @property
    def label(self) -> str:
        """Compact singularity type such as "2E8+3A1", or "smooth"."""
        if not self.ade:
            return "smooth"
        parts: List[str] = []
        counts: dict = {}
        for component in self.ade:
            name = str(component)
            if name not in counts:
                parts.append(name)
            counts[name] = counts.get(name, 0) + 1
        return "+".join(f"{counts[name]}{name}" if counts[name] > 1 else name for name in parts)


# ---------------------------------------------------------------------------
# CLI file schemas
# ---------------------------------------------------------------------------


class GramFile(BaseModel):
    """JSON document {"gram": [[...]]} describing a custom lattice."""

    gram: List[List[Integer]]
    label: Optional[str] = None


class PlaneFile(BaseModel):
    """JSON document {"basis": [[rational strings]], "oriented": bool}; certificates use "plane"."""

    basis: List[List[RationalOrFloat]] = Field(
        ..., min_length=1, validation_alias=AliasChoices("basis", "plane")
    )
    oriented: bool = True


class MatrixFile(BaseModel):
    """JSON document {"matrix": [[...]]} describing an isometry."""

    matrix: List[List[Integer]]


class VectorFile(BaseModel):
    """A coordinate vector: a bare array, {"coords": [...]} or a certificate's {"root": [...]}."""

    coords: List[Integer] = Field(..., validation_alias=AliasChoices("coords", "root"))


class RootsFile(BaseModel):
    """A root list: a bare array of arrays, {"roots": [[...], ...]} or an orbit's {"vectors": ...}."""

    roots: List[List[Integer]] = Field(..., validation_alias=AliasChoices("roots", "vectors"))
