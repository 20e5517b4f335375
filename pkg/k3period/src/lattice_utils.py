# k3period/src/lattice_utils.py
"""
Construction and validation of the lattices of the K3 period domain.

This module builds E8 from its Dynkin diagram, the hyperbolic plane U, the
rank-1 lattice A1, negations and direct sums, and the K3 lattice
Λ_K3 = (−E8)⊕(−E8)⊕U⊕U⊕U. It also provides the pairing, the root test,
discriminant groups, basis-vector helpers and the registry-driven loading of
built-in lattices (config/lattices.yaml) and custom Gram files.

Basis order of Λ_K3: indices 0–7 first −E8, 8–15 second −E8, 16–17 = (e₁, f₁),
18–19 = (e₂, f₂), 20–21 = (e₃, f₃).

E8 node numbering: chain nodes 0..6 left to right, branch node 7 attached to
chain node 2.

Dependencies:
    - pydantic: Lattice and LatticeVector models (via src.models).
    - yaml: Built-in lattice registry (via src.config_utils).

Usage:
    >>> from k3period.src.lattice_utils import k3_lattice
    >>> L = k3_lattice()
    >>> L.signature, L.det, L.even
    ((3, 19, 0), -1, True)
"""

import json
from functools import lru_cache
from importlib import import_module
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from pydantic import ValidationError

from k3period.src.config_utils import LATTICES_PATH, load_registry
from k3period.src.errors import LatticeMismatchError, PreconditionError, ShapeError
from k3period.src.linalg_utils import IntMatrix, block_diagonal, snf, vector_form
from k3period.src.log_utils import lattice_logger as logger
from k3period.src.models import GramFile, Lattice, LatticeVector

E8_EDGES: Tuple[Tuple[int, int], ...] = (
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7),
)
K3_RANK = 22
U_OFFSET = 16


def build_e8() -> Lattice:
    """
    Positive definite E8 from its Dynkin diagram.

    Returns:
        Lattice: 8×8 Gram with 2 on the diagonal and −1 exactly on the diagram edges.

    Example:
        >>> build_e8().gram[0, 1]
        -1
    """
    gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in E8_EDGES:
        gram[i][j] = gram[j][i] = -1
    return Lattice(gram=gram, label="e8")


def build_u() -> Lattice:
    """Hyperbolic plane U with Gram [[0, 1], [1, 0]]."""
    return Lattice(gram=[[0, 1], [1, 0]], label="u")


def build_a1() -> Lattice:
    """Rank-1 lattice with Gram [2]."""
    return Lattice(gram=[[2]], label="a1")


def negate(L: Lattice) -> Lattice:
    """The lattice L(−1): same basis, negated form."""
    label = None
    if L.label:
        label = L.label[1:] if L.label.startswith("-") else f"-{L.label}"
    return Lattice(gram=-L.gram, label=label)


def direct_sum(*lattices: Lattice) -> Lattice:
    """
    Orthogonal direct sum with block-diagonal Gram matrix.

    Args:
        *lattices (Lattice): Summands in basis order; rank-0 summands are allowed.

    Returns:
        Lattice: Rank adds, determinants multiply, signatures add componentwise.

    Example:
        >>> direct_sum(build_u(), build_u()).det
        1
    """
    labels = [L.label for L in lattices if L.rank]
    label = "+".join(labels) if labels and all(labels) else None
    return Lattice(gram=block_diagonal(*(L.gram for L in lattices)), label=label)


@lru_cache(maxsize=1)
def k3_lattice() -> Lattice:
    """
    The K3 lattice (−E8)⊕(−E8)⊕U⊕U⊕U.

    Returns:
        Lattice: Even, unimodular, signature (3, 19), det −1 (cached instance).
    """
    minus_e8 = negate(build_e8())
    u = build_u()
    L = direct_sum(minus_e8, minus_e8, u, u, u)
    L = Lattice(gram=L.gram, label="k3")
    if not (L.even and L.unimodular and L.signature == (3, 19, 0)):
        raise PreconditionError("K3 lattice failed its invariant checks")
    return L


def vector(L: Lattice, coords: Sequence[int]) -> LatticeVector:
    """Build a LatticeVector, raising ShapeError on a length mismatch."""
    if len(coords) != L.rank:
        raise ShapeError(f"vector has {len(coords)} coordinates, lattice rank is {L.rank}")
    return LatticeVector(coords=tuple(coords), lattice=L)


def basis_vector(L: Lattice, index: int, scale: int = 1) -> Tuple[int, ...]:
    """Coordinates of scale·b_index."""
    return tuple(scale if i == index else 0 for i in range(L.rank))


def u_vector(L: Lattice, block: int, e: int = 0, f: int = 0) -> LatticeVector:
    """
    The vector e·e_block + f·f_block of Λ_K3 (block in 1..3).

    Example:
        >>> u_vector(k3_lattice(), 1, 1, -1).coords[16:18]
        (1, -1)
    """
    if not 1 <= block <= 3 or L.rank != K3_RANK:
        raise ShapeError("U blocks are numbered 1..3 in the rank-22 K3 lattice")
    coords = [0] * L.rank
    coords[U_OFFSET + 2 * (block - 1)] = e
    coords[U_OFFSET + 2 * (block - 1) + 1] = f
    return vector(L, coords)


def check_same_lattice(*vectors) -> Lattice:
    """Return the common lattice of the arguments or raise LatticeMismatchError."""
    lattice = vectors[0].lattice
    for v in vectors[1:]:
        if not lattice.same_as(v.lattice):
            logger.error("Operands live in different lattices")
            raise LatticeMismatchError("operands belong to different lattices")
    return lattice


def inner(v: LatticeVector, w: LatticeVector) -> int:
    """
    The pairing vᵀ·G·w, exact.

    Raises:
        LatticeMismatchError: If v and w belong to different lattices.
    """
    L = check_same_lattice(v, w)
    return vector_form(v.coords, L.gram, w.coords)


def norm(v: LatticeVector) -> int:
    return inner(v, v)


def is_root(v: LatticeVector) -> Tuple[bool, int]:
    """
    Whether v is a (−2)-class, together with its norm.

    Example:
        >>> is_root(u_vector(k3_lattice(), 1, 1, -1))
        (True, -2)
    """
    value = norm(v)
    return value == -2, value


def discriminant_group(L: Lattice) -> List[int]:
    """
    Invariant factors > 1 of G (the discriminant group L*/L); [] when unimodular.

    A degenerate Gram contributes zeros (infinite cyclic factors).
    """
    return [d for d in snf(L.gram) if d != 1]


def _registry() -> Dict[str, dict]:
    return {entry["name"]: entry for entry in load_registry(LATTICES_PATH, "lattices")}


def builtin_names() -> List[str]:
    return list(_registry())


def load_builtin_lattice(name: str) -> Lattice:
    """
    Instantiate a built-in lattice from config/lattices.yaml.

    Args:
        name (str): One of the enabled registry names (k3, e8, -e8, u, a1, -a1).

    Returns:
        Lattice: The constructed lattice, labelled with its registry name.

    Raises:
        PreconditionError: Unknown name or unloadable builder.
    """
    entry = _registry().get(name)
    if entry is None:
        logger.error(f"Unknown built-in lattice '{name}'")
        raise PreconditionError(f"unknown built-in lattice '{name}'")
    try:
        module = import_module(f"k3period.{entry['module']}")
        builder = getattr(module, entry["builder"])
    except (ImportError, AttributeError) as e:
        logger.error(f"Failed to load builder for {name}: {str(e)}")
        raise PreconditionError(f"cannot load builder for '{name}': {e}") from e
    L = builder()
    if entry.get("negate", False):
        L = negate(L)
    return Lattice(gram=L.gram, label=name)


def load_gram_file(path: Union[str, Path]) -> Lattice:
    """
    Load a custom lattice from a JSON document {"gram": [[...]]}.

    Raises:
        pydantic.ValidationError: Malformed document.
        ShapeError: Non-symmetric Gram matrix.
    """
    with open(path, "r", encoding="utf-8") as file:
        document = GramFile.model_validate(json.load(file))
    gram = IntMatrix(document.gram)
    if not gram.is_symmetric():
        raise ShapeError("Gram matrix must be square and symmetric")
    try:
        return Lattice(gram=gram, label=document.label or Path(path).stem)
    except ValidationError as e:
        logger.error(f"Invalid lattice file {path}: {e}")
        raise
