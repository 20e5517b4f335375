# k3period/src/isometry_utils.py
"""
Integer isometries of the K3 lattice: reflections, group operations, the four
components of O(3,19), fixed positive planes of reflections and generator
certificates.

Reflections use s_δ(x) = x − 2·(x, δ)/(δ, δ)·δ, which is integral for
(δ, δ) = ±2; for norm −2 it is x + (x, δ)·δ. Component classification is
measured against the reference plane P₀ = span{e₁+f₁, e₂+f₂, e₃+f₃}.

Dependencies:
    - multiprocessing: Optional parallel certification (results keep input order).
    - src.grassmann_utils: Plane validation, the isometry action and distances.

Usage:
    >>> from k3period.src.lattice_utils import k3_lattice, u_vector
    >>> from k3period.src.isometry_utils import reflection, classify_component
    >>> s = reflection(u_vector(k3_lattice(), 1, 1, -1))
    >>> classify_component(s).pos_orientation
    'preserving'
"""

import random
from collections import deque
from functools import lru_cache
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple

from k3period.src.config_utils import get_settings
from k3period.src.errors import (
    CertificateError,
    InternalCheckError,
    K3PeriodError,
    LatticeMismatchError,
    NotReflectionVectorError,
    PreconditionError,
    ShapeError,
)
from k3period.src.grassmann_utils import apply, distance, plane_from_basis
from k3period.src.lattice_utils import (
    K3_RANK,
    U_OFFSET,
    build_e8,
    check_same_lattice,
    inner,
    k3_lattice,
    vector,
)
from k3period.src.linalg_utils import (
    IntMatrix,
    RatMatrix,
    congruence_diagonalize,
    det_exact,
    int_kernel,
    inv_unimodular,
)
from k3period.src.log_utils import isometry_logger as logger
from k3period.src.models import (
    ComponentClass,
    FixedPlaneCertificate,
    Isometry,
    Lattice,
    LatticeVector,
    OrbitResult,
)


def is_isometry(m: IntMatrix, lattice: Lattice) -> bool:
    """
    Whether mᵀ·G·m = G exactly.

    Raises:
        ShapeError: If m is not rank×rank.
    """
    n = lattice.rank
    if m.shape != (n, n):
        raise ShapeError(f"expected a {n}x{n} matrix, got {m.shape}")
    return m.T @ lattice.gram @ m == lattice.gram


def as_isometry(m: IntMatrix, lattice: Lattice) -> Isometry:
    """Wrap m as an Isometry, raising PreconditionError when it does not preserve the form."""
    if not is_isometry(m, lattice):
        logger.error("Matrix does not preserve the Gram form")
        raise PreconditionError("matrix does not preserve the Gram form")
    return Isometry(matrix=m, lattice=lattice)


def identity(lattice: Lattice) -> Isometry:
    return Isometry(matrix=IntMatrix.identity(lattice.rank), lattice=lattice)


def negative_identity(lattice: Lattice) -> Isometry:
    """The central element −id."""
    return Isometry(matrix=-IntMatrix.identity(lattice.rank), lattice=lattice)


def reflection(delta: LatticeVector) -> Isometry:
    """
    Reflection in a vector of norm ±2.

    Args:
        delta (LatticeVector): Vector with (δ, δ) ∈ {−2, +2}.

    Returns:
        Isometry: Involution with det −1 fixing δ^⊥ pointwise and sending δ to −δ.

    Raises:
        NotReflectionVectorError: If (δ, δ) ∉ {−2, +2}.

    Example:
        >>> s = reflection(u_vector(k3_lattice(), 1, 1, -1))
        >>> s(u_vector(k3_lattice(), 1, 1, 0)).coords[16:18]
        (0, 1)
    """
    L = delta.lattice
    norm = inner(delta, delta)
    if norm not in (-2, 2):
        logger.error(f"Reflection requested for a vector of norm {norm}")
        raise NotReflectionVectorError(f"vector has norm {norm}, expected -2 or 2")
    c = 2 // norm
    d = delta.coords
    gd = [sum(L.gram[j, k] * d[k] for k in range(L.rank) if d[k]) for j in range(L.rank)]
    matrix = [
        [(1 if i == j else 0) - c * d[i] * gd[j] for j in range(L.rank)] for i in range(L.rank)
    ]
    return Isometry(matrix=IntMatrix(matrix, cols=L.rank), lattice=L)


def _check_group(*elements: Isometry) -> Lattice:
    lattice = elements[0].lattice
    for g in elements[1:]:
        if not lattice.same_as(g.lattice):
            logger.error("Isometries act on different lattices")
            raise LatticeMismatchError("isometries act on different lattices")
    return lattice


def compose(g: Isometry, h: Isometry) -> Isometry:
    """g∘h (apply h first)."""
    L = _check_group(g, h)
    return Isometry(matrix=g.matrix @ h.matrix, lattice=L)


def inverse(g: Isometry) -> Isometry:
    """Exact inverse through unimodular inversion."""
    return Isometry(matrix=inv_unimodular(g.matrix), lattice=g.lattice)


def reflection_word(roots: Sequence[LatticeVector], lattice: Optional[Lattice] = None) -> Isometry:
    """s_{δ₁}∘s_{δ₂}∘…∘s_{δₖ}; the identity for an empty word."""
    if not roots:
        return identity(lattice or k3_lattice())
    word = reflection(roots[0])
    for delta in roots[1:]:
        word = compose(word, reflection(delta))
    return word


def reference_basis(lattice: Lattice) -> IntMatrix:
    """Rows e_i + f_i (i = 1, 2, 3) spanning the reference plane P₀."""
    if lattice.rank != K3_RANK:
        raise ShapeError("the reference plane is defined in the rank-22 K3 lattice")
    rows = []
    for block in range(3):
        row = [0] * lattice.rank
        row[U_OFFSET + 2 * block] = row[U_OFFSET + 2 * block + 1] = 1
        rows.append(row)
    return IntMatrix(rows, cols=lattice.rank)


def classify_component(g: Isometry) -> ComponentClass:
    """
    Component of O(3,19) containing g.

    The orientation sign is the sign of det(B₀·G·g·B₀ᵀ) with B₀ the reference
    basis; the 3×3 cross-Gram of two maximal positive subspaces is nonsingular.

    Example:
        >>> classify_component(negative_identity(k3_lattice()))
        ComponentClass(det=1, pos_orientation='reversing')
    """
    L = g.lattice
    det = det_exact(g.matrix)
    B0 = reference_basis(L)
    cross = det_exact(B0 @ L.gram @ g.matrix @ B0.T)
    if cross == 0:
        raise InternalCheckError("reference cross-Gram is singular")
    return ComponentClass(
        det=1 if det > 0 else -1,
        pos_orientation="preserving" if cross > 0 else "reversing",
    )


def fixed_plane(delta: LatticeVector, tol: Optional[float] = None) -> FixedPlaneCertificate:
    """
    Positive plane fixed by the reflection in δ, with its residual.

    For (δ, δ) = −2 the plane is spanned by the first three positive directions
    of the exact diagonalization of δ^⊥ (fixed pointwise). For (δ, δ) = +2 it
    is spanned by the first two positive directions of δ^⊥ and δ itself (fixed
    setwise, orientation reversed).

    Raises:
        NotReflectionVectorError: If (δ, δ) ∉ {−2, +2}.
        InternalCheckError: If the residual exceeds the tolerance.
    """
    L = delta.lattice
    norm = inner(delta, delta)
    if norm not in (-2, 2):
        raise NotReflectionVectorError(f"vector has norm {norm}, expected -2 or 2")
    tol = get_settings().tolerance if tol is None else tol
    d = IntMatrix([delta.coords], cols=L.rank)
    K = int_kernel(d @ L.gram)
    diagonal, P = congruence_diagonalize(K @ L.gram @ K.T)
    directions = P @ K
    needed = 3 if norm == -2 else 2
    rows = [directions.row(i) for i, value in enumerate(diagonal) if value > 0][:needed]
    if len(rows) < needed:
        raise InternalCheckError(f"orthogonal complement has only {len(rows)} positive directions")
    if norm == 2:
        rows.append(tuple(delta.coords))
    plane = plane_from_basis(RatMatrix(rows, cols=L.rank), lattice=L)
    residual = distance(plane, apply(reflection(delta), plane)).value
    if residual > tol:
        raise InternalCheckError(f"fixed-plane residual {residual:.3e} exceeds {tol:.1e}")
    return FixedPlaneCertificate(root=delta, plane=plane, residual=residual)


def _certify_one(index: int, lattice: Lattice, coords: Tuple[int, ...], tol: float):
    """Worker: certificate for one root, or the (index, detail) of its failure."""
    try:
        delta = vector(lattice, coords)
        return fixed_plane(delta, tol), None
    except K3PeriodError as e:
        return None, (index, e.detail)


def certify_generators(
    roots: Sequence[LatticeVector], tol: Optional[float] = None, jobs: Optional[int] = None
) -> List[FixedPlaneCertificate]:
    """
    One fixed-plane certificate per root, in input order.

    Args:
        roots (list[LatticeVector]): Vectors of norm ±2.
        tol (float, optional): Residual tolerance; defaults to settings.
        jobs (int, optional): Worker processes; defaults to settings.

    Returns:
        list[FixedPlaneCertificate]: Certificates matching the input order.

    Raises:
        CertificateError: For the first root that is invalid or exceeds the tolerance.
    """
    settings = get_settings()
    tol = settings.tolerance if tol is None else tol
    jobs = jobs or settings.jobs
    if not roots:
        return []
    lattice = check_same_lattice(*roots)
    work = [(i, lattice, tuple(root.coords), tol) for i, root in enumerate(roots)]
    if jobs > 1 and len(work) > 1:
        with Pool(processes=jobs) as pool:
            pending = [pool.apply_async(_certify_one, args) for args in work]
            pool.close()
            pool.join()
        outcomes = [job.get() for job in pending]
    else:
        outcomes = [_certify_one(*args) for args in work]

    certificates = []
    for certificate, failure in outcomes:
        if failure is not None:
            index, detail = failure
            logger.error(f"Certification failed at root {index}: {detail}")
            raise CertificateError(detail, index)
        certificates.append(certificate)
    logger.info(
        f"Certified {len(certificates)} generators; max residual "
        f"{max(c.residual for c in certificates):.3e}"
    )
    return certificates


def orbit(
    v: LatticeVector, generators: Sequence[Isometry], cap: Optional[int] = None
) -> OrbitResult:
    """
    Breadth-first closure of {v} under the generators and their inverses.

    Args:
        v (LatticeVector): Start vector.
        generators (list[Isometry]): Group generators.
        cap (int, optional): Maximum orbit size; defaults to settings.

    Returns:
        OrbitResult: Vectors in discovery order and whether the cap cut the search short.

    Example:
        >>> L = k3_lattice()
        >>> result = orbit(u_vector(L, 1, 1, 0), [reflection(u_vector(L, 1, 1, -1))])
        >>> [w.coords[16:18] for w in result.vectors]
        [(1, 0), (0, 1)]
    """
    cap = get_settings().orbit_cap if cap is None else cap
    if cap < 1:
        raise PreconditionError("orbit cap must be at least 1")
    for g in generators:
        if not g.lattice.same_as(v.lattice):
            raise LatticeMismatchError("generator acts on a different lattice")
    moves: List[Isometry] = []
    for g in generators:
        moves.append(g)
        g_inv = inverse(g)
        if g_inv.matrix != g.matrix:
            moves.append(g_inv)

    seen = {tuple(v.coords)}
    found = [v]
    queue = deque([v])
    truncated = False
    while queue and not truncated:
        current = queue.popleft()
        for g in moves:
            image = g(current)
            if image.coords in seen:
                continue
            if len(found) >= cap:
                truncated = True
                break
            seen.add(image.coords)
            found.append(image)
            queue.append(image)
    return OrbitResult(vectors=found, truncated=truncated)


@lru_cache(maxsize=1)
def e8_roots() -> Tuple[Tuple[int, ...], ...]:
    """The 240 roots of E8 as the Weyl orbit of a simple root."""
    E8 = build_e8()
    simple = [vector(E8, tuple(int(i == j) for j in range(8))) for i in range(8)]
    result = orbit(simple[0], [reflection(s) for s in simple], cap=1000)
    return tuple(w.coords for w in result.vectors)


def sample_reflection_vector(
    rng: random.Random, lattice: Optional[Lattice] = None, norm: Optional[int] = None
) -> LatticeVector:
    """
    Random vector of norm ±2 in the K3 lattice.

    Three families are drawn with equal probability: U-block vectors
    (±(e_i ± f_i)), E8-block roots, and mixed vectors combining up to two
    E8-block roots with a U-part of matching norm.
    """
    L = lattice or k3_lattice()
    target = norm if norm is not None else rng.choice((-2, 2))
    if target not in (-2, 2):
        raise PreconditionError("reflection vectors have norm -2 or 2")
    coords = [0] * L.rank
    family = rng.choice(("u", "e8", "mixed"))
    if family == "e8" and target == 2:
        family = "mixed"
    if family == "u":
        block = rng.randrange(3)
        sign = rng.choice((-1, 1))
        coords[U_OFFSET + 2 * block] = sign
        coords[U_OFFSET + 2 * block + 1] = sign * (1 if target == 2 else -1)
    elif family == "e8":
        offset = 8 * rng.randrange(2)
        coords[offset:offset + 8] = rng.choice(e8_roots())
    else:
        blocks = rng.sample((0, 8), rng.randint(0, 2))
        for offset in blocks:
            coords[offset:offset + 8] = rng.choice(e8_roots())
        # the U-part must contribute 2·Σ aᵢbᵢ = target + 2·len(blocks)
        remaining = (target + 2 * len(blocks)) // 2
        for block in range(2):
            a, b = rng.randint(-3, 3), rng.randint(-3, 3)
            coords[U_OFFSET + 2 * block] = a
            coords[U_OFFSET + 2 * block + 1] = b
            remaining -= a * b
        a = rng.choice((-1, 1))
        coords[U_OFFSET + 4] = a
        coords[U_OFFSET + 5] = remaining * a
    delta = vector(L, coords)
    if inner(delta, delta) != target:
        raise InternalCheckError(f"sampled vector has norm {inner(delta, delta)}, not {target}")
    return delta
