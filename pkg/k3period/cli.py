# k3period/cli.py
"""
Command-line interface for the K3 period toolkit.

Every command prints exactly one JSON document on stdout. Domain errors are
reported as {"error": code, "detail": text} on stderr with exit status 1;
usage errors (unknown flags, missing files, malformed inline JSON) exit
with status 2. Logs go to the rotating files under the configured log
directory, never to stdout.

Lattices are selected with `--name <builtin>` (k3, e8, -e8, u, a1, -a1) or
`--gram <file>` and default to the K3 lattice. Planes are given as a plane
JSON file or as a name from config/planes.yaml (p0, p1, smooth). Vectors and
roots are inline JSON arrays or paths to JSON files.

Dependencies:
    - click: Command parsing and usage errors.
    - pydantic: Validation of the JSON input documents (via src.models).

Usage:
    >>> python -m k3period.cli lattice-info --name k3
    {"rank": 22, "signature": [3, 19], "det": -1, "even": true, "unimodular": true, ...}
    >>> python -m k3period.cli period-check --plane p0
    {"in_T": false, "root_count": 486, ..., "label": "2E8+3A1"}
"""

import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
from pydantic import ValidationError

from k3period.enumerators.fincke_pohst_enumerator import enumerate_norm
from k3period.src.errors import K3PeriodError
from k3period.src.grassmann_utils import (
    chart_dimension,
    distance,
    load_plane,
    named_planes,
    restricted_gram,
)
from k3period.src.isometry_utils import (
    as_isometry,
    certify_generators,
    classify_component,
    fixed_plane,
    orbit,
    reflection,
)
from k3period.src.lattice_utils import (
    builtin_names,
    discriminant_group,
    load_builtin_lattice,
    load_gram_file,
    vector,
)
from k3period.src.linalg_utils import IntMatrix
from k3period.src.log_utils import cli_logger as logger
from k3period.src.models import (
    Lattice,
    LatticeVector,
    MatrixFile,
    PositivePlane,
    RootsFile,
    VectorFile,
)
from k3period.src.period_utils import period_check


class JsonArgument(click.ParamType):
    """Inline JSON (starting with '[' or '{') or the path of a JSON file."""

    name = "json"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        text = value.strip()
        if text and text[0] in "[{":
            source = text
        else:
            path = Path(value)
            if not path.is_file():
                self.fail(f"'{value}' is neither inline JSON nor an existing file", param, ctx)
            try:
                source = path.read_text(encoding="utf-8")
            except UnicodeDecodeError as e:
                self.fail(f"'{value}' is not UTF-8 text: {e}", param, ctx)
        try:
            return json.loads(source)
        except json.JSONDecodeError as e:
            self.fail(f"invalid JSON in '{value}': {e}", param, ctx)


JSON = JsonArgument()
EXISTING_FILE = click.Path(exists=True, dir_okay=False)


def lattice_options(func):
    """Attach the shared --name/--gram lattice selection."""
    func = click.option(
        "--gram", "gram_path", type=EXISTING_FILE, help='JSON file {"gram": [[...]]}.'
    )(func)
    func = click.option(
        "--name", type=click.Choice(builtin_names()), help="Built-in lattice (default k3)."
    )(func)
    return func


def resolve_lattice(name: Optional[str], gram_path: Optional[str]) -> Lattice:
    if name and gram_path:
        raise click.UsageError("pass either --name or --gram, not both")
    if gram_path:
        return load_gram_file(gram_path)
    return load_builtin_lattice(name or "k3")


def resolve_plane(
    reference: str, lattice: Lattice, heuristic_denominator: Optional[int] = None
) -> tuple:
    """Plane and heuristic flag for a --plane value (registry name or file)."""
    if reference not in named_planes() and not Path(reference).is_file():
        raise click.BadParameter(
            f"'{reference}' is neither a named plane nor an existing file", param_hint="--plane"
        )
    return load_plane(reference, lattice, heuristic_denominator)


def parse_vector(document, lattice: Lattice) -> LatticeVector:
    if isinstance(document, list):
        document = {"coords": document}
    return vector(lattice, VectorFile.model_validate(document).coords)


def parse_roots(document, lattice: Lattice) -> List[LatticeVector]:
    """One root (bare array) or many (array of arrays, {"roots": ...}, {"vectors": ...})."""
    if document == []:
        return []
    if isinstance(document, list):
        if all(isinstance(item, list) for item in document):
            document = {"roots": document}
        else:
            return [parse_vector(document, lattice)]
    elif isinstance(document, dict) and ("coords" in document or "root" in document):
        return [parse_vector(document, lattice)]
    return [vector(lattice, coords) for coords in RootsFile.model_validate(document).roots]


def read_isometry(path: str, lattice: Lattice):
    with open(path, "r", encoding="utf-8") as file:
        document = MatrixFile.model_validate(json.load(file))
    return as_isometry(IntMatrix(document.matrix), lattice)


def plane_document(P: PositivePlane) -> dict:
    return {"basis": P.basis.to_strings(), "oriented": P.oriented}


def emit(document: dict) -> None:
    click.echo(json.dumps(document))


@click.group()
def cli():
    """Exact computations on the K3 lattice and its period domain."""


@cli.command("lattice-info")
@lattice_options
def lattice_info(name, gram_path):
    """Rank, signature, determinant, parity and discriminant group of a lattice."""
    L = resolve_lattice(name, gram_path)
    p, n, z = L.signature
    document = {
        "rank": L.rank,
        "signature": [p, n],
        "det": L.det,
        "even": L.even,
        "unimodular": L.unimodular,
        "discriminant_group": discriminant_group(L),
        "label": L.label,
    }
    if z:
        document["nullity"] = z
    emit(document)


@cli.command("roots-enum")
@lattice_options
@click.option("--norm", type=int, help="Target norm; defaults to -2 on negative definite lattices, else 2.")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker processes (default 1).")
def roots_enum(name, gram_path, norm, jobs):
    """All vectors of a given norm in a definite lattice."""
    L = resolve_lattice(name, gram_path)
    if norm is None:
        norm = -2 if L.signature[1] == L.rank else 2
    if norm == 0:
        raise click.BadParameter("norm must be nonzero", param_hint="--norm")
    gram = L.gram if norm > 0 else -L.gram
    vectors, stats = enumerate_norm(gram, abs(norm), jobs=jobs)
    logger.info(f"roots-enum on {L.label}: {len(vectors)} vectors of norm {norm}")
    emit(
        {
            "lattice": L.label,
            "norm": norm,
            "count": len(vectors),
            "roots": [list(v) for v in vectors],
            "stats": stats.model_dump(exclude={"wall_time"}),
        }
    )


@cli.command("reflect")
@lattice_options
@click.option("--root", "root_doc", type=JSON, required=True, help="Vector of norm -2 or 2.")
@click.option("--vector", "vector_doc", type=JSON, help="Vector to reflect; omit for the matrix.")
def reflect(name, gram_path, root_doc, vector_doc):
    """The reflection in a ±2-vector, or its value on one vector."""
    L = resolve_lattice(name, gram_path)
    delta = parse_vector(root_doc, L)
    s = reflection(delta)
    if vector_doc is None:
        emit({"root": list(delta.coords), **s.model_dump(mode="json")})
    else:
        image = s(parse_vector(vector_doc, L))
        emit({"root": list(delta.coords), "coords": list(image.coords)})


@cli.command("isometry-classify")
@lattice_options
@click.option("--matrix", "matrix_path", type=EXISTING_FILE, required=True)
def isometry_classify(name, gram_path, matrix_path):
    """Connected component of O(3,19) containing an isometry."""
    L = resolve_lattice(name, gram_path)
    g = read_isometry(matrix_path, L)
    emit(classify_component(g).model_dump(mode="json"))


@cli.command("plane-check")
@lattice_options
@click.option("--plane", required=True, help="Plane JSON file or named plane (p0, p1, smooth).")
def plane_check(name, gram_path, plane):
    """Validate a rational positive plane and report its restricted Gram."""
    L = resolve_lattice(name, gram_path)
    P, _ = resolve_plane(plane, L)
    emit(
        {
            "valid": True,
            **plane_document(P),
            "restricted_gram": restricted_gram(P).to_strings(),
            "chart_dimension": chart_dimension(L),
        }
    )


@cli.command("period-check")
@lattice_options
@click.option("--plane", required=True, help="Plane JSON file or named plane (p0, p1, smooth).")
@click.option(
    "--heuristic-denominator",
    type=click.IntRange(min=1),
    help="Approximate float planes by rationals with this denominator bound.",
)
@click.option("--jobs", type=click.IntRange(min=1), help="Worker processes (default 1).")
def period_check_command(name, gram_path, plane, heuristic_denominator, jobs):
    """Smooth-or-orbifold verdict with the ADE type of the orthogonal roots."""
    L = resolve_lattice(name, gram_path)
    P, heuristic = resolve_plane(plane, L, heuristic_denominator)
    verdict = period_check(P, jobs=jobs, heuristic=heuristic)
    emit(verdict.model_dump(mode="json", exclude={"stats": {"wall_time"}}))


@cli.command("fixed-plane")
@lattice_options
@click.option("--root", "root_doc", type=JSON, required=True, help="Vector of norm -2 or 2.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), help="Residual tolerance (default 1e-9).")
def fixed_plane_command(name, gram_path, root_doc, tol):
    """A positive plane fixed by the reflection in a ±2-vector."""
    L = resolve_lattice(name, gram_path)
    emit(fixed_plane(parse_vector(root_doc, L), tol).model_dump(mode="json"))


@cli.command("certify")
@lattice_options
@click.option("--root", "root_doc", type=JSON, required=True, help="Root, list of roots or roots file.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), help="Residual tolerance (default 1e-9).")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker processes (default 1).")
def certify(name, gram_path, root_doc, tol, jobs):
    """Fixed-plane certificates for a list of reflection generators."""
    L = resolve_lattice(name, gram_path)
    certificates = certify_generators(parse_roots(root_doc, L), tol=tol, jobs=jobs)
    emit(
        {
            "count": len(certificates),
            "max_residual": max((c.residual for c in certificates), default=0.0),
            "certificates": [c.model_dump(mode="json") for c in certificates],
        }
    )


@cli.command("distance")
@lattice_options
@click.option("--plane", "planes", multiple=True, help="Pass exactly twice.")
def distance_command(name, gram_path, planes):
    """Symmetric-space distance between two positive planes."""
    if len(planes) != 2:
        raise click.UsageError("distance needs exactly two --plane arguments")
    L = resolve_lattice(name, gram_path)
    P, _ = resolve_plane(planes[0], L)
    Q, _ = resolve_plane(planes[1], L)
    emit(distance(P, Q).model_dump(mode="json", by_alias=True))


@cli.command("orbit")
@lattice_options
@click.option("--vector", "vector_doc", type=JSON, required=True, help="Start vector.")
@click.option("--root", "root_docs", type=JSON, multiple=True, help="Reflection generator(s).")
@click.option("--matrix", "matrix_paths", type=EXISTING_FILE, multiple=True, help="Isometry generator.")
@click.option("--cap", type=click.IntRange(min=1), help="Maximum orbit size (default 10000).")
def orbit_command(name, gram_path, vector_doc, root_docs, matrix_paths, cap):
    """Orbit of a vector under reflections and isometries, up to the cap."""
    L = resolve_lattice(name, gram_path)
    v = parse_vector(vector_doc, L)
    generators = [reflection(delta) for doc in root_docs for delta in parse_roots(doc, L)]
    generators += [read_isometry(path, L) for path in matrix_paths]
    result = orbit(v, generators, cap)
    if result.truncated:
        logger.warning(f"Orbit truncated at {result.size} vectors")
    emit(result.model_dump(mode="json"))


def error_document(e: ValidationError) -> dict:
    """Error object for an input document that failed schema validation."""
    for error in e.errors():
        cause = error.get("ctx", {}).get("error")
        if isinstance(cause, K3PeriodError):
            return cause.to_dict()
    detail = "; ".join(
        f"{'.'.join(str(part) for part in error['loc']) or 'document'}: {error['msg']}"
        for error in e.errors()
    )
    return {"error": "invalid-input", "detail": detail}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and return its exit status.

    Args:
        argv (list[str], optional): Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        int: 0 on success, 1 on domain errors, 2 on usage errors.
    """
    args = list(sys.argv[1:] if argv is None else argv)
    logger.info(f"Invoked with {args}")
    try:
        status = cli.main(args=args, prog_name="k3period", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 2
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except K3PeriodError as e:
        logger.error(f"{e.code}: {e.detail}")
        click.echo(json.dumps(e.to_dict()), err=True)
        return 1
    except ValidationError as e:
        document = error_document(e)
        logger.error(f"{document['error']}: {document['detail']}")
        click.echo(json.dumps(document), err=True)
        return 1
    except json.JSONDecodeError as e:
        logger.error(f"Malformed JSON input: {e}")
        click.echo(json.dumps({"error": "invalid-input", "detail": str(e)}), err=True)
        return 1
    except UnicodeDecodeError as e:
        logger.error(f"Input is not UTF-8: {e}")
        click.echo(json.dumps({"error": "invalid-input", "detail": str(e)}), err=True)
        return 1
    except OSError as e:
        logger.error(f"Unreadable input: {e}")
        click.echo(json.dumps({"error": "invalid-input", "detail": str(e)}), err=True)
        return 1
    return status if isinstance(status, int) else 0


if __name__ == "__main__":
    sys.exit(run())
