# k3period/src/errors.py
"""
Domain errors for the K3 period toolkit.

Every error carries a stable machine-readable ``code``; the CLI turns an
uncaught ``K3PeriodError`` into ``{"error": code, "detail": text}`` on stderr
with exit status 1.
"""


class K3PeriodError(ValueError):
    """Base class for all domain errors raised by k3period."""

    code = "domain"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": self.detail}


class ShapeError(K3PeriodError):
    code = "shape"


class NotUnimodularError(K3PeriodError):
    code = "not-unimodular"


class LatticeMismatchError(K3PeriodError):
    code = "lattice-mismatch"


class NotReflectionVectorError(K3PeriodError):
    code = "not-a-reflection-vector"


class DegenerateBasisError(K3PeriodError):
    code = "degenerate-basis"


class NotPositiveError(K3PeriodError):
    code = "not-positive"


class ExactnessError(K3PeriodError):
    code = "exactness"


class PreconditionError(K3PeriodError):
    code = "precondition"


class ClassificationError(K3PeriodError):
    code = "classification"


class CertificateError(K3PeriodError):
    """Raised by certify_generators; ``index`` points at the offending root."""

    code = "certificate"

    def __init__(self, detail: str, index: int):
        super().__init__(f"root {index}: {detail}")
        self.index = index


class InternalCheckError(K3PeriodError):
    code = "internal"
