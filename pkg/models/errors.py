"""
MUBTRIO Errors - one hierarchy for every failure the toolkit reports
"""
from typing import Optional, Tuple


class ChmError(ValueError):
    """Base class for all toolkit errors."""


class NotSquare(ChmError):
    def __init__(self, shape: Tuple[int, ...]):
        self.shape = tuple(shape)
        super().__init__(f"Matrix is not square: shape {self.shape}")


class DimensionMismatch(ChmError):
    def __init__(self, expected: int, got: int, what: str = "dimension"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} mismatch: expected {expected}, got {got}")


class NotUnimodular(ChmError):
    """An entry (or phase) deviates from modulus one."""

    def __init__(self, position: Tuple[int, ...], deviation: float):
        self.position = tuple(position)
        self.deviation = float(deviation)
        super().__init__(
            f"Entry {self.position} is not unimodular (deviation {self.deviation:.3e})"
        )


class NotOrthogonal(ChmError):
    def __init__(self, rows: Tuple[int, int], deviation: float):
        self.rows = tuple(rows)
        self.deviation = float(deviation)
        super().__init__(
            f"Rows {self.rows} are not orthogonal (deviation {self.deviation:.3e})"
        )


class NotUnitary(ChmError):
    def __init__(self, deviation: float, index: Optional[int] = None):
        self.deviation = float(deviation)
        self.index = index
        where = f" (basis {index})" if index is not None else ""
        super().__init__(f"Matrix is not unitary{where}: deviation {self.deviation:.3e}")


class NotZeroSum(ChmError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"Values do not sum to zero (|sum| = {self.residual:.3e})")


class DegenerateMobius(ChmError):
    def __init__(self, kind: str, denominator: float):
        self.kind = kind
        self.denominator = float(denominator)
        super().__init__(
            f"Moebius map M_{kind} is degenerate here (|denominator| = {self.denominator:.3e})"
        )


class ConsistencyFailure(ChmError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(
            f"Moebius cross-check M_A(z2^2) = M_B(z1^2) failed (residual {self.residual:.3e})"
        )


class DomainViolation(ChmError):
    """A parameter lies outside the region where the family is defined."""


class RootSelectionError(ChmError):
    """A Szollosi root selection does not produce a CHM."""

    def __init__(self, message: str, deviation: float = float("nan")):
        self.deviation = float(deviation)
        super().__init__(message)


class BranchFailure(ChmError):
    def __init__(self, theta: float):
        self.theta = float(theta)
        super().__init__(f"No square-root branch yields a CHM at theta={self.theta!r}")


class WrongBranch(ChmError):
    """The requested branch fails but the other one works."""

    def __init__(self, theta: float, requested: int, working_branch: int):
        self.theta = float(theta)
        self.requested = requested
        self.working_branch = working_branch
        super().__init__(
            f"Branch {requested:+d} fails at theta={self.theta!r}; use branch {working_branch:+d}"
        )


class NoUnimodularFixedPoint(ChmError):
    def __init__(self, modulus: float):
        self.modulus = float(modulus)
        super().__init__(f"Fixed point of M_A is off the unit circle (|w| = {self.modulus:.6f})")


class SymmetryFailure(ChmError):
    def __init__(self, deviation: float, message: str = "Matrix is not symmetric"):
        self.deviation = float(deviation)
        super().__init__(f"{message} (deviation {self.deviation:.3e})")


class UnknownFamily(ChmError):
    def __init__(self, name: str, known: Tuple[str, ...] = ()):
        self.name = name
        hint = f"; known families: {', '.join(known)}" if known else ""
        super().__init__(f"Unknown family: {name!r}{hint}")


class MatrixFormatError(ChmError):
    """A matrix file could not be parsed."""
