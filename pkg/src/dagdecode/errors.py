"""Exception types raised by the lattice toolkit.

Distinct classes keep the failure signals the decoders and the CLI rely
on separable: infeasibility is not the same thing as malformed data.
"""


class LatticeError(Exception):
    """Base class for all package-specific errors."""


class PathShapeError(LatticeError):
    """Path is not strictly increasing, misses an endpoint, or leaves the lattice."""


class ShapeError(LatticeError):
    """An array or sequence does not have the declared dimensions."""


class VocabError(LatticeError):
    """A token id falls outside [0, V)."""


class InfeasibleLengthError(LatticeError):
    """The requested output length admits no decoding path."""


class UnreachableTerminalError(LatticeError):
    """No path of any length reaches the terminal position."""


class DeadEndError(LatticeError):
    """A greedy walk hit a position with no outgoing transition."""


class EnumerationCapError(LatticeError):
    """Lattice too large for exhaustive enumeration."""


class InstanceFormatError(LatticeError):
    """An instance document could not be parsed."""


class InstanceValidationError(LatticeError):
    """A parsed instance violates the distribution invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(self.violations)
        super().__init__(f"instance failed validation: {summary}")


class GeneratorConfigError(LatticeError):
    """Generator configuration cannot produce a valid instance."""
