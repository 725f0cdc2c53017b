"""Exception types shared across the package."""


class SmlatError(Exception):
    """Base class for all package-specific errors."""


class CycleError(SmlatError):
    """A cover relation whose closure violates antisymmetry."""


class NotAChainError(SmlatError):
    """An argument that must be a chain contains an incomparable pair."""


class NotALatticeError(SmlatError):
    """A poset is not a lattice; carries the offending pair and a reason."""

    def __init__(self, x, y, reason):
        self.x = x
        self.y = y
        self.reason = reason
        super().__init__(f"not a lattice: elements {x} and {y}: {reason}")


class NotSemimodularError(SmlatError):
    """An operation that requires a semimodular lattice got one that is not."""


class NotDistributiveError(SmlatError):
    """An operation that requires a distributive lattice got one that is not."""


class AxiomError(SmlatError):
    """A flat family fails the geometry axioms; carries the axiom report."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"geometry axioms violated: {report.failures()}")


class PreconditionError(SmlatError):
    """A documented precondition was violated; the message names the clause."""


class VerificationError(SmlatError):
    """A postcondition that should hold by theorem failed; always a bug."""


class NotAPartitionError(SmlatError):
    """The given chain family is not a partition of the join-irreducibles."""


class SizeLimitError(SmlatError):
    """An extension pipeline exceeded its element-count limit.

    Carries the partial trace built so far in ``partial``.
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class BoundExceededError(SmlatError):
    """An exhaustive search space is too large to enumerate."""


class CapExceededError(SmlatError):
    """A brute-force oracle was asked to run above its size cap."""


class ParseError(SmlatError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
