"""Exception taxonomy shared by every module.

Two families matter downstream: precondition failures (bad inputs, things
the caller could have checked) and tolerance failures (a quantity that is
provably signed in exact arithmetic came out on the wrong side of the
numerical tolerance).  The command line maps them to exit codes 2 and 3.
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


class EnumerationCapError(PreconditionError):
    """A lattice enumeration would visit more points than the configured cap."""


class CubeAlignmentError(PreconditionError):
    """A cube is not aligned with the sampling grid of the field it addresses."""


class ToleranceError(RuntimeError):
    """A signed quantity fell below its numerical tolerance."""
