"""Exception hierarchy."""


class SmkError(Exception):
    """Base class for numerical failures raised by smklab."""


class TruncationFailure(SmkError):
    """The series cap was hit before the tail mass dropped below tolerance."""


class NonFiniteFunction(SmkError):
    """The integrand returned NaN or infinity at a quadrature node."""


class DegenerateGrid(SmkError):
    """A modulus grid has fewer than two nodes along some axis."""


class LipschitzHintViolated(SmkError):
    """A declared Lipschitz hint fails on the verification grid.

    ``witness`` holds the offending pair of points with both sides of the
    inequality.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness
