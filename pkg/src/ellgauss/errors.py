"""Exception hierarchy.

Every failure the library can signal derives from :class:`EllGaussError`.
Several of them are *fallback signals*: the point-counting pipeline catches
them and switches to a slower but always applicable method for that prime.
"""


class EllGaussError(Exception):
    """Base class for all library errors."""


class NotInvertible(EllGaussError, ArithmeticError):
    """Element of a quotient ring without inverse.

    ``factor`` holds the nontrivial gcd with the modulus (a Poly) when one
    was found, else None.
    """

    def __init__(self, message="element is not invertible", factor=None):
        super().__init__(message)
        self.factor = factor


class DenominatorNotInvertible(NotInvertible):
    """A division polynomial shares a factor with the working modulus."""


class NotSquarefree(EllGaussError):
    pass


class BadOrder(EllGaussError):
    """The characteristic divides a requested root-of-unity order."""


class NoRoot(EllGaussError):
    pass


class SingularSystem(EllGaussError):
    pass


class OracleBudgetExceeded(EllGaussError):
    pass


class CoefficientNotInvariant(EllGaussError):
    pass


class BasisDegenerate(EllGaussError):
    pass


class DegenerateRay(EllGaussError):
    pass


class MismatchError(EllGaussError):
    pass


class ParseError(EllGaussError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PrecondViolated(EllGaussError):
    pass


class ResolventNotInvertible(EllGaussError):
    pass


class NormalBasisFailure(EllGaussError):
    pass


class DegenerateFrobenius(EllGaussError):
    pass


class NoCandidate(EllGaussError):
    pass


class NoEigenvalue(EllGaussError):
    pass


class Ambiguous(EllGaussError):
    pass


class MethodInapplicable(EllGaussError):
    pass


class SingularCurve(EllGaussError):
    pass


class SupersingularCurve(EllGaussError):
    pass


class OracleMismatch(EllGaussError):
    pass
