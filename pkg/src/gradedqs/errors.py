"""Exception hierarchy shared by every module of the package."""


class GradedQSError(Exception):
    """Base class; the CLI maps these to exit code 3."""


class StructuralError(GradedQSError, ValueError):
    """Operands live in different rings, have different arity or sizes."""


class PreconditionError(GradedQSError, ValueError):
    pass


class ParseError(GradedQSError, ValueError):
    pass


class NotInvertible(GradedQSError, ArithmeticError):
    pass


class NotInCongruenceSubgroup(PreconditionError):
    """The matrix is not congruent to the identity modulo the irrelevant ideal."""


class OrthogonalityViolation(PreconditionError):
    pass


class DenominatorNotCleared(GradedQSError, ArithmeticError):
    pass


class NotComaximal(PreconditionError):
    pass


class NotUnimodular(PreconditionError):
    pass


class BadLocalData(GradedQSError, ValueError):
    pass
