"""Exception hierarchy shared by every module."""


class SolvSolitonError(Exception):
    """Base class for all package errors."""


class JacobiError(SolvSolitonError):
    def __init__(self, triples, message=None):
        self.triples = list(triples)
        shown = ", ".join(str(tuple(i + 1 for i in t)) for t in self.triples[:10])
        super().__init__(message or f"Jacobi identity fails on triples (1-based): {shown}")


class NotSolvable(SolvSolitonError):
    pass


class SingularMatrix(SolvSolitonError):
    pass


class DimensionMismatch(SolvSolitonError):
    pass


class NoSolution(SolvSolitonError):
    pass


class RadicalVerificationFailed(SolvSolitonError):
    pass


class NotSimultaneouslyDiagonalizable(SolvSolitonError):
    pass


class NotSubalgebra(SolvSolitonError):
    pass


class ZeroBracket(SolvSolitonError):
    pass


class BadSplitting(SolvSolitonError):
    pass


class NonNegativeC(SolvSolitonError):
    pass


class OutOfRange(SolvSolitonError):
    pass


class NonConvergence(SolvSolitonError):
    pass


class Inconclusive(SolvSolitonError):
    pass


class ParseError(SolvSolitonError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
