"""Exception hierarchy shared by all susydirac modules."""


class SusyDiracError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZeroJet(SusyDiracError, ZeroDivisionError):
    pass


class BranchCutError(SusyDiracError, ValueError):
    pass


class NonTerminatingSeries(SusyDiracError, ValueError):
    pass


class InvalidC(SusyDiracError, ValueError):
    pass


class InsufficientJetOrder(SusyDiracError, ValueError):
    pass


class ModeOutOfRange(SusyDiracError, ValueError):
    pass


class ZeroKy(SusyDiracError, ValueError):
    pass


class WronskianZero(SusyDiracError, ArithmeticError):
    """A denominator Wronskian (or zero-mode function) vanishes on the grid."""


class QuadratureUnderflow(SusyDiracError, ArithmeticError):
    pass


class SpecError(SusyDiracError, ValueError):
    """Invalid transformation spec, e.g. duplicate factorization energies."""


class DegenerateDensity(SusyDiracError, ValueError):
    pass


class UnsortedInput(SusyDiracError, ValueError):
    pass


class DegenerateInput(SusyDiracError, ValueError):
    pass


class ParseError(SusyDiracError, ValueError):
    """Config text could not be parsed; ``line`` and ``field`` locate the problem."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
