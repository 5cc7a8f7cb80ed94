"""Exception hierarchy shared by all modules."""


class GenAWError(Exception):
    """Base class for numerical and validation failures."""


class InvalidParameters(GenAWError, ValueError):
    """A parameter set violates an admissibility condition."""


class NonConvergent(GenAWError):
    pass


class NoConvergence(NonConvergent):
    pass


class DenominatorVanished(GenAWError, ZeroDivisionError):
    pass


class SingularDenominator(GenAWError, ZeroDivisionError):
    pass


class ZeroArgument(GenAWError, ValueError):
    pass


class OutOfInterval(GenAWError, ValueError):
    pass


class DegenerateLatticePoint(GenAWError, ZeroDivisionError):
    pass


class ConfluentPoints(GenAWError, ValueError):
    pass


class SingularKappa(GenAWError, ZeroDivisionError):
    pass


class DegenerateKappaS(GenAWError, ZeroDivisionError):
    pass


class IllConditioned(GenAWError):
    pass
