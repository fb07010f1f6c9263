"""Exception hierarchy.

Every error raised by the library derives from :class:`UniformizeError` so
callers (and the CLI) can separate input problems from internal failures.
"""


class UniformizeError(Exception):
    pass


# -- map construction -------------------------------------------------------

class MapError(UniformizeError, ValueError):
    pass


class NotInvolution(MapError):
    pass


class FixedDart(MapError):
    pass


class Disconnected(MapError):
    pass


class LoopEdge(MapError):
    pass


# -- special functions ------------------------------------------------------

class PhiOutOfRange(UniformizeError, ValueError):
    pass


# -- angle systems ----------------------------------------------------------

class DomainViolation(UniformizeError, ValueError):
    pass


class BoundaryPoint(UniformizeError, ValueError):
    pass


class NotSphere(UniformizeError, ValueError):
    pass


class InvalidFace(UniformizeError, ValueError):
    pass


class NonpositiveThetaV(UniformizeError, ValueError):
    pass


class InvolutionNotFree(UniformizeError, ValueError):
    pass


class NotAutomorphism(UniformizeError, ValueError):
    pass


# -- flows ------------------------------------------------------------------

class BadSigns(UniformizeError, ValueError):
    pass


class Infeasible(UniformizeError):
    """No coherent angle system was found; ``certificate`` holds the cut."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


# -- solver -----------------------------------------------------------------

class NotInterior(UniformizeError, ValueError):
    pass


class MaxIterExceeded(UniformizeError):
    """Raised with the best iterate attached as ``result``."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class UnsupportedMode(UniformizeError, ValueError):
    pass


# -- geometry ---------------------------------------------------------------

class DegenerateTriangle(UniformizeError, ValueError):
    pass


class NotCritical(UniformizeError):
    pass


class LayoutError(UniformizeError):
    pass
