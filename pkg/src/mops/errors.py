"""Exception hierarchy shared by every module."""


class MopsError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(MopsError):
    pass


class WindowTooSmall(MopsError):
    pass


class StructuralZeroViolation(MopsError):
    """A window has a nonzero entry outside its declared band."""


class IndexOutOfRange(MopsError):
    pass


class DivergentSeries(MopsError):
    def __init__(self, weight, message):
        super().__init__(f"weight {weight}: {message}")
        self.weight = weight


class PochhammerPole(MopsError):
    pass


class TailNotCertifiable(MopsError):
    pass


class TailCertificateExceeded(MopsError):
    """A moment order beyond the one protected by the tail certificate was requested."""


class NonPerfectSystem(MopsError):
    """A leading principal minor of the moment matrix vanishes.

    ``index`` is the order ``m`` of the vanishing tau function ``tau_m``.
    """

    def __init__(self, index):
        super().__init__(f"tau_{index} = 0: weight system is not perfect at step {index}")
        self.index = index


class TruncationMismatch(MopsError):
    pass


class WrongKind(MopsError):
    pass


class WrongP(MopsError):
    pass


class InvalidParameters(MopsError):
    pass
