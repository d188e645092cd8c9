"""Exception hierarchy shared by every module of the package."""


class SemicrossedError(Exception):
    """Base class for all errors raised by this package."""


class MalformedCell(SemicrossedError):
    pass


class NotBijective(SemicrossedError):
    pass


class CommutativityViolation(SemicrossedError):
    def __init__(self, i, j, point, left, right):
        self.i, self.j, self.point = i, j, point
        super().__init__(
            f"generators {i} and {j} do not commute at {point}: "
            f"phi_{i}(phi_{j}(x)) = {left} but phi_{j}(phi_{i}(x)) = {right}"
        )


class PointNotInSpace(SemicrossedError):
    pass


class MaxStepsExceeded(SemicrossedError):
    pass


class SystemMismatch(SemicrossedError):
    pass


class CapTooSmall(SemicrossedError):
    pass


class ZeroDegree(SemicrossedError):
    pass


class NotRecurrent(SemicrossedError):
    pass


class BoundViolated(SemicrossedError):
    pass


class SupportNotWandering(SemicrossedError):
    pass


class InvariantViolation(SemicrossedError):
    """A self-check that holds by theory failed; always a defect."""


class ParseError(SemicrossedError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class UnknownExample(SemicrossedError):
    pass
