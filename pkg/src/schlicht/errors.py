"""Exception hierarchy shared by all schlicht modules."""


class SchlichtError(Exception):
    """Base class for all toolkit errors."""


class OrderMismatchError(SchlichtError):
    """Binary series operation applied to series of different orders."""


class SingularInputError(SchlichtError):
    """Series inversion/evaluation at a (numerically) singular input."""


class SingularPointError(SchlichtError):
    """Evaluation requested at a pole of the target function."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class HypothesisError(SchlichtError):
    """A theorem's hypothesis (parameter range, normalization) is violated."""


class BranchTrackingError(SchlichtError):
    """Radial branch continuation failed to produce a usable branch."""
