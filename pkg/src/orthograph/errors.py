"""Shared exception types."""


class BudgetError(RuntimeError):
    """An enumeration or construction exceeded its configured size budget."""


class VertexSetMismatch(ValueError):
    """Two graphs were combined or compared across different vertex sets."""


class SettingMismatch(ValueError):
    """A graph shape is not admissible for the requested setting."""


class SingularBlockError(ArithmeticError):
    """An exact linear solve hit a singular Gram block."""

    def __init__(self, message, block=None, n=None):
        super().__init__(message)
        self.block = block
        self.n = n
