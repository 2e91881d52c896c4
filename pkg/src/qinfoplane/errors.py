"""Exception types shared across the package."""


class InvalidCircuitError(ValueError):
    """Circuit layout cannot be built (e.g. a ring on fewer than two qubits)."""


class InvalidParametersError(ValueError):
    """Parameter vector does not match the circuit layout."""


class InvalidArgumentError(ValueError):
    pass


class InvalidValueError(ValueError):
    pass


class InvalidStateError(RuntimeError):
    """Operation called on an object in the wrong lifecycle state."""


class ShapeError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


class InvalidDataError(ValueError):
    pass
