class InvalidArgumentError(ValueError):
    pass


class PoleError(ArithmeticError):
    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"Pole at {point}: denominator is exactly 0")


class IndeterminateValueError(ArithmeticError):
    def __init__(self, point, message=None):
        self.point = point
        super().__init__(
            message or f"Indeterminate value at {point}: numerator and denominator are 0"
        )


class NumericalError(ArithmeticError):
    pass


class StagnationError(RuntimeError):
    def __init__(self, message, model=None, report=None):
        self.model = model
        self.report = report
        super().__init__(message)


class GenerationError(RuntimeError):
    pass


class SchemaError(ValueError):
    pass


class VersionError(SchemaError):
    pass
