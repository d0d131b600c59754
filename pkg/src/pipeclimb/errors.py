class PipeClimbError(Exception):
    """Base class for all simulator errors."""


class ConfigError(PipeClimbError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class GeometryError(PipeClimbError, ValueError):
    pass


class PositionError(PipeClimbError, ValueError):
    pass


class RobotLengthError(PipeClimbError, ValueError):
    pass


class AllocationError(PipeClimbError, ValueError):
    pass


class OverCompressionError(PipeClimbError, ValueError):
    pass


class UndefinedAPEError(PipeClimbError, ZeroDivisionError):
    pass


class DivergenceError(PipeClimbError, RuntimeError):
    pass
