"""Exception types raised across the package."""


class GraphSlepianError(ValueError):
    """Base class for validation and computation errors."""


class ParseError(GraphSlepianError):
    """Malformed input file. Carries the offending line number when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class DisconnectedGraphError(GraphSlepianError):
    pass


class ConvergenceError(GraphSlepianError):
    pass
