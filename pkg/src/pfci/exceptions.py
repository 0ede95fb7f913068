"""Exception hierarchy shared by every stage of the pipeline."""


class PFCIError(Exception):
    """Base class for all errors raised by this package."""


class CycleDetected(PFCIError, ValueError):
    pass


class UnknownNode(PFCIError, KeyError):
    pass


class NodeNotObserved(PFCIError, ValueError):
    pass


class NodeMismatch(PFCIError, ValueError):
    pass


class ConstantColumn(PFCIError, ValueError):
    def __init__(self, name):
        super().__init__(f"column {name!r} has zero variance")
        self.name = name


class NonNumeric(PFCIError, ValueError):
    pass


class IngestionError(PFCIError, ValueError):
    """Malformed CSV input; ``row`` and ``column`` locate the offending cell."""

    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.row = row
        self.column = column


class NotConverged(PFCIError, RuntimeError):
    """Coordinate descent hit its sweep cap. ``fit`` holds the partial solution."""

    def __init__(self, fit, node=None):
        where = f" for node {node}" if node is not None else ""
        super().__init__(f"lasso did not converge{where} after {fit.n_iter} sweeps")
        self.fit = fit
        self.node = node


class SingularSubmatrix(PFCIError, ArithmeticError):
    pass


class MissingSepset(PFCIError, KeyError):
    pass


class OrientationConflict(PFCIError, RuntimeError):
    pass


class ConfigError(PFCIError, ValueError):
    pass


class StageError(PFCIError, RuntimeError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, error):
        super().__init__(f"[{stage}] {type(error).__name__}: {error}")
        self.stage = stage
        self.error = error
