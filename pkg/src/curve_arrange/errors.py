"""Exceptions raised by the arrangement pipeline."""


class ArrangementError(RuntimeError):
    """Base class; ``box`` names the offending region when known."""

    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box

    def diagnostic(self) -> dict:
        out = {"error": type(self).__name__, "message": str(self)}
        if self.box is not None:
            out["box"] = [str(v) for v in self.box]
        return out


class ResolutionLimit(ArrangementError):
    """A box reached the depth limit without being resolved."""


class BoundaryRoot(ArrangementError):
    """A common root could not be separated from the region boundary."""


class AspectRatioError(ValueError):
    """The region of interest is too elongated."""


class InternalError(ArrangementError):
    """An invariant the construction relies on was violated."""
