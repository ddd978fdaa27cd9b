"""Exception types raised by slicescale."""


class SliceScaleError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SliceScaleError, ValueError):
    """Shapes of tensors, targets or scaling vectors do not agree."""


class ZeroSliceError(SliceScaleError, ValueError):
    """The tensor has at least one slice with no positive entry."""

    def __init__(self, slices):
        self.slices = list(slices)
        shown = ", ".join(f"(mode {k}, index {i})" for k, i in self.slices[:8])
        more = "" if len(self.slices) <= 8 else f" and {len(self.slices) - 8} more"
        super().__init__(f"zero slice(s): {shown}{more}")


class IncompatibleTargetsError(SliceScaleError, ValueError):
    """Target slice sums are nonpositive or their mode totals disagree."""


class ScalingOverflowError(SliceScaleError, OverflowError):
    """An exponent sum exceeded the configured cap."""


class SolverError(SliceScaleError, RuntimeError):
    """A numerical routine failed to produce an answer (not a verdict)."""


class FormatError(SliceScaleError, ValueError):
    """A tensor or targets file could not be parsed."""

    def __init__(self, message, lineno=None, path=None):
        self.message = message
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"line {lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)
