"""Exception types shared across the package."""


class VolisoError(Exception):
    """Base class for all errors raised by voliso."""


class DegenerateBodyError(VolisoError):
    """The body is not full-dimensional (empty interior)."""


class UnboundedBodyError(VolisoError):
    """The half-space intersection is unbounded."""


class SolverError(VolisoError):
    """An iterative solver failed to converge within its iteration cap."""


class InfeasibleDecompositionError(VolisoError):
    """No nonnegative weights reproduce the identity within tolerance."""


class NotJohnPositionError(VolisoError):
    """The body's maximal inscribed ellipsoid is not the unit ball."""


class GaugeError(VolisoError):
    """A gauge evaluator is unusable (non-coercive or ill-posed)."""
