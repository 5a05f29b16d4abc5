"""Exception types shared across the package."""


class CapflowError(Exception):
    """Base class for all package errors."""


class ConfigError(CapflowError):
    """Invalid or unreadable run/sweep configuration."""


class StateFormatError(CapflowError):
    """State file could not be parsed."""


class ConeViolationError(CapflowError):
    """Principal curvatures left the positivity cone required by the speed.

    Carries the first offending grid node and its curvature pair so the
    failure is attributable to a location on the surface.
    """

    def __init__(self, node, kappa, l):
        self.node = tuple(node)
        self.kappa = tuple(float(k) for k in kappa)
        self.l = int(l)
        super().__init__(
            f"curvature vector {self.kappa} at node (beta-row {self.node[0]}, "
            f"xi-col {self.node[1]}) is outside Gamma_+^{self.l}; "
            "the surface lost the convexity the speed function requires"
        )


class BoundaryNewtonError(CapflowError):
    """Ghost-row Newton solve for the contact-angle condition failed."""


class MonitorAbort(CapflowError):
    """A flow run violated one of its a priori estimate budgets."""

    def __init__(self, monitor, message):
        self.monitor = str(monitor)
        super().__init__(f"monitor '{self.monitor}' violated: {message}")


class HypothesisUnmet(CapflowError):
    """Inequality audit requested on a state outside the theorem hypotheses."""
