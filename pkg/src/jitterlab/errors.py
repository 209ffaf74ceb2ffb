"""
Error Types

Exception hierarchy shared by every jitterlab module. Value-type errors also
derive from ValueError so plain ``except ValueError`` handlers keep working.
"""


class JitterlabError(Exception):
    """Base class for all jitterlab errors"""


class ConfigError(JitterlabError, ValueError):
    """Invalid or unknown configuration values"""


class DimensionError(JitterlabError, ValueError):
    """Array shapes do not match the sampling geometry"""


class QuadratureError(JitterlabError):
    """Quadrature rule construction failed"""

    def __init__(self, message: str, family: str = "", nodes: int = 0):
        super().__init__(message)
        self.family = family
        self.nodes = nodes


class FactorizationError(JitterlabError, ValueError):
    """A matrix expected to be SPD could not be factored"""


class SingularSystemError(JitterlabError):
    """A linear system is too ill-conditioned to solve"""

    def __init__(self, message: str, condition: float = float("inf")):
        super().__init__(message)
        self.condition = condition


class SliceSamplingError(JitterlabError, AssertionError):
    """Slice sampler invariant violated or shrinkage cap exceeded"""


class GibbsError(JitterlabError):
    """Failure inside a Gibbs sweep, with the iteration it happened in"""

    def __init__(self, message: str, iteration: int = -1):
        super().__init__(message)
        self.iteration = iteration


class DiagnosticsError(JitterlabError, ValueError):
    """Chain traces unsuitable for the requested diagnostic"""


class LikelihoodUnderflowError(JitterlabError):
    """Every quadrature summand underflowed for one observation"""

    def __init__(self, message: str, n: int = -1):
        super().__init__(message)
        self.n = n
