"""Exception types raised by girg_lab."""


class GirgLabError(Exception):
    """Base class for all girg_lab errors."""


class ConfigError(GirgLabError, ValueError):
    """Invalid or inconsistent configuration; message names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class GraphFormatError(GirgLabError, ValueError):
    """Malformed edge or vertex-attribute file."""


class DegenerateStripError(GirgLabError, ValueError):
    """The strip partition would have zero strips."""

    def __init__(self, n: int, gamma: float, min_n: int):
        self.n = n
        self.gamma = gamma
        self.min_n = min_n
        super().__init__(
            f"strip count is 0 for n={n}, gamma={gamma}; need n >= {min_n}"
        )


class BudgetExceededError(GirgLabError):
    """An exhaustive computation would exceed its configured budget."""


class DisconnectedGraphError(GirgLabError, ValueError):
    """Operation requires a connected graph."""


class EmptySubgraphError(GirgLabError, ValueError):
    """Induced subgraph has no vertices."""


class UnknownAnalysisError(GirgLabError, KeyError):
    """Requested analysis name is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown analysis"


class ExperimentError(GirgLabError):
    """A module error raised while running one (experiment, seed) cell."""

    def __init__(self, experiment: str, seed: int, analysis: str, cause: Exception):
        self.experiment = experiment
        self.seed = seed
        self.analysis = analysis
        self.cause = cause
        super().__init__(f"experiment {experiment!r} seed={seed} analysis={analysis!r}: {cause}")
