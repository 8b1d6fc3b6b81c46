"""Exception types raised across the package."""


class GraphError(ValueError):
    """Base class for all data errors raised by dtqwk."""


class GraphFormatError(GraphError):
    """Input file is missing, empty, or not in the expected layout."""


class GraphValidationError(GraphError):
    """A graph violates a structural invariant (symmetry, sign, labels)."""


class IntegrityError(GraphError):
    """Cross references between inputs are inconsistent."""


class DegenerateGraphError(GraphError):
    """Graph is too small for the requested computation."""


class ConnectivityError(GraphError):
    """Graph is not connected where connectivity is required.

    Attributes
    ----------
    components : list of list of int
        Vertex indices of each connected component, largest first.
    """

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components or []


class PipelineError(GraphError):
    """Feature extraction failed for one graph of a collection."""

    def __init__(self, graph_id, cause):
        super().__init__(f"graph {graph_id!r}: {cause}")
        self.graph_id = graph_id
        self.cause = cause


class DistributionError(ValueError):
    """A probability distribution is not normalised or has negative mass."""
