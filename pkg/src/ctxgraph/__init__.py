"""Search for graphs whose exclusivity structure allows fully contextual
quantum correlations (alpha < theta = alpha*), and checks of a concrete
two-qubit realisation."""

from ._backend import BACKEND
from .graphs import (
    CanonicalGraph,
    Graph,
    GraphFormatError,
    are_isomorphic,
    canonical_form,
    enumerate_connected,
    parse_graph6,
    write_graph6,
)
from .invariants import (
    CliqueSet,
    InvariantRecord,
    Theta,
    classify,
    fractional_packing,
    independence_number,
    lovasz_theta,
    maximal_cliques,
    theta_lower_bound_from_representation,
)
from .analysis import ExperimentRecord, WncBound, load_experiment_csv, s_value, wnc_bound
from .scan import ScanReport, survivor_analysis

__version__ = "0.1.0"
