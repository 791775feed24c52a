"""Link prediction through effective transition probabilities.

The core object is the effective transition matrix of a graph's
transition matrix: entry (i, j) scores how readily a walk started at i
reaches j before returning to i.  It is computed exactly through 2x2
isoradial reductions, or approximately through an l-step truncation that
scales to large networks.  Six standard predictors and a temporal-split
evaluation harness round out the toolkit.
"""

from .baselines import (
    common_neighbors_score,
    hitting_time_score,
    jaccard_score,
    katz_score,
    preferential_attachment_score,
    resistance_distance_score,
    shortest_path_score,
)
from .effective import (
    EffectiveTransitionMatrix,
    GammaSet,
    effective_transition_exact,
    effective_transition_lstep,
    et_score,
    gamma_set,
    lstep_reduction,
    scaled_effective,
)
from .errors import ConfigError, DatasetError, EtlinkError, NumericalError
from .graph import (
    Connectivity,
    DistanceMatrix,
    Graph,
    MatrixVariant,
    TransitionMatrix,
    UNREACHABLE,
    adjacency_matrix,
    bfs_distances,
    build_graph,
    connectivity,
    custom_matrix,
    largest_component,
    neighborhood_within,
    normalized_matrix,
    weighted_matrix,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    PredictorSpec,
    SplitResult,
    accuracy,
    candidate_pairs,
    rank_existing_edges,
    run_experiment,
    score_predictor,
    temporal_split,
    top_k_predict,
)
from .io_formats import (
    EdgeRecord,
    parse_edge_list,
    read_ranked_predictions,
    write_ranked_predictions,
    write_report,
)
from .scores import ScoreTable, quantize_scores, rank_pairs, ranked_pair_list
from .spectral import (
    NumericsConfig,
    ReducedMatrix,
    SpectralData,
    isoradial_reduction,
    sequential_reduction,
    spectral_data,
)

__version__ = "0.1.0"
