"""matchlim: asymptotic matching numbers of sparse graphs, three ways.

Exact combinatorial oracles on small graphs, local-recursion / Monte-Carlo
estimators on large sampled graphs, and closed-form Galton-Watson limit
formulas (including the cuckoo-hashing load threshold), cross-validated
against each other.
"""

from .errors import (
    BudgetError,
    GraphParseError,
    InvalidParameterError,
    MatchlimError,
)
from .exact import (
    ExactEngine,
    MatchingPolynomial,
    cylinder_marginal,
    exposure_prob_max,
    free_energy,
    matching_polynomial,
    rep_exact,
    sample_boltzmann,
)
from .graph import (
    Graph,
    Matching,
    RootedGraph,
    ball,
    gen_bipartite,
    gen_configuration,
    gen_erdos_renyi,
    gen_left_regular,
    read_edge_list,
    truncate_degree,
    write_edge_list,
)
from .matching import (
    KarpSipserReport,
    independence_number_bipartite,
    karp_sipser,
    matching_number,
    maximum_matching_bipartite,
    maximum_matching_general,
)
from .pathtree import (
    PathTree,
    build_path_tree,
    estimate_mean_rep_star,
    rep_zero_bounds,
    solve_rep_z,
)
from .population import (
    PopulationResult,
    population_dynamics_z,
    population_dynamics_zero,
)
from .rde import (
    DegreeDistribution,
    RecordSet,
    cuckoo_matched_fraction,
    cuckoo_threshold,
    eval_F,
    eval_F_bipartite,
    eval_g,
    gamma_ugw,
    gamma_uhgw,
    historical_records,
    stationarity_residual,
)

__version__ = "0.1.0"
