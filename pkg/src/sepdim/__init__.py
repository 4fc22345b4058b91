"""Separation dimension of graphs: exact values, verified constructions, lower-bound certificates."""

from .constructions import (
    ConstructionReport,
    PartitionSpec,
    RecursionConfig,
    combine_partition_families,
    construct_bounded_degree,
    construct_distance_two,
    lll_partition,
    plan_partition_params,
    scrambling_part_family,
    upper_bound_formula,
)
from .exact import SolveResult, sdim_brute, sdim_exact
from .graph import (
    EdgeColoring,
    Graph,
    Partition,
    distance_two_coloring,
    edge_coloring,
    line_graph,
    random_regular,
    read_graph,
    write_graph,
)
from .lower_bounds import (
    certified_lower_bound,
    exhaustive_lower_bound,
    long_matching,
    separation_graph,
    short_edge_count_bound,
    verify_expansion,
)
from .separation import (
    CoverageSet,
    Permutation,
    PermutationFamily,
    SeparatingEmbedding,
    Verdict,
    coverage,
    embedding_to_family,
    family_to_embedding,
    is_pairwise_suitable,
    separates,
    short_edges,
    verify_embedding,
)

__version__ = "0.1.0"
