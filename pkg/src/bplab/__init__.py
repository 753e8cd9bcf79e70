"""Desk-scale tools for the biclique partition number of random graphs."""

from .graphcore import Graph, GnpSpec, complement, induced_subgraph, parse_graph, sample_gnp, serialize_graph
from .bicliques import (Biclique, BicliquePartition, SpecialWitness, base_sets, is_star, star_cover, star_peel,
                        validate_partition)
from .solver import (BpResult, BudgetExhausted, SearchBudget, eigen_lower_bound, exact_bp, has_special_subgraph,
                     induced_matching_complement, max_independent_set, min_nonstar_partition)

__version__ = "0.1.0"
