"""Uniformly random perfect graphs via generalised split graphs.

The package samples n-vertex perfect graphs whose law matches the uniform
one up to an exponentially small error, then exploits the sampled
arrangement (central clique plus side parts) to answer questions that are
NP-hard on arbitrary input: independence and clique numbers, 2-clique
colourings, Hamilton cycles or stable-set obstructions, connectivity,
edge colourings, and subgraph densities against the limiting step graphon.
A seeded experiment harness reproduces the distributional limit laws.
"""

from .errors import PerfectgenError, ScaleError, ValidationError
from .generator import (
    Arrangement,
    GenQuadruple,
    exact_gen_law,
    gen,
    gen_minus,
    gen_plus,
    gen_quadruple,
    rho,
)
from .graphcore import (
    Graph,
    from_json,
    graph6_decode,
    graph6_encode,
    to_json,
)
from .graphon import (
    DensityReport,
    StepGraphon,
    cut_norm_lower_greedy,
    t_counts,
    t_graphon,
    wp,
)
from .harness import (
    ExperimentReport,
    ExperimentSpec,
    big_h_vs_ln,
    graph_invariants,
    h_normality_stats,
    run,
)
from .lndist import LDistribution, build, exact_pmf, mu_target
from .partitions import SetPartition, harper_moments, sample_uniform
from .structure import (
    FastAlphaOmega,
    HamiltonOutcome,
    alpha_omega_fast,
    clique_colour_2,
    degree_split,
    hamilton,
    recover_arrangement,
    verify_clique_colouring,
    verify_cycle,
    verify_obstruction,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PerfectgenError",
    "ValidationError",
    "ScaleError",
    "Graph",
    "graph6_encode",
    "graph6_decode",
    "to_json",
    "from_json",
    "LDistribution",
    "build",
    "mu_target",
    "exact_pmf",
    "SetPartition",
    "sample_uniform",
    "harper_moments",
    "GenQuadruple",
    "Arrangement",
    "gen",
    "gen_plus",
    "gen_minus",
    "gen_quadruple",
    "rho",
    "exact_gen_law",
    "FastAlphaOmega",
    "alpha_omega_fast",
    "degree_split",
    "recover_arrangement",
    "clique_colour_2",
    "verify_clique_colouring",
    "HamiltonOutcome",
    "hamilton",
    "verify_cycle",
    "verify_obstruction",
    "StepGraphon",
    "wp",
    "t_graphon",
    "t_counts",
    "DensityReport",
    "cut_norm_lower_greedy",
    "ExperimentSpec",
    "ExperimentReport",
    "run",
    "h_normality_stats",
    "big_h_vs_ln",
    "graph_invariants",
]
