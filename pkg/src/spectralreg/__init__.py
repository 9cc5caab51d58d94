"""Regularized spectral relaxations on graphs and their diffusion equivalents.

The library solves, in closed form, the unit-trace PSD relaxation of the
smallest-nontrivial-eigenvector problem with an entropy, log-determinant or
p-norm penalty, certifies optimality through the duality gap, and verifies
numerically that the optima coincide with trace-normalized heat kernels,
degree-conjugated PageRank resolvents and lazy-walk powers under the
corresponding parameter maps.
"""

from .equivalence import (
    EquivalenceReport,
    SuiteConfig,
    check_heat_kernel_lemma,
    check_lazy_walk_lemma,
    check_pagerank_lemma,
    full_suite,
)
from .estimator import RegularizedSpectralDensity
from .diffusion import (
    DiffusionParams,
    heat_kernel,
    lazy_pagerank_vector,
    lazy_walk_power,
    pagerank_operator,
    pagerank_vector,
    power_demo,
)
from .graphs import (
    Graph,
    WalkMatrices,
    build_walk_matrices,
    graph_from_adjacency,
    graph_to_text,
    lazy_walk,
    parse_graph,
)
from .regularizers import (
    Regularizer,
    alpha_from_lambda,
    entropy,
    eta_for_alpha,
    eta_for_gamma,
    gamma_from_lambda,
    lambda_from_alpha,
    lambda_from_gamma,
    log_det,
    p_norm,
)
from .sampling import (
    SampleConfig,
    empirical_second_moment,
    sample_vector,
    spectral_solve,
    standard_normals,
)
from .solver import (
    OptimalityCertificate,
    SolveReport,
    dual_value,
    oracle_solve,
    solve,
    verify_optimality,
)
from .spectral import (
    DensityMatrix,
    SpectralBasis,
    apply_spectral_function,
    decompose,
    density_from_weights,
    subspace_trace,
)

__all__ = [
    "DensityMatrix",
    "DiffusionParams",
    "EquivalenceReport",
    "Graph",
    "OptimalityCertificate",
    "Regularizer",
    "RegularizedSpectralDensity",
    "SampleConfig",
    "SolveReport",
    "SpectralBasis",
    "SuiteConfig",
    "WalkMatrices",
    "alpha_from_lambda",
    "apply_spectral_function",
    "build_walk_matrices",
    "check_heat_kernel_lemma",
    "check_lazy_walk_lemma",
    "check_pagerank_lemma",
    "decompose",
    "density_from_weights",
    "dual_value",
    "empirical_second_moment",
    "entropy",
    "eta_for_alpha",
    "eta_for_gamma",
    "full_suite",
    "gamma_from_lambda",
    "graph_from_adjacency",
    "graph_to_text",
    "heat_kernel",
    "lambda_from_alpha",
    "lambda_from_gamma",
    "lazy_pagerank_vector",
    "lazy_walk",
    "lazy_walk_power",
    "log_det",
    "oracle_solve",
    "p_norm",
    "pagerank_operator",
    "pagerank_vector",
    "parse_graph",
    "power_demo",
    "sample_vector",
    "solve",
    "spectral_solve",
    "standard_normals",
    "subspace_trace",
    "verify_optimality",
]

__version__ = "0.1.0"
