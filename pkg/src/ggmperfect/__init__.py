"""Sampling and exact perfectness checks for Gaussian graphical models."""

from .graph import (
    Couple,
    DiGraph,
    Graph,
    complete_graph,
    cycle_graph,
    dual,
    empty_graph,
    enumerate_couples,
    enumerate_cycles,
    enumerate_paths,
    path_graph,
    quotient_graph,
    random_graph,
    separates,
    separation_relation,
    star_graph,
)
from .linalg import det_exact, det_zero_float, invert_exact, is_pd_float, min_eigenvalue, submatrix
from .parametrization import (
    DeltaAssignment,
    DomainError,
    MarkovianCovariance,
    NormalizedPrecision,
    ParamPoint,
    build_A,
    eps_max,
    is_markovian,
    normalize_linf,
    rescale_xi,
    zeta,
)
from .perfectness import (
    ci_relation,
    d_membership,
    find_bad_eps,
    is_perfect,
    montecarlo_perfectness,
    vanishing_relation,
)
from .poly import (
    Polynomial,
    PolyMatrix,
    build_B_x,
    cycle_lemma_check,
    poly_det,
    real_roots,
    symbolic_vanishing_relation,
)
from .sampler import SamplerConfig, proposal_stream, sample_markovian_cov, sample_mu_G

__version__ = "0.1.0"
