"""Spectral minimax estimation for smooth functions on graphs.

The package covers both halves of the minimax story at desk scale:
shrinkage estimators that attain the rate n^(-2 beta / (2 beta + r)) over
Laplacian-Sobolev balls, and packing-based certificates for the matching
lower bound, plus a seeded Monte Carlo harness that recovers the rate
empirically.
"""

from .errors import GraphMinimaxError, NumericError, ValidationError
from .fano import (
    FanoCertificate,
    PackingSet,
    bernoulli_kl,
    calibrate_delta,
    certificate_csv_text,
    fano_certificate,
    hard_alternatives,
    kl_link_bound_check,
    vg_packing,
    worst_case_prior_sample,
)
from .graphs import (
    DEFAULT_DENSE_CAP,
    Graph,
    build_grid,
    build_path,
    build_small_world,
    build_torus,
    laplacian,
    load_edge_list,
)
from .harness import (
    ExperimentSpec,
    RateReport,
    aggregate_csv_text,
    fit_rate,
    results_csv_text,
    run_classification_experiment,
    run_experiment,
    run_regression_experiment,
)
from .pinsker import (
    LinkFunction,
    ShrinkagePlan,
    cutoff_N,
    estimate_classification,
    estimate_regression,
    linear_risk,
    pinsker_plan,
    projection_estimate,
    sigmoid_link,
    solve_x,
    sup_risk_over_ellipsoid,
)
from .sobolev import (
    EllipsoidWeights,
    SobolevSpec,
    ellipsoid_weights,
    sample_ball,
    sobolev_form,
)
from .spectral import (
    GeometryFit,
    Spectrum,
    eigendecompose,
    fit_geometry,
    gft_forward,
    gft_inverse,
    path_spectrum_closed_form,
    spectrum_csv_text,
    sup_norm_bound,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DENSE_CAP",
    "EllipsoidWeights",
    "ExperimentSpec",
    "FanoCertificate",
    "GeometryFit",
    "Graph",
    "GraphMinimaxError",
    "LinkFunction",
    "NumericError",
    "PackingSet",
    "RateReport",
    "ShrinkagePlan",
    "SobolevSpec",
    "Spectrum",
    "ValidationError",
    "aggregate_csv_text",
    "bernoulli_kl",
    "build_grid",
    "build_path",
    "build_small_world",
    "build_torus",
    "calibrate_delta",
    "certificate_csv_text",
    "cutoff_N",
    "eigendecompose",
    "ellipsoid_weights",
    "estimate_classification",
    "estimate_regression",
    "fano_certificate",
    "fit_geometry",
    "fit_rate",
    "gft_forward",
    "gft_inverse",
    "hard_alternatives",
    "kl_link_bound_check",
    "laplacian",
    "linear_risk",
    "load_edge_list",
    "path_spectrum_closed_form",
    "pinsker_plan",
    "projection_estimate",
    "results_csv_text",
    "run_classification_experiment",
    "run_experiment",
    "run_regression_experiment",
    "sample_ball",
    "sigmoid_link",
    "sobolev_form",
    "solve_x",
    "spectrum_csv_text",
    "sup_norm_bound",
    "sup_risk_over_ellipsoid",
    "vg_packing",
    "worst_case_prior_sample",
]
