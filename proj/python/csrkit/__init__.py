"""Scalable classifiers, conformal scores and conformal safety regions."""

from ._core import (
    CalibrationProfile,
    ConvergenceError,
    GaussianKernel,
    InputError,
    LinearKernel,
    PolynomialKernel,
    ScalableModel,
    TrainConfig,
    TrainingError,
    calibrate,
    conformal_set,
    evaluate,
    gen_dns_surrogate,
    gen_two_gaussians,
    in_safe_region,
    in_sigma,
    kernel_eval,
    median_heuristic_gamma,
    quantile,
    region_grid,
    score,
    sweep,
    train,
)

__version__ = "0.1.0"
