"""Functional sliced inverse regression.

Estimates the central space of multiple-index scalar-on-function regression
models by slicing the response, eigendecomposing the conditional-mean
covariance, and inverting the predictor covariance by spectral truncation
(or a ridge shift, as the baseline). Ships seeded synthetic models, subspace
metrics, a Gaussian-process scorer, a bike-sharing loader, and a CLI
experiment harness.
"""

from .curves import (
    Curve,
    FunctionalSample,
    Grid,
    bm_kl_basis,
    center_sample,
    cosine_basis,
    inner_product,
    make_grid,
)
from .datagen import (
    GroundTruth,
    ModelSpec,
    gamma_times,
    gen_model_i,
    gen_model_ii,
    gen_model_iii,
    generate,
    inverse_regression_truth,
)
from .errors import (
    ConfigError,
    DegenerateOperatorError,
    DegenerateSignalError,
    RankDeficiencyError,
    RankDeficiencyWarning,
    SchemaError,
)
from .estimators import (
    CentralSpaceEstimate,
    FsirConfig,
    fit_fsir,
    fit_fsir_sweep,
    fit_rfsir,
    fit_rfsir_sweep,
    inverse_regression_space,
    reduce,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    default_config,
    emit,
    read_result_json,
    run_experiment,
)
from .ingest import load_bike_csv
from .metrics import SubspaceBasis, orthonormalize, subspace_error
from .operators import (
    EigenSystem,
    OperatorMatrix,
    apply,
    eig_top,
    operator_norm,
    outer_product_average,
    ridge_inverse_apply,
    truncated_pinv,
)
from .regression import GpModel, fit_gp, mse, predict
from .slicing import SliceMeans, SlicedPartition, gamma_e_hat, slice_means, slice_sample, wssc_ratio

__version__ = "0.1.0"
