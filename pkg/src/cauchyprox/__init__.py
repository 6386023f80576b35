"""Cauchy proximal splitting for imaging inverse problems.

Solves Y = A(X) + N with a non-convex Cauchy penalty whose proximal map has
a closed form, plus L1/TV reference penalties, an operator toolkit and four
SAR-style pipelines (super-resolution, image formation, despeckling, ship
wake detection).
"""

from .errors import (
    ContractError,
    DivergenceError,
    DomainError,
    FormatError,
    InputError,
    ParameterError,
)
from .metrics import ConfusionCounts, DetectionMetrics, detection_metrics, psnr, rmse, smse, ssim
from .operators import (
    LinearOperator,
    adjoint_dot_test,
    blur_operator,
    compose,
    downsample_operator,
    gaussian_psf,
    identity_operator,
    matrix_operator,
    random_measurement_operator,
)
from .penalty import (
    PenaltyConfig,
    cauchy_penalty,
    penalty_value,
    prox_cauchy,
    prox_cauchy_scalar,
    prox_l1,
    prox_l1_scalar,
    prox_tv,
    tv_seminorm,
)
from .problems import (
    bicubic_upsample,
    despeckle,
    form_image,
    matched_filter_recon,
    relative_error,
    superresolve,
)
from .radon import RadonGeometry, backproject, fbp, fbp_operator, radon, radon_geometry
from .simulate import (
    SceneDescriptor,
    apply_speckle,
    awgn,
    degrade_sr,
    gen_gamma_speckle,
    gen_lognormal_speckle,
    gen_phantom,
    gen_wake_scene,
)
from .solver import (
    InverseProblem,
    SolveResult,
    SolverConfig,
    check_convexity_condition,
    cps_solve,
    estimate_operator_norm,
    lipschitz_constant,
)
from .wakes import DetectConfig, WakeHypothesis, WakeReport, classify_detections, detect_wakes
from .wavelet import WaveletCoeffs, dwt2, idwt2

__version__ = "0.1.0"
