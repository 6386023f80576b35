"""Ship-wake detection in the Radon domain.

The observed scene is modelled as an (approximately) inverse-Radon transform
of a line-domain image, so solving the inverse problem concentrates linear
features into isolated extrema. Candidate locations come from per-angle
median-adjusted deviations; visibility decisions use robust z-scores so the
threshold is expressed in noise units.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ParameterError
from .metrics import ConfusionCounts
from .penalty import PenaltyConfig
from .radon import RadonGeometry, fbp_operator, ray_support
from .simulate import HYPOTHESIS_KINDS
from .solver import InverseProblem, SolveResult, SolverConfig, cps_solve


@dataclass
class WakeHypothesis:
    kind: str
    r: float
    theta: float
    polarity: str
    decided_visible: bool
    score: float


@dataclass
class WakeReport:
    hypotheses: list
    omega_hat: np.ndarray
    zscores: np.ndarray
    solve: SolveResult

    def flags(self) -> tuple:
        return tuple(h.decided_visible for h in self.hypotheses)


@dataclass
class DetectConfig:
    """Angular search windows (degrees) and the visibility threshold.

    ``tau`` is in robust z-units; extremes of a pure-noise z-map over the
    masked sinogram run to about +-5.5, so the default sits above that.
    ``guard`` excludes the turbulent line's own angular neighbourhood from
    the narrow-V windows, and the Kelvin window is widened past the 19.5
    degree half-angle to absorb anchor jitter. ``support_frac`` masks out
    short corner-clipping rays.
    """

    narrow_v_window: float = 5.0
    kelvin_lo: float = 14.0
    kelvin_hi: float = 22.0
    guard: float = 1.5
    tau: float = 6.5
    support_frac: float = 0.35
    sigma: float = None

    def __post_init__(self):
        if not 0 < self.guard < self.narrow_v_window:
            raise ParameterError("need 0 < guard < narrow_v_window")
        if not 0 < self.kelvin_lo < self.kelvin_hi:
            raise ParameterError("need 0 < kelvin_lo < kelvin_hi")
        if not self.tau > 0:
            raise ParameterError("tau must be positive")
        if not 0 < self.support_frac < 1:
            raise ParameterError("support_frac must be in (0, 1)")


def _column_stats(omega, mask):
    """Median-adjusted deviations and robust z-scores per angle column."""
    dev = np.zeros_like(omega)
    z = np.zeros_like(omega)
    mads = np.zeros(omega.shape[0])
    for a in range(omega.shape[0]):
        sel = mask[a]
        if not np.any(sel):
            continue
        med = np.median(omega[a, sel])
        dev[a] = np.where(sel, omega[a] - med, 0.0)
        mads[a] = np.median(np.abs(dev[a, sel]))
    # floor each angle's spread with the global one so a column the prior
    # drove to near-zero cannot inflate its z-scores without bound
    positive = mads[mads > 0]
    floor = float(np.median(positive)) if positive.size else 0.0
    for a in range(omega.shape[0]):
        scale = 1.4826 * max(mads[a], floor)
        if scale > 0:
            z[a] = dev[a] / scale
    return dev, z


def _angle_offsets(angles, anchor):
    """Signed angular differences folded into (-90, 90] degrees."""
    return (np.asarray(angles) - anchor + 90.0) % 180.0 - 90.0


def detect_wakes(
    Y,
    geom: RadonGeometry,
    penalty: PenaltyConfig,
    solver_cfg: SolverConfig = None,
    detect_cfg: DetectConfig = None,
) -> WakeReport:
    """Estimate the line-domain image and decide the five wake hypotheses.

    The turbulent wake anchors at the most negative masked deviation; the
    four arm hypotheses search bright maxima in angular windows around it.
    """
    detect_cfg = detect_cfg or DetectConfig()
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        raise ContractError(f"wake detection needs a square image, got {Y.shape}")
    if Y.shape[0] != geom.size:
        raise ContractError(f"image size {Y.shape[0]} does not match geometry {geom.size}")

    centered = Y - float(np.median(Y))
    sigma = detect_cfg.sigma
    if sigma is None:
        sigma = 1.4826 * float(np.median(np.abs(centered)))
    sigma = max(float(sigma), 1e-12)

    C = fbp_operator(geom)
    result = cps_solve(InverseProblem(centered, C, sigma, penalty), solver_cfg)
    omega = result.solution

    support = ray_support(geom)
    mask = support >= detect_cfg.support_frac * float(support.max())
    dev, z = _column_stats(omega, mask)

    angles = np.asarray(geom.angles_deg)
    if np.any(mask):
        ai, oi = np.unravel_index(int(np.argmin(np.where(mask, dev, np.inf))), dev.shape)
        turb_score = float(z[ai, oi])
        turb_theta = float(angles[ai])
        turb_r = float(geom.offset_of_bin(oi))
    else:
        turb_score, turb_theta, turb_r = 0.0, 0.0, 0.0

    hypotheses = [
        WakeHypothesis(
            kind="turbulent",
            r=turb_r,
            theta=turb_theta,
            polarity="dark",
            decided_visible=turb_score <= -detect_cfg.tau,
            score=turb_score,
        )
    ]

    # port is the angle-increasing side of the turbulent wake
    rel = _angle_offsets(angles, turb_theta)
    windows = (
        (detect_cfg.guard, detect_cfg.narrow_v_window),
        (-detect_cfg.narrow_v_window, -detect_cfg.guard),
        (detect_cfg.kelvin_lo, detect_cfg.kelvin_hi),
        (-detect_cfg.kelvin_hi, -detect_cfg.kelvin_lo),
    )
    for kind, (lo, hi) in zip(HYPOTHESIS_KINDS[1:], windows):
        sel = np.where((rel >= lo) & (rel <= hi))[0]
        usable = sel.size > 0 and np.any(mask[sel])
        if not usable:
            hypotheses.append(WakeHypothesis(kind, 0.0, turb_theta, "bright", False, 0.0))
            continue
        sub = np.where(mask[sel], dev[sel], -np.inf)
        wa, wo = np.unravel_index(int(np.argmax(sub)), sub.shape)
        score = float(z[sel[wa], wo])
        hypotheses.append(
            WakeHypothesis(
                kind=kind,
                r=float(geom.offset_of_bin(wo)),
                theta=float(angles[sel[wa]]),
                polarity="bright",
                decided_visible=score >= detect_cfg.tau,
                score=score,
            )
        )

    return WakeReport(hypotheses=hypotheses, omega_hat=omega, zscores=z, solve=result)


def classify_detections(report: WakeReport, truth_flags) -> ConfusionCounts:
    """Compare per-hypothesis decisions against ground-truth visibility."""
    truth_flags = tuple(bool(f) for f in truth_flags)
    if len(truth_flags) != len(HYPOTHESIS_KINDS):
        raise ParameterError(f"expected {len(HYPOTHESIS_KINDS)} truth flags")
    counts = ConfusionCounts()
    for hyp, truth in zip(report.hypotheses, truth_flags):
        if truth and hyp.decided_visible:
            counts.tp += 1
        elif truth and not hyp.decided_visible:
            counts.fn += 1
        elif not truth and hyp.decided_visible:
            counts.fp += 1
        else:
            counts.tn += 1
    return counts
