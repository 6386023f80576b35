"""Image-quality metrics and detection statistics.

PSNR/RMSE/S-MSE are the plain energy formulas; SSIM is the standard mean
local score with an 11x11 Gaussian window (sigma 1.5, K1=0.01, K2=0.03).
Exact-match cases return an infinity sentinel rather than raising.
"""

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import ContractError, DomainError, ParameterError


def _check_same_shape(ref, est):
    ref = np.asarray(ref, dtype=float)
    est = np.asarray(est, dtype=float)
    if ref.shape != est.shape:
        raise ContractError(f"shape mismatch: {ref.shape} vs {est.shape}")
    return ref, est


def rmse(ref, est) -> float:
    ref, est = _check_same_shape(ref, est)
    return float(np.sqrt(np.mean((ref - est) ** 2)))


def psnr(ref, est, peak: float = None) -> float:
    """20 log10(peak / rmse); +inf for identical images."""
    ref, est = _check_same_shape(ref, est)
    if peak is None:
        peak = float(ref.max())
    if not peak > 0:
        raise ParameterError(f"peak must be positive, got {peak}")
    err = rmse(ref, est)
    if err == 0.0:
        return np.inf
    return float(20.0 * np.log10(peak / err))


def smse(ref, est) -> float:
    """Signal energy over error energy, in dB; +inf for identical images."""
    ref, est = _check_same_shape(ref, est)
    sig = float(np.sum(ref**2))
    if sig == 0.0:
        raise DomainError("reference image is all-zero")
    err = float(np.sum((ref - est) ** 2))
    if err == 0.0:
        return np.inf
    return float(10.0 * np.log10(sig / err))


def _ssim_window():
    half = 5
    i = np.arange(-half, half + 1, dtype=float)
    w = np.exp(-(i[:, None] ** 2 + i[None, :] ** 2) / (2.0 * 1.5**2))
    return w / w.sum()


def ssim(ref, est, peak: float = None) -> float:
    """Mean local structural similarity over the valid window positions."""
    ref, est = _check_same_shape(ref, est)
    if min(ref.shape) < 11:
        raise ParameterError(f"images must be at least 11x11, got {ref.shape}")
    if peak is None:
        peak = float(ref.max())
    if not peak > 0:
        raise ParameterError(f"peak must be positive, got {peak}")

    w = _ssim_window()
    conv = lambda a: scipy.signal.fftconvolve(a, w, mode="valid")
    mu_r = conv(ref)
    mu_e = conv(est)
    var_r = conv(ref * ref) - mu_r**2
    var_e = conv(est * est) - mu_e**2
    cov = conv(ref * est) - mu_r * mu_e

    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    num = (2 * mu_r * mu_e + c1) * (2 * cov + c2)
    den = (mu_r**2 + mu_e**2 + c1) * (var_r + var_e + c2)
    return float(np.mean(num / den))


@dataclass
class ConfusionCounts:
    """Visible/invisible decision tallies against ground truth."""

    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.tn + other.tn,
            self.fp + other.fp,
            self.fn + other.fn,
        )


@dataclass
class DetectionMetrics:
    accuracy: float
    f1: float
    sensitivity: float
    specificity: float
    lr_plus: float
    youden_j: float


def detection_metrics(c: ConfusionCounts) -> DetectionMetrics:
    """Single-operating-point statistics from confusion counts.

    Metrics whose denominator is empty come back as NaN sentinels; a perfect
    specificity yields an infinite positive likelihood ratio.
    """
    if c.total == 0:
        raise DomainError("confusion counts are empty")
    accuracy = (c.tp + c.tn) / c.total
    sensitivity = c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else np.nan
    specificity = c.tn / (c.tn + c.fp) if c.tn + c.fp > 0 else np.nan
    f1 = 2 * c.tp / (2 * c.tp + c.fp + c.fn) if 2 * c.tp + c.fp + c.fn > 0 else np.nan
    if np.isnan(sensitivity) or np.isnan(specificity):
        lr_plus = np.nan
        youden_j = np.nan
    else:
        lr_plus = sensitivity / (1.0 - specificity) if specificity < 1.0 else np.inf
        youden_j = sensitivity + specificity - 1.0
    return DetectionMetrics(
        accuracy=accuracy,
        f1=f1,
        sensitivity=sensitivity,
        specificity=specificity,
        lr_plus=lr_plus,
        youden_j=youden_j,
    )
