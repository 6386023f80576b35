"""Orthogonal 2D Daubechies-4 wavelet transform with periodization.

Circular (periodized) filtering keeps the transform exactly orthogonal for
every even length, so synthesis is both the inverse and the adjoint of
analysis. Requires dimensions divisible by 2^levels.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# standard db4 (8-tap) reconstruction lowpass filter
_REC_LO = np.array(
    [
        0.23037781330885523,
        0.7148465705525415,
        0.6308807679295904,
        -0.02798376941698385,
        -0.18703481171888114,
        0.030841381835986965,
        0.032883011666982945,
        -0.010597401784997278,
    ]
)
_DEC_LO = _REC_LO[::-1].copy()
_DEC_HI = _REC_LO * np.array([1.0, -1.0] * 4)
_TAPS = len(_REC_LO)


@dataclass
class WaveletCoeffs:
    """Multi-level subband set: one approximation plus per-level details.

    ``details`` is ordered coarsest first; each entry is (horizontal,
    vertical, diagonal).
    """

    approx: np.ndarray
    details: list

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def finest_diagonal(self) -> np.ndarray:
        return self.details[-1][2]

    def energy(self) -> float:
        total = float(np.sum(self.approx**2))
        for bands in self.details:
            total += sum(float(np.sum(b**2)) for b in bands)
        return total


def _analyze_axis(x, axis):
    n = x.shape[axis]
    x = np.moveaxis(x, axis, 0)
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(_TAPS)[None, :]) % n
    win = x[idx]  # (n//2, taps, ...)
    lo = np.tensordot(_DEC_LO, win, axes=(0, 1))
    hi = np.tensordot(_DEC_HI, win, axes=(0, 1))
    return np.moveaxis(lo, 0, axis), np.moveaxis(hi, 0, axis)


def _synthesize_axis(lo, hi, axis):
    lo = np.moveaxis(lo, axis, 0)
    hi = np.moveaxis(hi, axis, 0)
    n = 2 * lo.shape[0]
    out = np.zeros((n,) + lo.shape[1:])
    base = 2 * np.arange(n // 2)
    for m in range(_TAPS):
        out[(base + m) % n] += _DEC_LO[m] * lo + _DEC_HI[m] * hi
    return np.moveaxis(out, 0, axis)


def dwt2(img, levels: int) -> WaveletCoeffs:
    """Separable multi-level analysis of a 2D image."""
    img = np.asarray(img, dtype=float)
    if levels < 1:
        raise ParameterError("levels must be >= 1")
    div = 2**levels
    if img.shape[0] % div or img.shape[1] % div:
        raise ParameterError(
            f"image shape {img.shape} not divisible by 2^{levels}"
        )
    details = []
    approx = img
    for _ in range(levels):
        lo, hi = _analyze_axis(approx, 0)
        ll, lh = _analyze_axis(lo, 1)
        hl, hh = _analyze_axis(hi, 1)
        details.append((lh, hl, hh))
        approx = ll
    details.reverse()  # coarsest first
    return WaveletCoeffs(approx=approx, details=details)


def idwt2(coeffs: WaveletCoeffs) -> np.ndarray:
    """Synthesis; exact inverse (and adjoint) of :func:`dwt2`."""
    approx = coeffs.approx
    for lh, hl, hh in coeffs.details:
        lo = _synthesize_axis(approx, lh, 1)
        hi = _synthesize_axis(hl, hh, 1)
        approx = _synthesize_axis(lo, hi, 0)
    return approx
