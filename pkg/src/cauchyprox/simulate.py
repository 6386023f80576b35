"""Seeded synthetic data: phantoms, degradations, speckle and wake scenes.

Everything is a pure function of (descriptor, seed); replays are bitwise
identical. Phantom content stays away from the borders so the circular blur
boundary does not wrap anything visible.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, ParameterError
from .operators import LinearOperator, blur_operator, compose, downsample_operator

SCENE_KINDS = ("piecewise_smooth", "point_scatterers", "wake_scene")

# canonical hypothesis order used by wake truth flags and reports
HYPOTHESIS_KINDS = (
    "turbulent",
    "narrow_v_port",
    "narrow_v_starboard",
    "kelvin_port",
    "kelvin_starboard",
)

# angular offsets of the arms relative to the turbulent wake, degrees
NARROW_V_OFFSET = 3.0
KELVIN_OFFSET = 19.5

# lateral (radial) offsets of the arms from the turbulent line, pixels;
# keeps the lines from piling up on one point, which would cancel their
# transform-domain signatures
NARROW_V_LATERAL = 5.0
KELVIN_LATERAL = 12.0


@dataclass
class SceneDescriptor:
    kind: str = "piecewise_smooth"
    size: int = 128
    seed: int = 0
    n_scatterers: int = 20
    scatter_amp_lo: float = 0.95
    scatter_amp_hi: float = 1.0
    n_pairs: int = 0
    # wake-scene parameters
    turbulent_angle: float = 70.0
    turbulent_offset: float = 0.0
    turbulent_contrast: float = 0.5
    narrow_v_port_contrast: float = 0.0
    narrow_v_starboard_contrast: float = 0.0
    kelvin_port_contrast: float = 0.0
    kelvin_starboard_contrast: float = 0.0
    sea_looks: float = 10.0
    line_width: float = 1.5

    def __post_init__(self):
        if self.kind not in SCENE_KINDS:
            raise ParameterError(f"unknown scene kind {self.kind!r}")
        if self.size < 32:
            raise ParameterError(f"size must be >= 32, got {self.size}")
        for name in (
            "turbulent_contrast",
            "narrow_v_port_contrast",
            "narrow_v_starboard_contrast",
            "kelvin_port_contrast",
            "kelvin_starboard_contrast",
        ):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")
        if not self.sea_looks > 0:
            raise ParameterError("sea_looks must be positive")

    @property
    def arm_contrasts(self) -> tuple:
        return (
            self.turbulent_contrast,
            self.narrow_v_port_contrast,
            self.narrow_v_starboard_contrast,
            self.kelvin_port_contrast,
            self.kelvin_starboard_contrast,
        )

    @property
    def truth_flags(self) -> tuple:
        if self.kind != "wake_scene":
            raise ParameterError("truth flags exist only for wake scenes")
        return tuple(c > 0 for c in self.arm_contrasts)


def _smooth_field(rng, size, cell=16):
    """Low-frequency random field in [0, 1] from an upsampled coarse grid."""
    coarse = rng.standard_normal((size // cell + 2, size // cell + 2))
    y = np.linspace(0, coarse.shape[0] - 1.001, size)
    x = np.linspace(0, coarse.shape[1] - 1.001, size)
    i0 = y.astype(int)
    j0 = x.astype(int)
    fy = (y - i0)[:, None]
    fx = (x - j0)[None, :]
    f = (
        coarse[np.ix_(i0, j0)] * (1 - fy) * (1 - fx)
        + coarse[np.ix_(i0 + 1, j0)] * fy * (1 - fx)
        + coarse[np.ix_(i0, j0 + 1)] * (1 - fy) * fx
        + coarse[np.ix_(i0 + 1, j0 + 1)] * fy * fx
    )
    lo, hi = f.min(), f.max()
    return (f - lo) / (hi - lo) if hi > lo else np.zeros_like(f)


def gen_phantom(desc: SceneDescriptor) -> np.ndarray:
    """Deterministic phantom in [0, 1] for the given descriptor."""
    rng = np.random.default_rng(desc.seed)
    n = desc.size
    margin = n // 8

    if desc.kind == "point_scatterers":
        img = 0.02 + 0.08 * _smooth_field(rng, n)
        span = n - 2 * margin
        flat = rng.choice(span * span, size=desc.n_scatterers, replace=False)
        rows = margin + flat // span
        cols = margin + flat % span
        img[rows, cols] = rng.uniform(
            desc.scatter_amp_lo, desc.scatter_amp_hi, size=desc.n_scatterers
        )
        # optional close pairs: structure just above the decimated Nyquist
        for _ in range(desc.n_pairs):
            r0, c0 = rng.integers(margin, n - margin - 4, size=2)
            gap = int(rng.integers(2, 4))
            amp = rng.uniform(desc.scatter_amp_lo, desc.scatter_amp_hi)
            img[r0, c0] = amp
            img[r0, c0 + gap] = amp
        return img

    if desc.kind == "wake_scene":
        img, _ = gen_wake_scene(desc)
        return img

    img = 0.15 + 0.3 * _smooth_field(rng, n)
    yy, xx = np.mgrid[0:n, 0:n].astype(float)
    for _ in range(rng.integers(4, 7)):
        cy, cx = rng.uniform(margin, n - margin, size=2)
        ry, rx = rng.uniform(n / 16, n / 5, size=2)
        level = rng.uniform(0.35, 0.95)
        if rng.random() < 0.5:
            mask = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
        else:
            mask = (np.abs(yy - cy) <= ry) & (np.abs(xx - cx) <= rx)
        img[mask] = level
    # sprinkle bright scatterers for SAR-like texture
    span = n - 2 * margin
    flat = rng.choice(span * span, size=max(6, n // 10), replace=False)
    img[margin + flat // span, margin + flat % span] = rng.uniform(0.85, 1.0, flat.size)
    return np.clip(img, 0.0, 1.0)


def sr_forward_operator(psf, factor: int, hi_shape) -> LinearOperator:
    """Blur-then-decimate operator used by both degradation and recovery."""
    H = blur_operator(psf, hi_shape)
    D = downsample_operator(factor, hi_shape)
    return compose(D, H)


def degrade_sr(X, psf, factor: int, bsnr_db: float, seed: int):
    """Blur, decimate and add white Gaussian noise at the requested BSNR.

    Returns the low-resolution observation and the noise sigma actually used,
    so downstream fidelity terms can be weighted consistently.
    """
    X = np.asarray(X, dtype=float)
    A = sr_forward_operator(psf, factor, X.shape)
    clean = A.apply(X)
    sigma = float(np.sqrt(np.var(clean) / 10.0 ** (bsnr_db / 10.0)))
    rng = np.random.default_rng(seed)
    return clean + sigma * rng.standard_normal(clean.shape), sigma


def gen_gamma_speckle(L: float, shape, seed: int) -> np.ndarray:
    """Unit-mean gamma speckle field with variance 1/L."""
    if not L > 0:
        raise ParameterError(f"number of looks must be positive, got {L}")
    rng = np.random.default_rng(seed)
    return rng.gamma(shape=L, scale=1.0 / L, size=shape)


def gen_lognormal_speckle(L: float, shape, seed: int) -> np.ndarray:
    """Unit-mean lognormal speckle field with variance 1/L."""
    if not L > 0:
        raise ParameterError(f"number of looks must be positive, got {L}")
    s2 = math.log1p(1.0 / L)
    rng = np.random.default_rng(seed)
    return rng.lognormal(mean=-0.5 * s2, sigma=math.sqrt(s2), size=shape)


def apply_speckle(X, V) -> np.ndarray:
    """Multiplicative speckle: elementwise product."""
    X = np.asarray(X, dtype=float)
    V = np.asarray(V, dtype=float)
    if X.shape != V.shape:
        raise ContractError(f"shape mismatch: {X.shape} vs {V.shape}")
    return X * V


def awgn(img, sigma: float, seed: int) -> np.ndarray:
    if sigma < 0:
        raise ParameterError(f"sigma must be non-negative, got {sigma}")
    img = np.asarray(img, dtype=float)
    if sigma == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    return img + sigma * rng.standard_normal(img.shape)


def _line_profile(xx, yy, r, theta_deg, width):
    """Anti-aliased ridge 1 at distance 0 from the line, falling off by width."""
    t = math.radians(theta_deg)
    d = np.abs(xx * math.cos(t) + yy * math.sin(t) - r)
    return np.exp(-0.5 * (d / width) ** 2)


def wake_structure_map(desc: SceneDescriptor) -> np.ndarray:
    """Noiseless intensity multiplier map: dark turbulent line, bright arms.

    Arms sit at angular offsets from the turbulent line and are shifted
    laterally so the five lines do not converge on a single point. The
    turbulent streak is rendered wider than the bright arms.
    """
    n = desc.size
    center = (n - 1) / 2.0
    coords = np.arange(n, dtype=float) - center
    xx = coords[None, :]
    yy = coords[:, None]

    placements = (
        (0.0, 0.0, 2.0),
        (NARROW_V_OFFSET, NARROW_V_LATERAL, 1.0),
        (-NARROW_V_OFFSET, -NARROW_V_LATERAL, 1.0),
        (KELVIN_OFFSET, KELVIN_LATERAL, 1.0),
        (-KELVIN_OFFSET, -KELVIN_LATERAL, 1.0),
    )
    structure = np.ones((n, n))
    for kind, contrast, (dtheta, lateral, wscale) in zip(
        HYPOTHESIS_KINDS, desc.arm_contrasts, placements
    ):
        if contrast <= 0:
            continue
        theta = (desc.turbulent_angle + dtheta) % 180.0
        r = desc.turbulent_offset * math.cos(math.radians(dtheta)) + lateral
        profile = _line_profile(xx, yy, r, theta, wscale * desc.line_width)
        sign = -1.0 if kind == "turbulent" else 1.0
        structure += sign * contrast * profile
    return np.clip(structure, 0.05, None)


def gen_wake_scene(desc: SceneDescriptor):
    """Sea-clutter scene with optional wake lines; returns (image, truth flags)."""
    if desc.kind != "wake_scene":
        raise ParameterError("descriptor kind must be wake_scene")
    structure = wake_structure_map(desc)
    sea = gen_gamma_speckle(desc.sea_looks, structure.shape, desc.seed)
    return 0.5 * structure * sea, desc.truth_flags
