"""Discrete Radon transform, back-projection and filtered back-projection.

The transform is pixel-driven: each pixel splats onto the two nearest radial
bins with linear weights, so back-projection (the transpose of the same
sparse matrix) is the exact numerical adjoint. The Ram-Lak filter acts per
projection as a circular convolution with a real, even frequency response,
which makes it self-adjoint; the FBP operator pair inherits exact adjointness
from those two facts.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse

from .errors import ContractError, ParameterError
from .operators import LinearOperator

FILTER_KINDS = ("none", "ram_lak")


@dataclass(frozen=True)
class RadonGeometry:
    """Projection geometry for square size x size images."""

    size: int
    angles_deg: tuple
    n_offsets: int
    filter: str = "ram_lak"

    def __post_init__(self):
        if self.size < 2:
            raise ParameterError(f"size must be >= 2, got {self.size}")
        angles = np.asarray(self.angles_deg, dtype=float)
        if angles.ndim != 1 or angles.size == 0:
            raise ParameterError("angles_deg must be a non-empty 1D sequence")
        if np.any(angles < 0) or np.any(angles >= 180):
            raise ParameterError("angles must lie in [0, 180)")
        if np.any(np.diff(angles) <= 0):
            raise ParameterError("angles must be strictly increasing")
        diagonal = math.ceil(math.sqrt(2.0) * self.size)
        if self.n_offsets < diagonal:
            raise ParameterError(
                f"n_offsets {self.n_offsets} below image diagonal {diagonal}"
            )
        if self.filter not in FILTER_KINDS:
            raise ParameterError(f"unknown filter {self.filter!r}")

    @property
    def n_angles(self) -> int:
        return len(self.angles_deg)

    @property
    def sino_shape(self) -> tuple:
        return (self.n_angles, self.n_offsets)

    @property
    def offset_center(self) -> float:
        return (self.n_offsets - 1) / 2.0

    def offset_of_bin(self, bin_index) -> np.ndarray:
        """Signed radial offset (pixels from image center) of a bin index."""
        return np.asarray(bin_index, dtype=float) - self.offset_center


def radon_geometry(size: int, angle_step: float = 1.0, filter: str = "ram_lak") -> RadonGeometry:
    """Geometry with angles 0, step, ... below 180 and diagonal-covering bins."""
    angles = tuple(np.arange(0.0, 180.0, angle_step))
    return RadonGeometry(
        size=size,
        angles_deg=angles,
        n_offsets=math.ceil(math.sqrt(2.0) * size),
        filter=filter,
    )


@lru_cache(maxsize=8)
def _system_matrix(geom: RadonGeometry) -> scipy.sparse.csr_matrix:
    n = geom.size
    center = (n - 1) / 2.0
    coords = np.arange(n, dtype=float) - center
    xx = np.tile(coords, n)            # column coordinate, row-major raveling
    yy = np.repeat(coords, n)          # row coordinate
    pixel = np.arange(n * n)

    rows, cols, vals = [], [], []
    for a, theta in enumerate(geom.angles_deg):
        t = math.radians(theta)
        offs = xx * math.cos(t) + yy * math.sin(t) + geom.offset_center
        i0 = np.floor(offs).astype(int)
        w1 = offs - i0
        for bins, w in ((i0, 1.0 - w1), (i0 + 1, w1)):
            ok = (bins >= 0) & (bins < geom.n_offsets) & (w > 0)
            rows.append(a * geom.n_offsets + bins[ok])
            cols.append(pixel[ok])
            vals.append(w[ok])
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(geom.n_angles * geom.n_offsets, n * n),
    )
    return mat.tocsr()


def radon(img, geom: RadonGeometry) -> np.ndarray:
    """Line-integral sinogram, shape (n_angles, n_offsets)."""
    img = np.asarray(img, dtype=float)
    if img.shape != (geom.size, geom.size):
        raise ContractError(f"image shape {img.shape} does not match geometry {geom.size}")
    return (_system_matrix(geom) @ img.ravel()).reshape(geom.sino_shape)


def backproject(sino, geom: RadonGeometry) -> np.ndarray:
    """Exact adjoint of :func:`radon`."""
    sino = np.asarray(sino, dtype=float)
    if sino.shape != geom.sino_shape:
        raise ContractError(f"sinogram shape {sino.shape} does not match {geom.sino_shape}")
    return (_system_matrix(geom).T @ sino.ravel()).reshape(geom.size, geom.size)


def ram_lak_filter(sino, geom: RadonGeometry) -> np.ndarray:
    """Per-projection circular ramp filtering (|frequency| response)."""
    sino = np.asarray(sino, dtype=float)
    if sino.shape != geom.sino_shape:
        raise ContractError(f"sinogram shape {sino.shape} does not match {geom.sino_shape}")
    ramp = np.abs(np.fft.rfftfreq(geom.n_offsets))
    spec = np.fft.rfft(sino, axis=1) * ramp
    return np.fft.irfft(spec, n=geom.n_offsets, axis=1)


def fbp(sino, geom: RadonGeometry) -> np.ndarray:
    """Filtered back-projection; realizes the approximate Radon inverse."""
    filtered = ram_lak_filter(sino, geom) if geom.filter == "ram_lak" else np.asarray(sino, float)
    return backproject(filtered, geom) * (np.pi / geom.n_angles)


def fbp_operator(geom: RadonGeometry) -> LinearOperator:
    """FBP as a sinogram -> image operator with its exact adjoint.

    The ramp filter is self-adjoint, so the adjoint is radon followed by the
    same filter (and the same scaling).
    """
    scale = np.pi / geom.n_angles

    def fwd(omega):
        return fbp(omega, geom)

    def adj(img):
        sino = radon(img, geom)
        if geom.filter == "ram_lak":
            sino = ram_lak_filter(sino, geom)
        return sino * scale

    return LinearOperator(fwd, adj, geom.sino_shape, (geom.size, geom.size))


def radon_operator(geom: RadonGeometry) -> LinearOperator:
    """Plain radon/backproject pair as a LinearOperator."""
    return LinearOperator(
        lambda x: radon(x, geom),
        lambda s: backproject(s, geom),
        (geom.size, geom.size),
        geom.sino_shape,
    )


def ray_support(geom: RadonGeometry) -> np.ndarray:
    """Total pixel weight reaching each sinogram cell (chord length proxy)."""
    ones = np.ones((geom.size, geom.size))
    return radon(ones, geom)
