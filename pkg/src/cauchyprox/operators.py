"""Matrix-free linear operators with explicit adjoints.

Every operator carries ``in_shape``/``out_shape`` and an ``apply``/``adjoint``
pair; :func:`adjoint_dot_test` probes the pairing with random vectors. Blur
uses circular convolution so the adjoint (correlation with the same kernel)
is exact.
"""

import numpy as np

from .errors import ContractError, InputError, ParameterError


class LinearOperator:
    """A linear map given by an apply/adjoint callable pair."""

    def __init__(self, apply, adjoint, in_shape, out_shape):
        self._apply = apply
        self._adjoint = adjoint
        self.in_shape = tuple(in_shape)
        self.out_shape = tuple(out_shape)

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != self.in_shape:
            raise ContractError(f"apply expected shape {self.in_shape}, got {x.shape}")
        return self._apply(x)

    def adjoint(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != self.out_shape:
            raise ContractError(f"adjoint expected shape {self.out_shape}, got {y.shape}")
        return self._adjoint(y)

    def __call__(self, x):
        return self.apply(x)


def identity_operator(shape) -> LinearOperator:
    shape = tuple(shape)
    return LinearOperator(lambda x: x.copy(), lambda y: y.copy(), shape, shape)


def scaling_operator(factor: float, shape) -> LinearOperator:
    shape = tuple(shape)
    return LinearOperator(lambda x: factor * x, lambda y: factor * y, shape, shape)


def gaussian_psf(size: int, std: float) -> np.ndarray:
    """Normalized size x size Gaussian kernel, entries exp(-(i^2+j^2)/(2 std^2))."""
    if size < 1 or size % 2 == 0:
        raise ParameterError(f"kernel size must be odd and >= 1, got {size}")
    if not std > 0:
        raise ParameterError(f"std must be positive, got {std}")
    half = size // 2
    i = np.arange(-half, half + 1, dtype=float)
    k = np.exp(-(i[:, None] ** 2 + i[None, :] ** 2) / (2.0 * std * std))
    return k / k.sum()


def _embed_kernel(kernel, shape):
    kh, kw = kernel.shape
    big = np.zeros(shape)
    big[:kh, :kw] = kernel
    # roll so the kernel center sits at index (0, 0)
    return np.roll(big, (-(kh // 2), -(kw // 2)), axis=(0, 1))


def blur_operator(kernel, image_shape) -> LinearOperator:
    """2D circular convolution; adjoint is convolution with the flipped kernel."""
    kernel = np.asarray(kernel, dtype=float)
    image_shape = tuple(image_shape)
    if kernel.shape[0] > image_shape[0] or kernel.shape[1] > image_shape[1]:
        raise ParameterError(f"kernel {kernel.shape} larger than image {image_shape}")
    otf = np.fft.rfft2(_embed_kernel(kernel, image_shape))

    def fwd(x):
        return np.fft.irfft2(np.fft.rfft2(x) * otf, s=image_shape)

    def adj(y):
        return np.fft.irfft2(np.fft.rfft2(y) * np.conj(otf), s=image_shape)

    return LinearOperator(fwd, adj, image_shape, image_shape)


def downsample_operator(factor: int, hi_shape) -> LinearOperator:
    """Keep every factor-th pixel starting at index 0; adjoint zero-fills."""
    if factor < 1:
        raise ParameterError(f"factor must be >= 1, got {factor}")
    hi_shape = tuple(hi_shape)
    if hi_shape[0] % factor or hi_shape[1] % factor:
        raise ParameterError(f"factor {factor} does not divide shape {hi_shape}")
    lo_shape = (hi_shape[0] // factor, hi_shape[1] // factor)

    def fwd(x):
        return x[::factor, ::factor].copy()

    def adj(y):
        out = np.zeros(hi_shape)
        out[::factor, ::factor] = y
        return out

    return LinearOperator(fwd, adj, hi_shape, lo_shape)


def compose(outer: LinearOperator, inner: LinearOperator) -> LinearOperator:
    """Operator outer(inner(x)); adjoint chains in reverse."""
    if inner.out_shape != outer.in_shape:
        raise ContractError(
            f"cannot chain {inner.out_shape} output into {outer.in_shape} input"
        )
    return LinearOperator(
        lambda x: outer.apply(inner.apply(x)),
        lambda y: inner.adjoint(outer.adjoint(y)),
        inner.in_shape,
        outer.out_shape,
    )


def matrix_operator(M, in_shape=None) -> LinearOperator:
    """Dense matrix acting on row-major vectorized images."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise InputError(f"expected a 2D matrix, got ndim {M.ndim}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix contains non-finite entries")
    m, n = M.shape
    in_shape = (n,) if in_shape is None else tuple(in_shape)
    if int(np.prod(in_shape)) != n:
        raise ContractError(f"in_shape {in_shape} does not flatten to {n}")

    def fwd(x):
        return M @ x.ravel()

    def adj(y):
        return (M.T @ y).reshape(in_shape)

    return LinearOperator(fwd, adj, in_shape, (m,))


def random_measurement_operator(m: int, n_shape, seed: int) -> LinearOperator:
    """Gaussian measurement matrix, rows ~ N(0, 1)/sqrt(m), fixed by seed."""
    n_shape = tuple(n_shape)
    n = int(np.prod(n_shape))
    if m > n:
        raise ParameterError(f"m={m} exceeds the {n} available pixels")
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((m, n)) / np.sqrt(m)
    return matrix_operator(M, in_shape=n_shape)


def adjoint_dot_test(op: LinearOperator, trials: int = 20, seed: int = 0) -> float:
    """Max relative discrepancy of <Ax, y> vs <x, A'y> over random probes."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(op.in_shape)
        y = rng.standard_normal(op.out_shape)
        ax = op.apply(x)
        aty = op.adjoint(y)
        lhs = float(np.vdot(ax, y))
        rhs = float(np.vdot(x, aty))
        denom = float(np.linalg.norm(ax) * np.linalg.norm(y)) + 1e-300
        worst = max(worst, abs(lhs - rhs) / denom)
    return worst
