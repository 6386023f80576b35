"""Penalty values and proximal operators.

The Cauchy penalty -log(gamma / (gamma^2 + x^2)) has a closed-form prox:
the first-order condition of the prox subproblem is a cubic in the unknown,
solved here by Cardano's formula. L1 (soft threshold) and isotropic TV
(Chambolle dual projection) are provided as reference penalties.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError

PENALTY_KINDS = ("cauchy", "l1", "tv")


@dataclass
class PenaltyConfig:
    """Penalty selection plus its parameters.

    ``gamma`` is the Cauchy scale; ``weight`` multiplies the L1/TV penalty
    and is ignored for Cauchy (the fidelity sigma sets the balance there).
    ``gamma=None`` defers to the solver's scale policy.
    """

    kind: str = "cauchy"
    gamma: float | None = None
    weight: float = 1.0
    tv_inner_iters: int = 40

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise ParameterError(f"unknown penalty kind {self.kind!r}")
        if self.gamma is not None and not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if self.weight < 0:
            raise ParameterError(f"weight must be non-negative, got {self.weight}")
        if self.tv_inner_iters < 1:
            raise ParameterError("tv_inner_iters must be >= 1")


def _check_gamma_mu(gamma, mu):
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")


def cauchy_penalty(x, gamma: float):
    """Pointwise penalty -log(gamma / (gamma^2 + x^2)).

    Even in x, minimized at 0. Accepts scalars or arrays.
    """
    if not gamma > 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    x = np.asarray(x, dtype=float)
    out = np.log(gamma * gamma + x * x) - np.log(gamma)
    return float(out) if out.ndim == 0 else out


def _prox_cauchy_objective(u, x, gamma, mu):
    return (x - u) ** 2 / (2.0 * mu) + np.log(gamma * gamma + u * u) - np.log(gamma)


def prox_cauchy(x, gamma: float, mu: float):
    """Proximal map of the Cauchy penalty, elementwise.

    Returns the real root of  u^3 - x u^2 + (gamma^2 + 2 mu) u - x gamma^2 = 0
    via Cardano's recipe, using the signed real cube-root branch. When the
    scale condition gamma >= sqrt(mu)/2 holds, the root is the unique global
    minimizer of the prox subproblem. A negative Cardano discriminant (only
    possible when that condition is violated) is handled by the trigonometric
    three-root formula plus an objective comparison; that path is off the
    convergence contract.
    """
    _check_gamma_mu(gamma, mu)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InputError("prox input contains non-finite values")

    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    c = gamma * gamma + 2.0 * mu
    p = c - x * x / 3.0
    q = x * gamma * gamma + 2.0 * x**3 / 27.0 - x * c / 3.0
    disc = p**3 / 27.0 + q * q / 4.0

    z = np.empty_like(x)

    pos = disc >= 0.0
    if np.any(pos):
        qp, pp, dp = q[pos], p[pos], disc[pos]
        root = np.sqrt(dp)
        # evaluate the larger-magnitude cube root first; recover the other
        # from s*t = -p/3 to dodge cancellation when sqrt(disc) ~ |q|/2
        big = np.cbrt(qp / 2.0 + np.where(qp >= 0.0, root, -root))
        small = np.where(big != 0.0, -pp / (3.0 * np.where(big != 0.0, big, 1.0)), 0.0)
        z[pos] = x[pos] / 3.0 + big + small

    neg = ~pos
    if np.any(neg):
        # three real roots; pick the one with the smallest subproblem value
        xn, pn, qn = x[neg], p[neg], q[neg]
        m = 2.0 * np.sqrt(-pn / 3.0)
        arg = np.clip((qn / 2.0) / (-pn / 3.0) ** 1.5, -1.0, 1.0)
        phi = np.arccos(arg)
        cands = np.stack(
            [xn / 3.0 + m * np.cos((phi - 2.0 * np.pi * k) / 3.0) for k in range(3)]
        )
        vals = _prox_cauchy_objective(cands, xn, gamma, mu)
        z[neg] = cands[np.argmin(vals, axis=0), np.arange(xn.size)]

    # the minimizer always lies between 0 and x; clip off rounding spill
    z = np.clip(z, -np.abs(x), np.abs(x))
    return float(z[0]) if scalar else z


def prox_cauchy_scalar(x: float, gamma: float, mu: float) -> float:
    """Scalar convenience wrapper around :func:`prox_cauchy`."""
    return prox_cauchy(np.asarray(float(x)), gamma, mu)


def prox_l1(x, threshold: float):
    """Soft threshold sign(x) * max(|x| - threshold, 0)."""
    if threshold < 0:
        raise ParameterError(f"threshold must be non-negative, got {threshold}")
    x = np.asarray(x, dtype=float)
    out = np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)
    return float(out) if out.ndim == 0 else out


def prox_l1_scalar(x: float, threshold: float) -> float:
    return prox_l1(np.asarray(float(x)), threshold)


def _grad2(u):
    # forward differences, reflective boundary (last difference is zero)
    g = np.zeros((2,) + u.shape)
    g[0, :-1, :] = u[1:, :] - u[:-1, :]
    g[1, :, :-1] = u[:, 1:] - u[:, :-1]
    return g


def _div2(p):
    # negative adjoint of _grad2
    d = np.zeros(p.shape[1:])
    d[:-1, :] += p[0, :-1, :]
    d[1:, :] -= p[0, :-1, :]
    d[:, :-1] += p[1, :, :-1]
    d[:, 1:] -= p[1, :, :-1]
    return d


def tv_seminorm(img) -> float:
    """Isotropic discrete TV with forward differences."""
    g = _grad2(np.asarray(img, dtype=float))
    return float(np.sum(np.sqrt(g[0] ** 2 + g[1] ** 2)))


def prox_tv(img, weight: float, mu: float, inner_iters: int = 40):
    """Approximate prox of weight*TV at step mu via Chambolle dual projection.

    Runs a fixed number of dual iterations with step 0.249. Exact identity
    when weight is zero.
    """
    if weight < 0:
        raise ParameterError(f"weight must be non-negative, got {weight}")
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    if inner_iters < 1:
        raise ParameterError("inner_iters must be >= 1")
    img = np.asarray(img, dtype=float)
    if weight == 0.0:
        return img.copy()

    lam = weight * mu
    tau = 0.249
    p = np.zeros((2,) + img.shape)
    for _ in range(inner_iters):
        g = _grad2(_div2(p) - img / lam)
        mag = np.sqrt(g[0] ** 2 + g[1] ** 2)
        p = (p + tau * g) / (1.0 + tau * mag)
    return img - lam * _div2(p)


def penalty_value(img, cfg: PenaltyConfig, gamma: float | None = None) -> float:
    """Total penalty of an image under ``cfg``.

    ``gamma`` overrides ``cfg.gamma`` so the solver can inject its resolved
    scale without mutating the config.
    """
    img = np.asarray(img, dtype=float)
    if cfg.kind == "cauchy":
        g = cfg.gamma if gamma is None else gamma
        if g is None:
            raise ParameterError("cauchy penalty value requires a gamma")
        return float(np.sum(cauchy_penalty(img, g)))
    if cfg.kind == "l1":
        return cfg.weight * float(np.sum(np.abs(img)))
    return cfg.weight * tv_seminorm(img)
