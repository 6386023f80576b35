"""Forward-backward splitting with the Cauchy proximal step.

One gradient step on the quadratic data fidelity ||Y - AX||^2 / (2 sigma^2)
is followed by the penalty prox. The step size policy keeps mu strictly
inside (0, 2/L) with L = ||A||^2 / sigma^2, and the scale policy pins
gamma = sqrt(mu)/2, the boundary of the condition that keeps every prox
subproblem strictly convex.

At that boundary the prox map is expansive near |x| = sqrt(3) gamma, so the
iteration only has guaranteed cost descent for mu <= 1/L (the composite map
develops period-2 cycles on identity problems for larger steps). The auto
policy therefore uses mu = 0.9/L.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DivergenceError, ParameterError
from .operators import LinearOperator
from .penalty import PenaltyConfig, penalty_value, prox_cauchy, prox_l1, prox_tv

# seed for the internal power-iteration start vector; fixed so identical
# problems resolve identical step sizes
_POWER_SEED = 0

# auto step as a fraction of 1/L; must stay <= 1 for monotone descent when
# gamma sits on the sqrt(mu)/2 boundary
_AUTO_MU_FACTOR = 0.9

AUTO = "auto"


@dataclass
class InverseProblem:
    """Observation, forward operator, noise level and penalty."""

    observation: np.ndarray
    forward: LinearOperator
    sigma: float
    penalty: PenaltyConfig

    def __post_init__(self):
        self.observation = np.asarray(self.observation, dtype=float)
        if self.observation.shape != self.forward.out_shape:
            raise ContractError(
                f"observation shape {self.observation.shape} does not match "
                f"operator output {self.forward.out_shape}"
            )
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")


@dataclass
class SolverConfig:
    mu: float | str = AUTO
    gamma_policy: str = "auto_from_mu"
    eps: float = 1e-3
    max_iter: int = 300
    x0_policy: str = "adjoint_of_data"

    def __post_init__(self):
        if self.mu != AUTO and not self.mu > 0:
            raise ParameterError(f"mu must be positive or 'auto', got {self.mu}")
        if self.gamma_policy not in ("auto_from_mu", "explicit"):
            raise ParameterError(f"unknown gamma_policy {self.gamma_policy!r}")
        if not self.eps > 0:
            raise ParameterError(f"eps must be positive, got {self.eps}")
        if self.max_iter < 1:
            raise ParameterError("max_iter must be >= 1")
        if self.x0_policy not in ("zeros", "adjoint_of_data"):
            raise ParameterError(f"unknown x0_policy {self.x0_policy!r}")


@dataclass
class SolveResult:
    solution: np.ndarray
    cost_trace: np.ndarray
    relchange_trace: np.ndarray
    iterations: int
    converged: bool
    mu: float
    gamma: float | None
    opnorm_sq: float


def estimate_operator_norm(
    op: LinearOperator,
    shape=None,
    iters: int = 500,
    tol: float = 1e-12,
    seed: int = _POWER_SEED,
) -> float:
    """Largest eigenvalue of A'A by power iteration from a seeded start."""
    if iters < 1:
        raise ParameterError("iters must be >= 1")
    shape = op.in_shape if shape is None else tuple(shape)
    if shape != op.in_shape:
        raise ContractError(f"start shape {shape} does not match operator {op.in_shape}")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(shape)
    v /= np.linalg.norm(v)
    eig = 0.0
    for _ in range(iters):
        w = op.adjoint(op.apply(v))
        new = float(np.vdot(v, w))
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(new - eig) <= tol * max(abs(new), 1e-300):
            eig = new
            break
        eig = new
    return eig


def lipschitz_constant(opnorm_sq: float, sigma: float) -> float:
    """Gradient Lipschitz constant of the fidelity term: ||A||^2 / sigma^2."""
    if not opnorm_sq > 0:
        raise ParameterError(f"opnorm_sq must be positive, got {opnorm_sq}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    return opnorm_sq / (sigma * sigma)


def check_convexity_condition(gamma: float, mu: float) -> bool:
    """True iff gamma >= sqrt(mu)/2 (prox subproblems strictly convex)."""
    return gamma >= np.sqrt(mu) / 2.0


def _relative_change(new, old):
    denom = float(np.linalg.norm(old))
    num = float(np.linalg.norm(new - old))
    if denom == 0.0:
        return 0.0 if num == 0.0 else np.inf
    return num / denom


def cps_solve(problem: InverseProblem, cfg: SolverConfig = None) -> SolveResult:
    """Run the forward-backward iteration until the relative change drops
    below eps or the iteration cap is reached.

    Cost per iterate is the fidelity term plus the configured penalty.
    Non-finite iterates abort with :class:`DivergenceError`.
    """
    cfg = cfg or SolverConfig()
    A = problem.forward
    Y = problem.observation
    sigma2 = problem.sigma**2
    pen = problem.penalty

    opnorm_sq = estimate_operator_norm(A)
    if not opnorm_sq > 0:
        raise ParameterError("operator norm estimate is zero; cannot set a step size")
    L = lipschitz_constant(opnorm_sq, problem.sigma)

    mu = _AUTO_MU_FACTOR / L if cfg.mu == AUTO else float(cfg.mu)
    if cfg.mu != AUTO and mu >= 2.0 / L:
        warnings.warn(
            f"mu={mu:.3g} is outside the stable interval (0, {2.0 / L:.3g})",
            RuntimeWarning,
        )

    gamma = None
    if pen.kind == "cauchy":
        if cfg.gamma_policy == "auto_from_mu":
            gamma = np.sqrt(mu) / 2.0
        else:
            if pen.gamma is None:
                raise ParameterError("explicit gamma policy requires penalty.gamma")
            gamma = float(pen.gamma)
            if not check_convexity_condition(gamma, mu):
                warnings.warn(
                    f"gamma={gamma:.3g} < sqrt(mu)/2={np.sqrt(mu) / 2:.3g}: prox "
                    "subproblems may be non-convex and convergence is not guaranteed",
                    RuntimeWarning,
                )

    if cfg.x0_policy == "zeros":
        X = np.zeros(A.in_shape)
    else:
        X = A.adjoint(Y) / opnorm_sq

    def prox(u):
        if pen.kind == "cauchy":
            return prox_cauchy(u, gamma, mu)
        if pen.kind == "l1":
            return prox_l1(u, pen.weight * mu)
        return prox_tv(u, pen.weight, mu, pen.tv_inner_iters)

    def cost(x, ax):
        fid = float(np.sum((Y - ax) ** 2)) / (2.0 * sigma2)
        return fid + penalty_value(x, pen, gamma=gamma)

    AX = A.apply(X)
    cost_trace = [cost(X, AX)]
    relchange_trace = []
    converged = False
    iterations = 0

    for i in range(1, cfg.max_iter + 1):
        grad = A.adjoint(AX - Y) / sigma2
        Xn = prox(X - mu * grad)
        if not np.all(np.isfinite(Xn)):
            raise DivergenceError("non-finite iterate", iteration=i)
        AXn = A.apply(Xn)
        cost_trace.append(cost(Xn, AXn))
        rel = _relative_change(Xn, X)
        relchange_trace.append(rel)
        X, AX = Xn, AXn
        iterations = i
        if rel <= cfg.eps:
            converged = True
            break

    return SolveResult(
        solution=X,
        cost_trace=np.asarray(cost_trace),
        relchange_trace=np.asarray(relchange_trace),
        iterations=iterations,
        converged=converged,
        mu=mu,
        gamma=gamma,
        opnorm_sq=opnorm_sq,
    )
