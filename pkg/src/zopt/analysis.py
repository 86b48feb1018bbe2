"""Convergence-bound evaluation and Monte Carlo checks of oracle inequalities.

The two gap bounds predict the running average of f(x_k) - f* for the
unconstrained and projected schemes at their analyzed step sizes.  The
remaining functions quantify the oracle's deviation from the smoothed
gradient and verify, empirically, the inequalities that the bounds rest on.
Deviation checks are restricted to quadratic test problems, where the
smoothed gradient equals the analytic gradient exactly and no Monte Carlo
error enters the reference side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear

from .oracle import OracleConfig, sample_directions
from .problems import TestProblem
from .rng import substream
from .sets import Box, FeasibleSet, WholeSpace, gradient_map
from .solvers import theorem_step_size

__all__ = [
    "BoundInputs",
    "unconstrained_gap_bound",
    "constrained_gap_bound",
    "oracle_variance_candidate",
    "prox_quantity",
    "constrained_opt_value",
    "ProxPLReport",
    "check_proximal_pl",
    "DeviationProbe",
    "probe_deviation",
    "CheckResult",
    "InequalityReport",
    "verify_oracle_inequalities",
]

# Acceptance margin for Monte Carlo inequality checks, in standard errors.
# Under a normal approximation the false-failure rate per check is < 1e-6.
MC_SIGMAS = 5.0


@dataclass(frozen=True, eq=False)
class BoundInputs:
    """Problem constants feeding the gap bounds.

    initial_gap is f(x0) - f*.  d_x and sigma_seq are needed only for the
    constrained bound; sigma_seq[k] bounds the root mean square deviation of
    the oracle from the smoothed gradient at iteration k and must cover
    every iteration index the bound is evaluated at.
    """

    n: int
    lip_const: float
    pl_const: float
    mu: float
    initial_gap: float
    d_x: float | None = None
    sigma_seq: np.ndarray | None = None

    def __post_init__(self):
        if not (self.n > 0 and self.lip_const > 0 and self.pl_const > 0 and self.mu > 0):
            raise ValueError("n, lip_const, pl_const, and mu must be positive")
        if self.initial_gap < 0:
            raise ValueError(f"initial_gap must be nonnegative, got {self.initial_gap}")
        if self.sigma_seq is not None:
            object.__setattr__(
                self, "sigma_seq", np.asarray(self.sigma_seq, dtype=float)
            )


def unconstrained_gap_bound(
    inputs: BoundInputs, num_iters: int, step_size: float | None = None
) -> float:
    """Bound on the running-average gap after num_iters unconstrained steps.

    Exact for the analyzed step 1 / (4 (n + 4) lip_const).  For any other
    step h the leading term is rescaled to 2 * gap / (pl * h * (N + 1)),
    matching the 1 / (l h eps) iteration scaling, and the smoothing terms
    are kept unchanged; treat that variant as a heuristic overlay.
    """
    if num_iters < 0:
        raise ValueError("num_iters must be nonnegative")
    n, lip, pl, mu = inputs.n, inputs.lip_const, inputs.pl_const, inputs.mu
    analyzed = theorem_step_size("unconstrained", n, lip)
    h = analyzed if step_size is None else float(step_size)
    leading = 2.0 / (pl * h)
    return (
        leading * (inputs.initial_gap / (num_iters + 1) + 3.0 * mu**2 * (n + 4) * lip / 32.0)
        + mu**2 / (4.0 * pl) * lip**2 * (n + 6) ** 3
    )


def constrained_gap_bound(
    inputs: BoundInputs, num_iters: int, step_size: float | None = None
) -> float:
    """Bound on the running-average gap after num_iters projected steps.

    Requires a finite diameter and sigma_seq covering indices 0..num_iters.
    Exact for the analyzed step 1 / lip_const; for smaller steps only the
    leading term is rescaled (heuristic, as above).
    """
    if num_iters < 0:
        raise ValueError("num_iters must be nonnegative")
    if inputs.d_x is None or not math.isfinite(inputs.d_x) or inputs.d_x <= 0:
        raise ValueError("constrained bound requires a finite positive d_x")
    if inputs.sigma_seq is None or inputs.sigma_seq.size < num_iters + 1:
        raise ValueError(
            f"sigma_seq must cover indices 0..{num_iters} "
            f"(got {0 if inputs.sigma_seq is None else inputs.sigma_seq.size} entries)"
        )
    n, lip, pl, mu, d_x = (
        inputs.n,
        inputs.lip_const,
        inputs.pl_const,
        inputs.mu,
        inputs.d_x,
    )
    h = (1.0 / lip) if step_size is None else float(step_size)
    sigma = inputs.sigma_seq[: num_iters + 1]
    sum_sigma = float(np.sum(sigma))
    sum_sigma_sq = float(np.sum(sigma**2))
    return (
        inputs.initial_gap / (pl * h * (num_iters + 1))
        + mu * d_x * lip**2 * (n + 3) ** 1.5 / (2.0 * pl)
        + lip * d_x * sum_sigma / (pl * (num_iters + 1))
        + sum_sigma_sq / (pl * (num_iters + 1))
    )


def oracle_variance_candidate(
    mode: str,
    mu: float,
    n: int,
    lip_const: float,
    grad_norm: float | None = None,
) -> float:
    """Upper bound candidate sigma^2 for the oracle's second moment.

    mode 'c00' uses only a value Lipschitz constant: L0^2 (n + 4)^2.
    mode 'c11' uses a gradient Lipschitz constant and the gradient norm at
    the probed point: mu^2 L1^2 (n + 6)^3 / 2 + 2 (n + 4) ||grad||^2.
    """
    if not (mu > 0 and n > 0 and lip_const > 0):
        raise ValueError("mu, n, and lip_const must be positive")
    if mode == "c00":
        return lip_const**2 * (n + 4) ** 2
    if mode == "c11":
        if grad_norm is None or grad_norm < 0:
            raise ValueError("mode 'c11' requires a nonnegative grad_norm")
        return mu**2 * lip_const**2 * (n + 6) ** 3 / 2.0 + 2.0 * (n + 4) * grad_norm**2
    raise ValueError(f"mode must be 'c00' or 'c11', got {mode!r}")


def prox_quantity(
    feasible_set: FeasibleSet, x: np.ndarray, a: float, vec: np.ndarray
) -> float:
    """-2a * min over feasible z of (a/2)||z - x||^2 + <vec, z - x>.

    The inner minimum is attained at z* = project(x - vec / a).  Over the
    whole space this equals ||vec||^2, the unconstrained gradient-dominance
    numerator; on a proper subset it is the constrained analogue.
    """
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    x = np.asarray(x, dtype=float)
    vec = np.asarray(vec, dtype=float)
    if not feasible_set.contains(x):
        raise ValueError("x must be feasible")
    z = feasible_set.project(x - vec / a)
    dz = z - x
    return -2.0 * a * (0.5 * a * float(dz @ dz) + float(vec @ dz))


def _prox_values_batch(
    feasible_set: FeasibleSet, x: np.ndarray, a: float, vecs: np.ndarray
) -> np.ndarray:
    """prox_quantity for a batch of vecs at one feasible x."""
    z = feasible_set.project(x[None, :] - vecs / a)
    dz = z - x[None, :]
    return -2.0 * a * (
        0.5 * a * np.einsum("ij,ij->i", dz, dz) + np.einsum("ij,ij->i", vecs, dz)
    )


def constrained_opt_value(problem: TestProblem, feasible_set: FeasibleSet) -> float:
    """Reference minimum of ||A x - b||^2 over the feasible set.

    Boxes are solved with scipy's bounded least squares; the whole space
    falls back to the unconstrained optimum.  Other set kinds have no
    reference solver here.
    """
    if isinstance(feasible_set, WholeSpace):
        return problem.opt_value
    if isinstance(feasible_set, Box):
        res = lsq_linear(
            problem.a_matrix,
            problem.b_vector,
            bounds=(feasible_set.lower, feasible_set.upper),
            method="trf",
            tol=1e-14,
            max_iter=500,
        )
        return float(res.fun @ res.fun)
    raise ValueError(
        f"no reference optimum available for set kind {feasible_set.kind!r}"
    )


@dataclass(frozen=True)
class ProxPLReport:
    """Sampled constrained gradient-dominance ratios on a feasible set.

    min_ratio is the smallest observed 0.5 * Q(x, lip) / (f(x) - f*); it is
    an empirical stand-in for the constrained dominance constant, which has
    no closed form here.  below_unconstrained counts probes whose ratio
    falls under the unconstrained pl_const (informational: the constrained
    constant may genuinely differ from it).
    """

    min_ratio: float
    below_unconstrained: int
    evaluated: int
    skipped: int
    opt_value: float
    pl_const_unconstrained: float


def check_proximal_pl(
    problem: TestProblem,
    feasible_set: FeasibleSet,
    num_points: int,
    seed: int,
) -> ProxPLReport:
    """Sample 0.5 * Q(x, lip_const) / (f(x) - f*) at random feasible points."""
    if num_points <= 0:
        raise ValueError("num_points must be positive")
    f_star = constrained_opt_value(problem, feasible_set)
    gen = substream(seed, 0)
    min_ratio = math.inf
    below = 0
    evaluated = 0
    skipped = 0
    for _ in range(num_points):
        x = feasible_set.sample(gen)
        gap = problem.objective(x) - f_star
        if gap < 1e-12:
            skipped += 1
            continue
        q = prox_quantity(feasible_set, x, problem.lip_const, problem.grad(x))
        ratio = 0.5 * q / gap
        evaluated += 1
        min_ratio = min(min_ratio, ratio)
        if ratio < problem.pl_const * (1.0 - 1e-9):
            below += 1
    return ProxPLReport(
        min_ratio=float(min_ratio),
        below_unconstrained=below,
        evaluated=evaluated,
        skipped=skipped,
        opt_value=f_star,
        pl_const_unconstrained=problem.pl_const,
    )


@dataclass(frozen=True, eq=False)
class DeviationProbe:
    """Monte Carlo picture of the oracle at one feasible point.

    xi denotes the deviation g - grad_mu; for the quadratic problems probed
    here grad_mu equals the analytic gradient.  s and v are the projected
    step directions for one realized g and for the exact gradient; t_mean
    estimates the expectation of the projected decrease functional T(x, lip)
    and q_value is its deterministic counterpart Q(x, lip).
    """

    x: np.ndarray
    grad: np.ndarray
    mean_xi_norm: float
    se_xi_norm: float
    mean_xi_sq: float
    se_xi_sq: float
    mean_g_sq: float
    se_g_sq: float
    grad_sq: float
    s_example: np.ndarray
    v: np.ndarray
    t_mean: float
    t_se: float
    q_value: float


def probe_deviation(
    problem: TestProblem,
    feasible_set: FeasibleSet,
    cfg: OracleConfig,
    x: np.ndarray,
    num_samples: int,
    counter: int,
    step_size: float | None = None,
) -> DeviationProbe:
    """Estimate deviation moments and the projected decrease at one point.

    Requires a quadratic problem so the smoothed gradient is the analytic
    gradient; the objective must support batch evaluation for vectorized
    sampling. Draws come from substream `counter` of cfg.seed.
    """
    if num_samples < 2:
        raise ValueError("num_samples must be at least 2")
    x = np.asarray(x, dtype=float)
    n = x.size
    h = theorem_step_size("constrained", n, problem.lip_const) if step_size is None else step_size
    grad = problem.grad(x)
    u = sample_directions(cfg, n, counter, num_samples)
    fx = problem.objective(x)
    fxp = problem.objective.batch(x[None, :] + cfg.mu * u)
    g = ((fxp - fx) / cfg.mu)[:, None] * cfg.apply_b(u)

    xi = g - grad
    xi_norms = np.linalg.norm(xi, axis=1)
    xi_sq = xi_norms**2
    g_sq = np.einsum("ij,ij->i", g, g)
    t_values = _prox_values_batch(feasible_set, x, problem.lip_const, g)

    def mse(samples: np.ndarray) -> tuple[float, float]:
        return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(samples.size))

    mean_xi, se_xi = mse(xi_norms)
    mean_xi_sq, se_xi_sq = mse(xi_sq)
    mean_g_sq, se_g_sq = mse(g_sq)
    t_mean, t_se = mse(t_values)
    return DeviationProbe(
        x=x,
        grad=grad,
        mean_xi_norm=mean_xi,
        se_xi_norm=se_xi,
        mean_xi_sq=mean_xi_sq,
        se_xi_sq=se_xi_sq,
        mean_g_sq=mean_g_sq,
        se_g_sq=se_g_sq,
        grad_sq=float(grad @ grad),
        s_example=gradient_map(feasible_set, x, g[0], h),
        v=gradient_map(feasible_set, x, grad, h),
        t_mean=t_mean,
        t_se=t_se,
        q_value=prox_quantity(feasible_set, x, problem.lip_const, grad),
    )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    trials: int
    violations: int
    margin: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class InequalityReport:
    """Bundle of verification check results with text and CSV renderings."""

    checks: tuple[CheckResult, ...]
    description: str

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_text(self) -> str:
        lines = [self.description]
        for c in self.checks:
            status = "ok" if c.passed else "VIOLATED"
            line = (
                f"  {c.name}: {status} (trials={c.trials}, "
                f"violations={c.violations}, margin={c.margin:.6g})"
            )
            if c.detail:
                line += f" [{c.detail}]"
            lines.append(line)
        return "\n".join(lines)

    def csv_rows(self) -> list[str]:
        rows = ["check,trials,violations,margin"]
        rows += [f"{c.name},{c.trials},{c.violations},{c.margin!r}" for c in self.checks]
        return rows


def verify_oracle_inequalities(
    problem: TestProblem,
    feasible_set: FeasibleSet,
    cfg: OracleConfig,
    num_probes: int = 1000,
    num_samples: int = 10000,
    seed: int = 0,
    num_mc_points: int = 4,
) -> InequalityReport:
    """Empirically verify the inequalities behind the constrained analysis.

    projection_inner_product: per draw, <xi, s - v> <= ||xi||^2, where s and
      v are the projected step directions for the realized estimate and for
      the exact gradient (a consequence of projection nonexpansiveness;
      any violation beyond rounding indicates a bug).
    jensen_ordering: mean ||xi|| <= sqrt(mean ||xi||^2) on every batch.
    deviation_norm_bound: mean ||xi|| <= sigma from the 'c11' variance
      candidate, within MC_SIGMAS standard errors.
    projected_decrease_bound: mean T(x, lip) >= Q(x, lip)
      - mu lip^2 (n+3)^(3/2) d_x - 2 lip d_x mean||xi||, within MC_SIGMAS
      standard errors (finite-diameter sets only).

    Probes are drawn at random feasible points; requires a quadratic
    problem (see probe_deviation).
    """
    n = problem.dim
    lip = problem.lip_const
    h = 1.0 / lip
    gen = substream(seed, 1)

    worst_ip = math.inf
    ip_violations = 0
    for i in range(num_probes):
        x = feasible_set.sample(gen)
        grad = problem.grad(x)
        u = sample_directions(cfg, n, i, 1)[0]
        fx = problem.objective(x)
        fxp = problem.objective(x + cfg.mu * u)
        g = ((fxp - fx) / cfg.mu) * cfg.apply_b(u)
        xi = g - grad
        s = gradient_map(feasible_set, x, g, h)
        v = gradient_map(feasible_set, x, grad, h)
        lhs = float(xi @ (s - v))
        rhs = float(xi @ xi)
        slack = rhs - lhs
        worst_ip = min(worst_ip, slack)
        if lhs > rhs + 1e-12 * (1.0 + rhs):
            ip_violations += 1
    checks = [
        CheckResult(
            name="projection_inner_product",
            trials=num_probes,
            violations=ip_violations,
            margin=worst_ip,
            detail="min of ||xi||^2 - <xi, s - v>",
        )
    ]

    jensen_viol = 0
    jensen_margin = math.inf
    dev_viol = 0
    dev_margin = math.inf
    dec_viol = 0
    dec_margin = math.inf
    finite_diam = math.isfinite(feasible_set.diameter())
    d_x = feasible_set.diameter()
    for j in range(num_mc_points):
        x = feasible_set.sample(gen)
        probe = probe_deviation(
            problem, feasible_set, cfg, x, num_samples, counter=10**6 + j, step_size=h
        )
        jensen_slack = math.sqrt(probe.mean_xi_sq) - probe.mean_xi_norm
        jensen_margin = min(jensen_margin, jensen_slack)
        if jensen_slack < -1e-12:
            jensen_viol += 1

        sigma = math.sqrt(
            oracle_variance_candidate("c11", cfg.mu, n, lip, math.sqrt(probe.grad_sq))
        )
        dev_slack = sigma - probe.mean_xi_norm
        dev_margin = min(dev_margin, dev_slack)
        if probe.mean_xi_norm > sigma + MC_SIGMAS * probe.se_xi_norm:
            dev_viol += 1

        if finite_diam:
            rhs = (
                probe.q_value
                - cfg.mu * lip**2 * (n + 3) ** 1.5 * d_x
                - 2.0 * lip * d_x * probe.mean_xi_norm
            )
            se = probe.t_se + 2.0 * lip * d_x * probe.se_xi_norm
            slack = probe.t_mean - rhs
            dec_margin = min(dec_margin, slack)
            if probe.t_mean < rhs - MC_SIGMAS * se:
                dec_viol += 1

    checks.append(
        CheckResult(
            name="jensen_ordering",
            trials=num_mc_points,
            violations=jensen_viol,
            margin=jensen_margin,
            detail="min of sqrt(mean||xi||^2) - mean||xi||",
        )
    )
    checks.append(
        CheckResult(
            name="deviation_norm_bound",
            trials=num_mc_points,
            violations=dev_viol,
            margin=dev_margin,
            detail="min of sigma_c11 - mean||xi||",
        )
    )
    if finite_diam:
        checks.append(
            CheckResult(
                name="projected_decrease_bound",
                trials=num_mc_points,
                violations=dec_viol,
                margin=dec_margin,
                detail="min of mean T - lower bound",
            )
        )

    description = (
        f"oracle inequality checks: m={problem.num_rows}, n={problem.dim}, "
        f"mu={cfg.mu:g}, set={feasible_set.kind}, probes={num_probes}, "
        f"samples={num_samples}, seed={seed}"
    )
    return InequalityReport(checks=tuple(checks), description=description)
