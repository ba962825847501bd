"""Regularized fixed-point construction of a symmetric positive solution.

The singular nonlinearity is tamed by the clamp
min(max(x + 1/m, 1/m), R), which keeps every evaluation of f inside
[1/m, R].  At each regularization level m a damped Picard iteration is run
to a sup-norm stopping rule, and the levels are swept over an increasing
schedule; stabilization of successive level solutions is the constructive
stand-in for the compactness argument that proves existence.
Non-convergence is a reported outcome, not an error in the theory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cf_derivative import as_order, rate_of
from .green import lower_branch, split_meshes, upper_branch
from .gridfn import SymmetricGridFunction
from .hypotheses import (HypothesisReport, ProblemSpec, check_A1, check_A2,
                         epsilon_max)
from .linear import ResidualReport
from .quadrature import Mesh

__all__ = ["SolveConfig", "SolveReport", "InnerStats", "clamp_m", "apply_Tm",
           "solve_fixed_m", "solve", "residual_nonlinear", "HypothesisError",
           "SolverError"]


class HypothesisError(RuntimeError):
    """The problem failed its assumption checks; the solver refuses to run."""

    def __init__(self, message, failures=()):
        self.failures = tuple(failures)
        super().__init__(message)


class SolverError(RuntimeError):
    pass


def clamp_m(x, m: int, R: float):
    """min(max(x + 1/m, 1/m), R); keeps f's argument inside [1/m, R]."""
    if m < 1:
        raise ValueError("regularization index m must be >= 1")
    if not R > 0:
        raise ValueError("truncation level R must be positive")
    return np.minimum(np.maximum(x + 1.0 / m, 1.0 / m), R)


class GreenOperator:
    """Precomputed quadrature for y -> int_0^1 G(t, .) y at fixed grid nodes.

    For each output node the diagonal-split quadrature nodes and the
    products weight * kernel are assembled once; applying the operator to a
    new integrand is then a single vectorized evaluation plus row sums.
    """

    def __init__(self, mu, mesh: Mesh):
        mu = as_order(mu)
        lam = rate_of(mu)
        self.grid = mesh.breakpoints
        taus = []
        wg = []
        offsets = [0]
        for t in self.grid:
            left, right = split_meshes(float(t), mesh)
            row_tau = []
            row_wg = []
            if left is not None:
                x = left.flat_nodes
                row_tau.append(x)
                row_wg.append(left.flat_weights * lower_branch(lam, t, x))
            if right is not None:
                x = right.flat_nodes
                row_tau.append(x)
                row_wg.append(right.flat_weights * upper_branch(lam, t, x))
            tau = np.concatenate(row_tau)
            taus.append(tau)
            wg.append(np.concatenate(row_wg))
            offsets.append(offsets[-1] + len(tau))
        self.tau = np.concatenate(taus)
        self.wg = np.concatenate(wg)
        self.offsets = np.array(offsets)

    def apply_values(self, integrand_values: np.ndarray) -> np.ndarray:
        prod = self.wg * integrand_values
        segments = np.add.reduceat(prod, self.offsets[:-1])
        # reduceat on an empty trailing segment cannot occur: every row of
        # the operator has at least one quadrature node
        return segments

    def apply(self, integrand) -> np.ndarray:
        return self.apply_values(np.asarray(integrand(self.tau), dtype=float))


@dataclass(frozen=True)
class SolveConfig:
    """Iteration controls; mesh/expression data live in the ProblemSpec."""

    m_schedule: tuple[int, ...] = (16, 32, 64, 128)
    omega: float = 1.0
    inner_tol: float = 1e-10
    max_inner: int = 200
    inter_m_tol: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.omega <= 1.0:
            raise ValueError("damping factor must lie in (0, 1]")
        if not self.m_schedule or any(m < 1 for m in self.m_schedule):
            raise ValueError("m schedule must be nonempty positive integers")
        if list(self.m_schedule) != sorted(set(self.m_schedule)):
            raise ValueError("m schedule must strictly increase")

    @classmethod
    def from_numerics(cls, n) -> "SolveConfig":
        return cls(m_schedule=tuple(n.m_schedule), omega=n.omega,
                   inner_tol=n.inner_tol, max_inner=n.max_inner,
                   inter_m_tol=n.inter_m_tol)


@dataclass(frozen=True)
class InnerStats:
    m: int
    iterations: int
    final_step: float
    converged: bool


@dataclass(frozen=True)
class SolveReport:
    status: str  # "converged" | "inner_failed" | "not_stabilized"
    x: SymmetricGridFunction
    sigma: SymmetricGridFunction
    eps: float
    eps_max: float
    inner: tuple[InnerStats, ...]
    inter_m_deviations: tuple[float, ...]
    lower_margin: float
    upper_margin: float
    residual: ResidualReport
    residual_limit_sup: float
    hypothesis: HypothesisReport

    @property
    def residual_sup(self) -> float:
        return self.residual.sup


def _clamped_integrand(spec: ProblemSpec, x: SymmetricGridFunction, m: int | None):
    def integrand(tau):
        xv = np.asarray(x(tau), dtype=float)
        arg = clamp_m(xv, m, spec.R) if m is not None else xv
        return np.asarray(spec.f_at(tau, arg), dtype=float)
    return integrand


def apply_Tm(spec: ProblemSpec, x: SymmetricGridFunction, m: int, mesh: Mesh,
             eps_max: float | None = None,
             op: GreenOperator | None = None) -> SymmetricGridFunction:
    """One application of the regularized operator on the grid.

    f is only evaluated at clamped arguments in [1/m, R], so the x = 0
    singularity is never touched; the output is symmetric by construction.
    """
    if eps_max is not None and not 1.0 / m < eps_max:
        raise ValueError(f"m = {m} violates 1/m < eps_max = {eps_max}")
    op = op or GreenOperator(spec.mu, mesh)
    vals = op.apply(_clamped_integrand(spec, x, m))
    return SymmetricGridFunction(op.grid, vals)


def solve_fixed_m(spec: ProblemSpec, m: int, config: SolveConfig, mesh: Mesh,
                  x0: SymmetricGridFunction,
                  op: GreenOperator | None = None
                  ) -> tuple[SymmetricGridFunction, InnerStats]:
    """Damped Picard iteration x <- (1-w) x + w T_m x at fixed m.

    Stops when the sup-norm step drops below the inner tolerance; ten
    consecutive step growths abort with a divergence diagnostic.
    """
    op = op or GreenOperator(spec.mu, mesh)
    x = x0
    prev_step = np.inf
    growth = 0
    for it in range(1, config.max_inner + 1):
        tx = apply_Tm(spec, x, m, mesh, op=op)
        new_vals = (1.0 - config.omega) * x.values + config.omega * tx.values
        step = float(np.max(np.abs(new_vals - x.values)))
        x = x.with_values(new_vals)
        if step < config.inner_tol:
            return x, InnerStats(m=m, iterations=it, final_step=step, converged=True)
        if step > prev_step:
            growth += 1
            if growth >= 10:
                raise SolverError(
                    f"divergence at m = {m}: step grew for 10 consecutive iterations "
                    f"(last step {step:.3g})")
        else:
            growth = 0
        prev_step = step
    return x, InnerStats(m=m, iterations=config.max_inner, final_step=prev_step,
                         converged=False)


def residual_nonlinear(spec: ProblemSpec, x: SymmetricGridFunction, mesh: Mesh,
                       m: int | None = None,
                       op: GreenOperator | None = None):
    """Integral-equation residual x - int G(t, .) f(., x(.)) on the grid.

    With m given, f is evaluated at the clamped argument, i.e. the residual
    is taken against the regularized equation the iteration actually solves;
    with m = None it is taken against the limit equation, where it carries
    an O(1/m) regularization offset for any finite-m iterate.
    """
    op = op or GreenOperator(spec.mu, mesh)
    if m is None and np.any(x.values[:-1] <= 0.0):
        raise ValueError("limit-equation residual needs x > 0 at interior nodes")
    gx = op.apply(_clamped_integrand(spec, x, m))
    return ResidualReport(nodes=x.nodes, values=x.values - gx)


def solve(spec: ProblemSpec, config: SolveConfig | None = None,
          mesh: Mesh | None = None,
          hypothesis: HypothesisReport | None = None) -> SolveReport:
    """Sweep the m schedule and extract the stabilized solution.

    Refuses to run unless both assumption checks pass.  Success requires
    every inner iteration to converge and the last two level solutions to
    agree within the inter-level tolerance.
    """
    config = config or SolveConfig.from_numerics(spec.numerics)
    mesh = mesh or spec.default_mesh()

    a1 = check_A1(spec)
    if not a1.passed:
        raise HypothesisError("growth/symmetry assumptions failed", a1.failures)
    report = hypothesis or check_A2(spec, mesh)
    if not report.passed:
        raise HypothesisError("barrier/size assumptions failed", report.failures)

    eps_max = epsilon_max(report)
    eps = 0.5 * eps_max  # strictly inside the admissible slack
    for m in config.m_schedule:
        if not 1.0 / m < eps:
            raise SolverError(f"schedule entry m = {m} violates 1/m < eps = {eps:.3g}")

    op = GreenOperator(spec.mu, mesh)
    sigma = SymmetricGridFunction(op.grid, op.apply(
        lambda tau: np.asarray(spec.psi_at(tau), dtype=float)))

    x = sigma
    inner: list[InnerStats] = []
    deviations: list[float] = []
    prev = None
    for m in config.m_schedule:
        x, stats = solve_fixed_m(spec, m, config, mesh, x0=x, op=op)
        inner.append(stats)
        if prev is not None:
            deviations.append(x.sup_diff(prev))
        prev = x

    final_m = config.m_schedule[-1]
    res = residual_nonlinear(spec, x, mesh, m=final_m, op=op)
    try:
        res_limit = residual_nonlinear(spec, x, mesh, m=None, op=op).sup
    except (ValueError, ArithmeticError):
        res_limit = float("nan")

    lower_margin = float(np.min(x.values - sigma.values))
    upper_margin = float(np.min((spec.R - eps) - x.values))

    if not all(s.converged for s in inner):
        status = "inner_failed"
    elif deviations and deviations[-1] >= config.inter_m_tol:
        status = "not_stabilized"
    else:
        status = "converged"

    return SolveReport(status=status, x=x, sigma=sigma, eps=eps, eps_max=eps_max,
                       inner=tuple(inner), inter_m_deviations=tuple(deviations),
                       lower_margin=lower_margin, upper_margin=upper_margin,
                       residual=res, residual_limit_sup=res_limit,
                       hypothesis=report)
