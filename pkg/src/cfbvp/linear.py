"""General solutions of the linear integro-differential equation, the
two-point boundary value solve, and its residual diagnostics.

On each half-interval the homogeneous solutions are cosh(lam t) and
sinh(lam t); a particular solution is a one-sided exponential convolution
of the forcing.  The boundary value solve goes through the kernel path
(apply_green) and is always cross-checked against the closed form that the
kernel was derived from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .cf_derivative import as_order, rate_of
from .green import apply_green, half_line_solve
from .gridfn import SymmetricGridFunction
from .quadrature import Mesh, integrate, mesh_from_breakpoints, sample

__all__ = ["GeneralSolutionCoeffs", "general_solution_right_half",
           "general_solution_left_half", "solve_linear_bvp", "residual_linear",
           "LinearSolveResult", "ResidualReport"]


@dataclass(frozen=True)
class GeneralSolutionCoeffs:
    """Free coefficients (c1, c2) of the homogeneous part on one half."""

    c1: float
    c2: float


def general_solution_right_half(mu, coeffs: GeneralSolutionCoeffs, y,
                                t: float, mesh: Mesh) -> float:
    """c1 cosh(lam t) + c2 sinh(lam t) - int_0^t e^{lam(t-tau)} y(tau) dtau, t in [0,1]."""
    mu = as_order(mu)
    lam = rate_of(mu)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t = {t} outside [0, 1]")
    val = coeffs.c1 * np.cosh(lam * t) + coeffs.c2 * np.sinh(lam * t)
    if t > 0.0:
        m = mesh.rescaled(0.0, t)
        val -= integrate(lambda s: np.exp(lam * (t - s)) * sample_y(y, s), m)
    return float(val)


def general_solution_left_half(mu, coeffs: GeneralSolutionCoeffs, y,
                               t: float, mesh: Mesh) -> float:
    """c1 cosh(lam t) + c2 sinh(lam t) - int_t^0 e^{lam(tau-t)} y(tau) dtau, t in [-1,0]."""
    mu = as_order(mu)
    lam = rate_of(mu)
    if not -1.0 <= t <= 0.0:
        raise ValueError(f"t = {t} outside [-1, 0]")
    val = coeffs.c1 * np.cosh(lam * t) + coeffs.c2 * np.sinh(lam * t)
    if t < 0.0:
        m = mesh.rescaled(t, 0.0)
        val -= integrate(lambda s: np.exp(lam * (s - t)) * sample_y(y, s), m)
    return float(val)


def sample_y(y, s):
    v = y(s)
    return np.asarray(v, dtype=float)


@dataclass(frozen=True)
class LinearSolveResult:
    x: SymmetricGridFunction
    closed_form_discrepancy: float


def solve_linear_bvp(mu, y: SymmetricGridFunction, mesh: Mesh) -> LinearSolveResult:
    """Solve the linear BVP for symmetric forcing y with y(0) = 0.

    The returned value is the kernel-path solution together with the max
    discrepancy against the closed-form path, which is computed on the
    same quadrature nodes and should agree to rounding.
    """
    x = apply_green(mu, y, mesh)
    _, discrepancy = half_line_solve(mu, y, y.nodes, mesh, with_closed_form=True)
    return LinearSolveResult(x=x, closed_form_discrepancy=float(discrepancy))


@dataclass(frozen=True)
class ResidualReport:
    nodes: np.ndarray
    values: np.ndarray

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def residual_linear(mu, x, y, mesh: Mesh, half: str = "right") -> ResidualReport:
    """Pointwise residual of the linear equation on one half-interval.

    x and y may be callables on the half or SymmetricGridFunction values
    (evaluated through their even extension).  x is sampled at the mesh
    breakpoints and its second derivative comes from a cubic-spline fit,
    so tolerances on smooth inputs are interpolation-limited (1e-8 scale
    at a few hundred cells) rather than quadrature-limited.
    """
    mu = as_order(mu)
    lam = rate_of(mu)
    if half not in ("right", "left"):
        raise ValueError(f"half must be 'right' or 'left', got {half!r}")
    bps = mesh.breakpoints
    if mesh.a != 0.0 or mesh.b != 1.0:
        raise ValueError("mesh must cover [0, 1]; the half flag selects the sign")
    if len(bps) < 9:
        raise ValueError("grid too coarse for spline differentiation (<9 nodes)")
    grid = bps if half == "right" else -bps[::-1]
    xv = np.array([float(x(s)) for s in grid])
    yv = np.array([float(y(s)) for s in grid])
    spline = CubicSpline(grid, xv, bc_type="not-a-knot")
    x2 = spline.derivative(2)
    k = mesh.nodes_per_cell
    res = np.empty_like(grid)
    for i, t in enumerate(grid):
        if half == "right":
            if t == 0.0:
                res[i] = yv[i]
                continue
            # integrate on spline-knot cells so the piecewise-cubic pieces
            # are handled exactly by the Gauss rule
            m = mesh_from_breakpoints(grid[: i + 1], k)
            kern = np.exp(-lam * (t - m.flat_nodes))
        else:
            if t == 0.0:
                res[i] = yv[i]
                continue
            m = mesh_from_breakpoints(grid[i:], k)
            kern = np.exp(-lam * (m.flat_nodes - t))
        w = m.flat_weights
        s = m.flat_nodes
        cfd_part = float(np.dot(w, kern * x2(s)))          # (2-mu) * fractional term
        memory = lam * lam * float(np.dot(w, kern * spline(s)))
        res[i] = cfd_part + yv[i] - memory
    return ResidualReport(nodes=grid, values=res)
