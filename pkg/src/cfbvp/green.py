"""The four-branch kernel of the linear boundary value problem.

On each same-sign square of [-1,1]^2 the kernel has two analytic branches
separated by the diagonal, where a Volterra correction term switches on
and produces a unit jump.  Left-half queries are canonicalized to the
right half via the exact symmetry G(t, tau) = G(-t, -tau), which makes
the symmetry a structural guarantee instead of a numerical one.

Mixed-sign (t, tau) pairs are undefined and rejected: the integral
representation only ever integrates over the half-interval containing t.
"""

from __future__ import annotations

import numpy as np

from .cf_derivative import as_order, rate_of
from .gridfn import SymmetricGridFunction
from .quadrature import Mesh, build_mesh, sample

__all__ = ["green_eval", "green_diagonal_jump", "green_sup", "apply_green",
           "half_line_solve"]


def lower_branch(lam: float, t, tau):
    """Kernel for 0 <= tau <= t <= 1 (includes the Volterra correction)."""
    return (np.cosh(lam * t) / np.cosh(lam)) * np.exp(lam * (1.0 - tau)) \
        - np.exp(lam * (t - tau))


def upper_branch(lam: float, t, tau):
    """Kernel for 0 <= t <= tau <= 1."""
    return (np.cosh(lam * t) / np.cosh(lam)) * np.exp(lam * (1.0 - tau))


def canonicalize(t: float, tau: float) -> tuple[float, float]:
    """Map (t, tau) to the right-half square; reject mixed signs."""
    if abs(t) > 1.0 or abs(tau) > 1.0:
        raise ValueError(f"(t, tau) = ({t}, {tau}) outside [-1, 1]^2")
    if t * tau < 0.0:
        raise ValueError(
            f"kernel undefined for mixed-sign arguments (t, tau) = ({t}, {tau})")
    if t < 0.0 or tau < 0.0:
        return -t, -tau
    return t, tau


def green_eval(mu, t: float, tau: float, side: str = "auto") -> float:
    """Kernel value at (t, tau).

    On the diagonal tau == t the two branches disagree by a unit jump;
    ``side`` selects which one ("lower" is the default convention,
    "upper" exposes the other one-sided value).
    """
    mu = as_order(mu)
    lam = rate_of(mu)
    t, tau = canonicalize(float(t), float(tau))
    if side not in ("auto", "lower", "upper"):
        raise ValueError(f"side must be auto, lower or upper, got {side!r}")
    if tau < t or (tau == t and side != "upper"):
        return float(lower_branch(lam, t, tau))
    return float(upper_branch(lam, t, tau))


def green_diagonal_jump(mu, t: float) -> float:
    """Upper-side minus lower-side kernel value at tau == t (analytically 1)."""
    mu = as_order(mu)
    lam = rate_of(mu)
    if abs(t) > 1.0:
        raise ValueError(f"t = {t} outside [-1, 1]")
    t = abs(t)
    return float(upper_branch(lam, t, t) - lower_branch(lam, t, t))


def green_sup(mu, grid_density: int) -> float:
    """Max kernel value over a tensor grid, both diagonal sides included.

    By canonicalization the two same-sign squares carry identical values,
    so a single right-half sweep covers both.
    """
    mu = as_order(mu)
    if grid_density < 2:
        raise ValueError("grid_density must be >= 2")
    lam = rate_of(mu)
    g = np.linspace(0.0, 1.0, grid_density)
    tt, ss = np.meshgrid(g, g, indexing="ij")
    lo = np.where(ss <= tt, lower_branch(lam, tt, ss), -np.inf)
    up = np.where(ss >= tt, upper_branch(lam, tt, ss), -np.inf)
    return float(max(np.max(lo), np.max(up)))


def split_meshes(t: float, mesh: Mesh) -> tuple[Mesh | None, Mesh | None]:
    """Sub-meshes on [0, t] and [t, 1] for diagonal-split integration.

    The [t, 1] part keeps the parent mesh's grading toward the right
    endpoint; [0, t] is uniform (no singularity there).
    """
    cells = mesh.cells
    k = mesh.nodes_per_cell
    left = None
    right = None
    if t > 0.0:
        n_left = max(1, int(round(cells * t)))
        left = build_mesh(0.0, t, n_left, nodes_per_cell=k)
    if t < 1.0:
        gamma = mesh.gamma if mesh.singular_at in ("right", "both") else 1.0
        n_right = max(1, int(round(cells * (1.0 - t))))
        right = build_mesh(t, 1.0, n_right, gamma=gamma,
                           singular_at="right" if gamma > 1.0 else "none",
                           nodes_per_cell=k)
    return left, right


def half_line_solve(mu, yfn, out_nodes, mesh: Mesh,
                    with_closed_form: bool = False):
    """x(t) = int_0^1 G(t, tau) y(tau) dtau at each right-half output node.

    The integral is split at tau = t (the kernel's diagonal jump).  With
    ``with_closed_form`` the algebraically equivalent form
    cosh(lam t)/cosh(lam) * int_0^1 e^{lam(1-tau)} y - int_0^t e^{lam(t-tau)} y
    is evaluated on the same quadrature nodes and the max discrepancy between
    the two paths is returned alongside the values.
    """
    mu = as_order(mu)
    lam = rate_of(mu)
    out_nodes = np.asarray(out_nodes, dtype=float)
    vals = np.empty_like(out_nodes)
    discrepancy = 0.0
    for i, t in enumerate(out_nodes):
        left, right = split_meshes(float(t), mesh)
        green_val = 0.0
        bvp_a = 0.0  # int e^{lam(1-tau)} y over [0, 1]
        bvp_b = 0.0  # int e^{lam(t-tau)} y over [0, t]
        if left is not None:
            x = left.flat_nodes
            w = left.flat_weights
            y = sample(yfn, x)
            green_val += float(np.dot(w, lower_branch(lam, t, x) * y))
            bvp_a += float(np.dot(w, np.exp(lam * (1.0 - x)) * y))
            bvp_b += float(np.dot(w, np.exp(lam * (t - x)) * y))
        if right is not None:
            x = right.flat_nodes
            w = right.flat_weights
            y = sample(yfn, x)
            green_val += float(np.dot(w, upper_branch(lam, t, x) * y))
            bvp_a += float(np.dot(w, np.exp(lam * (1.0 - x)) * y))
        vals[i] = green_val
        if with_closed_form:
            closed = (np.cosh(lam * t) / np.cosh(lam)) * bvp_a - bvp_b
            discrepancy = max(discrepancy, abs(green_val - closed))
    if with_closed_form:
        return vals, discrepancy
    return vals


def apply_green(mu, y: SymmetricGridFunction, mesh: Mesh) -> SymmetricGridFunction:
    """Integral representation x(t) = int_0^1 G(t, tau) y(tau) dtau.

    Requires y(0) = 0 (the linear problem's compatibility condition); the
    output inherits y's grid and is symmetric by construction.
    """
    if abs(float(y(0.0))) > 1e-12:
        raise ValueError(f"y(0) = {float(y(0.0))!r} violates the y(0) = 0 requirement")
    vals = half_line_solve(mu, y, y.nodes, mesh)
    return y.with_values(vals)
