"""Exponential-kernel fractional left/right derivatives.

The operators act on the n-th classical derivative of the target function
through a nonsingular kernel exp(-rate * |t - tau|) with
rate = (mu - n + 1) / (n - mu) for order mu in (n-1, n).  The boundary
value problem treated by this package uses n = 2 exclusively, for which
rate = (mu - 1) / (2 - mu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import Mesh, integrate

__all__ = ["FracOrder", "rate_of", "cf_left", "cf_right"]


@dataclass(frozen=True)
class FracOrder:
    """Fractional order mu, restricted to the working range (1, 2)."""

    mu: float

    def __post_init__(self):
        if not 1.0 < self.mu < 2.0:
            raise ValueError(f"order must lie in (1, 2), got {self.mu}")

    @property
    def rate(self) -> float:
        return (self.mu - 1.0) / (2.0 - self.mu)


def as_order(mu) -> float:
    """Validate and unwrap an order given as FracOrder or bare float."""
    if isinstance(mu, FracOrder):
        return mu.mu
    return FracOrder(float(mu)).mu


def rate_of(mu) -> float:
    """The kernel decay rate (mu - 1) / (2 - mu) > 0 for mu in (1, 2)."""
    m = as_order(mu)
    return (m - 1.0) / (2.0 - m)


def _general_rate(mu: float, n: int) -> float:
    if n < 1:
        raise ValueError("derivative count n must be a positive integer")
    if not n - 1 < mu < n:
        raise ValueError(f"order {mu} outside ({n - 1}, {n})")
    return (mu - n + 1.0) / (n - mu)


def cf_left(xn, mu, t: float, mesh: Mesh, n: int = 2) -> float:
    """Left derivative at t >= 0: (1/(n-mu)) * int_0^t exp(-rate*(t-s)) xn(s) ds.

    xn is the n-th classical derivative of the target function; mesh fixes
    the cell layout and is rescaled onto [0, t].
    """
    mu = float(mu.mu) if isinstance(mu, FracOrder) else float(mu)
    rate = _general_rate(mu, n)
    if t < 0:
        raise ValueError(f"left derivative needs t >= 0, got {t}")
    if t == 0:
        return 0.0
    m = mesh.rescaled(0.0, t)
    val = integrate(lambda s: np.exp(-rate * (t - s)) * np.asarray(xn(s), dtype=float), m)
    return val / (n - mu)


def cf_right(xn, mu, t: float, mesh: Mesh, n: int = 2) -> float:
    """Right derivative at t <= 0: ((-1)^n/(n-mu)) * int_t^0 exp(-rate*(s-t)) xn(s) ds."""
    mu = float(mu.mu) if isinstance(mu, FracOrder) else float(mu)
    rate = _general_rate(mu, n)
    if t > 0:
        raise ValueError(f"right derivative needs t <= 0, got {t}")
    if t == 0:
        return 0.0
    m = mesh.rescaled(t, 0.0)
    val = integrate(lambda s: np.exp(-rate * (s - t)) * np.asarray(xn(s), dtype=float), m)
    return ((-1) ** n) * val / (n - mu)
