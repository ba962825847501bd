"""Sampled even functions on [-1, 1], stored on the right half.

Evaluation at t reads the interpolant at |t|, so the symmetry y(t) = y(-t)
holds exactly by construction rather than up to rounding.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = ["SymmetricGridFunction"]


class SymmetricGridFunction:
    """An even function sampled at right-half nodes 0 = s0 < ... < sN = 1."""

    def __init__(self, nodes, values):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be 1-d arrays of equal length")
        if len(nodes) < 4:
            raise ValueError("need at least 4 nodes for cubic interpolation")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("nodes must strictly increase")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("node set must include both endpoints 0 and 1")
        nodes.setflags(write=False)
        values.setflags(write=False)
        self.nodes = nodes
        self.values = values
        self._spline = None

    @classmethod
    def from_callable(cls, fn, nodes) -> "SymmetricGridFunction":
        nodes = np.asarray(nodes, dtype=float)
        return cls(nodes, np.array([float(fn(s)) for s in nodes]))

    def _interp(self) -> CubicSpline:
        if self._spline is None:
            self._spline = CubicSpline(self.nodes, self.values, bc_type="not-a-knot")
        return self._spline

    def __call__(self, t):
        """Interpolated value at |t| (even extension is structural)."""
        return self._interp()(np.abs(t))

    def with_values(self, values) -> "SymmetricGridFunction":
        return SymmetricGridFunction(self.nodes, values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def sup_diff(self, other: "SymmetricGridFunction") -> float:
        if not np.array_equal(self.nodes, other.nodes):
            raise ValueError("grid mismatch")
        return float(np.max(np.abs(self.values - other.values)))

    def __repr__(self) -> str:
        return (f"SymmetricGridFunction({len(self.nodes)} right-half nodes, "
                f"sup={self.sup_norm():.6g})")
