"""The strip metric rho(y)^2 dx^2 + dy^2 and the smooth blends used by the surfaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class ConstraintError(ValueError):
    """Raised when a metric profile breaks its value constraints."""


def smoothstep5(s):
    """Quintic 6s^5 - 15s^4 + 10s^3 clamped to [0, 1]; C2 at both ends."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    return s * s * s * (s * (6 * s - 15) + 10)


def flat_bump(s):
    """C-infinity bump on (0, 1), flat at both ends, equal to 1 at s = 1/2."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 1)
    u = 2 * s[inside] - 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u * u))
    return out if out.ndim else float(out)


def default_rho(y):
    """1/4 for y <= -1, 1 for y >= -1/2, quintic blend in between."""
    return 0.25 + 0.75 * smoothstep5((np.asarray(y, dtype=float) + 1.0) / 0.5)


@dataclass
class StripMetric:
    rho: Callable = default_rho
    descriptor: dict = field(default_factory=lambda: {"rho": "quintic blend on [-1, -1/2]"})

    def horizontal_length(self, y: float, x0: float, x1: float) -> float:
        return float(self.rho(y)) * abs(x1 - x0)

    def segment_length(self, p0, p1, chi: Callable | None = None, nodes: int = 4) -> np.ndarray:
        """Metric length of straight coordinate segments p0 -> p1 (arrays of shape (m, 2))."""
        return segment_lengths(self.rho, np.asarray(p0, float), np.asarray(p1, float), chi, nodes)


def segment_lengths(rho, p0, p1, chi=None, nodes: int = 4) -> np.ndarray:
    """int_0^1 sqrt(rho(y)^2 dx^2 + dy^2) sqrt(1 + chi) dt by Gauss-Legendre."""
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (xg + 1.0)
    w = 0.5 * wg
    d = p1 - p0
    pts_y = p0[:, 1:2] + t[None, :] * d[:, 1:2]
    r = rho(pts_y)
    speed = np.sqrt((r * d[:, 0:1]) ** 2 + d[:, 1:2] ** 2)
    if chi is not None:
        pts_x = p0[:, 0:1] + t[None, :] * d[:, 0:1]
        speed = speed * np.sqrt(1.0 + chi(pts_x, pts_y))
    return speed @ w


def build_strip(rho: Callable = default_rho, samples: int = 4001) -> StripMetric:
    """Validate a profile: 1/4 <= rho <= 1, rho = 1 above -1/2, rho = 1/4 below -1."""
    y = np.linspace(-3.0, 2.0, samples)
    v = np.asarray(rho(y), dtype=float)
    tol = 1e-12
    if np.any(v < 0.25 - tol) or np.any(v > 1 + tol):
        raise ConstraintError("rho must take values in [1/4, 1]")
    if np.any(np.abs(v[y >= -0.5] - 1.0) > tol):
        raise ConstraintError("rho must equal 1 for y >= -1/2")
    if np.any(np.abs(v[y <= -1.0] - 0.25) > tol):
        raise ConstraintError("rho must equal 1/4 for y <= -1")
    return StripMetric(rho, {"rho": getattr(rho, "__name__", "custom")})
