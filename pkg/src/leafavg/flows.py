"""Suspension flows over interval exchanges: hitting times, the flow map,
symmetric time averages and leaf length averages."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .actions1d import IntervalExchange, iet_keane4, iet_reducible, iet_rotation
from .averages import AverageSeries, Observable1D, time_average
from .group_core import DomainError


@dataclass
class SuspensionSpace:
    """X_rho = {(x, y) : 0 <= y < roof(x)} with (x, roof(x)) glued to (T x, 0)."""
    base: IntervalExchange
    roof: Callable
    roof_inf: float
    roof_sup: float
    name: str = ""

    def __post_init__(self):
        if not (0 < self.roof_inf <= self.roof_sup < math.inf):
            raise ValueError("roof must be bounded and bounded away from 0")

    def height(self, x) -> float:
        v = self.roof(x)
        if not (self.roof_inf * (1 - 1e-12) <= v <= self.roof_sup * (1 + 1e-12)):
            raise DomainError(f"roof({x}) = {v} outside declared bounds")
        return v


@dataclass(frozen=True)
class FlowPoint:
    x: float
    y: float


def constant_roof(base: IntervalExchange, c: float = 1.0, name: str = "") -> SuspensionSpace:
    return SuspensionSpace(base, lambda x: c, c, c, name or f"roof={c}")


def affine_roof(base: IntervalExchange, slope: float = 0.5, name: str = "") -> SuspensionSpace:
    """roof(x) = 1 + slope * x."""
    return SuspensionSpace(base, lambda x: 1 + slope * x, min(1, 1 + slope),
                           max(1, 1 + slope), name or f"roof=1+{slope}x")


def breakpoint_roof(base: IntervalExchange, name: str = "") -> SuspensionSpace:
    """Roof continuous off the breakpoints of T with a jump at each of them,
    like the leaf-length function of a glued surface."""
    bps = [float(b) for b in base.breakpoints]

    def roof(x):
        i = max(j for j, b in enumerate(bps) if x >= b) if x >= bps[0] else 0
        return 1.0 + 0.25 * i + 0.1 * math.sin(2 * math.pi * float(x))
    m = len(bps)
    return SuspensionSpace(base, roof, 0.9, 1.0 + 0.25 * (m - 1) + 0.1, name or "breakpoint_roof")


def suspension_preset(name: str) -> SuspensionSpace:
    if name == "rotation":
        return constant_roof(iet_rotation(math.sqrt(2) - 1), 1.0, "rotation")
    if name == "keane":
        return breakpoint_roof(iet_keane4(), "keane")
    if name == "reducible":
        return constant_roof(iet_reducible(), 1.0, "reducible")
    raise ValueError(f"unknown suspension preset {name!r}")


# ---------------------------------------------------------------- hitting times

def hitting_times(s: SuspensionSpace, x, n: int):
    """tau_n(x) with tau_0 = 0, tau_{k+1} = tau_k + roof(T^k x); n < 0 runs backwards."""
    tau = 0
    if n >= 0:
        for _ in range(n):
            tau = tau + s.height(x)
            x = s.base.forward(x)
    else:
        for _ in range(-n):
            x = s.base.inverse(x)
            tau = tau - s.height(x)
    return tau


def hitting_time_list(s: SuspensionSpace, x, n: int) -> list:
    """[tau_0, ..., tau_n] for n >= 0."""
    out, tau = [0], 0
    for _ in range(n):
        tau = tau + s.height(x)
        x = s.base.forward(x)
        out.append(tau)
    return out


# ---------------------------------------------------------------- flow

def _normalize(s: SuspensionSpace, x, y):
    """Representative of (x, y) in the fundamental domain; returns (x, y, crossings)."""
    n = 0
    h = s.height(x)
    while y >= h:
        y -= h
        x = s.base.forward(x)
        h = s.height(x)
        n += 1
    while y < 0:
        x = s.base.inverse(x)
        y += s.height(x)
        n -= 1
        if y >= s.height(x):    # -tiny + h rounded up to h
            y = 0.0
            x = s.base.forward(x)
            n += 1
            break
    return x, y, n


def flow(s: SuspensionSpace, z: FlowPoint, t: float) -> FlowPoint:
    """f^t(x, y) = (T^n x, y + t - tau_n(x)) with tau_n(x) <= y + t < tau_{n+1}(x)."""
    if not (0 <= z.y < s.height(z.x)):
        raise DomainError("point outside the fundamental domain")
    x, y, _ = _normalize(s, z.x, z.y + t)
    return FlowPoint(x, y)


def segments(s: SuspensionSpace, z: FlowPoint, t0: float, t1: float) -> list:
    """Pieces (ts, te, x, y_start, length) of t -> f^t z on [t0, t1], t0 <= 0 <= t1,
    ordered by time.  On each piece f^t z = (x, y_start + t - ts)."""
    if not (t0 <= 0 <= t1):
        raise ValueError("need t0 <= 0 <= t1")
    fwd, back = [], []
    x, y, t, left = z.x, z.y, 0.0, t1
    while left > 0:
        step = min(left, s.height(x) - y)
        fwd.append((t, t + step, x, y, step))
        t, left = t + step, left - step
        x, y = s.base.forward(x), 0.0
    x, y, t, left = z.x, z.y, 0.0, -t0
    while left > 0:
        step = min(left, y)
        if step > 0:
            back.append((t - step, t, x, y - step, step))
        t, left = t - step, left - step
        x = s.base.inverse(x)
        y = s.height(x)
    return back[::-1] + fwd


class SuspensionFlow:
    """Adapter exposing ``segments`` for :func:`averages.time_average`."""

    def __init__(self, s: SuspensionSpace):
        self.space = s

    def segments(self, z, t0, t1):
        return segments(self.space, z, t0, t1)

    def __call__(self, z, t):
        return flow(self.space, z, t)


def _piece_integrals(pieces, psi, order: int = 8):
    """Integral of psi over vertical pieces (x, y0, length); exact when psi ignores y."""
    if getattr(psi, "descriptor", {}).get("base_only"):
        return [L * float(psi(x)) for x, y0, L in pieces]
    xg, wg = np.polynomial.legendre.leggauss(order)
    out = []
    for x, y0, L in pieces:
        ys = y0 + 0.5 * L * (1 + xg)
        vals = np.asarray(psi(np.full_like(ys, float(x)), ys), dtype=float)
        out.append(0.5 * L * math.fsum((wg * vals).tolist()))
    return out


def leaf_time_average(s: SuspensionSpace, psi, z: FlowPoint, T: float) -> tuple:
    """(1/2T) int_{-T}^{T} psi(f^t z) dt; returns (value, error)."""
    if T <= 0:
        raise ValueError("T must be positive")
    if getattr(psi, "descriptor", {}).get("base_only"):
        segs = segments(s, z, -T, T)
        ints = _piece_integrals([(x, y, L) for _, _, x, y, L in segs], psi)
        return math.fsum(ints) / math.fsum(L for *_, L in segs), 0.0
    return time_average(SuspensionFlow(s), psi, z, T)


def leaf_pieces(s: SuspensionSpace, z: FlowPoint, r: float) -> list:
    """Vertical pieces (x, y0, length) of the leaf ball of arc-length radius r about z,
    built by walking up and down the fibres."""
    up, down = [], []
    x, y, left = z.x, z.y, r
    while left > 0:
        h = s.height(x)
        step = min(left, h - y)
        up.append((x, y, step))
        left -= step
        x, y = s.base.forward(x), 0.0
    x, y, left = z.x, z.y, r
    while left > 0:
        step = min(left, y)
        if step > 0:
            down.append((x, y - step, step))
        left -= step
        x = s.base.inverse(x)
        y = s.height(x)
    return down[::-1] + up


def length_average(s: SuspensionSpace, psi, z: FlowPoint, r: float) -> float:
    """Mean of psi over the leaf ball of radius r (arc length along fibres)."""
    if r <= 0:
        raise ValueError("r must be positive")
    pieces = leaf_pieces(s, z, r)
    ints = _piece_integrals(pieces, psi)
    return math.fsum(ints) / math.fsum(L for _, _, L in pieces)


def time_average_series(s: SuspensionSpace, psi, z: FlowPoint, Ts) -> AverageSeries:
    vals, errs = [], []
    for T in Ts:
        v, e = leaf_time_average(s, psi, z, T)
        vals.append(v)
        errs.append(e)
    return AverageSeries(list(Ts), vals, errs, name="time_average")


def dyadic_times(kmin: int, kmax: int) -> list:
    return [2.0 ** k for k in range(kmin, kmax + 1)]


def base_observable(f: Callable, descriptor: dict | None = None, sup: float = 1.0) -> Observable1D:
    """Observable on X_rho depending on x only; integrals along fibres are exact."""
    d = dict(descriptor or {})
    d["base_only"] = True

    def ev(x, *rest):
        v = np.asarray(f(np.asarray(x, dtype=float)), dtype=float)
        if rest:
            return np.broadcast_to(v, np.broadcast(np.asarray(x), *map(np.asarray, rest)).shape)
        return v if v.ndim else float(v)
    return Observable1D(ev, d, sup)


def component_sign(split: float = 0.5) -> Observable1D:
    """+1 on [0, split), -1 on [split, 1)."""
    return base_observable(lambda x: np.where(x < split, 1.0, -1.0),
                           {"type": "component_sign", "split": split})


def base_cosine(m: int = 1) -> Observable1D:
    return base_observable(lambda x: np.cos(2 * np.pi * m * x), {"type": "cos", "m": m})


def trajectory_csv(s: SuspensionSpace, z: FlowPoint, T: float, dt: float) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["t", "x", "y"])
    n = int(math.floor(T / dt))
    for i in range(-n, n + 1):
        p = flow(s, z, i * dt)
        wr.writerow([repr(i * dt), repr(float(p.x)), repr(float(p.y))])
    return buf.getvalue()
