"""Ball averages over group words, symmetric time averages and torus ball averages."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .group_core import (DEFAULT_CAP, DEFAULT_TOL, FreeGroupAction, GroupAction,
                         ResourceCapError, ball_size, enumerate_ball, orbit_ball)


# ---------------------------------------------------------------- series

@dataclass
class AverageSeries:
    """Samples (index, value, error) with trailing-window limsup/liminf estimates."""
    indices: list
    values: list
    errors: list = None
    window: int | None = None
    name: str = ""
    exact: list | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.indices = list(self.indices)
        self.values = [float(v) for v in self.values]
        if self.errors is None:
            self.errors = [0.0] * len(self.values)
        self.errors = [float(e) for e in self.errors]
        if len(self.indices) != len(self.values) or len(self.errors) != len(self.values):
            raise ValueError("indices, values and errors must have equal length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")

    def __len__(self):
        return len(self.values)

    @property
    def window_size(self) -> int:
        if self.window is not None:
            return max(1, min(int(self.window), len(self.values)))
        return max(1, math.ceil(len(self.values) / 4))

    def trailing(self) -> list:
        return self.values[-self.window_size:]

    @property
    def limsupEstimate(self) -> float:
        return max(self.trailing())

    @property
    def liminfEstimate(self) -> float:
        return min(self.trailing())

    def window_descriptor(self) -> dict:
        w = self.window_size
        return {"kind": "trailing", "size": w,
                "from_index": self.indices[-w], "to_index": self.indices[-1]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["index", "value", "error"])
        for i, v, e in zip(self.indices, self.values, self.errors):
            wr.writerow([i, repr(v), repr(e)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        d = {"name": self.name,
             "samples": [{"index": i, "value": v, "error": e}
                         for i, v, e in zip(self.indices, self.values, self.errors)],
             "window": self.window_descriptor(),
             "limsupEstimate": self.limsupEstimate,
             "liminfEstimate": self.liminfEstimate}
        if self.exact is not None:
            d["exact"] = [str(q) for q in self.exact]
        if self.meta:
            d["meta"] = self.meta
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass
class OscillationReport:
    limsupEstimate: float
    liminfEstimate: float
    gap: float
    nonconvergent: bool
    window: dict
    tolerance: float


def oscillation_diagnostic(s: AverageSeries, tol: float = 1e-2) -> OscillationReport:
    """Trailing-window max/min of a series; flags a gap larger than tol."""
    if len(s) < 8:
        raise ValueError("oscillation diagnostic needs at least 8 samples")
    hi, lo = s.limsupEstimate, s.liminfEstimate
    gap = hi - lo
    return OscillationReport(hi, lo, gap, gap > tol, s.window_descriptor(), tol)


# ---------------------------------------------------------------- observables

@dataclass
class Observable1D:
    """Bounded observable with a vectorised evaluator and a descriptor."""
    evaluator: Callable
    descriptor: dict = field(default_factory=dict)
    sup: float = 1.0
    bandwidth: float = 1.0   # largest frequency, used to size quadrature panels

    def __call__(self, x, *rest):
        return self.evaluator(x, *rest)

    def __add__(self, other: "Observable1D") -> "Observable1D":
        return Observable1D(lambda *a: self(*a) + other(*a),
                            {"type": "sum", "terms": [self.descriptor, other.descriptor]},
                            self.sup + other.sup, max(self.bandwidth, other.bandwidth))

    def scaled(self, c: float) -> "Observable1D":
        return Observable1D(lambda *a: c * self(*a), {"type": "scaled", "c": c, "of": self.descriptor},
                            abs(c) * self.sup, self.bandwidth)


def constant(c: float) -> Observable1D:
    c = float(c)

    def ev(x, *rest):
        if rest:
            return np.full(np.broadcast(np.asarray(x), *map(np.asarray, rest)).shape, c)
        if hasattr(x, "codes"):   # free-group word as a point
            return c
        a = np.asarray(x, dtype=float)
        if a.ndim == 0:
            return c
        return np.full(a.shape[:1], c)
    return Observable1D(ev, {"type": "constant", "c": c}, abs(c), 0.0)


def trig(coeffs: dict) -> Observable1D:
    """sum_m (a_m cos 2 pi m x + b_m sin 2 pi m x) from {m: (a_m, b_m)}."""
    items = sorted((int(m), float(ab[0]), float(ab[1])) for m, ab in coeffs.items())

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for m, a, b in items:
            out = out + a * np.cos(2 * np.pi * m * x) + b * np.sin(2 * np.pi * m * x)
        return out
    sup = sum(abs(a) + abs(b) for _, a, b in items)
    bw = max((abs(m) for m, _, _ in items), default=0)
    return Observable1D(ev, {"type": "trig", "coeffs": {str(m): [a, b] for m, a, b in items}},
                        sup, bw)


def cosine(m: int = 1) -> Observable1D:
    return trig({m: (1.0, 0.0)})


def torus_character(m, part: str = "cos") -> Observable1D:
    """cos(2 pi m.x) or sin(2 pi m.x) on T^d; points are (..., d) arrays."""
    m = np.asarray(m, dtype=float)
    f = np.cos if part == "cos" else np.sin

    def ev(x):
        x = np.asarray(x, dtype=float)
        return f(2 * np.pi * (x @ m))
    return Observable1D(ev, {"type": "character", "m": m.tolist(), "part": part},
                        1.0, float(np.abs(m).sum()))


def observable_from_config(cfg: dict) -> Observable1D:
    kind = cfg.get("type", "trig")
    if kind == "constant":
        return constant(float(cfg["c"]))
    if kind == "cos":
        return cosine(int(cfg.get("m", 1)))
    if kind == "trig":
        return trig({int(k): v for k, v in cfg["coeffs"].items()})
    if kind == "character":
        return torus_character(cfg["m"], cfg.get("part", "cos"))
    raise ValueError(f"unknown observable type {kind!r}")


# ---------------------------------------------------------------- ball averages

def word_points(action: GroupAction, y, n: int, cap: int = DEFAULT_CAP):
    """Yield, level by level, f_a(y) for every reduced word a of that length."""
    if ball_size(action.k, n) > cap:
        raise ResourceCapError(f"ball of radius {n} exceeds cap {cap}")
    y = action.check_point(y)
    ng = 2 * action.k
    vector = not action.exact and getattr(action, "space", "") == "circle"
    prev_pts = np.array([y], dtype=float) if vector else [y]
    prev_first = np.full(1, -1, dtype=np.int64)
    for _ in range(1, n + 1):
        pts, first = [], []
        for g in range(ng):
            src = np.nonzero(prev_first != (g ^ 1))[0]
            if src.size == 0:
                continue
            sel = prev_pts[src] if vector else [prev_pts[i] for i in src]
            out = action.apply_batch(g, sel)
            pts.append(np.asarray(out, dtype=float) if vector else list(out))
            first.append(np.full(src.size, g, dtype=np.int64))
        prev_pts = np.concatenate(pts) if vector else [p for chunk in pts for p in chunk]
        prev_first = np.concatenate(first)
        yield prev_pts


def _eval_points(phi, pts):
    if isinstance(pts, np.ndarray):
        return np.asarray(phi(pts), dtype=float)
    if pts and isinstance(pts[0], tuple):
        return np.asarray(phi(np.asarray(pts, dtype=float)), dtype=float)
    if pts and not isinstance(pts[0], (int, float, np.floating)) and hasattr(pts[0], "codes"):
        return np.asarray([phi(p) for p in pts], dtype=float)
    return np.asarray(phi(np.asarray([float(p) for p in pts])), dtype=float)


def ball_average(action: GroupAction, phi, y, n: int, tol: float = DEFAULT_TOL,
                 classes: bool = False, cap: int = DEFAULT_CAP) -> float:
    """beta_n phi(y): mean of phi(f_a(y)) over all reduced words 1 <= |a| <= n.

    With ``classes=True`` the mean is taken over the orbit classes G_n(y).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if classes:
        ob = orbit_ball(action, y, n, tol, cap)
        vals = _eval_points(phi, ob.points())
        return math.fsum(vals.tolist()) / len(vals)
    total, count = [], 0
    for pts in word_points(action, y, n, cap):
        v = _eval_points(phi, pts)
        total.append(math.fsum(v.tolist()))
        count += v.size
    return math.fsum(total) / count


def ball_average_series(action, phi, y, radii, tol: float = DEFAULT_TOL,
                        classes: bool = False) -> AverageSeries:
    radii = sorted(int(r) for r in radii)
    if classes:
        ob = orbit_ball(action, y, radii[-1], tol)
        vals = [ball_average_from_orbit(ob, phi, r) for r in radii]
        return AverageSeries(radii, vals, name="ball_average_classes")
    sums, counts = [], []
    for pts in word_points(action, y, radii[-1]):
        v = _eval_points(phi, pts)
        sums.append(math.fsum(v.tolist()))
        counts.append(v.size)
    cs, cc = np.cumsum(counts), []
    vals = [math.fsum(sums[:r]) / int(cs[r - 1]) for r in radii]
    return AverageSeries(radii, vals, name="ball_average")


def ball_average_from_orbit(ob, phi, m: int) -> float:
    vals = _eval_points(phi, ob.points(m))
    return math.fsum(vals.tolist()) / len(vals)


# ---------------------------------------------------------------- quadrature helpers

def gauss_legendre(f: Callable, a: float, b: float, panels: int, order: int = 8) -> float:
    """Composite Gauss-Legendre rule, vectorised over all nodes."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return math.fsum((weights * np.asarray(f(nodes), dtype=float)).tolist())


def refined_integral(f: Callable, a: float, b: float, panels: int, order: int = 8):
    """Integral with N and 2N panels; the difference is the declared error."""
    coarse = gauss_legendre(f, a, b, panels, order)
    fine = gauss_legendre(f, a, b, 2 * panels, order)
    return fine, abs(fine - coarse)


def time_average(flow, psi, z, T: float, order: int = 8):
    """(1/2T) int_{-T}^{T} psi(f^t z) dt by Gauss-Legendre on each flow segment.

    ``flow.segments(z, t0, t1)`` must return (t_start, t_end, x, y_start) pieces
    on which the orbit is (x, y_start + t - t_start).  Returns (value, error).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    segs = flow.segments(z, -T, T)
    ts = np.array([s[0] for s in segs])
    te = np.array([s[1] for s in segs])
    xs = np.array([s[2] for s in segs], dtype=float)
    ys = np.array([s[3] for s in segs], dtype=float)

    def rule(npan):
        xg, wg = np.polynomial.legendre.leggauss(order)
        u = (np.arange(npan)[:, None] + 0.5 + 0.5 * xg[None, :]) / npan   # nodes in (0,1)
        w = (0.5 * wg[None, :] / npan) * np.ones((npan, 1))
        u, w = u.ravel(), w.ravel()
        L = te - ts
        tt = L[:, None] * u[None, :]
        vals = psi(np.broadcast_to(xs[:, None], tt.shape), ys[:, None] + tt)
        per = (np.asarray(vals, dtype=float) * w[None, :]).sum(axis=1) * L
        return math.fsum(per.tolist())
    total = math.fsum((te - ts).tolist())
    coarse, fine = rule(1), rule(2)
    return fine / total, abs(fine - coarse) / total


# ---------------------------------------------------------------- torus ball averages

def ball_kernel(z, l: int):
    """Gamma(l/2+1) (2/z)^{l/2} J_{l/2}(z): mean of e^{i xi.t} over the unit l-ball, z=|xi|."""
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    nz = z != 0
    if l == 1:
        out[nz] = np.sin(z[nz]) / z[nz]
    else:
        nu = l / 2.0
        out[nz] = special.gamma(nu + 1) * (2.0 / z[nz]) ** nu * special.jv(nu, z[nz])
    return out if out.ndim else float(out)


def character_ball_average(R, m, x, r: float, part: str = "cos") -> float:
    """Closed form of the ball average of cos or sin(2 pi m.x)."""
    A = R.matrix()
    m = np.asarray(m, dtype=float)
    xi = A @ m
    z = 2 * np.pi * r * float(np.linalg.norm(xi))
    phase = 2 * np.pi * float(np.asarray(x, dtype=float) @ m)
    f = math.cos if part == "cos" else math.sin
    return f(phase) * float(ball_kernel(z, R.l))


def rotation_ball_average(R, phi, x, r: float, order: int = 8, max_nodes: int = 20_000_000):
    """(1/|B_r|) int_{B_r} phi(x + sum t_j alpha_j) dt; returns (value, error)."""
    if r <= 0:
        raise ValueError("r must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape != (R.d,):
        raise ValueError(f"point has dimension {x.size}, expected {R.d}")
    A = R.matrix()
    speed = float(np.abs(A).sum(axis=1).max())
    # oscillations per unit t; aim for about two panels per oscillation
    freq = max(phi.bandwidth, 1.0) * speed
    panels = max(4, int(math.ceil(2 * freq * r)))
    l = R.l

    def pts(t):
        return np.mod(x + t @ A, 1.0)
    if l == 1:
        f = lambda t: phi(pts(t[:, None]))  # noqa: E731
        val, err = refined_integral(f, -r, r, panels, order)
        return val / (2 * r), err / (2 * r)
    if l == 2:
        nth = max(16, int(math.ceil(2 * np.pi * freq * r * 2)) + 8)
        if panels * order * nth * 2 > max_nodes:
            raise ResourceCapError("rotation ball average needs too many nodes")

        def ring(nt):
            th = 2 * np.pi * np.arange(nt) / nt
            dirs = np.stack([np.cos(th), np.sin(th)], axis=1)

            def g(rho):
                t = rho[:, None, None] * dirs[None, :, :]
                v = phi(pts(t.reshape(-1, 2))).reshape(rho.size, nt)
                return v.mean(axis=1) * 2 * np.pi * rho
            return g
        coarse = gauss_legendre(ring(nth), 0, r, panels, order)
        fine = gauss_legendre(ring(2 * nth), 0, r, 2 * panels, order)
        area = np.pi * r * r
        return fine / area, abs(fine - coarse) / area
    if l == 3:
        nang = max(16, int(math.ceil(2 * np.pi * freq * r * 2)) + 8)
        if panels * order * nang * nang > max_nodes:
            raise ResourceCapError("rotation ball average needs too many nodes")

        def shell(na):
            cg, cw = np.polynomial.legendre.leggauss(na)
            ph = 2 * np.pi * np.arange(na) / na
            st = np.sqrt(1 - cg ** 2)
            dirs = np.stack([(st[:, None] * np.cos(ph)[None, :]).ravel(),
                             (st[:, None] * np.sin(ph)[None, :]).ravel(),
                             np.repeat(cg, na)], axis=1)
            wts = np.repeat(cw, na) * (2 * np.pi / na)

            def g(rho):
                t = rho[:, None, None] * dirs[None, :, :]
                v = phi(pts(t.reshape(-1, 3))).reshape(rho.size, -1)
                return (v * wts[None, :]).sum(axis=1) * rho ** 2
            return g
        coarse = gauss_legendre(shell(nang), 0, r, panels, order)
        fine = gauss_legendre(shell(2 * nang), 0, r, 2 * panels, order)
        vol = 4.0 / 3.0 * np.pi * r ** 3
        return fine / vol, abs(fine - coarse) / vol
    raise ValueError("rotation ball averages are implemented for l <= 3")
