"""The pair of pants P = D / ~ with the metric rho(y)^2 dx^2 + dy^2, smoothed near
its two cone points, discretised on chart grids."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import STENCIL16, Mesh, quotient
from .strip import StripMetric, build_strip, segment_lengths, smoothstep5

CONE_X = (-1.5, -0.5, 0.5, 1.5)
SMOOTHING_RADIUS = 1.0 / 9.0
CHART_COARSE, CHART_FINE, CHART_LEG0, CHART_LEG1 = 0, 1, 2, 3
LEG_X0 = (-1.5, 0.5)


class ResolutionError(ValueError):
    pass


def _cone_distance(x, y, chart):
    """Distance in chart coordinates to the nearest cone point (periodic in x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    chart = np.broadcast_to(np.asarray(chart), x.shape)
    best = np.full(x.shape, np.inf)
    bottom = chart <= CHART_FINE
    for a in CONE_X:
        dx = np.abs((x - a + 2.0) % 4.0 - 2.0)
        best = np.where(bottom, np.minimum(best, np.hypot(dx, y)), best)
    for c, x0 in ((CHART_LEG0, LEG_X0[0]), (CHART_LEG1, LEG_X0[1])):
        dx = (x - x0) % 1.0
        dx = np.minimum(dx, 1.0 - dx)
        best = np.where(chart == c, np.hypot(dx, y), best)
    return best


def cone_factor(delta: float):
    """chi with support in Z(1/9): delta at the cone points, 0 from radius 1/9 on."""
    def chi(x, y, chart):
        d = _cone_distance(x, y, chart)
        return delta * (1.0 - smoothstep5(d / SMOOTHING_RADIUS))
    return chi


@dataclass
class PantsTemplate:
    """One copy of P^L as a mesh, with the crotch slits already identified."""
    L: float
    h: float
    delta_target: float
    strip: StripMetric
    X: np.ndarray          # chart coordinates of each vertex
    Y: np.ndarray
    chart: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    wstar: np.ndarray             # lengths of the same edges in g*_P
    bottom_row_edge: np.ndarray   # edges lying in the boundary y = -L
    area: np.ndarray
    bottom_ids: np.ndarray        # boundary y = -L, by coarse column
    top_ids: tuple                # boundaries y = L of the two legs, by leg column
    delta_eff: float
    dims: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.size

    @property
    def volume(self) -> float:
        return float(self.area.sum())

    def locate(self, x: float, y: float) -> int:
        """Nearest template vertex to the point pi(x, y) of D^L."""
        d = self.dims
        h, L = self.h, self.L
        if not (-L - 1e-12 <= y <= L + 1e-12):
            raise ValueError("point outside D^L")
        if y < -1.0 - 0.5 * h:
            j = min(int(round((y + L) / h)), d["Jc"] - 1)
            i = int(round((x + 2.0) / (4 * h))) % d["nxc"]
            return int(d["coarse_ids"][j, i])
        if y <= 0.5 * h or not (-1.5 <= x <= -0.5 or 0.5 <= x <= 1.5):
            if y > 0.5 * h:
                raise ValueError("point outside D")
            j = min(max(int(round((y + 1.0) / h)), 0), d["Jf"])
            i = int(round((x + 2.0) / h)) % d["nxf"]
            return int(d["fine_ids"][j, i])
        s = 0 if x < 0 else 1
        j = int(round(y / h))
        i = int(round((x - LEG_X0[s]) / h)) % d["nl"]
        return int(d["leg_ids"][s][j, i])


def _grid_edges(ids, X, Y, period_cols, dx, skip_row0_horizontal=False):
    """Stencil edges on a row-major id grid that is periodic in the column index."""
    rows, cols = ids.shape
    us, vs, p0, p1 = [], [], [], []
    jj, ii = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    for di, dj in STENCIL16:
        j2 = jj + dj
        ok = (j2 >= 0) & (j2 < rows)
        if skip_row0_horizontal and dj == 0:
            ok &= jj > 0
        a = jj[ok], ii[ok]
        b = j2[ok], (ii[ok] + di) % period_cols
        us.append(ids[a])
        vs.append(ids[b])
        p0.append(np.stack([X[a], Y[a]], axis=1))
        p1.append(np.stack([X[a] + di * dx, Y[b]], axis=1))
    return (np.concatenate(us), np.concatenate(vs), np.concatenate(p0), np.concatenate(p1))


def _rho_integral(rho, a, b, nodes=4):
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    vals = rho(mid[:, None] + half[:, None] * xg[None, :])
    return (vals @ wg) * half


def pants_template(L: float = 25.0, h: float = 0.05, delta: float = 0.1,
                   strip: StripMetric | None = None) -> PantsTemplate:
    if h > 0.05 + 1e-12:
        raise ResolutionError("h must be <= 1/20 to resolve Z(1/10)")
    inv = 1.0 / h
    if abs(inv - round(inv)) > 1e-9 or abs(L / h - round(L / h)) > 1e-6:
        raise ResolutionError("1/h and L/h must be integers")
    if L <= 1:
        raise ValueError("need L > 1")
    strip = strip or build_strip()
    rho = strip.rho
    m = int(round(inv))
    nxc, nxf, nl = m, 4 * m, m
    Jc = int(round((L - 1) / h))       # coarse rows y = -L .. -1-h
    Jf = m                             # fine rows y = -1 .. 0
    Jl = int(round(L / h))             # leg rows y = h .. L
    # vertex ids
    coarse_ids = np.arange(Jc * nxc).reshape(Jc, nxc)
    offF = Jc * nxc
    fine_ids = offF + np.arange((Jf + 1) * nxf).reshape(Jf + 1, nxf)
    offL = offF + (Jf + 1) * nxf
    leg_ids = []
    for s in range(2):
        g = np.empty((Jl + 1, nl), dtype=np.int64)
        c0 = int(round((LEG_X0[s] + 2.0) / h))
        g[0] = fine_ids[Jf, c0:c0 + nl]
        g[1:] = offL + s * Jl * nl + np.arange(Jl * nl).reshape(Jl, nl)
        leg_ids.append(g)
    n = offL + 2 * Jl * nl
    X = np.empty(n)
    Y = np.empty(n)
    chart = np.empty(n, dtype=np.int8)
    yc = -L + h * np.arange(Jc)
    xc = -2.0 + 4 * h * np.arange(nxc)
    Xc, Yc = np.meshgrid(xc, yc)
    X[coarse_ids], Y[coarse_ids], chart[coarse_ids] = Xc, Yc, CHART_COARSE
    yf = -1.0 + h * np.arange(Jf + 1)
    yf[-1] = 0.0
    xf = -2.0 + h * np.arange(nxf)
    Xf, Yf = np.meshgrid(xf, yf)
    X[fine_ids], Y[fine_ids], chart[fine_ids] = Xf, Yf, CHART_FINE
    yl = h * np.arange(Jl + 1)
    Xl, Yl = [], []
    for s in range(2):
        xl = LEG_X0[s] + h * np.arange(nl)
        a, b = np.meshgrid(xl, yl)
        Xl.append(a)
        Yl.append(b)
        X[leg_ids[s][1:]], Y[leg_ids[s][1:]] = a[1:], b[1:]
        chart[leg_ids[s][1:]] = CHART_LEG0 + s
    # edges per chart
    parts = [_grid_edges(coarse_ids, Xc, Yc, nxc, 4 * h),
             _grid_edges(fine_ids, Xf, Yf, nxf, h)]
    charts = [np.full(parts[0][0].size, CHART_COARSE), np.full(parts[1][0].size, CHART_FINE)]
    for s in range(2):
        e = _grid_edges(leg_ids[s], Xl[s], Yl[s], nl, h, skip_row0_horizontal=True)
        parts.append(e)
        charts.append(np.full(e[0].size, CHART_LEG0 + s))
    # bridges between the coarse grid and the fine band
    bu, bv, b0, b1 = [], [], [], []
    for jc, jf in ((Jc - 1, 0), (Jc - 2, 0), (Jc - 1, 1)):
        for t in range(-8, 9):
            i = np.arange(nxc)
            fi = (4 * i + t) % nxf
            bu.append(coarse_ids[jc, i])
            bv.append(fine_ids[jf, fi])
            b0.append(np.stack([xc, np.full(nxc, yc[jc])], axis=1))
            b1.append(np.stack([xc + t * h, np.full(nxc, yf[jf])], axis=1))
    parts.append((np.concatenate(bu), np.concatenate(bv), np.concatenate(b0), np.concatenate(b1)))
    charts.append(np.full(parts[-1][0].size, CHART_COARSE))
    u = np.concatenate([p[0] for p in parts])
    v = np.concatenate([p[1] for p in parts])
    p0 = np.concatenate([p[2] for p in parts])
    p1 = np.concatenate([p[3] for p in parts])
    ech = np.concatenate(charts)
    chi = cone_factor(delta)
    w = segment_lengths(rho, p0, p1, lambda xx, yy: chi(xx, yy, ech[:, None]))
    wstar = segment_lengths(rho, p0, p1)
    delta_eff = float(np.max((w / wstar) ** 2 - 1.0))
    # areas: cell widths times int rho dy over the clipped cell, times (1 + chi)
    area = np.zeros(n)
    lo = np.maximum(yc - h / 2, -L)
    hi = np.minimum(yc + h / 2, -1.0 - h / 2)
    rc = _rho_integral(rho, lo, hi) * 4 * h
    area[coarse_ids] += rc[:, None] * (1 + chi(Xc, Yc, CHART_COARSE))
    lo = np.maximum(yf - h / 2, -1.0 - h / 2)
    hi = np.minimum(yf + h / 2, 0.0)
    rf = _rho_integral(rho, lo, hi) * h
    area[fine_ids] += rf[:, None] * (1 + chi(Xf, Yf, CHART_FINE))
    lo = np.maximum(yl - h / 2, 0.0)
    hi = np.minimum(yl + h / 2, L)
    for s in range(2):
        rl = _rho_integral(rho, lo, hi) * h
        np.add.at(area, leg_ids[s], rl[:, None] * (1 + chi(Xl[s], Yl[s], CHART_LEG0 + s)))
    # crotch slits: (x, 0) ~ (-2 - x, 0) and (x, 0) ~ (2 - x, 0) for |x| <= 1/2
    half = nxf // 2
    cols = np.arange(half - m // 2, half + m // 2 + 1)
    partner = (half - cols) % nxf
    ncls, lab = quotient(n, fine_ids[Jf, cols], fine_ids[Jf, partner])
    # representative coordinates: first vertex of each class
    rep = np.full(ncls, -1, dtype=np.int64)
    rep[lab[::-1]] = np.arange(n)[::-1]
    area_q = np.bincount(lab, weights=area, minlength=ncls)
    bottom = np.zeros(u.size, dtype=bool)
    bottom[:parts[0][0].size] = (Y[u[:parts[0][0].size]] == -L) & (Y[v[:parts[0][0].size]] == -L)
    uq, vq = lab[u], lab[v]
    # dedupe inside the template, keeping the bottom-row flag
    lo_, hi_ = np.minimum(uq, vq), np.maximum(uq, vq)
    keep = lo_ != hi_
    lo_, hi_, key_w, ws, bottom = lo_[keep], hi_[keep], w[keep], wstar[keep], bottom[keep]
    o = np.lexsort((key_w, hi_, lo_))
    lo_, hi_, key_w, ws, bottom = lo_[o], hi_[o], key_w[o], ws[o], bottom[o]
    first = np.ones(lo_.size, dtype=bool)
    first[1:] = (lo_[1:] != lo_[:-1]) | (hi_[1:] != hi_[:-1])
    dims = dict(nxc=nxc, nxf=nxf, nl=nl, Jc=Jc, Jf=Jf, Jl=Jl,
                coarse_ids=lab[coarse_ids], fine_ids=lab[fine_ids],
                leg_ids=[lab[g] for g in leg_ids])
    return PantsTemplate(L, h, delta, strip, X[rep], Y[rep], chart[rep],
                         lo_[first], hi_[first], key_w[first], ws[first], bottom[first], area_q,
                         lab[coarse_ids[0]], (lab[leg_ids[0][-1]], lab[leg_ids[1][-1]]),
                         delta_eff, dims)


@dataclass
class PantsSurface:
    template: PantsTemplate
    mesh: Mesh

    @property
    def delta_eff(self) -> float:
        return self.template.delta_eff

    def height(self) -> np.ndarray:
        return self.template.Y

    def locate(self, x, y) -> int:
        return self.template.locate(x, y)


def build_pants(delta_target: float = 0.1, h: float = 0.05, L: float = 25.0) -> PantsSurface:
    """P^L with g_P = (1 + chi) g*_P, chi supported in Z(1/9); reports the effective Delta."""
    if delta_target <= 0:
        raise ValueError("delta_target must be positive")
    t = pants_template(L, h, delta_target)
    mesh = Mesh(t.n, t.u, t.v, t.w, t.area, h,
                {"L": L, "h": h, "delta_target": delta_target, "delta_eff": t.delta_eff})
    return PantsSurface(t, mesh)
