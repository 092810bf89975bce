"""The planar plug X0 = F u F0 u F1 u P u P1 u Q with three boundary arcs at mutual
distance 7 + 2 alpha, meshed as a visibility graph on a grid."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, sparse
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from .mesh import Mesh, dedupe_edges
from .strip import flat_bump

S2 = math.sqrt(2.0)
CX = 3.0 / S2
CORNERS = {"a": (0.0, -2.0), "b": (-1.0, 2.0), "c": (CX, CX), "d": (0.0, 2.0), "e": (0.0, 0.0)}
DC_TARGET = 4.0
TOL = 1e-9


class CalibrationError(RuntimeError):
    pass


def strip_profile(s):
    """chi on the model strip: in [-1/3, 0], negative exactly on (-1, 3), flat at both ends."""
    return -flat_bump((np.asarray(s, dtype=float) + 1.0) / 4.0) / 3.0


def chi1(x, lam):
    """Upper edge of Q: 5/2 on x <= 0 and x + (5/2) exp(-x / lam) for x >= 0."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0, 2.5, x + 2.5 * np.exp(-np.maximum(x, 0.0) / lam))


def _lower_hull(px, py):
    """Lower convex hull of points sorted by x (monotone chain)."""
    hull = []
    for p in zip(px.tolist(), py.tolist()):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return np.array(hull)


def dc_distance(lam: float, samples: int = 20001) -> float:
    """Length of the taut string from d to c under the graph of chi1 (and above y = x)."""
    xs = np.linspace(0.0, CX, samples)[1:-1]
    px = np.concatenate([[0.0], xs, [CX]])
    py = np.concatenate([[2.0], chi1(xs, lam), [CX]])
    h = _lower_hull(px, py)
    return float(np.sum(np.hypot(np.diff(h[:, 0]), np.diff(h[:, 1]))))


def calibrate_chi1(target: float = DC_TARGET) -> float:
    """lam with dc_distance(lam) = target; the family sweeps (2.125, 5)."""
    f = lambda t: dc_distance(math.exp(t)) - target
    lo, hi = math.log(1e-3), math.log(1e2)
    if f(lo) * f(hi) > 0:
        raise CalibrationError(f"target {target} outside the range of the chi1 family")
    return math.exp(optimize.brentq(f, lo, hi, xtol=1e-12))


def _rot(theta, x, y):
    c, s = math.cos(theta), math.sin(theta)
    return c * x - s * y, s * x + c * y


def in_plug(x, y, alpha: float, lam: float, tol: float = TOL):
    """Membership in X0, closed, with a small tolerance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = (1 + alpha) ** 2 + tol
    ax, ay = CORNERS["a"]
    bx, by = CORNERS["b"]
    F = ((x - ax) ** 2 + (y - ay) ** 2 <= r2) & (x >= -tol) & (y <= ay + tol)
    F0 = ((x - bx) ** 2 + (y - by) ** 2 <= r2) & (x <= bx + tol) & (y <= by + tol)
    u, v = _rot(-math.pi / 4, x - CX, y - CX)
    F1 = (u * u + v * v <= r2) & (u >= -tol) & (v >= -tol)
    yy = y - ay
    P = (yy >= -1 - tol) & (yy <= 3 + tol) & (x <= tol) & (x >= strip_profile(yy) - tol)
    u, v = _rot(-0.75 * math.pi, x - CX, y - CX)
    P1 = (v >= -1 - tol) & (v <= 3 + tol) & (u <= tol) & (u >= strip_profile(v) - tol)
    top = chi1(x, lam) + tol
    Q = (((x >= -2 - tol) & (x <= tol) & (y >= 2 - tol)) |
         ((x >= -tol) & (x <= CX + tol) & (y >= x - tol))) & (y <= top)
    return F | F0 | F1 | P | P1 | Q


@dataclass
class CornerPlug:
    alpha: float
    lam: float
    mesh: Mesh
    xy: np.ndarray
    arcs: dict             # boundary name -> vertex ids on the arc
    corner_ids: dict       # corner name -> vertex id
    meta: dict = field(default_factory=dict)

    @property
    def corners(self) -> dict:
        return dict(CORNERS)

    @property
    def arc_radius(self) -> float:
        return 1.0 + self.alpha

    @property
    def expected_distance(self) -> float:
        return 7.0 + 2.0 * self.alpha

    def distance_to_arc(self, name: str) -> np.ndarray:
        """Distance from every vertex to the boundary arc `name`."""
        return csgraph.dijkstra(self.mesh.csr, directed=True, indices=self.arcs[name], min_only=True)

    def boundary_distances(self) -> dict:
        """For each pair of arcs: (min, max) over points of the first arc of the
        distance to the second arc; equidistance means both equal 7 + 2 alpha."""
        out = {}
        for s, t in (("d", "d0"), ("d", "d1"), ("d0", "d1")):
            dist = self.distance_to_arc(t)[self.arcs[s]]
            back = self.distance_to_arc(s)[self.arcs[t]]
            allv = np.concatenate([dist, back])
            out[(s, t)] = (float(allv.min()), float(allv.max()))
        return out

    def corner_distance(self, p: str, q: str) -> float:
        return self.mesh.distance(self.corner_ids[p], self.corner_ids[q])


def _arc_points(center, theta0, radius, h):
    m = max(int(math.ceil(0.5 * math.pi * radius / h)), 2)
    th = theta0 + np.linspace(0.0, 0.5 * math.pi, m + 1)
    return np.stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)], axis=1)


def _primitive_offsets(radius: int):
    out = []
    for i in range(0, radius + 1):
        for j in range(-radius, radius + 1):
            if (i == 0 and j <= 0) or i * i + j * j > radius * radius:
                continue
            if math.gcd(i, abs(j)) == 1:
                out.append((i, j))
    return out


def _segments_inside(p, q, alpha, lam, h, chunk=200000):
    """Sample each segment at spacing h/8 and require every sample to be in X0."""
    ok = np.empty(len(p), dtype=bool)
    for s in range(0, len(p), chunk):
        a, b = p[s:s + chunk], q[s:s + chunk]
        n = int(math.ceil(np.max(np.hypot(*(b - a).T)) / (h / 8))) + 1
        t = np.linspace(0.0, 1.0, n + 1)
        xs = a[:, 0:1] + t[None, :] * (b[:, 0:1] - a[:, 0:1])
        ys = a[:, 1:2] + t[None, :] * (b[:, 1:2] - a[:, 1:2])
        ok[s:s + chunk] = np.all(in_plug(xs, ys, alpha, lam), axis=1)
    return ok


def build_corner_plug(alpha: float = 0.25, h: float = 0.02, reach: int = 5,
                      lam: float | None = None) -> CornerPlug:
    """Mesh X0 with grid vertices, the corners and samples of the three arcs; edges are
    straight segments of length <= reach*h lying in X0."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lam = calibrate_chi1() if lam is None else lam
    R = 1.0 + alpha
    xs = np.arange(math.floor(-2.0 - R), math.ceil(CX + R) + h / 2, h)
    ys = np.arange(math.floor(-2.0 - R), math.ceil(CX + R) + 2.5 + h / 2, h)
    gx, gy = np.meshgrid(np.round(xs / h) * h, np.round(ys / h) * h, indexing="ij")
    inside = in_plug(gx, gy, alpha, lam)
    gi = -np.ones(gx.shape, dtype=np.int64)
    gi[inside] = np.arange(int(inside.sum()))
    pts = [np.stack([gx[inside], gy[inside]], axis=1)]
    ng = pts[0].shape[0]
    # grid edges along primitive offsets
    us, vs = [], []
    nx, ny = gx.shape
    for di, dj in _primitive_offsets(reach):
        i0, i1 = 0, nx - di
        j0, j1 = max(0, -dj), min(ny, ny - dj)
        a = gi[i0:i1, j0:j1]
        b = gi[i0 + di:i1 + di, j0 + dj:j1 + dj]
        m = (a >= 0) & (b >= 0)
        us.append(a[m])
        vs.append(b[m])
    u = np.concatenate(us)
    v = np.concatenate(vs)
    # extra vertices: corners off the grid and the boundary arcs
    extra = [np.array([CORNERS["c"]])]
    arcs_xy = {"d": _arc_points(CORNERS["a"], -0.5 * math.pi, R, h),
               "d0": _arc_points(CORNERS["b"], math.pi, R, h),
               "d1": _arc_points(CORNERS["c"], 0.25 * math.pi, R, h)}
    arc_ids = {}
    off = ng + 1
    for name in ("d", "d0", "d1"):
        extra.append(arcs_xy[name])
        arc_ids[name] = off + np.arange(arcs_xy[name].shape[0])
        off += arcs_xy[name].shape[0]
    xy = np.concatenate(pts + extra)
    tree = cKDTree(xy)
    ex = np.arange(ng, xy.shape[0])
    nb = tree.query_ball_point(xy[ex], reach * h)
    eu = np.concatenate([np.full(len(l), i) for i, l in zip(ex, nb)])
    ev = np.concatenate([np.asarray(l, dtype=np.int64) for l in nb])
    keep = eu != ev
    u = np.concatenate([u, eu[keep]])
    v = np.concatenate([v, ev[keep]])
    ok = _segments_inside(xy[u], xy[v], alpha, lam, h)
    u, v = u[ok], v[ok]
    w = np.hypot(*(xy[u] - xy[v]).T)
    u, v, w = dedupe_edges(u, v, w)
    area = np.zeros(xy.shape[0])
    area[:ng] = h * h
    mesh = Mesh(xy.shape[0], u, v, w, area, h, {"alpha": alpha, "lambda": lam, "reach": reach})
    mesh.check_connected()
    cid = {}
    for name, (cx, cy) in CORNERS.items():
        cid[name] = int(tree.query([cx, cy])[1])
    return CornerPlug(alpha, lam, mesh, xy, arc_ids, cid,
                      {"dc_distance": dc_distance(lam), "grid_vertices": ng})
