"""The tree surface Sigma: pants copies P^L_{k,l} glued leg-to-waist, with its height
function, the involution I, the antisymmetric bump Phi and the oscillating averages."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..averages import AverageSeries
from .mesh import DisconnectedError, Mesh, quotient
from .pants import PantsTemplate, pants_template


class BallTruncationError(ValueError):
    """The requested ball may reach past the assembled depth."""


class DepthError(ValueError):
    pass


MAX_LEVELS = 8


def leg_gluing(sigma: int, x: float, y: float, L: float) -> tuple:
    """Chart map from leg sigma of P^L_{k,l} to the waist chart of its child."""
    return (4.0 * (x + 1.0) if sigma == 0 else 4.0 * (x - 1.0), y - 2.0 * L)


def copy_indices(levels: int) -> list:
    """(k, l) for 1 <= |k| <= levels, 0 <= l < 2^{|k|-1}; positive side first."""
    out = [(k, l) for k in range(1, levels + 1) for l in range(2 ** (k - 1))]
    return out + [(-k, l) for k, l in out]


@dataclass
class SigmaSurface:
    template: PantsTemplate
    mesh: Mesh
    L: float
    kmax: int
    levels: int
    copies: list
    labels: np.ndarray      # global template-copy index -> mesh vertex
    height: np.ndarray
    inv: np.ndarray         # I_Sigma as a vertex permutation
    level: np.ndarray       # signed k of the copy owning each vertex (first copy)
    meta: dict = field(default_factory=dict)

    @property
    def delta_eff(self) -> float:
        return self.template.delta_eff

    @property
    def delta_star(self) -> float:
        """Additive constant of the height sandwich: 2 + Delta."""
        return 2.0 + self.template.delta_eff

    @property
    def vol_pants(self) -> float:
        return self.template.volume

    @property
    def reach(self) -> float:
        """Heights covered by the assembled copies: [-reach, reach]."""
        return 2.0 * self.levels * self.L

    def copy_id(self, k: int, l: int) -> int:
        return self.copies.index((k, l))

    def vertex_at(self, k: int, l: int, x: float, y: float) -> int:
        c = self.copy_id(k, l)
        return int(self.labels[c * self.template.n + self.template.locate(x, y)])

    def copy_vertices(self, k: int, l: int) -> np.ndarray:
        c = self.copy_id(k, l)
        nv = self.template.n
        return np.unique(self.labels[c * nv:(c + 1) * nv])


def assemble_sigma(L: float = 25.0, kmax: int = 3, h: float = 0.05, delta: float = 0.1,
                   template: PantsTemplate | None = None) -> SigmaSurface:
    """Sigma to depth kmax: copies with 1 <= |k| <= kmax + 1, so balls of radius 2 kmax L
    about points of low height stay inside the assembled part."""
    if kmax < 1:
        raise DepthError("kmax must be >= 1")
    levels = kmax + 1
    if levels > MAX_LEVELS:
        raise MemoryError(f"{2 * (2 ** levels - 1)} pants copies exceed the cap")
    t = template or pants_template(L, h, delta)
    if not L > 5 * (2 + t.delta_eff):
        raise ValueError(f"need L > 5(2 + Delta) = {5 * (2 + t.delta_eff):.4f}")
    copies = copy_indices(levels)
    cid = {c: i for i, c in enumerate(copies)}
    nv, nc = t.n, len(copies)
    # identifications: legs to children, and the two waists along the seam
    pa, pb = [], []
    for (k, l), c in cid.items():
        if abs(k) == levels:
            continue
        s = 1 if k > 0 else -1
        for sig in range(2):
            child = cid[(k + s, 2 * l + sig)]
            pa.append(c * nv + t.top_ids[sig])
            pb.append(child * nv + t.bottom_ids)
    nxc = t.bottom_ids.size
    i = np.arange(nxc)
    pa.append(cid[(1, 0)] * nv + t.bottom_ids[i])
    pb.append(cid[(-1, 0)] * nv + t.bottom_ids[(nxc - i) % nxc])
    ncls, lab = quotient(nc * nv, np.concatenate(pa), np.concatenate(pb))
    # edges: waist-row edges of glued waists duplicate the parent's leg-top edges
    us, vs, ws = [], [], []
    for (k, l), c in cid.items():
        keep = slice(None) if (k, l) == (1, 0) else ~t.bottom_row_edge
        us.append(lab[c * nv + t.u[keep]])
        vs.append(lab[c * nv + t.v[keep]])
        ws.append(t.w[keep])
    u, v, w = np.concatenate(us), np.concatenate(vs), np.concatenate(ws)
    area = np.bincount(lab, weights=np.tile(t.area, nc), minlength=ncls)
    first = np.full(ncls, -1, dtype=np.int64)
    first[lab[::-1]] = np.arange(nc * nv)[::-1]
    cp, loc = first // nv, first % nv
    ks = np.array([k for k, _ in copies])
    level = ks[cp]
    height = np.where(level > 0, (2 * level - 1) * L + t.Y[loc], (2 * level + 1) * L - t.Y[loc])
    mirror = np.array([cid[(-k, l)] for k, l in copies])
    inv = lab[mirror[cp] * nv + loc]
    mesh = Mesh(ncls, u, v, w, area, h, {"L": L, "kmax": kmax, "levels": levels,
                                          "delta_eff": t.delta_eff, "copies": nc})
    return SigmaSurface(t, mesh, L, kmax, levels, copies, lab, height, inv, level,
                        {"delta_target": delta})


def geodesic_distance(mesh: Mesh, p: int, q: int) -> tuple:
    """(d, errorBound) for the graph distance between two mesh vertices."""
    d = mesh.distance(p, q)
    return d, float(mesh.error_bound(d))


@dataclass
class Ball:
    center: int
    radius: float
    vertices: np.ndarray
    volume: float
    dist: np.ndarray = field(repr=False, default=None)


def check_reach(s: SigmaSurface, p0: int, r: float):
    """A ball lies in h^{-1}([h(p0) - r, h(p0) + r]); it must stay inside the assembled levels."""
    h0 = float(s.height[p0])
    if h0 + r > s.reach or h0 - r < -s.reach:
        raise BallTruncationError(
            f"ball of radius {r} about height {h0} may leave |h| <= {s.reach}")


def metric_ball(s: SigmaSurface, p0: int, r: float, dist=None) -> Ball:
    check_reach(s, p0, r)
    d = s.mesh.distances([p0], limit=r)[0] if dist is None else dist
    vs = np.nonzero(d <= r)[0]
    return Ball(p0, r, vs, math.fsum(s.mesh.area[vs].tolist()), d)


def height_sandwich_ok(s: SigmaSurface, p0: int, r: float, dist) -> bool:
    """h^{-1}(B(h(p0), r - Delta*)) in B(p0, r) in h^{-1}(B(h(p0), r)) on the mesh vertices."""
    dh = np.abs(s.height - s.height[p0])
    inner = dh <= r - s.delta_star
    ball = dist <= r
    return bool(np.all(ball[inner]) and np.all(dh[ball] <= r + 1e-9))


# ---------------------------------------------------------------- Phi

@dataclass
class SurfaceObservable:
    values: np.ndarray
    meta: dict = field(default_factory=dict)


def bump_profile(y, L):
    """sin^2(pi (y + L)) on the bottom unit collar y in [-L, -L+1] of a copy, else 0."""
    s = np.asarray(y, dtype=float) + L
    inside = (s > 1e-9) & (s < 1 - 1e-9)   # exact zeros at both ends of the collar
    return np.where(inside, np.sin(np.pi * s) ** 2, 0.0)


def make_phi(s: SigmaSurface) -> SurfaceObservable:
    """Phi >= 0 on the positive side with one unit of mass per copy near its waist,
    extended by Phi o I = -Phi."""
    t = s.template
    b = bump_profile(t.Y, s.L)
    norm = 1.0 / math.fsum((b * t.area).tolist())
    nv = t.n
    phi = np.zeros(s.mesh.n)
    for c, (k, l) in enumerate(s.copies):
        if k > 0:
            sel = b > 0
            phi[s.labels[c * nv + np.nonzero(sel)[0]]] = b[sel] * norm
    pos = s.level > 0
    phi[s.inv[pos]] = -phi[pos]
    return SurfaceObservable(phi, {"normalization": norm, "profile": "sin^2 on the waist collar"})


def copy_integral(s: SigmaSurface, phi: SurfaceObservable, k: int, l: int) -> float:
    vs = s.copy_vertices(k, l)
    return math.fsum((phi.values[vs] * s.mesh.area[vs]).tolist())


def ball_integral(s: SigmaSurface, phi: SurfaceObservable, vertices) -> float:
    vs = np.asarray(vertices, dtype=np.int64)
    return math.fsum((phi.values[vs] * s.mesh.area[vs]).tolist())


def support_is_symmetric(s: SigmaSurface, phi: SurfaceObservable, vertices) -> bool:
    """Set check: (ball intersect supp Phi) is invariant under I."""
    vs = np.asarray(vertices, dtype=np.int64)
    supp = vs[phi.values[vs] != 0]
    return bool(np.array_equal(np.sort(supp), np.sort(s.inv[supp])))


def default_center(s: SigmaSurface, x: float = 0.0) -> int:
    """A vertex of P^L_{1,0} at height about 3/2 Delta*, inside [Delta* + 1, 2 Delta*]."""
    target = 1.5 * s.delta_star
    p = s.vertex_at(1, 0, x, target - s.L)
    hp = float(s.height[p])
    if not (s.delta_star + 1 <= hp <= 2 * s.delta_star):
        raise ValueError("no vertex with height in [Delta* + 1, 2 Delta*]")
    return p


def seam_fixed_point(s: SigmaSurface) -> int:
    """pi_{1,0}(0, -L): height 0 and fixed by I."""
    p = s.vertex_at(1, 0, 0.0, -s.L)
    if s.inv[p] != p:
        raise ValueError("seam point is not fixed by the involution")
    return p


@dataclass
class OscillationResult:
    averages: AverageSeries          # radii 2kL
    cancelling: AverageSeries        # radii 2kL - 2 Delta*
    integrals_cancelling: list
    symmetric_support: list
    threshold: float
    center: int
    dist: np.ndarray = field(default=None, repr=False)

    def combined(self) -> AverageSeries:
        """Both families merged and ordered by radius."""
        rows = sorted(zip(self.averages.indices + self.cancelling.indices,
                          self.averages.values + self.cancelling.values,
                          self.averages.errors + self.cancelling.errors))
        return AverageSeries([r for r, _, _ in rows], [v for _, v, _ in rows],
                             [e for _, _, e in rows], name="phi_ball_average",
                             meta=dict(self.averages.meta))

    def to_csv(self) -> tuple:
        out = []
        for ser in (self.averages, self.cancelling):
            rows = ["r,average,error"] + [f"{r!r},{v!r},{e!r}" for r, v, e in
                                          zip(ser.indices, ser.values, ser.errors)]
            out.append("\n".join(rows) + "\n")
        return tuple(out)


def oscillation_series(s: SigmaSurface, p0: int | None = None, kmax: int | None = None,
                       phi: SurfaceObservable | None = None) -> OscillationResult:
    """Average of Phi over B(p0, 2kL) and B(p0, 2kL - 2Delta*) for k = 1..kmax."""
    kmax = kmax or s.kmax
    if kmax > s.kmax:
        raise DepthError(f"assembled depth {s.kmax} < requested {kmax}")
    phi = phi or make_phi(s)
    p0 = default_center(s) if p0 is None else p0
    h0 = float(s.height[p0])
    if not (s.delta_star + 1 - 1e-9 <= h0 <= 2 * s.delta_star + 1e-9):
        raise ValueError("p0 must have height in [Delta* + 1, 2 Delta*]")
    rmax = 2 * kmax * s.L
    check_reach(s, p0, rmax)
    dist = s.mesh.distances([p0], limit=rmax)[0]
    ra, va, ea, rc, vc, ec, ints, sym = [], [], [], [], [], [], [], []
    for k in range(1, kmax + 1):
        for r, R, V, E in ((2 * k * s.L, ra, va, ea), (2 * k * s.L - 2 * s.delta_star, rc, vc, ec)):
            b = metric_ball(s, p0, r, dist)
            integral = ball_integral(s, phi, b.vertices)
            R.append(r)
            V.append(integral / b.volume)
            E.append(float(s.mesh.error_bound(r)))
            if R is rc:
                ints.append(integral)
                sym.append(support_is_symmetric(s, phi, b.vertices))
    meta = {"L": s.L, "delta_star": s.delta_star, "h0": h0}
    return OscillationResult(
        AverageSeries(ra, va, ea, name="phi_at_2kL", meta=meta),
        AverageSeries(rc, vc, ec, name="phi_at_2kL_minus_2delta", meta=meta),
        ints, sym, 1.0 / (2 * s.vol_pants), p0, dist)


def fixed_point_integrals(s: SigmaSurface, radii, phi: SurfaceObservable | None = None,
                          p0: int | None = None) -> list:
    """Integrals of Phi over balls about an I-fixed point of height 0."""
    phi = phi or make_phi(s)
    p0 = seam_fixed_point(s) if p0 is None else p0
    if s.inv[p0] != p0:
        raise ValueError("center must be fixed by the involution")
    rmax = max(radii)
    check_reach(s, p0, rmax)
    dist = s.mesh.distances([p0], limit=rmax)[0]
    if not np.isfinite(dist).any():
        raise DisconnectedError("empty ball")
    return [ball_integral(s, phi, np.nonzero(dist <= r)[0]) for r in radii]


def annulus_is_null(phi: SurfaceObservable, dist, r: float, R1: float) -> bool:
    """Set check: Phi vanishes on every vertex of B(p0, r) minus B(p0, r - R1)."""
    ann = (dist > r - R1) & (dist <= r)
    return not bool(np.any(phi.values[ann] != 0))


def sigma_product_check(s: SigmaSurface, R1: float | None = None, p0: int | None = None,
                        phi: SurfaceObservable | None = None):
    """Extend the Phi ball-average series of Sigma to Sigma x T1 with diam(T1) = R1."""
    from ..suspension import product_extension_check
    phi = phi or make_phi(s)
    R1 = 0.5 * s.delta_star if R1 is None else R1
    res = oscillation_series(s, p0, phi=phi)
    base = res.combined()
    d = res.dist
    null = all(annulus_is_null(phi, d, r, R1) for r in base.indices)
    inner, outer, ints = [], [], []
    for r in base.indices:
        vin = d <= r - R1
        vout = d <= r
        inner.append(math.fsum(s.mesh.area[vin].tolist()))
        outer.append(math.fsum(s.mesh.area[vout].tolist()))
        ints.append(ball_integral(s, phi, np.nonzero(vout)[0]))
    return product_extension_check(base, R1, null, inner, outer, ints), res
