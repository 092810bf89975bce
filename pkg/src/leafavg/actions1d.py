"""Concrete generator actions: rotations, ping-pong triples, IETs, torus translations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .group_core import CircleIndex, DomainError, ExactIndex, GroupAction, TorusIndex


class LayoutError(ValueError):
    """Raised when ping-pong arcs cannot satisfy the inclusion constraints."""


def _is_exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


# ---------------------------------------------------------------- circle maps

@dataclass(frozen=True)
class CircleMap:
    """Orientation preserving circle map given by forward and inverse evaluators."""
    forward: Callable
    inverse: Callable
    descriptor: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.forward(x)


def make_rotation(alpha) -> CircleMap:
    """x -> x + alpha mod 1.  Fractions and ints give exact arithmetic."""
    if _is_exact(alpha):
        a = Fraction(alpha) % 1

        def fwd(x):
            if isinstance(x, np.ndarray):
                return np.mod(x + float(a), 1.0)
            return (x + a) % 1

        def inv(x):
            if isinstance(x, np.ndarray):
                return np.mod(x - float(a), 1.0)
            return (x - a) % 1
        return CircleMap(fwd, inv, {"type": "rotation", "alpha": str(a), "exact": True})
    a = float(alpha)

    def fwd(x):
        return np.mod(x + a, 1.0)

    def inv(x):
        return np.mod(x - a, 1.0)
    return CircleMap(fwd, inv, {"type": "rotation", "alpha": a, "exact": False})


class CircleAction(GroupAction):
    """Action of F_k on R/Z generated by k circle maps."""
    space = "circle"

    def __init__(self, maps: Sequence[CircleMap], exact: bool | None = None):
        self.maps = list(maps)
        self.k = len(self.maps)
        if exact is None:
            exact = all(m.descriptor.get("exact", False) for m in self.maps)
        self.exact = exact

    def apply(self, code, p):
        m = self.maps[code // 2]
        out = m.forward(p) if code % 2 == 0 else m.inverse(p)
        if not self.exact:
            out = float(out)
            if out >= 1.0:
                out = 0.0
        return out

    def apply_batch(self, code, pts):
        m = self.maps[code // 2]
        if self.exact:
            f = m.forward if code % 2 == 0 else m.inverse
            return [f(p) for p in pts]
        x = np.asarray(pts, dtype=float)
        out = m.forward(x) if code % 2 == 0 else m.inverse(x)
        return np.asarray(out, dtype=float)

    def check_point(self, p):
        if self.exact:
            if not _is_exact(p):
                try:
                    p = Fraction(p)
                except (TypeError, ValueError):
                    raise DomainError(f"{p!r} is not a point of R/Z") from None
            p = Fraction(p)
            if not 0 <= p < 1:
                raise DomainError(f"{p} outside [0, 1)")
            return p
        try:
            x = float(p)
        except (TypeError, ValueError):
            raise DomainError(f"{p!r} is not a point of R/Z") from None
        if not (0.0 <= x < 1.0):
            raise DomainError(f"{x} outside [0, 1)")
        return x

    def new_index(self, tol):
        if self.exact:
            return ExactIndex()
        return CircleIndex(tol)

    def point_str(self, p):
        return str(p) if self.exact else repr(float(p))


def rotation_action(*alphas) -> CircleAction:
    return CircleAction([make_rotation(a) for a in alphas])


# ---------------------------------------------------------------- smooth lifts

def _smoothstep_integral(u):
    # integral of 3u^2 - 2u^3 from 0 to u
    return u ** 3 - 0.5 * u ** 4


class BlendedLift:
    """Degree-one lift F through given knots, with smoothed slope jumps.

    Between knots the slope is constant; at each knot the slope changes over
    a symmetric window by a cubic smoothstep, so F is C^2 and still passes
    through every knot exactly.
    """
    smoothness = "C2"

    def __init__(self, xs, Fs, window_frac: float = 0.2):
        xs = np.asarray(xs, dtype=float)
        Fs = np.asarray(Fs, dtype=float)
        if not (np.all(np.diff(xs) > 0) and np.all(np.diff(Fs) > 0)):
            raise LayoutError("knots must be strictly increasing")
        if not math.isclose(xs[-1] - xs[0], 1.0, abs_tol=1e-15) or \
                not math.isclose(Fs[-1] - Fs[0], 1.0, abs_tol=1e-15):
            raise LayoutError("knots must span exactly one period")
        self.xs, self.Fs = xs, Fs
        self.slopes = np.diff(Fs) / np.diff(xs)
        lens = np.diff(xs)
        m = lens.size
        # knot j in 0..m-1 (knot m is knot 0 shifted by one period)
        left_len = np.roll(lens, 1)
        left_slope = np.roll(self.slopes, 1)
        self.delta = window_frac * np.minimum(left_len, lens)
        self.s_left = left_slope
        self.s_right = self.slopes.copy()
        self.m = m
        # value at the period start (the smoothing window shifts it off Fs[0])
        self.F0 = float(self(xs[0]))

    def _reduce(self, x):
        x = np.asarray(x, dtype=float)
        shift = np.floor(x - self.xs[0])
        return x - shift, shift

    def _window_correction(self, xr, j, xk, Fk):
        d = self.delta[j]
        sl, sr = self.s_left[j], self.s_right[j]
        u = np.clip((xr - (xk - d)) / (2 * d), 0.0, 1.0)
        smooth = Fk - d * sl + 2 * d * (sl * u + (sr - sl) * _smoothstep_integral(u))
        pl = np.where(xr < xk, Fk + sl * (xr - xk), Fk + sr * (xr - xk))
        inside = np.abs(xr - xk) < d
        return np.where(inside, smooth - pl, 0.0)

    def __call__(self, x):
        xr, shift = self._reduce(x)
        i = np.clip(np.searchsorted(self.xs, xr, side="right") - 1, 0, self.m - 1)
        val = self.Fs[i] + self.slopes[i] * (xr - self.xs[i])
        # windows at the left knot i and the right knot i+1
        val = val + self._window_correction(xr, i, self.xs[i], self.Fs[i])
        jr = (i + 1) % self.m
        val = val + self._window_correction(xr, jr, self.xs[i + 1], self.Fs[i + 1])
        return val + shift

    def derivative(self, x):
        xr, _ = self._reduce(x)
        i = np.clip(np.searchsorted(self.xs, xr, side="right") - 1, 0, self.m - 1)
        out = self.slopes[i].astype(float)
        for j, xk in ((i, self.xs[i]), ((i + 1) % self.m, self.xs[i + 1])):
            d = self.delta[j]
            u = np.clip((xr - (xk - d)) / (2 * d), 0.0, 1.0)
            sm = self.s_left[j] + (self.s_right[j] - self.s_left[j]) * (3 * u ** 2 - 2 * u ** 3)
            inside = np.abs(xr - xk) < d
            out = np.where(inside, sm, out)
        return out

    def inverse(self, y):
        """F^{-1} by vectorised bisection followed by Newton polishing."""
        y = np.asarray(y, dtype=float)
        shift = np.floor(y - self.F0)
        yr = y - shift
        lo = np.full(yr.shape, self.xs[0])
        hi = np.full(yr.shape, self.xs[-1])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = self(mid) < yr
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        x = 0.5 * (lo + hi)
        for _ in range(2):
            x = np.clip(x - (self(x) - yr) / self.derivative(x), lo - 1e-15, hi + 1e-15)
        return x + shift


def _lift_map(F: BlendedLift, descriptor: dict) -> CircleMap:
    def fwd(x):
        out = np.mod(F(x), 1.0)
        return np.where(out >= 1.0, 0.0, out) if isinstance(out, np.ndarray) else out

    def inv(x):
        out = np.mod(F.inverse(x), 1.0)
        return np.where(out >= 1.0, 0.0, out) if isinstance(out, np.ndarray) else out
    descriptor = dict(descriptor, exact=False, smoothness=F.smoothness)
    m = CircleMap(fwd, inv, descriptor)
    object.__setattr__(m, "descriptor", descriptor)
    return m


# ---------------------------------------------------------------- ping-pong

@dataclass(frozen=True)
class PingPongTriple:
    arcs: tuple            # ((a0, a1), (b0, b1), (c0, c1)) lifted so end > start
    J: tuple
    maps: tuple            # (f_A, f_B, f_C) as CircleMap
    lifts: tuple           # BlendedLift per map
    kappa: float
    slope: float
    fixed_points: tuple    # (p-, p+) per map

    @property
    def f_A(self):
        return self.maps[0]

    @property
    def f_B(self):
        return self.maps[1]

    @property
    def f_C(self):
        return self.maps[2]

    def action(self, generators: str = "ABC") -> CircleAction:
        """Circle action generated by a subset of f_A, f_B, f_C (in the given order)."""
        pick = {"A": 0, "B": 1, "C": 2}
        try:
            return CircleAction([self.maps[pick[g]] for g in generators.upper()])
        except KeyError:
            raise ValueError(f"unknown generator letters {generators!r}") from None

    @property
    def base_point(self) -> float:
        """Centre of I_A, which lies in J."""
        a0, a1 = self.arcs[0]
        return (0.5 * (a0 + a1)) % 1.0


DEFAULT_ARCS = ((0.0, 0.2), (0.35, 0.55), (0.7, 0.9))


def _normalize_arcs(arcs):
    out = []
    for a in arcs:
        s, e = float(a[0]), float(a[1])
        if e <= s:
            e += 1.0
        L = e - s
        if not (0.0 < L < 1.0):
            raise LayoutError(f"arc {a} has invalid length")
        s0 = s % 1.0
        out.append((s0, s0 + L))
    # disjointness with positive gaps, in cyclic order
    srt = sorted(out)
    gaps = [srt[1][0] - srt[0][1], srt[2][0] - srt[1][1], srt[0][0] + 1.0 - srt[2][1]]
    if min(gaps) <= 0.0:
        raise LayoutError("arcs must be pairwise disjoint with positive gaps")
    return tuple(out)


PM_FRAC, PP_FRAC = 0.3, 0.7     # fixed points of f_rho inside I_rho
CORE_WEIGHT, GAP_WEIGHT = 0.2, 0.05


def _ping_pong_lift(arcs, rho: int, kappa: float, fill: float = 0.9):
    """Lift for f_rho: contract the other two arcs into I_rho from both sides.

    f_rho fixes p- < p+ in I_rho.  The arc from p+ forward through the other
    two arcs is squeezed into (p+, end of I_rho); its mirror image from p-
    backwards is what f_rho^{-1} squeezes into (start of I_rho, p-).  Orbits
    started in J only visit the outer thirds of each arc, so those pieces get
    the mild slope s while arc cores and gaps are squeezed harder.
    """
    a0, a1 = arcs[rho]
    w = a1 - a0
    pm, pp = a0 + PM_FRAC * w, a0 + PP_FRAC * w
    others = sorted((arcs[j] for j in range(3) if j != rho), key=lambda a: (a[0] - a1) % 1.0)
    # pieces from a1 forward to a0 + 1 as (length, slope weight)
    pieces = []
    pos = a1
    for s0, e0 in others:
        start = a1 + (s0 - a1) % 1.0
        L = e0 - s0
        pieces.append((start - pos, GAP_WEIGHT))
        pieces += [(PM_FRAC * L, 1.0), ((PP_FRAC - PM_FRAC) * L, CORE_WEIGHT),
                   ((1 - PP_FRAC) * L, 1.0)]
        pos = start + L
    last_gap = a0 + 1.0 - pos
    if min(p[0] for p in pieces) <= 0 or last_gap <= 0:
        raise LayoutError("arcs must be pairwise disjoint with positive gaps")
    fwd = [(a1 - pp, 1.0)] + pieces
    back = [(pm - a0, 1.0), (last_gap, GAP_WEIGHT)] + list(reversed(pieces[1:])) + [pieces[0]]
    s = min(kappa,
            fill * (a1 - pp) / sum(L * c for L, c in fwd),
            fill * (pm - a0) / sum(L * c for L, c in back))
    xs, Fs = [pm], [pm]
    mid = 0.5 * (pm + pp)
    xs.append(mid)
    Fs.append(mid + 0.25 * (pp - mid))
    xs.append(pp)
    Fs.append(pp)
    x, F = pp, pp
    for L, c in fwd:
        x += L
        F += s * c * L
        xs.append(x)
        Fs.append(F)
    # knots of the inverse side: (f^{-1}(target), target) walking back from p- + 1
    inv_pts = []
    xb, target = pm + 1.0, pm + 1.0
    for L, c in back:
        xb -= s * c * L
        target -= L
        inv_pts.append((xb, target))
    for xb, target in reversed(inv_pts):
        xs.append(xb)
        Fs.append(target)
    xs.append(pm + 1.0)
    Fs.append(pm + 1.0)
    if not all(q > p for p, q in zip(xs, xs[1:])):
        raise LayoutError("layout too tight for the contraction constraints")
    F = BlendedLift(xs, Fs, window_frac=0.05)
    return F, s, (_fixed_point(F, pm, w), _fixed_point(F, pp, w))


def _fixed_point(F, guess, w):
    from scipy.optimize import brentq
    g = lambda x: float(F(np.float64(x))) - x  # noqa: E731
    lo, hi = guess - 0.1 * w, guess + 0.1 * w
    return brentq(g, lo, hi, xtol=1e-15) % 1.0


def make_ping_pong(arcs=DEFAULT_ARCS, kappa: float = 0.3) -> PingPongTriple:
    """Ping-pong triple for three disjoint arcs with contraction rate <= kappa."""
    if not (0.0 < kappa < 1.0):
        raise LayoutError("kappa must lie in (0, 1)")
    if len(arcs) != 3:
        raise LayoutError("need exactly three arcs")
    arcs = _normalize_arcs(arcs)
    maps, lifts, fps, slopes = [], [], [], []
    for rho, name in enumerate("ABC"):
        F, s, fp = _ping_pong_lift(arcs, rho, kappa)
        lifts.append(F)
        slopes.append(s)
        fps.append(fp)
        maps.append(_lift_map(F, {"type": "pingpong", "generator": name,
                                  "arc": arcs[rho], "slope": s}))
    a0, a1 = arcs[0]
    w = a1 - a0
    J = (a0 + w / 3.0, a0 + 2.0 * w / 3.0)
    return PingPongTriple(arcs, J, tuple(maps), tuple(lifts), kappa, min(slopes), tuple(fps))


@dataclass
class InclusionCheck:
    name: str
    holds: bool
    slack: float


def _arc_contains(outer, inner, margin):
    """Slack of inner inside outer (cyclic arcs given by lifted endpoints)."""
    o0, o1 = outer
    i0, i1 = inner
    Lo, Li = o1 - o0, i1 - i0
    if Lo >= 1.0:
        return 1.0
    if Li <= 0 or Li >= 1.0:
        return -1.0
    start = (i0 - o0) % 1.0
    return min(start, Lo - (start + Li)) - margin


def _image(F: Callable, arc):
    s, e = arc
    return (float(F(np.float64(s))), float(F(np.float64(e))))


def check_ping_pong(t: PingPongTriple, margin: float = 1e-6) -> list:
    """Six inclusion conditions plus f_A(J) in I_A, evaluated at arc endpoints."""
    names = "ABC"
    out = []
    for r in range(3):
        F = t.lifts[r] if t.lifts else (lambda x, m=t.maps[r]: m.forward(x))
        others = [j for j in range(3) if j != r]
        img = _image(F, t.arcs[r])
        sl = min(_arc_contains(img, t.arcs[j], margin) for j in others)
        out.append(InclusionCheck(
            f"I_{names[others[0]]} u I_{names[others[1]]} in f_{names[r]}(I_{names[r]})",
            sl > 0, sl))
        sl = min(_arc_contains(t.arcs[r], _image(F, t.arcs[j]), margin) for j in others)
        out.append(InclusionCheck(
            f"f_{names[r]}(I_{names[others[0]]} u I_{names[others[1]]}) in I_{names[r]}",
            sl > 0, sl))
    FA = t.lifts[0] if t.lifts else (lambda x: t.maps[0].forward(x))
    sl = _arc_contains(t.arcs[0], _image(FA, t.J), margin)
    out.append(InclusionCheck("f_A(J) in I_A", sl > 0, sl))
    return out


def identity_triple(arcs=DEFAULT_ARCS) -> PingPongTriple:
    arcs = _normalize_arcs(arcs)
    ident = CircleMap(lambda x: x, lambda x: x, {"type": "identity"})
    lift = lambda x: np.asarray(x, dtype=float)  # noqa: E731
    a0, a1 = arcs[0]
    w = a1 - a0
    return PingPongTriple(arcs, (a0 + w / 3, a0 + 2 * w / 3), (ident,) * 3, (lift,) * 3,
                          0.0, 1.0, ((0.0, 0.0),) * 3)


# ---------------------------------------------------------------- IETs

@dataclass(frozen=True)
class IntervalExchange:
    """Interval exchange on [0, 1): subinterval i is moved to position perm[i]."""
    lengths: tuple
    perm: tuple

    def __post_init__(self):
        m = len(self.lengths)
        if sorted(self.perm) != list(range(1, m + 1)):
            raise ValueError("perm must be a permutation of 1..m")
        if any(L <= 0 for L in self.lengths):
            raise ValueError("lengths must be positive")
        tot = sum(self.lengths)
        if self.exact:
            if tot != 1:
                raise ValueError("lengths must sum to 1")
        elif abs(float(tot) - 1.0) > 1e-12:
            raise ValueError("lengths must sum to 1")

    @property
    def exact(self) -> bool:
        return all(_is_exact(L) for L in self.lengths)

    @property
    def breakpoints(self) -> tuple:
        out, acc = [], 0 if self.exact else 0.0
        for L in self.lengths:
            out.append(acc)
            acc = acc + L
        return tuple(out)

    @property
    def image_starts(self) -> tuple:
        m = len(self.lengths)
        inv = {p: i for i, p in enumerate(self.perm)}
        starts = [None] * m
        acc = 0 if self.exact else 0.0
        for pos in range(1, m + 1):
            i = inv[pos]
            starts[i] = acc
            acc = acc + self.lengths[i]
        return tuple(starts)

    def translations(self) -> tuple:
        return tuple(s - b for s, b in zip(self.image_starts, self.breakpoints))

    def _step(self, x, forward=True):
        src = self.breakpoints if forward else self.image_starts
        dst = self.image_starts if forward else self.breakpoints
        i = len(src) - 1
        # interval containing x among the source starts
        order = sorted(range(len(src)), key=lambda j: src[j])
        for j in reversed(order):
            if x >= src[j]:
                i = j
                break
        out = x - src[i] + dst[i]
        if not self.exact:
            out = float(out)
            if out >= 1.0 or out < 0.0:
                out = out % 1.0
        return out

    def forward(self, x):
        if isinstance(x, np.ndarray):
            return self._batch(x, True)
        return self._step(x, True)

    def inverse(self, x):
        if isinstance(x, np.ndarray):
            return self._batch(x, False)
        return self._step(x, False)

    def _batch(self, x, forward):
        src = np.asarray(self.breakpoints if forward else self.image_starts, dtype=float)
        dst = np.asarray(self.image_starts if forward else self.breakpoints, dtype=float)
        o = np.argsort(src)
        i = o[np.clip(np.searchsorted(src[o], x, side="right") - 1, 0, len(o) - 1)]
        out = x - src[i] + dst[i]
        return np.mod(out, 1.0)

    def interval_of(self, x) -> int:
        b = self.breakpoints
        for j in range(len(b) - 1, -1, -1):
            if x >= b[j]:
                return j
        return 0


def iet_apply(T: IntervalExchange, x, n: int = 1):
    """n-fold application of T (negative n applies the inverse)."""
    if T.exact and not _is_exact(x):
        x = Fraction(x)
    if not 0 <= x < 1:
        raise DomainError(f"{x} outside [0, 1)")
    step = T.forward if n >= 0 else T.inverse
    for _ in range(abs(int(n))):
        x = step(x)
    return x


def iet_rotation(beta) -> IntervalExchange:
    """Two-interval exchange with lengths (beta, 1-beta); equals rotation by 1-beta."""
    return IntervalExchange((beta, 1 - beta), (2, 1))


def iet_keane4() -> IntervalExchange:
    raw = [1.0, math.sqrt(2), math.sqrt(3), math.sqrt(5)]
    tot = sum(raw)
    L = [r / tot for r in raw]
    L[-1] = 1.0 - sum(L[:-1])
    return IntervalExchange(tuple(L), (4, 3, 2, 1))


def iet_reducible(beta: float = math.sqrt(2) - 1) -> IntervalExchange:
    """[0,1/2) and [1/2,1) are invariant; each carries a rotation."""
    b = 0.5 * beta
    return IntervalExchange((b, 0.5 - b, b, 0.5 - b), (2, 1, 4, 3))


class IETAction(CircleAction):
    def __init__(self, T: IntervalExchange):
        m = CircleMap(T.forward, T.inverse, {"type": "iet", "exact": T.exact})
        super().__init__([m], exact=T.exact)
        self.T = T


# ---------------------------------------------------------------- torus

@dataclass(frozen=True)
class TorusRotation:
    alpha: tuple   # l vectors of length d

    @property
    def l(self) -> int:
        return len(self.alpha)

    @property
    def d(self) -> int:
        return len(self.alpha[0])

    @property
    def exact(self) -> bool:
        return all(_is_exact(a) for v in self.alpha for a in v)

    def matrix(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)


def make_torus(alpha) -> TorusRotation:
    vecs = tuple(tuple(v) for v in alpha)
    if not vecs or len({len(v) for v in vecs}) != 1:
        raise ValueError("alpha must be a non-empty list of equal-length vectors")
    return TorusRotation(vecs)


def torus_apply(R: TorusRotation, t, x):
    """x + sum_j t_j alpha_j mod Z^d."""
    t = list(t)
    x = list(x)
    if len(t) != R.l:
        raise ValueError(f"time vector has length {len(t)}, expected {R.l}")
    if len(x) != R.d:
        raise ValueError(f"point has dimension {len(x)}, expected {R.d}")
    if R.exact and all(_is_exact(v) for v in t + x):
        return tuple((x[i] + sum(t[j] * R.alpha[j][i] for j in range(R.l))) % 1
                     for i in range(R.d))
    A = R.matrix()
    return tuple(float(v) for v in np.mod(np.asarray(x, float) + np.asarray(t, float) @ A, 1.0))


class TorusAction(GroupAction):
    """Z^l acting on T^d through the generators alpha_j (as a free-group action)."""
    space = "torus"

    def __init__(self, R: TorusRotation):
        self.R = R
        self.k = R.l
        self.exact = R.exact

    def apply(self, code, p):
        t = [0] * self.R.l
        t[code // 2] = 1 if code % 2 == 0 else -1
        return torus_apply(self.R, t, p)

    def apply_batch(self, code, pts):
        if self.exact:
            return [self.apply(code, p) for p in pts]
        X = np.asarray(pts, dtype=float).reshape(-1, self.R.d)
        v = self.R.matrix()[code // 2] * (1 if code % 2 == 0 else -1)
        Y = np.mod(X + v, 1.0)
        Y[Y >= 1.0] = 0.0
        return [tuple(r) for r in Y.tolist()]

    def check_point(self, p):
        p = tuple(p)
        if len(p) != self.R.d:
            raise DomainError(f"point has dimension {len(p)}, expected {self.R.d}")
        if self.exact:
            return tuple(Fraction(c) % 1 for c in p)
        return tuple(float(c) % 1.0 for c in p)

    def new_index(self, tol):
        if self.exact or tol == 0:
            return ExactIndex()
        return TorusIndex(tol, self.R.d)


# ---------------------------------------------------------------- configs

def _num(v):
    """Numbers from JSON: strings like '1/3' become exact Fractions."""
    if isinstance(v, str):
        v = v.strip()
        if v.startswith("sqrt(") and v.endswith(")"):
            return math.sqrt(float(v[5:-1]))
        return Fraction(v)
    if isinstance(v, bool):
        raise ValueError("boolean is not a number")
    return v


def action_from_config(cfg: dict):
    """Build an action from {"type": "rotation" | "pingpong" | "iet" | "torus" | "free", ...}."""
    from .group_core import FreeGroupAction
    kind = cfg.get("type")
    if kind == "rotation":
        alpha = cfg["alpha"]
        alphas = alpha if isinstance(alpha, list) else [alpha]
        return rotation_action(*[_num(a) for a in alphas])
    if kind == "pingpong":
        arcs = cfg.get("arcs", DEFAULT_ARCS)
        t = make_ping_pong(arcs, float(cfg.get("kappa", 0.3)))
        return t.action(cfg.get("generators", "ABC"))
    if kind == "iet":
        lengths = tuple(_num(v) for v in cfg["lengths"])
        return IETAction(IntervalExchange(lengths, tuple(int(p) for p in cfg["perm"])))
    if kind == "torus":
        return TorusAction(make_torus([[_num(v) for v in row] for row in cfg["alpha"]]))
    if kind == "free":
        return FreeGroupAction(int(cfg["k"]))
    raise ValueError(f"unknown action type {kind!r}")
