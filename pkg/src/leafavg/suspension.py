"""Plug geometry to length-average bounds: thin-legs check, radii, sandwich bounds,
small-boundary limits, the large-boundary certificate and the product extension."""
from __future__ import annotations

import json
import math
import struct
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .averages import AverageSeries, _eval_points
from .group_core import DEFAULT_CAP, DEFAULT_TOL, GroupAction, lambda_series, orbit_ball, orbit_sizes


class NotThinError(ValueError):
    """Raised when a plug does not have thin legs."""


class HypothesisError(ValueError):
    """Raised when a required hypothesis has not been verified by the caller."""


class HypothesisWarning(UserWarning):
    pass


# ---------------------------------------------------------------- plug data

@dataclass
class PlugSpec:
    R: float
    D: float
    m0: float
    m1: float
    volX: float
    ballProfile: Callable = None
    name: str = ""

    def __post_init__(self):
        if not (self.R > 0 and self.volX > 0):
            raise ValueError("need R > 0 and volX > 0")
        if not (0 < self.m0 <= self.m1 <= self.D):
            raise ValueError("need 0 < m0 <= m1 <= D")
        if self.ballProfile is None:
            vol = self.volX
            self.ballProfile = lambda r: vol

    def profile(self, r: float) -> float:
        v = float(self.ballProfile(r))
        if v > self.volX * (1 + 1e-12):
            raise ValueError("ball profile exceeds the plug volume")
        return min(v, self.volX)


def linear_profile(volX: float, saturation: float):
    """r -> volX * min(1, r / saturation)."""
    return lambda r: volX * min(1.0, max(r, 0.0) / saturation)


PRESETS = {
    # thin plug used for the free-group certificate; K = 7.5 / 15
    "f2-thin": dict(R=10.0, D=10.5, m0=4.0, m1=4.5, volX=1.0, saturation=15.0),
    # cylinder plug for the amenable checks
    "cylinder": dict(R=1.0, D=1.0, m0=0.5, m1=0.5, volX=1.0, saturation=1.0),
}


def plug_preset(name: str) -> PlugSpec:
    try:
        p = dict(PRESETS[name])
    except KeyError:
        raise ValueError(f"unknown plug preset {name!r}") from None
    sat = p.pop("saturation")
    return PlugSpec(ballProfile=linear_profile(p["volX"], sat), name=name, **p)


@dataclass
class ThinLegsReport:
    ineq1: bool
    ineq2: bool
    slack1: float
    slack2: float

    @property
    def thin(self) -> bool:
        return self.ineq1 and self.ineq2


def thin_check(p: PlugSpec) -> ThinLegsReport:
    """m1 + (D - R) < 2 m0 and 2 m1 < R + m0, with slacks."""
    s1 = 2 * p.m0 - (p.m1 + (p.D - p.R))
    s2 = (p.R + p.m0) - 2 * p.m1
    return ThinLegsReport(s1 > 0, s2 > 0, s1, s2)


def radius_constants(p: PlugSpec) -> tuple:
    """(R0, R1) at the midpoints of their admissible intervals."""
    rep = thin_check(p)
    if not rep.thin:
        raise NotThinError(f"plug is not thin (slacks {rep.slack1}, {rep.slack2})")
    R0 = 0.5 * ((p.m1 + (p.D - p.R)) + 2 * p.m0)
    R1 = 0.5 * (2 * p.m1 + (p.R + p.m0))
    return R0, R1


def radii(p: PlugSpec, n: int) -> tuple:
    """(r_n, s_n) = (R0 + (n-1) R, R1 + (n-2) R)."""
    R0, R1 = radius_constants(p)
    return R0 + (n - 1) * p.R, R1 + (n - 2) * p.R


def radii_chain_ok(p: PlugSpec, n: int) -> bool:
    r, s = radii(p, n)
    return (p.m1 + (n - 2) * p.R + p.D < r < 2 * p.m0 + (n - 1) * p.R
            and 2 * p.m1 + (n - 2) * p.R < s < (n - 1) * p.R + p.m0)


def boundary_fraction(p: PlugSpec) -> float:
    """K = |X|^{-1} inf over boundary points of |B^X_{R1 - m0}|."""
    _, R1 = radius_constants(p)
    return p.profile(R1 - p.m0) / p.volX


# ---------------------------------------------------------------- small boundary

@dataclass
class SandwichBounds:
    lower: float
    upper: float
    n: int
    inner_size: int
    outer_size: int


def _orbit_values(ob, phi, m):
    if m <= 0:
        return np.empty(0)
    return _eval_points(phi, ob.points(m))


def sandwich_bounds(action: GroupAction, y, phi_tilde, p: PlugSpec, r: float,
                    tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP, orbit=None) -> SandwichBounds:
    """Bounds on the leafwise ball average at radius r from orbit sums.

    With n = floor(r / R) the ball contains the plug copies over G_{n-1}(y) and
    lies in those over G_{n+1}(y).  phi_tilde may change sign; copies only
    partly inside the ball are then bounded by the positive and negative parts.
    """
    if r < p.R:
        raise ValueError("need r >= R")
    n = int(math.floor(r / p.R))
    ob = orbit if orbit is not None else orbit_ball(action, y, n + 1, tol, cap)
    inner = _orbit_values(ob, phi_tilde, n - 1)
    outer = _orbit_values(ob, phi_tilde, n + 1)
    pos_in = math.fsum(np.maximum(inner, 0).tolist())
    neg_in = math.fsum(np.maximum(-inner, 0).tolist())
    pos_out = math.fsum(np.maximum(outer, 0).tolist())
    neg_out = math.fsum(np.maximum(-outer, 0).tolist())
    vin, vout = p.volX * inner.size, p.volX * outer.size
    num_hi = pos_out - neg_in
    num_lo = pos_in - neg_out

    def divide(num, small, big, upper):
        # average = integral / volume with volume in [small, big]
        if num >= 0:
            den = small if upper else big
        else:
            den = big if upper else small
        if den == 0:
            return math.inf if upper else -math.inf
        return num / den
    return SandwichBounds(divide(num_lo, vin, vout, False), divide(num_hi, vin, vout, True),
                          n, inner.size, outer.size)


@dataclass
class SmallBoundaryReport:
    limsupEstimate: float
    liminfEstimate: float
    series: AverageSeries
    lambdaEstimate: float
    hypothesisWarning: bool

    @property
    def gap(self) -> float:
        return self.limsupEstimate - self.liminfEstimate


def small_boundary_limits(action: GroupAction, y, phi_tilde, p: PlugSpec, N: int,
                          tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP,
                          lambda_max: float = 0.05) -> SmallBoundaryReport:
    """(1/|X|) times trailing-window max and min of the orbit-class averages of phi_tilde."""
    if N < 2:
        raise ValueError("need N >= 2")
    ob = orbit_ball(action, y, N, tol, cap)
    ids = ob.class_ids()
    vals = _eval_points(phi_tilde, ob.index.points(ids))
    levels = ob.class_level[ids]
    sums = np.zeros(N + 1)
    np.add.at(sums, levels, vals)
    csum = np.cumsum(sums)
    sizes = ob.sizes
    idx, avg = [], []
    for n in range(1, N + 1):
        if sizes[n] > 0:
            idx.append(n)
            avg.append(csum[n] / sizes[n] / p.volX)
    series = AverageSeries(idx, avg, name="orbit_class_average")
    sizes_l = [int(s) for s in sizes]
    ratios = [(sizes_l[m] - sizes_l[m - 1]) / sizes_l[m] for m in range(2, N + 1) if sizes_l[m]]
    w = math.ceil(N / 4)
    lam = max(ratios[-w:]) if ratios else 1.0
    warn = lam > lambda_max
    if warn:
        warnings.warn(f"lambda estimate {lam:.3g} exceeds {lambda_max}; "
                      "the small-boundary identity need not hold", HypothesisWarning)
    return SmallBoundaryReport(series.limsupEstimate, series.liminfEstimate, series, lam, warn)


# ---------------------------------------------------------------- large boundary

@dataclass
class CertificateSample:
    n: int
    r: float
    avg_r: float      # upper bound for the average at r_n
    s: float
    avg_s: float      # lower bound for the average at s_n
    ratio: Fraction


@dataclass
class OscillationCertificate:
    K: float
    samples: list
    window: int
    limsupLower: float
    upper: float = 1.0

    @property
    def gap(self) -> float:
        return self.limsupLower - self.upper

    @property
    def lowerBound(self) -> float:
        """1 / (1 - (1-K) lambda) with the windowed lambda estimate."""
        lam = self.lambdaWindow
        return 1.0 / (1.0 - (1.0 - self.K) * lam)

    @property
    def lambdaWindow(self) -> float:
        return max(float(s.ratio) for s in self.samples[-self.window:])

    def to_dict(self) -> dict:
        return {"K": self.K,
                "window": {"kind": "trailing", "size": self.window,
                           "from_n": self.samples[-self.window].n, "to_n": self.samples[-1].n},
                "samples": [{"n": s.n, "r": s.r, "avg_r": s.avg_r, "s": s.s, "avg_s": s.avg_s,
                             "ratio": str(s.ratio)} for s in self.samples],
                "lambdaWindow": self.lambdaWindow,
                "lowerBound": self.lowerBound,
                "limsupLower": self.limsupLower,
                "upper": self.upper,
                "gap": self.gap}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def large_boundary_certificate(action: GroupAction, y, p: PlugSpec, N: int,
                               tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP,
                               K: float | None = None) -> OscillationCertificate:
    """Exact bounds at r_n (average <= 1) and s_n (average >= 1/(1-(1-K) ratio_n)).

    The observable is supported in the window V with integral |X| per copy, so
    both balls carry integral |X| |G_n(y)|.  The r_n ball has volume at least
    |X| |G_n(y)|; the s_n ball at most |X| |G_n(y)| - (1-K) |X| |G_n(y) minus G_{n-1}(y)|.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    radius_constants(p)   # raises when not thin
    if K is None:
        K = boundary_fraction(p)
    if not (0 < K <= 1):
        raise ValueError("K must lie in (0, 1]")
    Kq = Fraction(K)
    sizes = orbit_sizes(action, y, N, tol, cap)
    samples = []
    for n in range(2, N + 1):
        if sizes[n] == 0:
            continue
        ratio = Fraction(sizes[n] - sizes[n - 1], sizes[n])
        integral = sizes[n]                    # in units of |X|
        vol_r_min = sizes[n]
        vol_s_max = sizes[n] - (1 - Kq) * (sizes[n] - sizes[n - 1])
        avg_r = Fraction(integral, vol_r_min)
        avg_s = Fraction(integral) / vol_s_max
        assert avg_s == 1 / (1 - (1 - Kq) * ratio)
        r, s = radii(p, n)
        samples.append(CertificateSample(n, r, float(avg_r), s, float(avg_s), ratio))
    window = math.ceil(N / 4)
    # conservative: the smallest certified s_n value over the trailing window
    lower = min(smp.avg_s for smp in samples[-window:])
    return OscillationCertificate(float(K), samples, window, lower)


# ---------------------------------------------------------------- product extension

@dataclass
class ProductExtensionReport:
    base: AverageSeries
    extended: AverageSeries
    bitwise_equal: bool
    R1: float
    limsup: float
    liminf: float
    gap: float
    average_bounds: list = field(default_factory=list)


def _bits(values) -> bytes:
    return b"".join(struct.pack("<d", float(v)) for v in values)


def product_extension_check(baseSeries: AverageSeries, R1: float, annulusZero: bool,
                            inner_volumes=None, outer_volumes=None,
                            integrals=None) -> ProductExtensionReport:
    """Transfer a leafwise series to the product foliation with a factor of diameter R1.

    When the annulus between radii r_n - R1 and r_n carries no mass of the
    observable, the integrals over the product balls equal |T1| times the base
    integrals, so the extended series (integrals per unit |T1| over the ball
    volumes) coincides with the base one.  If base volumes at r_n - R1 and r_n
    are supplied, the bracket on the product average is reported as well.
    """
    if not annulusZero:
        raise HypothesisError("annulus B_r minus B_(r-R1) must lie in the zero set of the observable")
    if R1 <= 0:
        raise ValueError("R1 must be positive")
    ext = AverageSeries(list(baseSeries.indices), list(baseSeries.values),
                        list(baseSeries.errors), window=baseSeries.window,
                        name=(baseSeries.name + "_extended").strip("_"), meta=dict(baseSeries.meta))
    same = _bits(ext.values) == _bits(baseSeries.values)
    bounds = []
    if inner_volumes is not None and outer_volumes is not None and integrals is not None:
        for I, vin, vout in zip(integrals, inner_volumes, outer_volumes):
            lo, hi = (I / vout, I / vin) if I >= 0 else (I / vin, I / vout)
            bounds.append((lo, hi))
    return ProductExtensionReport(baseSeries, ext, same, float(R1),
                                  ext.limsupEstimate, ext.liminfEstimate,
                                  ext.limsupEstimate - ext.liminfEstimate, bounds)
