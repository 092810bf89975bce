"""Bookkeeping that identifies a leaf of the ping-pong fibration with Sigma.

The leaf through (x0, y0) is a union of pants P_sigma(k) x {f_{k,l}(y0)}; each piece
is matched to the copy P^L_{k,l} of Sigma, so leaf averages of Psi are Sigma averages
of Phi.  The 3-manifold itself is never meshed."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..actions1d import PingPongTriple, _arc_contains
from .sigma import SigmaSurface, SurfaceObservable, ball_integral, metric_ball

LETTERS = "ABC"


def step_exponent(k: int) -> int:
    """+1 for positive odd or negative even k, -1 otherwise."""
    if k == 0:
        raise ValueError("k must be nonzero")
    return 1 if (k > 0) == (k % 2 == 1) else -1


@dataclass(frozen=True)
class LeafPiece:
    k: int
    l: int
    word: tuple        # (generator index, exponent), leftmost applied last
    image: tuple       # lifted image of J, end > start
    rho: int           # index of the arc containing the image

    @property
    def sigma(self) -> str:
        return "+" if step_exponent(self.k) > 0 else "-"

    def word_str(self) -> str:
        return "".join(LETTERS[g] + ("" if e > 0 else "^-1") for g, e in self.word) or "id"


def leaf_interval(t: PingPongTriple) -> tuple:
    """Subinterval J' of J with J', f_A(J'), f_A^{-1}(J') pairwise disjoint: it starts
    at the centre of J and ends halfway to the image of that centre."""
    x0 = 0.5 * (t.J[0] + t.J[1])
    fx = float(t.lifts[0](np.float64(x0)))
    return (x0, 0.5 * (x0 + fx))


def _apply(t: PingPongTriple, g: int, e: int, iv):
    F = t.lifts[g]
    if e > 0:
        s, f = float(F(np.float64(iv[0]))), float(F(np.float64(iv[1])))
    else:
        s, f = float(F.inverse(np.float64(iv[0]))), float(F.inverse(np.float64(iv[1])))
    return (s, f) if f > s else (s, f + 1.0)


def _arc_of(t: PingPongTriple, iv) -> int:
    for r, arc in enumerate(t.arcs):
        if _arc_contains(arc, iv, 0.0) > 0:
            return r
    raise ValueError(f"interval {iv} is not inside any of the ping-pong arcs")


def leaf_pieces(t: PingPongTriple, levels: int, J=None) -> dict:
    """f_{k,l} for 1 <= |k| <= levels via f_{k+s(k), 2l+s} = f_{rho+s+1}^{e(k)} o f_{k,l}."""
    J = leaf_interval(t) if J is None else J
    out = {}
    start = {(1, 0): ((), J), (-1, 0): (((0, -1),), _apply(t, 0, -1, J))}
    frontier = []
    for (k, l), (w, iv) in start.items():
        out[(k, l)] = LeafPiece(k, l, w, iv, _arc_of(t, iv))
        frontier.append((k, l))
    while frontier:
        nxt = []
        for k, l in frontier:
            if abs(k) >= levels:
                continue
            p = out[(k, l)]
            e = step_exponent(k)
            k2 = k + (1 if k > 0 else -1)
            for s in range(2):
                g = (p.rho + s + 1) % 3
                iv = _apply(t, g, e, p.image)
                out[(k2, 2 * l + s)] = LeafPiece(k2, 2 * l + s, ((g, e),) + p.word, iv,
                                                 _arc_of(t, iv))
                nxt.append((k2, 2 * l + s))
        frontier = nxt
    return out


def pieces_disjoint(pieces: dict) -> bool:
    """The images f_{k,l}(J) are pairwise disjoint arcs of the circle."""
    ivs = sorted(((p.image[0] % 1.0, p.image[1] - p.image[0]) for p in pieces.values()))
    for (s0, L0), (s1, _) in zip(ivs, ivs[1:]):
        if s0 + L0 > s1:
            return False
    s_last, L_last = ivs[-1]
    return s_last + L_last <= ivs[0][0] + 1.0


def leaf_copy_map(pieces: dict, sigma: SigmaSurface) -> dict:
    """Leaf piece (k, l) -> copy index of P^L_{k,l} in the assembled Sigma."""
    return {kl: sigma.copy_id(*kl) for kl in pieces if kl in sigma.copies}


def leaf_ball_average(sigma: SigmaSurface, phi: SurfaceObservable, p0: int, r: float) -> float:
    """Average of Psi over the leaf ball B_r(x0, y0), computed on Sigma as the
    average of Phi over B(p0, r)."""
    b = metric_ball(sigma, p0, r)
    return ball_integral(sigma, phi, b.vertices) / b.volume
