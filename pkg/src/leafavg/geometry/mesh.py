"""Weighted graph meshes: quotient by vertex identifications, Dijkstra distances,
balls, volumes and integrals."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

# 16-direction stencil, half of it (the other half is the reverse edges)
STENCIL16 = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))
# relative overshoot of the 16-direction graph metric over a Euclidean metric
STENCIL16_DIRECTIONAL = 1.0 / np.cos(0.5 * (np.arctan2(1, 1) - np.arctan2(1, 2))) - 1.0


class DisconnectedError(ValueError):
    pass


def quotient(n: int, pairs_a, pairs_b):
    """Labels of the equivalence classes generated by the given vertex pairs."""
    a = np.asarray(pairs_a, dtype=np.int64)
    b = np.asarray(pairs_b, dtype=np.int64)
    g = sparse.coo_matrix((np.ones(a.size, dtype=np.int8), (a, b)), shape=(n, n)).tocsr()
    ncomp, labels = csgraph.connected_components(g, directed=False)
    # relabel in order of first appearance so labels are deterministic
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(ncomp, dtype=np.int64)
    remap[order] = np.arange(ncomp)
    return ncomp, remap[labels]


def dedupe_edges(u, v, w):
    """Drop loops, orient u < v, keep the smallest weight per pair."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=float)
    keep = u != v
    u, v, w = u[keep], v[keep], w[keep]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    o = np.lexsort((w, hi, lo))
    lo, hi, w = lo[o], hi[o], w[o]
    first = np.ones(lo.size, dtype=bool)
    first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    return lo[first], hi[first], w[first]


@dataclass
class Mesh:
    """Undirected weighted graph with per-vertex area weights."""
    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    area: np.ndarray
    h: float
    meta: dict = field(default_factory=dict)
    _csr: object = field(default=None, repr=False)

    @property
    def csr(self):
        if self._csr is None:
            rows = np.concatenate([self.u, self.v])
            cols = np.concatenate([self.v, self.u])
            vals = np.concatenate([self.w, self.w])
            self._csr = sparse.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def distances(self, sources, limit: float = np.inf) -> np.ndarray:
        """Graph distances from each source (rows); unreachable or beyond limit -> inf."""
        src = np.atleast_1d(np.asarray(sources, dtype=np.int64))
        return csgraph.dijkstra(self.csr, directed=True, indices=src, limit=limit)

    def distance(self, p: int, q: int) -> float:
        """Distance run from the smaller index, so d(p, q) == d(q, p) bitwise."""
        p, q = min(p, q), max(p, q)
        d = float(self.distances([p])[0, q])
        if not np.isfinite(d):
            raise DisconnectedError(f"vertices {p} and {q} are not connected")
        return d

    def error_bound(self, d) -> np.ndarray:
        """A priori overshoot of graph distance over the surface distance.

        Edges are metric lengths of actual curves, so the graph distance never
        undershoots; it overshoots by the stencil's directional error plus a
        snapping term of two cells.
        """
        return STENCIL16_DIRECTIONAL * np.asarray(d, dtype=float) + 2.0 * self.h

    def ball(self, p0: int, r: float, dist=None) -> np.ndarray:
        d = self.distances([p0], limit=r)[0] if dist is None else dist
        return np.nonzero(d <= r)[0]

    def volume(self, region) -> float:
        return float(np.sum(self.area[np.asarray(region, dtype=np.int64)]))

    def integrate(self, values, region) -> float:
        idx = np.asarray(region, dtype=np.int64)
        return float(np.sum(np.asarray(values)[idx] * self.area[idx]))

    def check_connected(self):
        ncomp, _ = csgraph.connected_components(self.csr, directed=False)
        if ncomp != 1:
            raise DisconnectedError(f"mesh has {ncomp} components")

    def vertices_csv(self, coords=None) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["id", "area"] + (["x", "y"] if coords is not None else []))
        for i in range(self.n):
            row = [i, repr(float(self.area[i]))]
            if coords is not None:
                row += [repr(float(coords[i, 0])), repr(float(coords[i, 1]))]
            wr.writerow(row)
        return buf.getvalue()

    def edges_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["u", "v", "weight"])
        for a, b, c in zip(self.u.tolist(), self.v.tolist(), self.w.tolist()):
            wr.writerow([a, b, repr(c)])
        return buf.getvalue()
