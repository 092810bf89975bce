"""Distances between the free boundaries of plug trees X1 and of the k-fold assembly X.

Each plug X0' has three pairwise equidistant boundaries at distance r0, so distances
between glued boundaries compose along the gluing graph."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .mesh import quotient


class InvalidPlugTree(ValueError):
    pass


def _tree_pieces(n: int):
    """Copies (m, l) of X0' with 0 <= m <= n-1, 0 <= l < 2^m."""
    return [(m, l) for m in range(n) for l in range(2 ** m)]


@dataclass
class PlugTreeResult:
    n: int
    k: int
    r0: float
    hops: np.ndarray        # k x k integer hop counts between the outer boundaries
    tree_hops: np.ndarray   # hops from the root boundary of X1 to each of its leaves

    @property
    def distances(self) -> np.ndarray:
        return self.hops * self.r0

    def pairs(self) -> list:
        d = self.distances
        return [(i, j, float(d[i, j])) for i in range(self.k) for j in range(i + 1, self.k)]


def plug_tree_distances(n: int, k: int, r0: float = 1.0) -> PlugTreeResult:
    """Glue k copies X_(0..k-1) of X1 by boundary^i_(j) ~ boundary^{j+1}_(i) for i > j and
    return the distances between the k remaining boundaries boundary^0_(j)."""
    if n < 1 or k < 2 or k > 2 ** n + 1:
        raise InvalidPlugTree(f"need n >= 1 and 2 <= k <= 2^n + 1, got n={n}, k={k}")
    pieces = _tree_pieces(n)
    pid = {p: i for i, p in enumerate(pieces)}
    npc = len(pieces)
    per_copy = 3 * npc              # boundaries (waist, leg 0, leg 1) of every piece
    total = k * per_copy

    def node(j, m, l, b):
        return j * per_copy + 3 * pid[(m, l)] + b

    def leaf(j, idx):
        """boundary^idx of copy j: idx = 0 is the root waist, idx = 2l + s + 1 a leaf leg."""
        if idx == 0:
            return node(j, 0, 0, 0)
        l, s = divmod(idx - 1, 2)
        return node(j, n - 1, l, 1 + s)

    pa, pb = [], []
    for j in range(k):
        for m, l in pieces:
            if m + 1 < n:
                for s in range(2):
                    pa.append(node(j, m, l, 1 + s))
                    pb.append(node(j, m + 1, 2 * l + s, 0))
        for i in range(j + 1, k):
            pa.append(leaf(j, i))
            pb.append(leaf(i, j + 1))
    _, lab = quotient(total, pa, pb)
    us, vs = [], []
    for j in range(k):
        for m, l in pieces:
            b = [lab[node(j, m, l, t)] for t in range(3)]
            us += [b[0], b[0], b[1]]
            vs += [b[1], b[2], b[2]]
    nn = int(lab.max()) + 1
    g = sparse.coo_matrix((np.ones(len(us)), (us, vs)), shape=(nn, nn)).tocsr()
    roots = [lab[leaf(j, 0)] for j in range(k)]
    d = csgraph.shortest_path(g, directed=False, unweighted=True, indices=roots)
    hops = np.rint(d[:, roots]).astype(np.int64)
    tree = _single_tree_hops(n)
    return PlugTreeResult(n, k, float(r0), hops, tree)


def _single_tree_hops(n: int) -> np.ndarray:
    """Hops from the root waist of X1 to each leaf boundary 1..2^n."""
    pieces = _tree_pieces(n)
    pid = {p: i for i, p in enumerate(pieces)}
    pa, pb = [], []
    for m, l in pieces:
        if m + 1 < n:
            for s in range(2):
                pa.append(3 * pid[(m, l)] + 1 + s)
                pb.append(3 * pid[(m + 1, 2 * l + s)])
    nn, lab = quotient(3 * len(pieces), pa, pb)
    us, vs = [], []
    for i in range(len(pieces)):
        b = lab[3 * i:3 * i + 3]
        us += [b[0], b[0], b[1]]
        vs += [b[1], b[2], b[2]]
    g = sparse.coo_matrix((np.ones(len(us)), (us, vs)), shape=(nn, nn)).tocsr()
    d = csgraph.shortest_path(g, directed=False, unweighted=True, indices=[lab[0]])[0]
    leaves = [lab[3 * pid[(n - 1, l)] + 1 + s] for l in range(2 ** (n - 1)) for s in range(2)]
    return np.rint(d[leaves]).astype(np.int64)
