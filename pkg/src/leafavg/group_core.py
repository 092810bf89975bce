"""Reduced words, free-group balls, orbit balls and boundary statistics.

Letters are stored as integer codes: generator i (1-based) with sign +
is code 2(i-1), with sign - it is 2(i-1)+1, so the inverse of a code is
``code ^ 1``.  Words act on points by f_{g1 g2 ... gm} = f_{g1} o ... o f_{gm},
i.e. the rightmost letter is applied first.

Canonical word order is length first, then lexicographic in the letter
order a1 < A1 < a2 < A2 < ...
"""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 10_000_000
DEFAULT_TOL = 1e-9


class ResourceCapError(RuntimeError):
    """Raised when an enumeration would exceed the configured size cap."""


class DomainError(ValueError):
    """Raised when a point lies outside the phase space of an action."""


# ---------------------------------------------------------------- letters

@dataclass(frozen=True, order=True)
class GeneratorSymbol:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("generator index must be >= 1")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def code(self) -> int:
        return 2 * (self.index - 1) + (0 if self.sign == 1 else 1)

    @classmethod
    def from_code(cls, code: int) -> "GeneratorSymbol":
        return cls(code // 2 + 1, 1 if code % 2 == 0 else -1)

    def inverse(self) -> "GeneratorSymbol":
        return GeneratorSymbol(self.index, -self.sign)

    def __str__(self):
        return ("a" if self.sign == 1 else "A") + str(self.index)


def code_to_str(code: int) -> str:
    return ("a" if code % 2 == 0 else "A") + str(code // 2 + 1)


_TOKEN = re.compile(r"([aA])(\d+)")


@dataclass(frozen=True)
class Word:
    """A finite word in the generators, stored as a tuple of letter codes."""
    codes: tuple = ()

    @classmethod
    def from_letters(cls, letters: Iterable[GeneratorSymbol]) -> "Word":
        return cls(tuple(g.code for g in letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "e", "1"):
            return cls(())
        pos, codes = 0, []
        for m in _TOKEN.finditer(text):
            if m.start() != pos:
                raise ValueError(f"cannot parse word {text!r}")
            idx = int(m.group(2))
            if idx < 1:
                raise ValueError(f"bad generator index in {text!r}")
            codes.append(2 * (idx - 1) + (0 if m.group(1) == "a" else 1))
            pos = m.end()
        if pos != len(text):
            raise ValueError(f"cannot parse word {text!r}")
        return cls(tuple(codes))

    @property
    def letters(self) -> tuple:
        return tuple(GeneratorSymbol.from_code(c) for c in self.codes)

    def __len__(self):
        return len(self.codes)

    def __str__(self):
        return "".join(code_to_str(c) for c in self.codes)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.codes + other.codes)

    def inverse(self) -> "Word":
        return Word(tuple(c ^ 1 for c in reversed(self.codes)))

    def is_reduced(self) -> bool:
        return all(a ^ 1 != b for a, b in zip(self.codes, self.codes[1:]))

    def sort_key(self):
        return (len(self.codes), self.codes)

    def max_generator(self) -> int:
        return max((c // 2 + 1 for c in self.codes), default=0)


def reduce(w: Word) -> Word:
    """Free reduction by cancelling adjacent g g^-1 pairs."""
    stack: list = []
    for c in w.codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return Word(tuple(stack))


def ball_size(k: int, n: int) -> int:
    """Number of reduced non-empty words of length <= n in F_k (closed form)."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    if k == 1:
        return 2 * n
    return 2 * k * ((2 * k - 1) ** n - 1) // (2 * k - 2)


def sphere_size(k: int, m: int) -> int:
    if m == 0:
        return 0
    return 2 * k * (2 * k - 1) ** (m - 1)


# ---------------------------------------------------------------- tree storage

@dataclass
class WordTree:
    """Words stored level by level as (first letter, parent index) arrays.

    The word at (level m, index i) is letter[m][i] followed by the word at
    (level m-1, parent[m][i]).  Level 0 is the empty word.
    """
    letter: list = field(default_factory=list)
    parent: list = field(default_factory=list)

    def word(self, level: int, i: int) -> Word:
        codes = []
        while level > 0:
            codes.append(int(self.letter[level][i]))
            i = int(self.parent[level][i])
            level -= 1
        return Word(tuple(codes))

    def codes_matrix(self, level: int) -> np.ndarray:
        """All words of one level as an (count, level) array of codes."""
        count = len(self.letter[level]) if level > 0 else 1
        out = np.empty((count, level), dtype=np.int64)
        idx = np.arange(count)
        for col in range(level):
            lv = level - col
            out[:, col] = self.letter[lv][idx]
            idx = self.parent[lv][idx]
        return out


class _LazyWords(Sequence):
    def __init__(self, tree: WordTree, offsets: list):
        self._tree = tree
        self._offsets = offsets

    def __len__(self):
        return self._offsets[-1]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        level = int(np.searchsorted(self._offsets, i, side="right"))
        return self._tree.word(level, i - self._offsets[level - 1])


@dataclass
class BallEnumeration:
    k: int
    n: int
    tree: WordTree
    sphereOffsets: list

    @property
    def words(self) -> Sequence:
        return _LazyWords(self.tree, self.sphereOffsets)

    def __len__(self):
        return self.sphereOffsets[-1]

    def sphere(self, m: int) -> list:
        return [self.tree.word(m, i) for i in range(len(self.tree.letter[m]))]

    def word_strings(self) -> list:
        return [str(w) for w in self.words]


def enumerate_ball(k: int, n: int, cap: int = DEFAULT_CAP) -> BallEnumeration:
    """All reduced non-empty words of length <= n, in canonical order."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if ball_size(k, n) > cap:
        raise ResourceCapError(f"ball of radius {n} in F_{k} has {ball_size(k, n)} words > cap {cap}")
    ng = 2 * k
    tree = WordTree([np.empty(0, np.int64)], [np.empty(0, np.int64)])
    tree.letter.append(np.arange(ng, dtype=np.int64))
    tree.parent.append(np.zeros(ng, dtype=np.int64))
    offsets = [0, ng]
    for m in range(2, n + 1):
        prev_first = tree.letter[m - 1]
        letters, parents = [], []
        for g in range(ng):
            src = np.nonzero(prev_first != (g ^ 1))[0]
            letters.append(np.full(src.size, g, dtype=np.int64))
            parents.append(src)
        tree.letter.append(np.concatenate(letters))
        tree.parent.append(np.concatenate(parents))
        offsets.append(offsets[-1] + len(tree.letter[m]))
    return BallEnumeration(k, n, tree, offsets)


# ---------------------------------------------------------------- actions

class GroupAction:
    """Base class: k generators acting on a phase space.

    Subclasses implement ``apply(code, p)``; ``apply_batch`` may be
    overridden with a vectorised version.
    """
    k: int = 1
    space: str = "abstract"
    exact: bool = False

    def apply(self, code: int, p):
        raise NotImplementedError

    def apply_batch(self, code: int, pts):
        return [self.apply(code, p) for p in pts]

    def apply_word(self, w: Word, p):
        for c in reversed(w.codes):
            p = self.apply(c, p)
        return p

    def check_point(self, p):
        return p

    def new_index(self, tol: float) -> "PointIndex":
        return ExactIndex()

    def point_str(self, p) -> str:
        return str(p)


class FreeGroupAction(GroupAction):
    """Left-regular action of F_k on reduced words (exact, always free)."""
    space = "free"
    exact = True

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("need k >= 1")
        self.k = k

    def apply(self, code, p):
        p = p if isinstance(p, Word) else Word(tuple(p))
        if p.codes and p.codes[0] == code ^ 1:
            return Word(p.codes[1:])
        return Word((code,) + p.codes)

    def check_point(self, p):
        p = Word.parse(p) if isinstance(p, str) else p
        if not isinstance(p, Word) or not p.is_reduced() or p.max_generator() > self.k:
            raise DomainError(f"{p} is not a reduced word in F_{self.k}")
        return p


# ---------------------------------------------------------------- point indices

class PointIndex:
    """Assigns class ids to points, identifying points within a tolerance."""

    def lookup_or_add(self, pts) -> np.ndarray:
        raise NotImplementedError

    def lookup(self, pts) -> np.ndarray:
        """Class id for each point, or -1 when absent."""
        raise NotImplementedError

    def points(self, ids):
        raise NotImplementedError

    def __len__(self):
        raise NotImplementedError


class ExactIndex(PointIndex):
    """Exact equality of hashable points (Fractions, tuples, words)."""

    def __init__(self):
        self._ids: dict = {}
        self._pts: list = []

    def lookup_or_add(self, pts):
        out = np.empty(len(pts), dtype=np.int64)
        for j, p in enumerate(pts):
            i = self._ids.get(p)
            if i is None:
                i = len(self._pts)
                self._ids[p] = i
                self._pts.append(p)
            out[j] = i
        return out

    def lookup(self, pts):
        return np.array([self._ids.get(p, -1) for p in pts], dtype=np.int64)

    def points(self, ids):
        return [self._pts[i] for i in ids]

    def __len__(self):
        return len(self._pts)


def _circ_dist(a, b):
    d = np.abs(a - b) % 1.0
    return np.minimum(d, 1.0 - d)


class CircleIndex(PointIndex):
    """Float points on R/Z, identified when the circle distance is <= tol."""

    def __init__(self, tol: float):
        self.tol = float(tol)
        self._vals = np.empty(0)        # in id order
        self._sorted = np.empty(0)
        self._sorted_ids = np.empty(0, dtype=np.int64)

    def __len__(self):
        return self._vals.size

    def points(self, ids):
        return self._vals[np.asarray(ids, dtype=np.int64)]

    def _nearest(self, x):
        s = self._sorted
        if s.size == 0:
            return np.full(x.size, -1, dtype=np.int64), np.full(x.size, np.inf)
        pos = np.searchsorted(s, x)
        lo = (pos - 1) % s.size
        hi = pos % s.size
        dlo = _circ_dist(x, s[lo])
        dhi = _circ_dist(x, s[hi])
        pick = np.where(dlo <= dhi, lo, hi)
        return self._sorted_ids[pick], np.minimum(dlo, dhi)

    def lookup(self, pts):
        x = np.mod(np.asarray(pts, dtype=float), 1.0)
        ids, d = self._nearest(x)
        return np.where(d <= self.tol, ids, -1)

    def lookup_or_add(self, pts):
        x = np.mod(np.asarray(pts, dtype=float), 1.0)
        x[x >= 1.0] = 0.0
        ids, d = self._nearest(x)
        out = np.where(d <= self.tol, ids, -1)
        new = np.nonzero(out < 0)[0]
        if new.size:
            # cluster the unmatched points among themselves
            xv = x[new]
            order = np.argsort(xv, kind="stable")
            sv = xv[order]
            brk = np.ones(sv.size, dtype=bool)
            if sv.size > 1:
                brk[1:] = np.diff(sv) > self.tol
            lab = np.cumsum(brk) - 1
            if sv.size > 1 and lab[-1] > 0 and (sv[0] + 1.0 - sv[-1]) <= self.tol:
                lab[lab == lab[-1]] = 0
            cl = np.empty(sv.size, dtype=np.int64)
            cl[order] = lab
            # new ids in order of first occurrence
            _, first = np.unique(cl, return_index=True)
            first_sorted = np.sort(first)
            rank = np.empty(cl.max() + 1, dtype=np.int64)
            rank[cl[first_sorted]] = np.arange(first_sorted.size)
            base = self._vals.size
            out[new] = base + rank[cl]
            newvals = xv[first_sorted]
            self._vals = np.concatenate([self._vals, newvals])
            allv = np.concatenate([self._sorted, newvals])
            alli = np.concatenate([self._sorted_ids, base + np.arange(newvals.size)])
            o = np.argsort(allv, kind="stable")
            self._sorted, self._sorted_ids = allv[o], alli[o]
        return out


class TorusIndex(PointIndex):
    """Points on R^d/Z^d identified within tol in the sup-norm (grid buckets)."""

    def __init__(self, tol: float, d: int):
        self.tol = float(tol)
        self.d = d
        self.cell = max(self.tol, 1e-15)
        self._buckets: dict = {}
        self._pts: list = []

    def __len__(self):
        return len(self._pts)

    def points(self, ids):
        return [self._pts[i] for i in ids]

    def _key(self, p):
        return tuple(int(math.floor(c / self.cell)) for c in p)

    def _find(self, p):
        key = self._key(p)
        ncell = int(round(1.0 / self.cell))
        best, bestd = -1, np.inf
        for off in np.ndindex(*(3,) * self.d):
            kk = tuple((key[j] + off[j] - 1) % ncell if ncell > 0 else key[j] + off[j] - 1
                       for j in range(self.d))
            for i in self._buckets.get(kk, ()):
                q = self._pts[i]
                dd = max(min(abs(a - b) % 1.0, 1.0 - abs(a - b) % 1.0) for a, b in zip(p, q))
                if dd <= self.tol and dd < bestd:
                    best, bestd = i, dd
        return best

    def lookup(self, pts):
        return np.array([self._find(tuple(p)) for p in pts], dtype=np.int64)

    def lookup_or_add(self, pts):
        out = np.empty(len(pts), dtype=np.int64)
        ncell = int(round(1.0 / self.cell))
        for j, p in enumerate(pts):
            p = tuple(float(c) % 1.0 for c in p)
            i = self._find(p)
            if i < 0:
                i = len(self._pts)
                self._pts.append(p)
                key = tuple(k % ncell if ncell > 0 else k for k in self._key(p))
                self._buckets.setdefault(key, []).append(i)
            out[j] = i
        return out


# ---------------------------------------------------------------- orbit balls

@dataclass
class OrbitBall:
    """Orbit classes of G_n(y), one lex-minimal shortest word per class.

    ``class_level[c]`` is the length of the shortest word reaching class c;
    classes never reached by a non-empty word (possibly y itself) have level
    ``n + 1`` and are excluded from G_n(y).
    """
    basePoint: object
    radius: int
    tolerance: float
    index: PointIndex
    class_level: np.ndarray
    rep_state: np.ndarray      # (level, position) of the representative state
    tree: WordTree
    sphere_counts: np.ndarray  # |G_m(y) \ G_{m-1}(y)| for m = 0..n

    @property
    def sizes(self) -> np.ndarray:
        """|G_m(y)| for m = 0..n."""
        return np.cumsum(self.sphere_counts)

    @property
    def cardinality(self) -> int:
        return int(self.sizes[-1])

    def class_ids(self, m: int | None = None) -> np.ndarray:
        """Class ids in G_m(y) (default m = n), in canonical word order."""
        m = self.radius if m is None else m
        sel = np.nonzero(self.class_level <= m)[0]
        key = self.rep_state[sel]
        o = np.lexsort((key[:, 1], key[:, 0]))
        return sel[o]

    def points(self, m: int | None = None):
        return self.index.points(self.class_ids(m))

    def representatives(self, m: int | None = None) -> list:
        ids = self.class_ids(m)
        pts = self.index.points(ids)
        return [(self.tree.word(int(self.rep_state[c, 0]), int(self.rep_state[c, 1])), p)
                for c, p in zip(ids, pts)]


class _FreeIndex(PointIndex):
    """Index view over an enumerated ball for a free orbit of F_k."""

    def __init__(self, ball: BallEnumeration, y: Word):
        self.ball, self.y = ball, y

    def __len__(self):
        return len(self.ball)

    def points(self, ids):
        words = self.ball.words
        return [reduce(words[int(i)] * self.y) for i in ids]

    def _rank(self, w: Word) -> int:
        # lex rank among reduced words of the same length, plus level offset
        k2 = 2 * self.ball.k
        m = len(w)
        r, prev = 0, -1
        for i, c in enumerate(w.codes):
            smaller = c - (1 if prev >= 0 and (prev ^ 1) < c else 0)
            r += smaller * (k2 - 1) ** (m - 1 - i)
            prev = c
        return self.ball.sphereOffsets[m - 1] + r

    def lookup(self, pts):
        yinv = self.y.inverse()
        out = []
        for p in pts:
            a = reduce(p * yinv)
            out.append(self._rank(a) if 1 <= len(a) <= self.ball.n else -1)
        return np.asarray(out, dtype=np.int64)


def _free_orbit_ball(action: FreeGroupAction, y: Word, n: int, cap: int) -> OrbitBall:
    ball = enumerate_ball(action.k, n, cap)
    total = len(ball)
    level = np.empty(total, dtype=np.int64)
    rep = np.empty((total, 2), dtype=np.int64)
    for m in range(1, n + 1):
        a, b = ball.sphereOffsets[m - 1], ball.sphereOffsets[m]
        level[a:b] = m
        rep[a:b, 0] = m
        rep[a:b, 1] = np.arange(b - a)
    counts = np.diff(np.asarray([0] + ball.sphereOffsets))
    return OrbitBall(y, n, 0.0, _FreeIndex(ball, y), level, rep, ball.tree, counts)


def orbit_ball(action: GroupAction, y, n: int, tol: float = DEFAULT_TOL,
               cap: int = DEFAULT_CAP) -> OrbitBall:
    """Enumerate G_n(y) = {f_a(y) : a reduced, 1 <= |a| <= n} modulo ~_y.

    Breadth-first search over states (orbit class, first letter).  Two words
    with the same point and the same first letter have identical reduced
    extensions, so one state per pair suffices.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if n < 1:
        raise ValueError("need n >= 1")
    y = action.check_point(y)
    if isinstance(action, FreeGroupAction):
        return _free_orbit_ball(action, y, n, cap)
    ng = 2 * action.k
    index = action.new_index(tol)
    index.lookup_or_add([y] if not isinstance(index, CircleIndex) else np.array([y], float))
    levels = [n + 1]
    rep = [(-1, -1)]
    tree = WordTree([np.empty(0, np.int64)], [np.empty(0, np.int64)])
    front_cls = np.zeros(1, dtype=np.int64)
    front_letter = np.full(1, -1, dtype=np.int64)
    seen = np.empty(0, dtype=np.int64)
    counts = [0]
    total_states = 0
    for m in range(1, n + 1):
        c_ids, c_let, c_par = [], [], []
        for g in range(ng):
            src = np.nonzero(front_letter != (g ^ 1))[0]
            if src.size == 0:
                continue
            pts = index.points(front_cls[src])
            new_pts = action.apply_batch(g, pts)
            c_ids.append(index.lookup_or_add(new_pts))
            c_let.append(np.full(src.size, g, dtype=np.int64))
            c_par.append(src)
        ids = np.concatenate(c_ids)
        let = np.concatenate(c_let)
        par = np.concatenate(c_par)
        total_states += ids.size
        if total_states > cap:
            raise ResourceCapError(f"orbit search exceeded cap {cap} at radius {m}")
        # classes reached for the first time: first candidate is lex-minimal
        while len(levels) < len(index):
            levels.append(n + 1)
            rep.append((-1, -1))
        lev = np.asarray(levels)
        fresh_mask = lev[ids] > m
        newly = 0
        if fresh_mask.any():
            cand = np.nonzero(fresh_mask)[0]
            cls_u, first = np.unique(ids[cand], return_index=True)
            newly = cls_u.size
            # positions of kept states are assigned below; record candidate rank
            first_pos = cand[first]
        keys = ids * ng + let
        keep_mask = ~np.isin(keys, seen)
        kidx = np.nonzero(keep_mask)[0]
        _, f2 = np.unique(keys[kidx], return_index=True)
        kidx = np.sort(kidx[f2])
        seen = np.union1d(seen, keys[kidx])
        tree.letter.append(let[kidx])
        tree.parent.append(par[kidx])
        if newly:
            # every first-reaching candidate is itself a kept state
            pos_in_level = np.searchsorted(kidx, first_pos)
            for c, p in zip(cls_u.tolist(), pos_in_level.tolist()):
                levels[c] = m
                rep[c] = (m, p)
        counts.append(newly)
        front_cls, front_letter = ids[kidx], let[kidx]
        if front_cls.size == 0:
            for _ in range(m + 1, n + 1):
                tree.letter.append(np.empty(0, np.int64))
                tree.parent.append(np.empty(0, np.int64))
                counts.append(0)
            break
    return OrbitBall(y, n, tol, index, np.asarray(levels, dtype=np.int64),
                     np.asarray(rep, dtype=np.int64).reshape(-1, 2), tree,
                     np.asarray(counts, dtype=np.int64))


def orbit_to_csv(ob: OrbitBall, action: GroupAction | None = None) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["word", "length", "point"])
    for w, p in ob.representatives():
        ps = action.point_str(p) if action is not None else str(p)
        wr.writerow([str(w), len(w), ps])
    return buf.getvalue()


def ball_to_csv(ball: BallEnumeration) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["word", "length", "point"])
    for w in ball.words:
        wr.writerow([str(w), len(w), ""])
    return buf.getvalue()


# ---------------------------------------------------------------- statistics

def orbit_sizes(action: GroupAction, y, N: int, tol: float = DEFAULT_TOL,
                cap: int = DEFAULT_CAP) -> list:
    """Exact integers |G_n(y)| for n = 0..N."""
    if isinstance(action, FreeGroupAction):
        action.check_point(y)
        if ball_size(action.k, N) > cap:
            raise ResourceCapError(f"ball of radius {N} exceeds cap {cap}")
        return [ball_size(action.k, m) for m in range(N + 1)]
    return [int(s) for s in orbit_ball(action, y, N, tol, cap).sizes]


def lambda_series(action: GroupAction, y, N: int, tol: float = DEFAULT_TOL,
                  cap: int = DEFAULT_CAP):
    """Ratios |G_n(y) \\ G_{n-1}(y)| / |G_n(y)| for n = 2..N, windowed limsup."""
    from .averages import AverageSeries
    if N < 2:
        raise ValueError("need N >= 2")
    sizes = orbit_sizes(action, y, N, tol, cap)
    idx, vals, exact = [], [], []
    for m in range(2, N + 1):
        if sizes[m] == 0:
            continue
        q = Fraction(sizes[m] - sizes[m - 1], sizes[m])
        idx.append(m)
        exact.append(q)
        vals.append(float(q))
    window = math.ceil(N / 4)
    return AverageSeries(idx, vals, [0.0] * len(vals), window=window,
                         name="lambda", exact=exact)


def folner_defect(action: GroupAction, y, a: Word, n: int, tol: float = DEFAULT_TOL,
                  cap: int = DEFAULT_CAP) -> float:
    """|a G_n(y) symmetric-difference G_n(y)| / |G_n(y)| with tol-identification."""
    if isinstance(a, str):
        a = Word.parse(a)
    ob = orbit_ball(action, y, n, tol, cap)
    ids = ob.class_ids()
    pts = ob.index.points(ids)
    moved = [action.apply_word(a, p) for p in pts]
    if isinstance(ob.index, CircleIndex):
        moved = np.asarray(moved, dtype=float)
    hit = ob.index.lookup(moved)
    inside = np.isin(hit, ids)
    matched_images = int(inside.sum())
    matched_classes = np.unique(hit[inside]).size
    diff = (len(ids) - matched_images) + (len(ids) - matched_classes)
    return diff / len(ids)


def folner_bound(action: GroupAction, y, a: Word, n: int, tol: float = DEFAULT_TOL) -> float:
    """2 |a| |G_{n+1}(y) \\ G_n(y)| / |G_n(y)|."""
    if isinstance(a, str):
        a = Word.parse(a)
    s = orbit_sizes(action, y, n + 1, tol)
    return 2 * len(a) * (s[n + 1] - s[n]) / s[n]
