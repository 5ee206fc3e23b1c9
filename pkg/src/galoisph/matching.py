"""Matchings between diagrams as integer spans, gluing, and bottleneck distance.

A matching is stored as rows ``(left, right, mult)``: the middle set is the row
index, the legs send a row to its two endpoints. An endpoint is an interval of
the corresponding base, or a :class:`DiagonalPoint`, a point on the diagonal of
the ambient coordinate space. Diagonal endpoints carry no marginal constraint
because diagrams are only defined off the diagonal.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .diagram import Diagram, interval_coords
from .errors import MassMismatch, MissingCoords, NegativeDiagram, NoNonnegativeRepresentative
from .ext import INF, is_inf, linf
from .mobius import Check
from .poset import FinitePoset, Interval, chain


class DiagonalPoint(NamedTuple):
    """The diagonal point (v, v) of the ambient space, v a coordinate vector."""

    at: tuple

    def is_diagonal(self) -> bool:
        return True


def _coords(base: FinitePoset | None, x) -> tuple:
    if isinstance(x, DiagonalPoint):
        return tuple(x.at) + tuple(x.at)
    if base is None:
        raise MissingCoords(f"no base to embed {x!r}", witness=x)
    return interval_coords(base, x)


def _diag_at(base: FinitePoset, iv: Interval) -> DiagonalPoint:
    parent = getattr(base, "interval_of", base)
    if parent.coords is None:
        raise MissingCoords("the poset has no coordinates", witness=iv)
    return DiagonalPoint(tuple(parent.coord(iv.lo)))


@dataclass(frozen=True, eq=False)
class Matching:
    """Span between two diagrams; ``left_base``/``right_base`` are bar posets."""

    left_base: FinitePoset | None
    right_base: FinitePoset | None
    rows: tuple

    @property
    def cost(self):
        return matching_cost(self)

    def mass(self) -> int:
        return sum(m for _, _, m in self.rows)

    def reversed(self) -> "Matching":
        return Matching(self.right_base, self.left_base,
                        tuple((r, l, m) for l, r, m in self.rows))

    def left_marginal(self) -> dict:
        out: dict = defaultdict(int)
        for l, _, m in self.rows:
            out[l] += m
        return dict(out)

    def right_marginal(self) -> dict:
        out: dict = defaultdict(int)
        for _, r, m in self.rows:
            out[r] += m
        return dict(out)


def matching_cost(m: Matching):
    """Max over rows with nonzero multiplicity of the L-infinity endpoint distance."""
    best = Fraction(0)
    for l, r, mult in m.rows:
        if mult == 0:
            continue
        d = linf(_coords(m.left_base, l), _coords(m.right_base, r))
        if d > best:
            best = d
    return best


def _is_diag(x) -> bool:
    return x.is_diagonal()


def validate_matching(m: Matching, d1: Diagram, d2: Diagram) -> Check:
    """Nonnegativity and both off-diagonal marginals against the canonical reps."""
    for row in m.rows:
        if row[2] < 0:
            return Check(False, ("negative", row))
    for side, marg, d in (("left", m.left_marginal(), d1), ("right", m.right_marginal(), d2)):
        want = d.canon.support()
        for x, v in marg.items():
            if _is_diag(x) or v == 0:
                continue
            if x not in d.base.index:
                return Check(False, (side, "unknown", x))
            if want.get(x, 0) != v:
                return Check(False, (side, x, v, want.get(x, 0)))
        for x, v in want.items():
            if marg.get(x, 0) != v:
                return Check(False, (side, x, marg.get(x, 0), v))
    return Check(True)


def glue_matchings(nu: Matching, eta: Matching) -> Matching:
    """Compose nu: w1 <-> w2 with eta: w2 <-> w3 through their common middle.

    Rows are paired greedily at each shared point y of w2, visiting y in the
    linear extension of w2's base, rows in index order. Diagonal points may
    carry unequal mass on the two sides; the surplus is sent to the diagonal
    point itself, costing no more than the row it came from.
    """
    by_y_nu: dict = defaultdict(list)
    by_y_eta: dict = defaultdict(list)
    for i, (x, y, m) in enumerate(nu.rows):
        if m < 0:
            raise MassMismatch("matchings must be nonnegative", witness=nu.rows[i])
        if m:
            by_y_nu[y].append([x, m])
    for y, z, m in eta.rows:
        if m < 0:
            raise MassMismatch("matchings must be nonnegative", witness=(y, z, m))
        if m:
            by_y_eta[y].append([z, m])
    mid = nu.right_base if nu.right_base is not None else eta.left_base

    def key(y):
        if isinstance(y, DiagonalPoint):
            return (1, 0, tuple(y.at))
        return (0, mid.position[y], ())

    out: dict = defaultdict(int)
    for y in sorted(set(by_y_nu) | set(by_y_eta), key=key):
        left, right = by_y_nu.get(y, []), by_y_eta.get(y, [])
        ml, mr = sum(m for _, m in left), sum(m for _, m in right)
        if ml != mr and not _is_diag(y):
            raise MassMismatch(f"middle point {y!r} carries {ml} versus {mr}", witness=y)
        i = j = 0
        while i < len(left) and j < len(right):
            take = min(left[i][1], right[j][1])
            out[(left[i][0], right[j][0])] += take
            left[i][1] -= take
            right[j][1] -= take
            if left[i][1] == 0:
                i += 1
            if right[j][1] == 0:
                j += 1
        for x, m in left[i:]:
            if m:
                out[(x, _as_diag_target(mid, y))] += m
        for z, m in right[j:]:
            if m:
                out[(_as_diag_target(mid, y), z)] += m
    rows = tuple((x, z, m) for (x, z), m in out.items())
    return Matching(nu.left_base, eta.right_base, rows)


def _as_diag_target(mid: FinitePoset | None, y):
    return y if isinstance(y, DiagonalPoint) else _diag_at(mid, y)


def match_to_point(d: Diagram, at=0) -> Matching:
    """Collapse every off-diagonal point onto the single interval of a one-point poset."""
    pts = d.canon.support()
    neg = {iv: v for iv, v in pts.items() if v < 0}
    if neg:
        iv = next(iter(neg))
        raise NoNonnegativeRepresentative(f"negative mass {neg[iv]} at {iv!r}", witness=iv)
    point = chain([at])
    target = Interval(point.elements[0], point.elements[0])
    return Matching(d.base, point.bar, tuple((iv, target, v) for iv, v in pts.items()))


# -- bottleneck distance ----------------------------------------------------------
def _half_persistence(c: tuple):
    lo, hi = c[: len(c) // 2], c[len(c) // 2:]
    return linf(lo, _mid(lo, hi)), _mid(lo, hi)


def _mid(lo, hi) -> tuple:
    return tuple(INF if (is_inf(a) or is_inf(b)) else (a + b) / 2 for a, b in zip(lo, hi))


def _expand(d: Diagram) -> list:
    pts = []
    for iv, v in d.canon.support().items():
        if v < 0:
            raise NegativeDiagram(f"negative multiplicity {v} at {iv!r}", witness=iv)
        pts.extend([iv] * v)
    return pts


@dataclass(frozen=True, eq=False)
class BottleneckResult:
    distance: object
    certificate: Matching
    candidates: tuple = field(default=())


def _perfect(n1: int, n2: int, dist_mat, diag1, diag2, delta) -> np.ndarray | None:
    """Perfect matching of the augmented bipartite graph at threshold delta, or None."""
    n = n1 + n2
    adj = np.zeros((n, n), dtype=bool)
    if n1 and n2:
        adj[:n1, :n2] = dist_mat <= delta
    for i in range(n1):
        adj[i, n2 + i] = diag1[i] <= delta
    for j in range(n2):
        adj[n1 + j, j] = diag2[j] <= delta
    adj[n1:, n2:] = True
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    return None if (match < 0).any() else match


def bottleneck_distance(d1: Diagram, d2: Diagram) -> BottleneckResult:
    """Exact bottleneck distance with a span certificate.

    Candidates are all point-to-point and point-to-diagonal distances; the least
    one admitting a perfect matching of the augmented bipartite graph wins.
    """
    p1, p2 = _expand(d1), _expand(d2)
    c1 = [interval_coords(d1.base, iv) for iv in p1]
    c2 = [interval_coords(d2.base, iv) for iv in p2]
    n1, n2 = len(p1), len(p2)
    dist_mat = np.empty((n1, n2), dtype=object)
    for i in range(n1):
        for j in range(n2):
            dist_mat[i, j] = linf(c1[i], c2[j])
    h1 = [_half_persistence(c) for c in c1]
    h2 = [_half_persistence(c) for c in c2]
    diag1 = [h for h, _ in h1]
    diag2 = [h for h, _ in h2]
    cands = sorted(set(dist_mat.ravel().tolist()) | set(diag1) | set(diag2) | {Fraction(0)})
    if n1 + n2 == 0:
        return BottleneckResult(Fraction(0), Matching(d1.base, d2.base, ()), tuple(cands))
    # the largest candidate admits every edge, so the search always succeeds
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        midi = (lo + hi) // 2
        m = _perfect(n1, n2, dist_mat, diag1, diag2, cands[midi])
        if m is None:
            lo = midi + 1
        else:
            hi = midi
    delta = cands[lo]
    best = _perfect(n1, n2, dist_mat, diag1, diag2, delta)
    rows = []
    # best[row] = column matched to that row
    for i in range(n1):
        j = int(best[i])
        if j < n2:
            rows.append((p1[i], p2[j], 1))
        else:
            rows.append((p1[i], DiagonalPoint(h1[i][1]), 1))
    for j in range(n2):
        i = int(np.nonzero(best == j)[0][0])
        if i >= n1:
            rows.append((DiagonalPoint(h2[j][1]), p2[j], 1))
    return BottleneckResult(delta, _collect(d1, d2, rows), tuple(cands))


def _collect(d1: Diagram, d2: Diagram, rows) -> Matching:
    agg: dict = defaultdict(int)
    for l, r, m in rows:
        agg[(l, r)] += m
    return Matching(d1.base, d2.base, tuple((l, r, m) for (l, r), m in agg.items()))
