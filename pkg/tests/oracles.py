"""Independent reference computations used by the tests."""
from fractions import Fraction

from galoisph.ext import INF, is_inf, linf


def _mid(c):
    k = len(c) // 2
    lo, hi = c[:k], c[k:]
    return tuple(INF if is_inf(a) or is_inf(b) else (a + b) / 2 for a, b in zip(lo, hi))


def _to_diag(c):
    m = _mid(c)
    return linf(c[: len(c) // 2], m)


def exhaustive_bottleneck(pts1, pts2):
    """Min over all partial bijections of the max cost; unmatched points go to the diagonal.

    ``pts1``/``pts2`` are lists of coordinate tuples (lo..., hi...), with repetition.
    """
    n2 = len(pts2)
    best = [None]

    def rec(i, used, cur):
        if best[0] is not None and cur >= best[0]:
            return
        if i == len(pts1):
            for j in range(n2):
                if not used >> j & 1:
                    cur = max(cur, _to_diag(pts2[j]))
            if best[0] is None or cur < best[0]:
                best[0] = cur
            return
        rec(i + 1, used, max(cur, _to_diag(pts1[i])))
        for j in range(n2):
            if not used >> j & 1:
                rec(i + 1, used | (1 << j), max(cur, linf(pts1[i], pts2[j])))

    rec(0, 0, Fraction(0))
    return best[0]


def reduction_barcode(filtration, d, p=2):
    """Standard column reduction over F_2 of the boundary matrix in filtration order.

    Returns the multiset of (birth, death) grade pairs in degree d with birth < death;
    essential classes die at ``inf``.
    """
    assert p == 2
    simp = sorted(enumerate(filtration.simplices),
                  key=lambda t: (t[1][1][0], len(t[1][0]), t[0]))
    order = [s for _, (s, _) in simp]
    grade = {s: g[0] for _, (s, g) in simp}
    pos = {s: i for i, s in enumerate(order)}
    cols = []
    for s in order:
        if len(s) == 1:
            cols.append(set())
        else:
            cols.append({pos[s[:i] + s[i + 1:]] for i in range(len(s))})
    low_of = {}
    paired = set()
    bars = []
    for j, col in enumerate(cols):
        col = set(col)
        while col and max(col) in low_of:
            col ^= cols[low_of[max(col)]]
        cols[j] = col
        if col:
            i = max(col)
            low_of[i] = j
            paired.update((i, j))
            if len(order[i]) == d + 1 and grade[order[i]] < grade[order[j]]:
                bars.append((grade[order[i]], grade[order[j]]))
    for i, s in enumerate(order):
        if i not in paired and len(s) == d + 1:
            bars.append((grade[s], INF))
    return sorted(bars)
