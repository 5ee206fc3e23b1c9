"""Finite posets, interval posets, downsets and Galois connections."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple

import numpy as np

from .errors import (
    AdjunctionFailure,
    CycleError,
    DomainMismatch,
    GaloisPHError,
    NoAdjoint,
    NotInsertion,
    NotMonotone,
    UnknownElement,
)
from .ext import INF, ext


class Interval(NamedTuple):
    lo: Hashable
    hi: Hashable

    def is_diagonal(self) -> bool:
        return self.lo == self.hi


class FinitePoset:
    """An immutable finite poset.

    Elements are arbitrary hashable ids. ``leq_matrix[i, j]`` is ``True`` iff
    ``elements[i] <= elements[j]``. Build instances with :func:`build_poset`
    or one of the constructors below rather than calling this directly.
    """

    def __init__(self, elements, leq_matrix, coords=None, *, check=True):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise GaloisPHError("duplicate element ids")
        leq = np.array(leq_matrix, dtype=bool)
        n = len(self.elements)
        if leq.shape != (n, n):
            raise GaloisPHError("order matrix has the wrong shape")
        leq.setflags(write=False)
        self.leq_matrix = leq
        if check:
            _check_partial_order(self.elements, leq)
        if coords is not None:
            coords = {e: tuple(ext(c) for c in coords[e]) for e in self.elements}
            arities = {len(v) for v in coords.values()}
            if len(arities) > 1:
                raise GaloisPHError("coordinates must share one arity")
        self.coords = coords
        self._lock = threading.Lock()
        self._zeta = None

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements)"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(
            self.leq_matrix, other.leq_matrix
        )

    def __hash__(self) -> int:
        return hash(self.elements)

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"unknown element {x!r}", witness=x) from None

    def leq(self, a, b) -> bool:
        return bool(self.leq_matrix[self.idx(a), self.idx(b)])

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def coord(self, x):
        if self.coords is None:
            return None
        return self.coords[x]

    # -- derived structure ----------------------------------------------
    @cached_property
    def hasse(self) -> tuple[tuple, ...]:
        """Cover pairs (a, b), ordered by the position of b then a in the linear extension."""
        n = len(self)
        strict = self.leq_matrix & ~np.eye(n, dtype=bool)
        two_step = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        cover = strict & ~two_step
        pos = self.position
        pairs = [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(cover))]
        pairs.sort(key=lambda ab: (pos[ab[1]], pos[ab[0]]))
        return tuple(pairs)

    @cached_property
    def linext(self) -> tuple:
        """Linear extension: sort by size of the principal downset, ties by input order."""
        sizes = self.leq_matrix.sum(axis=0)
        order = sorted(range(len(self)), key=lambda i: (int(sizes[i]), i))
        return tuple(self.elements[i] for i in order)

    @cached_property
    def position(self) -> dict:
        return {e: k for k, e in enumerate(self.linext)}

    @cached_property
    def lower_covers(self) -> dict:
        out = {e: [] for e in self.elements}
        for a, b in self.hasse:
            out[b].append(a)
        return out

    @cached_property
    def upper_covers(self) -> dict:
        out = {e: [] for e in self.elements}
        for a, b in self.hasse:
            out[a].append(b)
        return out

    @cached_property
    def strictly_below(self) -> dict:
        """For each b, the elements a < b in linear-extension order."""
        out = {}
        for b in self.elements:
            j = self.index[b]
            col = self.leq_matrix[:, j]
            below = [self.elements[i] for i in np.nonzero(col)[0] if i != j]
            below.sort(key=self.position.__getitem__)
            out[b] = below
        return out

    def below(self, b) -> list:
        return self.strictly_below[b] + [b]

    def above(self, a) -> list:
        i = self.idx(a)
        row = self.leq_matrix[i]
        return sorted(
            (self.elements[j] for j in np.nonzero(row)[0]), key=self.position.__getitem__
        )

    def minimal_elements(self) -> list:
        return [e for e in self.linext if not self.strictly_below[e]]

    def maximal_elements(self) -> list:
        return [e for e in self.linext if not self.upper_covers[e]]

    @cached_property
    def top(self):
        """The maximum element, or ``None``."""
        maxes = self.maximal_elements()
        if len(maxes) == 1 and bool(self.leq_matrix[:, self.index[maxes[0]]].all()):
            return maxes[0]
        return None

    @cached_property
    def bottom(self):
        mins = self.minimal_elements()
        if len(mins) == 1 and bool(self.leq_matrix[self.index[mins[0]], :].all()):
            return mins[0]
        return None

    def is_chain(self) -> bool:
        m = self.leq_matrix
        return bool((m | m.T).all())

    def maximum_of(self, subset: Iterable):
        """The greatest element of ``subset`` if it has one, else ``None``."""
        subset = list(subset)
        for c in subset:
            if all(self.leq(x, c) for x in subset):
                return c
        return None

    def minimum_of(self, subset: Iterable):
        subset = list(subset)
        for c in subset:
            if all(self.leq(c, x) for x in subset):
                return c
        return None

    def subposet(self, members: Iterable) -> "FinitePoset":
        members = [e for e in self.elements if e in set(members)]
        ix = [self.index[e] for e in members]
        coords = None if self.coords is None else {e: self.coords[e] for e in members}
        return FinitePoset(members, self.leq_matrix[np.ix_(ix, ix)], coords, check=False)

    # -- interval posets ------------------------------------------------
    @cached_property
    def intervals(self) -> tuple:
        """All [a, b] with a <= b, grouped by lo in linear-extension order."""
        out = []
        for a in self.linext:
            for b in self.above(a):
                out.append(Interval(a, b))
        return tuple(out)

    @cached_property
    def diagonal(self) -> tuple:
        return tuple(Interval(a, a) for a in self.linext)

    @cached_property
    def bar(self) -> "FinitePoset":
        return self._interval_poset(hat=False)

    @cached_property
    def hat(self) -> "FinitePoset":
        return self._interval_poset(hat=True)

    def _interval_poset(self, hat: bool) -> "FinitePoset":
        ivs = self.intervals
        lo = np.array([self.index[i.lo] for i in ivs], dtype=np.int64)
        hi = np.array([self.index[i.hi] for i in ivs], dtype=np.int64)
        m = self.leq_matrix
        first = m[np.ix_(lo, lo)]
        second = m[np.ix_(hi, hi)].T if hat else m[np.ix_(hi, hi)]
        coords = None
        if self.coords is not None:
            coords = {i: self.coords[i.lo] + self.coords[i.hi] for i in ivs}
        ip = FinitePoset(ivs, first & second, coords, check=False)
        ip.interval_of = self
        ip.flavor = "hat" if hat else "bar"
        return ip

    # -- zeta / mobius cache --------------------------------------------
    def zeta_data(self):
        with self._lock:
            if self._zeta is None:
                from .mobius import ZetaData

                self._zeta = ZetaData.compute(self)
            return self._zeta


def _check_partial_order(elements, leq) -> None:
    n = len(elements)
    if not leq.diagonal().all():
        i = int(np.nonzero(~leq.diagonal())[0][0])
        raise GaloisPHError(f"relation is not reflexive at {elements[i]!r}")
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise CycleError(
            f"antisymmetry violated: {elements[i]!r} <= {elements[j]!r} <= {elements[i]!r}",
            witness=(elements[i], elements[j]),
        )
    li = leq.astype(np.int64)
    if ((li @ li > 0) & ~leq).any():
        raise GaloisPHError("relation is not transitive")


def _closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    m = np.eye(n, dtype=bool)
    for i, j in pairs:
        m[i, j] = True
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    return m


def build_poset(elements, relations=(), coords: Mapping | None = None) -> FinitePoset:
    """Reflexive-transitive closure of ``relations`` over ``elements``."""
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise GaloisPHError("duplicate element ids")
    pairs = []
    for a, b in relations:
        for x in (a, b):
            if x not in index:
                raise UnknownElement(f"relation mentions unknown element {x!r}", witness=x)
        pairs.append((index[a], index[b]))
    if coords is not None:
        missing = [e for e in elements if e not in coords]
        if missing:
            raise UnknownElement(f"no coordinates for {missing[0]!r}", witness=missing[0])
    return FinitePoset(elements, _closure(len(elements), pairs), coords)


def chain(values, coords: bool = True) -> FinitePoset:
    """Totally ordered poset on numeric values (extended rationals), embedded by value."""
    vals = sorted({ext(v) for v in values})
    n = len(vals)
    leq = np.triu(np.ones((n, n), dtype=bool))
    return FinitePoset(vals, leq, {v: (v,) for v in vals} if coords else None, check=False)


def named_chain(names) -> FinitePoset:
    names = list(names)
    n = len(names)
    return FinitePoset(names, np.triu(np.ones((n, n), dtype=bool)), check=False)


def product(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Product order on pairs; coordinates concatenate."""
    elems = [(a, b) for a in p.elements for b in q.elements]
    leq = np.kron(p.leq_matrix.astype(np.int8), q.leq_matrix.astype(np.int8)).astype(bool)
    coords = None
    if p.coords is not None and q.coords is not None:
        coords = {(a, b): p.coords[a] + q.coords[b] for a, b in elems}
    return FinitePoset(elems, leq, coords, check=False)


def grid(axes, top: bool = True) -> FinitePoset:
    """Product of chains of grade values, elements are coordinate tuples.

    With ``top`` a maximum element is adjoined whose coordinates are all ``inf``
    (for one axis the element is the bare value ``inf``).
    """
    axes = [sorted({ext(v) for v in ax}) for ax in axes]
    if len(axes) == 1:
        vals = axes[0] + ([INF] if top and INF not in axes[0] else [])
        return chain(vals)
    elems = [()]
    for ax in axes:
        elems = [e + (v,) for e in elems for v in ax]
    if top:
        t = tuple(INF for _ in axes)
        if t not in elems:
            elems.append(t)
    leq = np.array([[all(x <= y for x, y in zip(a, b)) for b in elems] for a in elems], dtype=bool)
    return FinitePoset(elems, leq, {e: e for e in elems}, check=False)


def adjoin_top(p: FinitePoset, top_id="⊤", top_coords=None) -> FinitePoset:
    if top_id in p.index:
        raise GaloisPHError(f"element {top_id!r} already present")
    n = len(p)
    leq = np.zeros((n + 1, n + 1), dtype=bool)
    leq[:n, :n] = p.leq_matrix
    leq[:, n] = True
    coords = None
    if p.coords is not None:
        arity = len(next(iter(p.coords.values()))) if p.coords else 1
        coords = dict(p.coords)
        coords[top_id] = tuple(top_coords) if top_coords is not None else (INF,) * arity
    return FinitePoset(p.elements + (top_id,), leq, coords, check=False)


# -- downsets and intervals -------------------------------------------------
@dataclass(frozen=True)
class Downset:
    parent: FinitePoset
    members: frozenset

    def __post_init__(self):
        for a in self.members:
            self.parent.idx(a)
            for b in self.parent.strictly_below[a]:
                if b not in self.members:
                    raise GaloisPHError(
                        f"not downward closed: {b!r} <= {a!r}", witness=(b, a)
                    )

    def __contains__(self, x) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list:
        pos = self.parent.position
        return sorted(self.members, key=pos.__getitem__)


def principal_downset(p: FinitePoset, b) -> Downset:
    p.idx(b)
    return Downset(p, frozenset(p.below(b)))


def interval_poset_bar(p: FinitePoset) -> FinitePoset:
    return p.bar


def interval_poset_hat(p: FinitePoset) -> FinitePoset:
    return p.hat


# -- Galois connections -------------------------------------------------------
def _as_map(f, domain: FinitePoset, codomain: FinitePoset, name: str) -> dict:
    if callable(f) and not isinstance(f, Mapping):
        out = {x: f(x) for x in domain.elements}
    else:
        out = {}
        for x in domain.elements:
            if x not in f:
                raise UnknownElement(f"{name} is not defined at {x!r}", witness=x)
            out[x] = f[x]
    for x, y in out.items():
        if y not in codomain.index:
            raise UnknownElement(f"{name}({x!r}) = {y!r} is not in the codomain", witness=(x, y))
    return out


def check_monotone(f: Mapping, source: FinitePoset, target: FinitePoset, name: str = "map"):
    for a, b in source.hasse:
        if not target.leq(f[a], f[b]):
            raise NotMonotone(
                f"{name} is not order-preserving on {a!r} <= {b!r}", witness=(a, b)
            )


@dataclass(frozen=True, eq=False)
class GaloisConnection:
    """Left adjoint ``f: source -> target`` and right adjoint ``g: target -> source``."""

    source: FinitePoset
    target: FinitePoset
    f: Mapping
    g: Mapping
    insertion: bool

    def closure(self, p):
        return self.g[self.f[p]]

    def kernel(self, q):
        return self.f[self.g[q]]


def validate_galois(f, g, source: FinitePoset, target: FinitePoset,
                    require_insertion: bool = False) -> GaloisConnection:
    f = _as_map(f, source, target, "f")
    g = _as_map(g, target, source, "g")
    check_monotone(f, source, target, "f")
    check_monotone(g, target, source, "g")
    fi = np.array([target.index[f[p]] for p in source.elements], dtype=np.int64)
    gi = np.array([source.index[g[q]] for q in target.elements], dtype=np.int64)
    lhs = target.leq_matrix[fi, :]  # f(p) <= q
    rhs = source.leq_matrix[:, gi]  # p <= g(q)
    bad = lhs != rhs
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        p, q = source.elements[i], target.elements[j]
        raise AdjunctionFailure(
            f"f({p!r}) <= {q!r} is {bool(lhs[i, j])} but {p!r} <= g({q!r}) is {bool(rhs[i, j])}",
            witness=(p, q),
        )
    insertion = all(f[g[q]] == q for q in target.elements)
    if require_insertion and not insertion:
        q = next(q for q in target.elements if f[g[q]] != q)
        raise NotInsertion(f"f(g({q!r})) = {f[g[q]]!r}", witness=q)
    return GaloisConnection(source, target, f, g, insertion)


def identity_connection(p: FinitePoset) -> GaloisConnection:
    ident = {x: x for x in p.elements}
    return GaloisConnection(p, p, ident, ident, True)


def right_adjoint_of(f, source: FinitePoset, target: FinitePoset) -> dict:
    """g(q) = max{p | f(p) <= q}; raises NoAdjoint if some maximum fails to exist."""
    f = _as_map(f, source, target, "f")
    check_monotone(f, source, target, "f")
    g = {}
    for q in target.elements:
        cand = [p for p in source.elements if target.leq(f[p], q)]
        top = source.maximum_of(cand)
        if top is None:
            raise NoAdjoint(f"{{p : f(p) <= {q!r}}} has no maximum", witness=q)
        g[q] = top
    return g


def left_adjoint_of(g, source: FinitePoset, target: FinitePoset) -> dict:
    """For ``g: target -> source``, f(p) = min{q | p <= g(q)}."""
    g = _as_map(g, target, source, "g")
    check_monotone(g, target, source, "g")
    f = {}
    for p in source.elements:
        cand = [q for q in target.elements if source.leq(p, g[q])]
        bot = target.minimum_of(cand)
        if bot is None:
            raise NoAdjoint(f"{{q : {p!r} <= g(q)}} has no minimum", witness=p)
        f[p] = bot
    return f


def compose_galois(c1: GaloisConnection, c2: GaloisConnection) -> GaloisConnection:
    """(h o f, g o l) for c1 = (f, g): P <-> Q and c2 = (h, l): Q <-> R."""
    if c1.target != c2.source:
        raise DomainMismatch("target of the first connection is not the source of the second")
    f = {p: c2.f[c1.f[p]] for p in c1.source.elements}
    g = {r: c1.g[c2.g[r]] for r in c2.target.elements}
    return GaloisConnection(c1.source, c2.target, f, g, c1.insertion and c2.insertion)


def extend_galois_bar(c: GaloisConnection) -> GaloisConnection:
    sb, tb = c.source.bar, c.target.bar
    f = {iv: Interval(c.f[iv.lo], c.f[iv.hi]) for iv in sb.elements}
    g = {iv: Interval(c.g[iv.lo], c.g[iv.hi]) for iv in tb.elements}
    return GaloisConnection(sb, tb, f, g, c.insertion)


def interval_map(f: Mapping | Callable, p: FinitePoset) -> dict:
    """The induced map on intervals, (a, b) -> (f(a), f(b)), on all of bar(p)."""
    get = f.__getitem__ if isinstance(f, Mapping) else f
    return {iv: Interval(get(iv.lo), get(iv.hi)) for iv in p.intervals}
