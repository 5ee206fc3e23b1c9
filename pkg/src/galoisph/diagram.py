"""Persistence diagrams modulo the diagonal, their functoriality, the rank
diagram and fibered barcodes of grid modules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    BadDirection,
    BaseMismatch,
    EmptyIntersection,
    IntervalViolation,
    MissingCoords,
    NoTopElement,
    NotTotalOrder,
)
from .ext import INF, ext, is_inf
from .mobius import IntFn, mobius_invert, pushforward
from .pmod import (
    FreePresentation,
    PersistenceModule,
    birthdeath_fn,
    build_free_presentation,
    kernel_fn,
    pull_module,
    rank_fn,
)
from .poset import FinitePoset, GaloisConnection, Interval, chain, validate_galois


def _zero_diagonal(fn: IntFn) -> IntFn:
    return IntFn(fn.domain, {iv: v for iv, v in fn.items() if not iv.is_diagonal()})


@dataclass(frozen=True, eq=False)
class Diagram:
    """A signed function on intervals of ``poset``.

    ``raw`` is the Mobius inversion as computed; ``canon`` is the class
    representative (diagonal zeroed for the bar flavor, ``raw`` itself for hat).
    """

    poset: FinitePoset
    flavor: str
    raw: IntFn
    route: str = ""

    @property
    def base(self) -> FinitePoset:
        return self.raw.domain

    @property
    def canon(self) -> IntFn:
        return _zero_diagonal(self.raw) if self.flavor == "bar" else self.raw

    def points(self) -> dict:
        """Nonzero entries of the canonical representative."""
        return self.canon.support()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.flavor == other.flavor and self.canon == other.canon

    def __repr__(self) -> str:
        pts = {(iv.lo, iv.hi): v for iv, v in self.points().items()}
        return f"Diagram({self.flavor}, {pts!r})"


def from_points(poset: FinitePoset, points: Mapping, flavor: str = "bar") -> Diagram:
    """Diagram from ``{(lo, hi): multiplicity}``."""
    base = poset.bar if flavor == "bar" else poset.hat
    vals = {}
    for (lo, hi), v in points.items():
        iv = Interval(lo, hi)
        if iv not in base.index:
            raise IntervalViolation(f"[{lo!r}, {hi!r}] is not an interval", witness=iv)
        vals[iv] = vals.get(iv, 0) + int(v)
    return Diagram(poset, flavor, IntFn(base, vals), "given")


def diagram_of(m: PersistenceModule, via: str = "kernel",
               presentation: FreePresentation | None = None) -> Diagram:
    """Bar-flavored diagram from the kernel function or a birth-death function."""
    if via == "kernel":
        raw = mobius_invert(kernel_fn(m))
    elif via == "presentation":
        pres = presentation if presentation is not None else build_free_presentation(m)
        raw = mobius_invert(birthdeath_fn(m, pres))
    else:
        raise ValueError(f"unknown route {via!r}")
    return Diagram(m.base, "bar", raw, via)


def equivalent(d1: Diagram, d2: Diagram) -> bool:
    if d1.flavor != d2.flavor or d1.poset != d2.poset:
        raise BaseMismatch("diagrams live on different interval posets")
    return d1.canon == d2.canon


def pushforward_diagram(f: Mapping, d: Diagram, target: FinitePoset) -> Diagram:
    """Push the canonical representative through (a, b) -> (f(a), f(b))."""
    tb = target.bar if d.flavor == "bar" else target.hat
    out: dict = {}
    for iv, v in d.canon.support().items():
        image = Interval(f[iv.lo], f[iv.hi])
        if image not in tb.index:
            raise IntervalViolation(
                f"[{iv.lo!r}, {iv.hi!r}] maps to non-interval [{image.lo!r}, {image.hi!r}]",
                witness=iv,
            )
        out[image] = out.get(image, 0) + v
    return Diagram(target, d.flavor, IntFn(tb, out), "pushforward")


def positivity_check(d: Diagram) -> bool:
    """All raw values nonnegative; only meaningful over a totally ordered base."""
    if not d.poset.is_chain():
        raise NotTotalOrder("positivity is only guaranteed over a total order")
    return all(v >= 0 for v in d.raw.values.values())


# -- rank diagrams ----------------------------------------------------------------
def rank_diagram_direct(m: PersistenceModule) -> Diagram:
    return Diagram(m.base, "hat", mobius_invert(rank_fn(m)), "rank")


def _ordered_matrix(p: FinitePoset, order, which: str) -> np.ndarray:
    zd = p.zeta_data()
    pos = [p.position[x] for x in order]
    mat = zd.zeta if which == "zeta" else zd.mu
    return mat[np.ix_(pos, pos)]


def rank_diagram_via_formula(m: PersistenceModule) -> Diagram:
    """d rank = (f_# d ker) zeta_bar mu_hat - (d ker) zeta_bar mu_hat, f(a, b) = (a, a).

    Needs a maximum element carrying the zero space.
    """
    base = m.base
    top = base.top
    if top is None:
        raise NoTopElement("the base poset has no maximum")
    if m.dims[top] != 0:
        raise NoTopElement(f"the module is nonzero at the maximum {top!r}", witness=top)
    ivs = base.intervals
    dker = mobius_invert(kernel_fn(m))
    diag_map = {iv: Interval(iv.lo, iv.lo) for iv in ivs}
    pushed = pushforward(diag_map, dker, base.bar)
    z = _ordered_matrix(base.bar, ivs, "zeta")
    mu = _ordered_matrix(base.hat, ivs, "mu")
    vec = np.array([pushed[iv] - dker[iv] for iv in ivs], dtype=object)
    res = vec.dot(z).dot(mu)
    return Diagram(base, "hat", IntFn(base.hat, {iv: int(v) for iv, v in zip(ivs, res)}),
                   "rank-formula")


# -- fibered barcodes -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Slice:
    """The chain of line parameters together with the insertion grid <-> slice."""

    chain: FinitePoset
    conn: GaloisConnection
    offset: tuple
    direction: tuple


def _point_on_line(offset, direction, s):
    if is_inf(s):
        return tuple(o if d == 0 else INF for o, d in zip(offset, direction))
    return tuple(o + s * d for o, d in zip(offset, direction))


def slice_insertion(grid_poset: FinitePoset, offset, direction) -> Slice:
    """Insertion f: G <-> L : g where g(s) is the largest grid point below o + s d
    and f(x) is the least parameter s with x below o + s d.

    Grid points never dominated by the line are sent to ``inf``, which ``g``
    returns to the maximum of the grid.
    """
    if grid_poset.coords is None:
        raise MissingCoords("slicing needs grid coordinates")
    offset = tuple(ext(v) for v in offset)
    direction = tuple(ext(v) for v in direction)
    arity = len(next(iter(grid_poset.coords.values())))
    if len(offset) != arity or len(direction) != arity:
        raise BadDirection(f"line must have {arity} coordinates")
    if any(is_inf(v) for v in offset + direction):
        raise BadDirection("line offset and direction must be finite")
    if any(d < 0 for d in direction) or all(d == 0 for d in direction):
        raise BadDirection("direction must be nonnegative and nonzero", witness=direction)
    top = grid_poset.top
    if top is None:
        raise NoTopElement("slicing needs a grid with a maximum")

    def least_param(x):
        c = grid_poset.coord(x)
        lo = None
        for ci, oi, di in zip(c, offset, direction):
            if di == 0:
                if ci > oi:
                    return None
            elif is_inf(ci):
                lo = INF
            elif lo is None or not is_inf(lo):
                s = (ci - oi) / di
                lo = s if lo is None else max(lo, s)
        return lo

    def floor(s):
        pt = _point_on_line(offset, direction, s)
        cand = [x for x in grid_poset.elements
                if all(ci <= pi for ci, pi in zip(grid_poset.coord(x), pt))]
        return grid_poset.maximum_of(cand) if cand else None

    f = {}
    for x in grid_poset.elements:
        s = least_param(x)
        f[x] = INF if s is None else s
    params = sorted(set(f.values()))
    if not any(not is_inf(s) for s in params):
        raise EmptyIntersection("the line does not pass over any grid point")
    g = {}
    for s in params:
        g[s] = top if is_inf(s) else floor(s)
    line = chain(params)
    conn = validate_galois(f, g, grid_poset, line, require_insertion=True)
    return Slice(line, conn, offset, direction)


def fibered_barcode(m: PersistenceModule, offset, direction, check: bool = False):
    """Slice diagram as the pushforward of the module's diagram along the insertion.

    With ``check`` the restriction of the module to the slice is also computed and
    returned, so callers can compare the two.
    """
    sl = slice_insertion(m.base, offset, direction)
    pushed = pushforward_diagram(sl.conn.f, diagram_of(m), sl.chain)
    if not check:
        return pushed
    direct = diagram_of(pull_module(m, sl.conn))
    return pushed, direct


def fibered_barcode_direct(m: PersistenceModule, offset, direction) -> Diagram:
    sl = slice_insertion(m.base, offset, direction)
    return diagram_of(pull_module(m, sl.conn))


def interval_coords(base: FinitePoset, iv: Interval) -> tuple:
    """Coordinates of an interval: its endpoint coordinates, concatenated."""
    parent = getattr(base, "interval_of", base)
    if parent.coords is None:
        raise MissingCoords("the poset has no coordinates", witness=iv)
    return tuple(parent.coord(iv.lo)) + tuple(parent.coord(iv.hi))


__all__ = [
    "Diagram", "Slice", "diagram_of", "equivalent", "fibered_barcode",
    "fibered_barcode_direct", "from_points", "interval_coords", "positivity_check",
    "pushforward_diagram", "rank_diagram_direct", "rank_diagram_via_formula",
    "slice_insertion",
]
