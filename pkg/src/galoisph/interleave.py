"""Interleavings as spans of modules, the interpolation they induce, and the
constructive stability certificate.

An interleaving is given by a module ``gamma`` on a finite poset R and two
monotone maps f0, f1 from R to extended rationals. Its endpoints live on the
chains f0(R) and f1(R). When f_i has a right adjoint on R itself the leg is the
insertion R <-> f_i(R); otherwise the leg is realized on the finite set of
downsets {r : f_i(r) <= q}, with gamma extended to downsets by colimits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

import numpy as np

from . import linalg as la
from .diagram import Diagram, diagram_of, positivity_check, pushforward_diagram
from .errors import (
    CriticalBetween,
    GaloisPHError,
    InfiniteCost,
    NoAdjoint,
    NotUnique,
)
from .ext import INF, dist, ext, ext_max, is_inf, lerp
from .matching import Matching, glue_matchings, matching_cost, validate_matching
from .pmod import (
    ModuleMorphism,
    PersistenceModule,
    colimit_over,
    pull_module,
    validate_morphism,
)
from .poset import (
    FinitePoset,
    GaloisConnection,
    Interval,
    check_monotone,
    chain,
    right_adjoint_of,
    validate_galois,
)


def _values_chain(values) -> FinitePoset:
    return chain(sorted(set(values)))


def colimit_module(gamma: PersistenceModule, sets: Mapping, base: FinitePoset) -> PersistenceModule:
    """Module on ``base`` with value colim(gamma restricted to sets[x]).

    ``sets`` must be downsets of gamma's base, nonempty and increasing along ``base``.
    """
    cols = {x: colimit_over(gamma, sets[x]) for x in base.elements}
    dims = {x: cols[x].dim for x in base.elements}
    edges = {(a, b): la.colimit_map(cols[a], cols[b]) for a, b in base.hasse}
    return PersistenceModule(base, dims, edges, gamma.field)


@dataclass(frozen=True, eq=False)
class Interleaving:
    gamma: PersistenceModule
    f0: dict
    f1: dict
    legs: tuple
    cost: object

    @property
    def middle(self) -> FinitePoset:
        return self.gamma.base

    @property
    def m0(self) -> PersistenceModule:
        return self.legs[0].target

    @property
    def m1(self) -> PersistenceModule:
        return self.legs[1].target

    @classmethod
    def from_adjoints(cls, gamma: PersistenceModule, f0: Mapping, f1: Mapping) -> "Interleaving":
        r = gamma.base
        f0 = {x: ext(f0[x]) for x in r.elements}
        f1 = {x: ext(f1[x]) for x in r.elements}
        for f, name in ((f0, "f0"), (f1, "f1")):
            check_monotone(f, r, _values_chain(f.values()), name)
        seen: dict = {}
        for x in r.linext:
            key = (f0[x], f1[x])
            if key in seen:
                raise NotUnique(
                    f"{seen[key]!r} and {x!r} have the same trajectory {key}",
                    witness=(seen[key], x),
                )
            seen[key] = x
        legs = (_leg(gamma, f0), _leg(gamma, f1))
        cost = ext_max(dist(f0[x], f1[x]) for x in r.elements)
        return cls(gamma, f0, f1, legs, cost)


def _leg(gamma: PersistenceModule, f: dict) -> ModuleMorphism:
    r = gamma.base
    q = _values_chain(f.values())
    try:
        g = right_adjoint_of(f, r, q)
    except NoAdjoint:
        return _completed_leg(gamma, f, q)
    conn = validate_galois(f, g, r, q, require_insertion=True)
    target = pull_module(gamma, conn)
    ident = {x: la.identity(target.dims[x]) for x in q.elements}
    return validate_morphism(conn, gamma, target, ident)


def _completed_leg(gamma: PersistenceModule, f: dict, q: FinitePoset) -> ModuleMorphism:
    """Leg from the downsets {r : f(r) <= x} together with all principal downsets."""
    r = gamma.base
    sets = {frozenset(r.below(x)) for x in r.elements}
    sub = {x: frozenset(y for y in r.elements if f[y] <= x) for x in q.elements}
    sets |= set(sub.values())
    elems = sorted(sets, key=lambda s: (len(s), sorted(r.position[y] for y in s)))
    leq = np.array([[a <= b for b in elems] for a in elems], dtype=bool)
    big = FinitePoset(elems, leq, check=False)
    fbig = {a: max(f[y] for y in a) for a in elems}
    conn = validate_galois(fbig, sub, big, q, require_insertion=True)
    gt = colimit_module(gamma, {a: a for a in elems}, big)
    target = pull_module(gt, conn)
    ident = {x: la.identity(target.dims[x]) for x in q.elements}
    return validate_morphism(conn, gt, target, ident)


def interleaving_cost(i: Interleaving):
    return i.cost


def restrict_to_finite(i: Interleaving, morphism: ModuleMorphism | None = None) -> Interleaving:
    """Precompose the legs with a morphism gamma' -> gamma; without one, return ``i``."""
    if morphism is None:
        return i
    alpha = morphism.conn.f
    s = morphism.source
    return Interleaving.from_adjoints(s, {x: i.f0[alpha[x]] for x in s.base.elements},
                                      {x: i.f1[alpha[x]] for x in s.base.elements})


# -- interpolation ----------------------------------------------------------------
def critical_points(f0: Mapping, f1: Mapping) -> list:
    """0, 1 and every t in [0, 1] where two distinct trajectories meet."""
    keys = list(f0)
    ts = {Fraction(0), Fraction(1)}
    for r, s in combinations(keys, 2):
        a, b, a2, b2 = f0[r], f1[r], f0[s], f1[s]
        if any(is_inf(v) for v in (a, b, a2, b2)):
            continue
        denom = (b - a) - (b2 - a2)
        if denom == 0:
            continue
        t = Fraction(a2 - a) / denom
        if 0 <= t <= 1:
            ts.add(t)
    return sorted(ts)


@dataclass
class Interpolation:
    parent: Interleaving
    critical_ts: list
    sample_ts: list
    _cache: dict = field(default_factory=dict, repr=False)

    def trajectory(self, t) -> dict:
        t = Fraction(t)
        return {r: lerp(self.parent.f0[r], self.parent.f1[r], t) for r in self.parent.middle.elements}

    def slice(self, t) -> FinitePoset:
        return self.level(t)[0]

    def module(self, t) -> PersistenceModule:
        return self.level(t)[1]

    def level(self, t):
        """(S_t, M_t, g_t) at parameter t; M_t(x) = colim gamma over g_t(x)."""
        t = Fraction(t)
        if t not in self._cache:
            h = self.trajectory(t)
            s = _values_chain(h.values())
            g = {x: frozenset(r for r in h if h[r] <= x) for x in s.elements}
            self._cache[t] = (s, colimit_module(self.parent.gamma, g, s), g)
        return self._cache[t]

    def is_critical(self, t) -> bool:
        h = self.trajectory(t)
        return len(set(h.values())) < len(h)


def interpolate(i: Interleaving) -> Interpolation:
    if is_inf(i.cost):
        raise InfiniteCost("interpolation needs an interleaving of finite cost")
    crit = critical_points(i.f0, i.f1)
    samples = [(a + b) / 2 for a, b in zip(crit, crit[1:])]
    return Interpolation(i, crit, samples)


def _alpha(interp: Interpolation, t, c) -> dict:
    ht, hc = interp.trajectory(t), interp.trajectory(c)
    out: dict = {}
    for r, x in ht.items():
        if x in out and out[x] != hc[r]:
            raise NotUnique(f"t = {t} is critical", witness=t)
        out[x] = hc[r]
    return out


def induced_morphism(interp: Interpolation, t, c) -> ModuleMorphism:
    """The morphism M_t -> M_c from alpha: h_t(r) -> h_c(r) and its right adjoint."""
    t, c = Fraction(t), Fraction(c)
    lo, hi = min(t, c), max(t, c)
    between = [x for x in interp.critical_ts if lo < x < hi]
    if between:
        raise CriticalBetween(f"critical point {between[0]} lies between {t} and {c}",
                              witness=between[0])
    if interp.is_critical(t):
        raise NotUnique(f"t = {t} is critical", witness=t)
    st, mt, gt = interp.level(t)
    sc, mc, gc = interp.level(c)
    alpha = _alpha(interp, t, c)
    beta = right_adjoint_of(alpha, st, sc)
    conn = validate_galois(alpha, beta, st, sc, require_insertion=True)
    for x in sc.elements:
        if gt[beta[x]] != gc[x]:
            raise GaloisPHError(f"g_t(beta({x})) differs from g_c({x})", witness=x)
    ident = {x: la.identity(mc.dims[x]) for x in sc.elements}
    return validate_morphism(conn, mt, mc, ident)


# -- stability ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class StabilityReport:
    matching: Matching
    cost: object
    epsilon: object
    critical_ts: list
    sample_ts: list
    step_costs: list
    step_bounds: list
    start: Diagram
    end: Diagram

    @property
    def ok(self) -> bool:
        return (self.cost <= self.epsilon
                and all(c <= b for c, b in zip(self.step_costs, self.step_bounds)))


def _step_matching(interp: Interpolation, t, c_left, c_right):
    st, mt, _ = interp.level(t)
    dgm = diagram_of(mt, "presentation")
    if not positivity_check(dgm):
        raise GaloisPHError(f"diagram at t = {t} has negative mass", witness=t)
    a_left = induced_morphism(interp, t, c_left).conn.f
    a_right = induced_morphism(interp, t, c_right).conn.f
    rows = []
    for iv, v in dgm.raw.support().items():
        rows.append((Interval(a_left[iv.lo], a_left[iv.hi]),
                     Interval(a_right[iv.lo], a_right[iv.hi]), v))
    return Matching(interp.slice(c_left).bar, interp.slice(c_right).bar, tuple(rows))


def stability_matching(i: Interleaving) -> StabilityReport:
    """Matching between the endpoint diagrams of cost at most the interleaving cost."""
    interp = interpolate(i)
    crit, samples = interp.critical_ts, interp.sample_ts
    eps = i.cost
    diagrams = {c: diagram_of(interp.module(c)) for c in crit}
    glued = None
    costs, bounds = [], []
    for k, t in enumerate(samples):
        step = _step_matching(interp, t, crit[k], crit[k + 1])
        check = validate_matching(step, diagrams[crit[k]], diagrams[crit[k + 1]])
        if not check:
            raise GaloisPHError(f"step {k} is not a matching: {check.witness}", witness=check.witness)
        costs.append(matching_cost(step))
        bounds.append((crit[k + 1] - crit[k]) * eps)
        glued = step if glued is None else glue_matchings(glued, step)
    start, end = diagrams[crit[0]], diagrams[crit[-1]]
    if glued is None:
        glued = Matching(start.base, end.base, ())
    # rows joining two diagonal points carry no information
    glued = Matching(glued.left_base, glued.right_base,
                     tuple(r for r in glued.rows if not (r[0].is_diagonal() and r[1].is_diagonal())))
    check = validate_matching(glued, start, end)
    if not check:
        raise GaloisPHError(f"glued span is not a matching: {check.witness}", witness=check.witness)
    return StabilityReport(glued, matching_cost(glued), eps, crit, samples, costs, bounds,
                           start, end)


# -- constructors ---------------------------------------------------------------------
def build_from_shift(m: PersistenceModule, n: PersistenceModule, eps, phi: Mapping,
                     psi: Mapping) -> Interleaving:
    """Span interleaving from a classical eps-interleaving of modules on one finite chain.

    The chain's elements are finite rationals. ``phi[x]`` maps M(x) to N at the
    least chain value >= x + eps, ``psi[x]`` maps N(x) to M likewise; either may be
    omitted when no such value exists. The middle is P x {0, 1} ordered by
    (x, t) <= (y, s) iff x + eps |t - s| <= y, with f_i(x, t) = x + eps |i - t|.
    """
    p = m.base
    if n.base != p:
        raise GaloisPHError("shift interleavings need both modules on the same chain")
    if not p.is_chain() or any(is_inf(x) for x in p.elements):
        raise GaloisPHError("shift interleavings need a chain of finite values")
    eps = ext(eps)
    field_ = m.field
    if eps == 0:
        # phi must be a natural isomorphism M => N; the middle is M itself
        ident = {x: x for x in p.elements}
        validate_morphism(GaloisConnection(p, p, ident, ident, True), m, n, phi)
        return Interleaving.from_adjoints(m, ident, ident)
    vals = sorted(p.elements)

    def ceil(v):
        return next((y for y in vals if y >= v), None)

    elems = [(x, 0) for x in vals] + [(x, 1) for x in vals]

    def leq(a, b):
        (x, t), (y, s) = a, b
        return x + eps * abs(t - s) <= y

    mat = np.array([[leq(a, b) for b in elems] for a in elems], dtype=bool)
    r = FinitePoset(elems, mat)
    mods = {0: m, 1: n}
    cross = {0: phi, 1: psi}
    dims = {(x, t): mods[t].dims[x] for x, t in elems}
    edges = {}
    pf = field_.p
    for a, b in r.hasse:
        (x, t), (y, s) = a, b
        if t == s:
            edges[(a, b)] = mods[t].map(x, y)
        else:
            c = ceil(x + eps)
            if c is None or (x not in cross[t]):
                raise GaloisPHError(f"no interleaving map at {a!r}", witness=a)
            step = np.asarray(cross[t][x], dtype=np.int64).reshape(mods[s].dims[c], mods[t].dims[x])
            edges[(a, b)] = la.matmul(mods[s].map(c, y), step % pf, pf)
    gamma = PersistenceModule(r, dims, edges, field_)
    f0 = {(x, t): x + eps * t for x, t in elems}
    f1 = {(x, t): x + eps * (1 - t) for x, t in elems}
    return Interleaving.from_adjoints(gamma, f0, f1)
