"""Seeded random instances: posets, Galois connections, modules, filtrations and
interleavings. Every generator takes a ``random.Random``."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from . import linalg as la
from .homology import Filtration, make_filtration
from .mobius import IntFn
from .pmod import PersistenceModule
from .poset import (
    FinitePoset,
    GaloisConnection,
    adjoin_top,
    build_poset,
    chain,
    compose_galois,
    grid,
    validate_galois,
)


def random_poset(rng: random.Random, n: int, density: float = 0.35, prefix: str = "p") -> FinitePoset:
    """Closure of random forward edges on a shuffled labeling."""
    names = [f"{prefix}{i}" for i in range(n)]
    rels = [(names[i], names[j]) for i, j in itertools.combinations(range(n), 2)
            if rng.random() < density]
    perm = names[:]
    rng.shuffle(perm)
    return build_poset(perm, rels)


def random_intfn(rng: random.Random, p: FinitePoset, lo: int = -5, hi: int = 5) -> IntFn:
    return IntFn(p, {x: rng.randint(lo, hi) for x in p.elements})


def _reflective_subset(rng: random.Random, p: FinitePoset) -> list:
    """Random Q inside P such that every x has a least element of Q above it."""
    keep = set(p.elements)
    order = list(p.elements)
    rng.shuffle(order)
    for x in order:
        if rng.random() < 0.5:
            continue
        trial = keep - {x}
        if trial and all(p.minimum_of([q for q in trial if p.leq(y, q)]) is not None
                         for y in p.elements):
            keep = trial
    return [x for x in p.elements if x in keep]


def _coreflective_subset(rng: random.Random, p: FinitePoset) -> list:
    keep = set(p.elements)
    order = list(p.elements)
    rng.shuffle(order)
    for x in order:
        if rng.random() < 0.5:
            continue
        trial = keep - {x}
        if trial and all(p.maximum_of([q for q in trial if p.leq(q, y)]) is not None
                         for y in p.elements):
            keep = trial
    return [x for x in p.elements if x in keep]


def random_insertion_onto(rng: random.Random, p: FinitePoset) -> GaloisConnection:
    """Insertion P <-> Q with Q a reflective subposet and g the inclusion."""
    q = p.subposet(_reflective_subset(rng, p))
    f = {x: q.minimum_of([y for y in q.elements if p.leq(x, y)]) for x in p.elements}
    g = {y: y for y in q.elements}
    return validate_galois(f, g, p, q, require_insertion=True)


def random_coinsertion_into(rng: random.Random, r: FinitePoset) -> GaloisConnection:
    """Connection Q <-> R with f the inclusion of a coreflective Q and g = max below."""
    q = r.subposet(_coreflective_subset(rng, r))
    f = {y: y for y in q.elements}
    g = {x: q.maximum_of([y for y in q.elements if r.leq(y, x)]) for x in r.elements}
    return validate_galois(f, g, q, r)


def _blow(rng: random.Random, q: FinitePoset, up: bool, max_block: int = 3):
    """Replace each element y by a random block headed by (y, 0), the block's top
    when ``up`` and its bottom otherwise. Blocks are ordered like Q, all at once."""
    blocks = {}
    rels = []
    for y in q.elements:
        k = rng.randint(0, max_block - 1)
        inner = [(y, i) for i in range(1, k + 1)]
        rels.extend((inner[i], inner[j]) for i, j in itertools.combinations(range(k), 2)
                    if rng.random() < 0.4)
        head = (y, 0)
        rels.extend((e, head) if up else (head, e) for e in inner)
        blocks[y] = [head] + inner
    for a, b in q.hasse:
        rels.extend((ea, eb) for ea in blocks[a] for eb in blocks[b])
    big = build_poset([e for y in q.elements for e in blocks[y]], rels)
    return big, {y: (y, 0) for y in q.elements}


def random_galois_connection(rng: random.Random, max_size: int = 8,
                             insertion: bool | None = None) -> GaloisConnection:
    """A random connection whose source and target have at most ``max_size`` elements."""
    kinds = ["reflect", "blowup"] if insertion else ["reflect", "coreflect", "composite", "blowup"]
    kind = rng.choice(kinds)
    n = rng.randint(1, max_size)
    if kind == "reflect":
        return random_insertion_onto(rng, random_poset(rng, n))
    if kind == "coreflect":
        return random_coinsertion_into(rng, random_poset(rng, n))
    if kind == "blowup":
        q = random_poset(rng, rng.randint(1, max(1, max_size // 2)), prefix="q")
        big, head = _blow(rng, q, up=True)
        while len(big) > max_size:
            big, head = _blow(rng, q, up=True, max_block=1 + (len(big) > 2 * max_size))
        f = {e: e[0] for e in big.elements}
        return validate_galois(f, head, big, q, require_insertion=True)
    # insertion onto a reflective subposet, then into a coreflective extension of it
    c1 = random_insertion_onto(rng, random_poset(rng, rng.randint(1, max(1, max_size // 2))))
    mid = c1.target
    big, head = _blow(rng, mid, up=False, max_block=2)
    g = {e: e[0] for e in big.elements}
    c2 = validate_galois(head, g, mid, big)
    return compose_galois(c1, c2)


# -- modules ------------------------------------------------------------------------
def cokernel_module(base: FinitePoset, gens0, gens1, phi: np.ndarray, p: int,
                    kill=()) -> PersistenceModule:
    """Cokernel of a natural map between free modules; columns of ``phi`` are relations.

    ``phi[i, j]`` must vanish unless gens0[i] <= gens1[j]. Elements in ``kill``
    are sent to zero, which keeps functoriality when they are maximal.
    """
    quo, dims = {}, {}
    for x in base.elements:
        rows = [i for i, a in enumerate(gens0) if base.leq(a, x)]
        if x in kill:
            dims[x] = 0
            quo[x] = (rows, la.zeros(0, len(rows)), la.zeros(len(rows), 0))
            continue
        cols = [j for j, b in enumerate(gens1) if base.leq(b, x)]
        sub = la.span(phi[np.ix_(rows, cols)], p, len(rows)) if rows and cols \
            else la.zero_subspace(len(rows), p)
        q, sec = la.quotient_map(len(rows), sub, with_section=True)
        quo[x] = (rows, q, sec)
        dims[x] = q.shape[0]
    maps = {}
    for a, b in base.hasse:
        ra, _, sa = quo[a]
        rb, qb, _ = quo[b]
        pos = {i: k for k, i in enumerate(rb)}
        emb = la.zeros(len(rb), len(ra))
        for k, i in enumerate(ra):
            emb[pos[i], k] = 1
        maps[(a, b)] = la.matmul(qb, la.matmul(emb, sa, p), p) if dims[a] and dims[b] \
            else la.zeros(dims[b], dims[a])
    return PersistenceModule(base, dims, maps, p)


def random_module(rng: random.Random, base: FinitePoset, p: int = 2, max_gens: int = 4,
                  max_rels: int = 4, kill=()) -> PersistenceModule:
    elems = base.elements
    gens0 = [rng.choice(elems) for _ in range(rng.randint(0, max_gens))]
    gens1 = [rng.choice(elems) for _ in range(rng.randint(0, max_rels))]
    phi = la.zeros(len(gens0), len(gens1))
    for i, a in enumerate(gens0):
        for j, b in enumerate(gens1):
            if base.leq(a, b) and rng.random() < 0.7:
                phi[i, j] = rng.randrange(p)
    return cokernel_module(base, gens0, gens1, phi, p, kill)


def random_module_bounded(rng: random.Random, base: FinitePoset, p: int = 2,
                          max_dim: int = 4, tries: int = 50) -> PersistenceModule:
    """Random module with every dimension at most ``max_dim``."""
    for _ in range(tries):
        m = random_module(rng, base, p, max_gens=max_dim, max_rels=max_dim)
        if max(m.dims.values(), default=0) <= max_dim:
            return m
    return PersistenceModule(base, {}, {}, p)


def random_padding(rng: random.Random, m: PersistenceModule, k: int) -> list:
    """``k`` extra generators ``(a, v)`` with v a random vector of M(a), possibly zero."""
    out = []
    for _ in range(k):
        a = rng.choice(m.base.elements)
        out.append((a, np.array([rng.randrange(m.p) for _ in range(m.dims[a])], dtype=np.int64)))
    return out


def random_chain_module(rng: random.Random, length: int, p: int = 2, max_gens: int = 4):
    base = chain(range(length))
    return random_module(rng, base, p, max_gens=max_gens, max_rels=max_gens)


def random_grid_module(rng: random.Random, nx: int, ny: int, p: int = 2, max_gens: int = 4,
                       zero_top: bool = True):
    base = grid([range(nx), range(ny)])
    kill = (base.top,) if zero_top else ()
    return random_module(rng, base, p, max_gens=max_gens, max_rels=max_gens, kill=kill)


def random_poset_with_top(rng: random.Random, n: int) -> FinitePoset:
    p = random_poset(rng, max(1, n - 1))
    return adjoin_top(p, "top")


# -- filtrations ------------------------------------------------------------------------
def random_filtration(rng: random.Random, n_vertices: int = 5, max_simplices: int = 30,
                      max_grade: int = 6, params: int = 1, max_dim: int = 2) -> Filtration:
    """Random clique-like complex with grades that respect faces."""
    grade: dict = {}
    order = []
    verts = [str(i) for i in range(n_vertices)]

    def bump(g):
        return tuple(min(max_grade, v + rng.choice((0, 0, 1, 2))) for v in g)

    for v in verts:
        grade[(v,)] = tuple(rng.randint(0, max_grade // 2) for _ in range(params))
        order.append((v,))
    for k in range(2, max_dim + 2):
        cands = list(itertools.combinations(verts, k))
        rng.shuffle(cands)
        for s in cands:
            if len(order) >= max_simplices:
                break
            faces = list(itertools.combinations(s, k - 1))
            if any(f not in grade for f in faces) or rng.random() < 0.35:
                continue
            base = tuple(max(grade[f][i] for f in faces) for i in range(params))
            grade[s] = bump(base)
            order.append(s)
    return make_filtration([(s, grade[s]) for s in order], params,
                           [tuple(range(max_grade + 1))] * params)


def product_filtration(f: Filtration) -> Filtration:
    """Two-parameter filtration grading each simplex (g, g)."""
    return make_filtration([(s, (g[0], g[0])) for s, g in f.simplices], 2,
                           [f.axes[0], f.axes[0]])


# -- interleavings ------------------------------------------------------------------
def _half_steps(lo: Fraction, hi: Fraction) -> list:
    out, v = [], lo
    while v <= hi:
        out.append(v)
        v += Fraction(1, 2)
    return out


def random_interleaving(rng: random.Random, eps, n: int = 4, p: int = 2, tries: int = 100):
    """Random middle poset and module with monotone f0, f1 and |f0 - f1| <= eps."""
    from .interleave import Interleaving
    eps = Fraction(eps)
    for _ in range(tries):
        r = random_poset(rng, rng.randint(1, n), prefix="r")
        f0, f1 = {}, {}
        for x in r.linext:
            below = r.strictly_below[x]
            lo0 = max((f0[y] for y in below), default=Fraction(0))
            f0[x] = lo0 + Fraction(rng.choice((0, 1, 2, 3)), 2)
            lo1 = max([f1[y] for y in below] + [f0[x] - eps])
            f1[x] = rng.choice(_half_steps(lo1, f0[x] + eps))
        if len({(f0[x], f1[x]) for x in r.elements}) < len(r):
            continue
        gamma = random_module(rng, r, p, max_gens=3, max_rels=2)
        return Interleaving.from_adjoints(gamma, f0, f1)
    raise RuntimeError("could not draw an interleaving with distinct trajectories")


def shift_instance(rng: random.Random, eps, length: int = 6, p: int = 2):
    """M on the chain 0, 1/2, 1, ... and its eps-shift N(x) = M(x + eps), truncated at
    the end of the chain, with the canonical interleaving maps. Returns the
    arguments of :func:`build_from_shift`."""
    eps = Fraction(eps)
    vals = [Fraction(k, 2) for k in range(length)]
    base = chain(vals)
    m = random_module(rng, base, p, max_gens=3, max_rels=3)
    present = set(vals)

    def sh(x):
        return x + eps if x + eps in present else None

    dims = {x: (m.dims[sh(x)] if sh(x) is not None else 0) for x in vals}
    edges = {}
    for a, b in base.hasse:
        if sh(a) is not None and sh(b) is not None:
            edges[(a, b)] = m.map(sh(a), sh(b))
    n = PersistenceModule(base, dims, edges, p)
    phi, psi = {}, {}
    for x in vals:
        c = x + eps
        if c not in present:
            continue
        # M(x) -> N(c) = M(c + eps) and N(x) = M(c) -> M(c)
        phi[x] = m.map(x, c + eps) if c + eps in present else la.zeros(0, m.dims[x])
        psi[x] = la.identity(n.dims[x])
    return m, n, eps, phi, psi


# -- diagrams and matchings ----------------------------------------------------------
def random_diagram(rng: random.Random, base: FinitePoset, mass: int):
    """Nonnegative bar diagram with ``mass`` off-diagonal points on a chain."""
    from .diagram import from_points
    off = [iv for iv in base.intervals if not iv.is_diagonal()]
    pts: dict = {}
    for _ in range(mass if off else 0):
        iv = rng.choice(off)
        pts[(iv.lo, iv.hi)] = pts.get((iv.lo, iv.hi), 0) + 1
    return from_points(base, pts)


def random_matching_from(rng: random.Random, d, target: FinitePoset, extra: int = 2):
    """A matching out of ``d`` into a fresh diagram on ``target``; returns (matching, d2).

    Each point of d goes to a random interval of the target or to the diagonal,
    and up to ``extra`` target points come out of the diagonal.
    """
    from .diagram import Diagram
    from .matching import DiagonalPoint, Matching
    from .mobius import IntFn
    off = [iv for iv in target.intervals if not iv.is_diagonal()]
    rows, right = [], {}

    def diag():
        return DiagonalPoint((rng.choice(target.elements),))
    for iv, v in d.points().items():
        for _ in range(v):
            if off and rng.random() < 0.75:
                t = rng.choice(off)
                right[t] = right.get(t, 0) + 1
            else:
                t = diag()
            rows.append((iv, t, 1))
    for _ in range(rng.randint(0, extra) if off else 0):
        t = rng.choice(off)
        right[t] = right.get(t, 0) + 1
        rows.append((diag(), t, 1))
    d2 = Diagram(target, "bar", IntFn(target.bar, right), "random")
    return Matching(d.base, target.bar, tuple(rows)), d2


__all__ = [
    "cokernel_module", "product_filtration", "random_chain_module", "random_filtration",
    "random_diagram", "random_galois_connection", "random_matching_from", "random_grid_module", "random_insertion_onto",
    "random_interleaving", "random_intfn", "random_module", "random_module_bounded",
    "random_padding", "random_poset", "random_poset_with_top", "shift_instance",
]
