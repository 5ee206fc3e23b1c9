"""Persistence modules over finite posets, morphisms, free presentations and the
kernel, birth-death and rank functions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import linalg as la
from .errors import (
    GaloisPHError,
    NotFunctorial,
    NotInsertion,
    NotIsomorphic,
    PresentationMismatch,
    ShapeMismatch,
    UnknownElement,
)
from .mobius import IntFn
from .poset import Downset, FinitePoset, GaloisConnection, adjoin_top


class PersistenceModule:
    """A functor from a finite poset to finite-dimensional F_p vector spaces.

    ``edge_maps[(a, b)]`` is the ``dims[b] x dims[a]`` matrix on the cover a < b.
    Construction checks that composites along different Hasse paths agree and
    caches the map for every comparable pair.
    """

    def __init__(self, base: FinitePoset, dims: Mapping, edge_maps: Mapping | None = None,
                 field: la.PrimeField | int = 2):
        self.base = base
        self.field = field if isinstance(field, la.PrimeField) else la.PrimeField(int(field))
        self.p = self.field.p
        p = self.p
        self.dims = {}
        for x in base.elements:
            d = int(dims.get(x, 0))
            if d < 0:
                raise ShapeMismatch(f"negative dimension at {x!r}", witness=x)
            self.dims[x] = d
        for x in dims:
            if x not in base.index:
                raise UnknownElement(f"dimension given for unknown element {x!r}", witness=x)
        edge_maps = dict(edge_maps or {})
        covers = set(base.hasse)
        for key in edge_maps:
            if tuple(key) not in covers:
                raise ShapeMismatch(f"{key!r} is not a Hasse edge", witness=key)
        self.edge_maps = {}
        for a, b in base.hasse:
            shape = (self.dims[b], self.dims[a])
            if (a, b) in edge_maps:
                m = np.array(edge_maps[(a, b)], dtype=np.int64)
                if m.size == 0:
                    m = m.reshape(shape)
                if m.shape != shape:
                    raise ShapeMismatch(
                        f"map {a!r}->{b!r} has shape {m.shape}, expected {shape}",
                        witness=(a, b),
                    )
                m = m % p
            elif 0 in shape:
                m = la.zeros(*shape)
            else:
                raise ShapeMismatch(f"missing map on edge {a!r}->{b!r}", witness=(a, b))
            m.setflags(write=False)
            self.edge_maps[(a, b)] = m
        self._maps = self._compose_all()

    def _compose_all(self) -> dict:
        base, p = self.base, self.p
        maps = {}
        for b in base.linext:
            maps[(b, b)] = la.identity(self.dims[b])
            covers = base.lower_covers[b]
            for a in base.strictly_below[b]:
                found = None
                for c in covers:
                    if not base.leq(a, c):
                        continue
                    comp = la.matmul(self.edge_maps[(c, b)], maps[(a, c)], p)
                    if found is None:
                        found, first = comp, c
                    elif not np.array_equal(found, comp):
                        raise NotFunctorial(
                            f"paths {a!r}->{first!r}->{b!r} and {a!r}->{c!r}->{b!r} disagree",
                            witness=(a, first, c, b),
                        )
                maps[(a, b)] = found
        return maps

    def map(self, a, b) -> np.ndarray:
        """M(a <= b)."""
        try:
            return self._maps[(a, b)]
        except KeyError:
            raise GaloisPHError(f"{a!r} <= {b!r} does not hold", witness=(a, b)) from None

    def dim(self, x) -> int:
        return self.dims[x]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __repr__(self) -> str:
        return f"PersistenceModule(dims={self.dims!r}, p={self.p})"


def validate_module(dims, edge_maps, base: FinitePoset, field=2) -> PersistenceModule:
    return PersistenceModule(base, dims, edge_maps, field)


def zero_module(base: FinitePoset, field=2) -> PersistenceModule:
    return PersistenceModule(base, {}, {}, field)


def modules_equal(m: PersistenceModule, n: PersistenceModule) -> bool:
    return (m.base == n.base and m.p == n.p and m.dims == n.dims
            and all(np.array_equal(m.edge_maps[e], n.edge_maps[e]) for e in m.edge_maps))


def adjoin_zero_top(m: PersistenceModule, top_id="⊤") -> PersistenceModule:
    """Extend by a new maximum carrying the zero space."""
    base = adjoin_top(m.base, top_id)
    return PersistenceModule(base, m.dims, m.edge_maps, m.field)


# -- natural transformations and morphisms ---------------------------------------
def natural_maps_space(a: PersistenceModule, b: PersistenceModule) -> list[dict]:
    """Basis of all natural transformations a => b (same base poset)."""
    if a.base != b.base or a.p != b.p:
        raise GaloisPHError("modules live on different posets or fields")
    p = a.p
    elems = a.base.elements
    offs, total = {}, 0
    for x in elems:
        offs[x] = total
        total += b.dims[x] * a.dims[x]
    rows = []
    for (x, y) in a.base.hasse:
        ax, by = a.edge_maps[(x, y)], b.edge_maps[(x, y)]
        dax, dbx, day, dby = a.dims[x], b.dims[x], a.dims[y], b.dims[y]
        # eta_y A_xy - B_xy eta_x = 0, with eta stored row-major
        for i in range(dby):
            for j in range(dax):
                row = np.zeros(total, dtype=np.int64)
                for k in range(day):
                    row[offs[y] + i * day + k] += ax[k, j]
                for k in range(dbx):
                    row[offs[x] + k * dax + j] -= by[i, k]
                rows.append(row % p)
    if total == 0:
        return [{x: la.zeros(b.dims[x], a.dims[x]) for x in elems}]
    system = np.array(rows) if rows else la.zeros(0, total)
    ker = la.kernel_basis(system, p)
    out = []
    for k in range(ker.dim):
        v = ker.basis[:, k]
        out.append({x: v[offs[x]:offs[x] + b.dims[x] * a.dims[x]].reshape(b.dims[x], a.dims[x])
                    for x in elems})
    return out


def find_natural_isomorphism(a: PersistenceModule, b: PersistenceModule,
                             tries: int = 256, seed: int = 0):
    """A natural isomorphism a => b, or ``None`` if none was found.

    Solves the linear commuting system, then searches the solution space: every
    combination when it has at most 4096 elements, otherwise random samples.
    """
    if a.dims != b.dims:
        return None
    basis = natural_maps_space(a, b)
    p = a.p
    elems = a.base.elements

    def combo(coeffs):
        return {x: sum((c * t[x] for c, t in zip(coeffs, basis)),
                       la.zeros(b.dims[x], a.dims[x])) % p for x in elems}

    def iso(eta):
        return all(la.is_invertible(eta[x], p) for x in elems)

    k = len(basis)
    if p ** k <= 4096:
        candidates = itertools.product(range(p), repeat=k)
    else:
        rng = np.random.default_rng(seed)
        candidates = (tuple(int(c) for c in rng.integers(0, p, size=k)) for _ in range(tries))
    for coeffs in candidates:
        eta = combo(coeffs)
        if iso(eta):
            return eta
    return None


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    """A Galois insertion f: P <-> Q : g together with isos M(g(q)) ~ N(q)."""

    conn: GaloisConnection
    source: PersistenceModule
    target: PersistenceModule
    witness_isos: dict


def validate_morphism(conn: GaloisConnection, source: PersistenceModule,
                      target: PersistenceModule, witness_isos: Mapping | None = None
                      ) -> ModuleMorphism:
    if not conn.insertion:
        raise NotInsertion("module morphisms are Galois insertions")
    if conn.source != source.base or conn.target != target.base:
        raise GaloisPHError("connection does not join the modules' base posets")
    pulled = pull_module(source, conn)
    p = source.p
    if witness_isos is None:
        isos = find_natural_isomorphism(pulled, target)
        if isos is None:
            raise NotIsomorphic("no natural isomorphism M o g ~ N found")
    else:
        isos = {q: np.array(witness_isos[q], dtype=np.int64) % p for q in target.base.elements}
        for q, m in isos.items():
            if m.shape != (target.dims[q], pulled.dims[q]) or not la.is_invertible(m, p):
                raise NotIsomorphic(f"witness at {q!r} is not invertible", witness=q)
        for (x, y) in target.base.hasse:
            lhs = la.matmul(target.edge_maps[(x, y)], isos[x], p)
            rhs = la.matmul(isos[y], pulled.edge_maps[(x, y)], p)
            if not np.array_equal(lhs, rhs):
                raise NotIsomorphic(f"witnesses do not commute on {x!r}->{y!r}", witness=(x, y))
    return ModuleMorphism(conn, source, target, isos)


def pull_module(m: PersistenceModule, ins: GaloisConnection) -> PersistenceModule:
    """N = M o g on the target of the insertion."""
    if not ins.insertion:
        raise NotInsertion("pullback of modules is taken along a Galois insertion")
    q = ins.target
    dims = {x: m.dims[ins.g[x]] for x in q.elements}
    edges = {(x, y): m.map(ins.g[x], ins.g[y]) for (x, y) in q.hasse}
    return PersistenceModule(q, dims, edges, m.field)


def colimit_over(m: PersistenceModule, downset: Downset | frozenset | set) -> la.Colimit:
    members = downset.members if isinstance(downset, Downset) else frozenset(downset)
    order = sorted(members, key=m.base.position.__getitem__)
    arrows = [(a, b, m.edge_maps[(a, b)]) for (a, b) in m.base.hasse
              if a in members and b in members]
    return la.colimit({a: m.dims[a] for a in order}, arrows, m.p, order)


# -- free modules and presentations -----------------------------------------------
@dataclass(frozen=True)
class FreeModule:
    """Direct sum of k^{up a} over a multiset of generators (order matters for bases)."""

    generators: tuple

    def basis_at(self, base: FinitePoset, b) -> list[int]:
        """Indices of generators a <= b, i.e. the basis of F(b)."""
        return [i for i, a in enumerate(self.generators) if base.leq(a, b)]


def free_to_module(free: FreeModule, base: FinitePoset, field=2) -> PersistenceModule:
    for a in free.generators:
        base.idx(a)
    at = {b: free.basis_at(base, b) for b in base.elements}
    dims = {b: len(at[b]) for b in base.elements}
    edges = {}
    for (a, b) in base.hasse:
        pos = {g: k for k, g in enumerate(at[b])}
        mat = la.zeros(dims[b], dims[a])
        for j, g in enumerate(at[a]):
            mat[pos[g], j] = 1
        edges[(a, b)] = mat
    return PersistenceModule(base, dims, edges, field)


@dataclass(frozen=True, eq=False)
class FreePresentation:
    """A surjective natural transformation phi: F => M from a free module."""

    module: PersistenceModule
    free: FreeModule
    free_module: PersistenceModule
    phi: dict

    def __post_init__(self):
        m, fm, p = self.module, self.free_module, self.module.p
        for x in m.base.elements:
            ph = self.phi[x]
            if ph.shape != (m.dims[x], fm.dims[x]):
                raise PresentationMismatch(f"phi at {x!r} has shape {ph.shape}", witness=x)
            if la.rank(ph, p) != m.dims[x]:
                raise PresentationMismatch(f"phi at {x!r} is not surjective", witness=x)
        for (a, b) in m.base.hasse:
            lhs = la.matmul(self.phi[b], fm.edge_maps[(a, b)], p)
            rhs = la.matmul(m.edge_maps[(a, b)], self.phi[a], p)
            if not np.array_equal(lhs, rhs):
                raise PresentationMismatch(f"phi is not natural on {a!r}->{b!r}", witness=(a, b))


def presentation_from_generators(m: PersistenceModule, generators, images) -> FreePresentation:
    """Presentation sending generator i (at element a_i) to ``images[i]`` in M(a_i)."""
    base, p = m.base, m.p
    free = FreeModule(tuple(generators))
    fm = free_to_module(free, base, m.field)
    phi = {}
    for b in base.elements:
        idx = free.basis_at(base, b)
        mat = la.zeros(m.dims[b], len(idx))
        for j, i in enumerate(idx):
            v = np.array(images[i], dtype=np.int64).reshape(-1) % p
            a = free.generators[i]
            if v.shape[0] != m.dims[a]:
                raise PresentationMismatch(f"image of generator {i} has the wrong length",
                                           witness=i)
            if m.dims[b]:
                mat[:, j] = la.matmul(m.map(a, b), v.reshape(-1, 1), p)[:, 0]
        phi[b] = mat
    return FreePresentation(m, free, fm, phi)


def build_free_presentation(m: PersistenceModule) -> FreePresentation:
    """dim M(a) generators at every a, mapped onto the standard basis of M(a)."""
    gens, images = [], []
    for a in m.base.linext:
        for i in range(m.dims[a]):
            gens.append(a)
            e = np.zeros(m.dims[a], dtype=np.int64)
            e[i] = 1
            images.append(e)
    return presentation_from_generators(m, gens, images)


def pad_presentation(pres: FreePresentation, extra) -> FreePresentation:
    """Add generators ``(a, vector in M(a))``; the result is still a presentation."""
    m = pres.module
    gens = list(pres.free.generators)
    images = []
    for i, a in enumerate(gens):
        idx = pres.free.basis_at(m.base, a)
        images.append(pres.phi[a][:, idx.index(i)])
    for a, v in extra:
        gens.append(a)
        images.append(np.asarray(v, dtype=np.int64))
    return presentation_from_generators(m, gens, images)


def pull_presentation(pres: FreePresentation, ins: GaloisConnection) -> FreePresentation:
    """phi o g presents M o g; its free part is generated at f(a) for each generator a."""
    n = pull_module(pres.module, ins)
    free = FreeModule(tuple(ins.f[a] for a in pres.free.generators))
    fm = free_to_module(free, ins.target, n.field)
    phi = {q: pres.phi[ins.g[q]] for q in ins.target.elements}
    return FreePresentation(n, free, fm, phi)


# -- scalar invariants ----------------------------------------------------------
def kernel_fn(m: PersistenceModule) -> IntFn:
    p = m.p
    return IntFn(m.base.bar, {iv: m.dims[iv.lo] - la.rank(m.map(iv.lo, iv.hi), p)
                              for iv in m.base.intervals})


def rank_fn(m: PersistenceModule) -> IntFn:
    p = m.p
    return IntFn(m.base.hat, {iv: la.rank(m.map(iv.lo, iv.hi), p) for iv in m.base.intervals})


def birthdeath_fn(m: PersistenceModule, pres: FreePresentation) -> IntFn:
    """(a, b) -> dim(F(a) cap ker phi_b), F(a) embedded in F(b)."""
    if pres.module is not m and not modules_equal(pres.module, m):
        raise PresentationMismatch("presentation is for a different module")
    fm, p = pres.free_module, m.p
    kernels = {b: la.kernel_basis(pres.phi[b], p) for b in m.base.elements}
    vals = {}
    for iv in m.base.intervals:
        a, b = iv
        emb = la.image(fm.map(a, b), p) if fm.dims[a] else la.zero_subspace(fm.dims[b], p)
        vals[iv] = la.intersect(emb, kernels[b]).dim
    return IntFn(m.base.bar, vals)
