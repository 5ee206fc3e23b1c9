"""Integer functions on finite posets, zeta/Mobius transforms, pushforward and
pullback, and Rota's Galois connection theorem as checkable identities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .errors import NotInsertion, UnknownElement
from .poset import FinitePoset, GaloisConnection


class IntFn:
    """A total integer-valued function on the elements of a finite poset."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: FinitePoset, values: Mapping | None = None, *, default: int = 0):
        self.domain = domain
        vals = {x: default for x in domain.elements}
        if values:
            for x, v in values.items():
                if x not in domain.index:
                    raise UnknownElement(f"{x!r} is not in the domain", witness=x)
                vals[x] = int(v)
        self.values = vals

    @classmethod
    def zero(cls, domain: FinitePoset) -> "IntFn":
        return cls(domain)

    @classmethod
    def indicator(cls, domain: FinitePoset, x) -> "IntFn":
        return cls(domain, {x: 1})

    def __getitem__(self, x) -> int:
        try:
            return self.values[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not in the domain", witness=x) from None

    def __iter__(self):
        return iter(self.values)

    def items(self):
        return self.values.items()

    def support(self) -> dict:
        return {x: v for x, v in self.values.items() if v != 0}

    def total(self) -> int:
        return sum(self.values.values())

    def _check(self, other: "IntFn") -> None:
        if self.domain != other.domain:
            raise ValueError("functions live on different posets")

    def __add__(self, other: "IntFn") -> "IntFn":
        self._check(other)
        return IntFn(self.domain, {x: v + other.values[x] for x, v in self.values.items()})

    def __sub__(self, other: "IntFn") -> "IntFn":
        self._check(other)
        return IntFn(self.domain, {x: v - other.values[x] for x, v in self.values.items()})

    def __neg__(self) -> "IntFn":
        return IntFn(self.domain, {x: -v for x, v in self.values.items()})

    def scale(self, k: int) -> "IntFn":
        return IntFn(self.domain, {x: k * v for x, v in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntFn):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __repr__(self) -> str:
        return f"IntFn({self.support()!r})"

    def first_difference(self, other: "IntFn"):
        pos = self.domain.position
        for x in sorted(self.values, key=pos.__getitem__):
            if self.values[x] != other.values.get(x, 0):
                return x
        return None


@dataclass(frozen=True, eq=False)
class ZetaData:
    """Zeta matrix of a poset and its integer inverse, indexed by the linear extension."""

    domain: FinitePoset
    order: tuple
    zeta: np.ndarray
    mu: np.ndarray

    @classmethod
    def compute(cls, p: FinitePoset) -> "ZetaData":
        order = p.linext
        ix = [p.index[x] for x in order]
        z = p.leq_matrix[np.ix_(ix, ix)].astype(object) * 1
        n = len(order)
        mu = np.zeros((n, n), dtype=object)
        pos = p.position
        # mu @ zeta = I, solved one column at a time along the extension
        for j, b in enumerate(order):
            col = np.zeros(n, dtype=object)
            col[j] = 1
            below = [pos[a] for a in p.strictly_below[b]]
            if below:
                col = col - mu[:, below].sum(axis=1)
            mu[:, j] = col
        return cls(p, order, z, mu)

    def mu_value(self, a, b) -> int:
        pos = self.domain.position
        return int(self.mu[pos[a], pos[b]])


def zeta_data(p: FinitePoset) -> ZetaData:
    return p.zeta_data()


def zeta_transform(m: IntFn) -> IntFn:
    """b -> sum of m(a) over a <= b."""
    p = m.domain
    vals = m.values
    return IntFn(p, {b: vals[b] + sum(vals[a] for a in p.strictly_below[b]) for b in p.elements})


def mobius_invert(m: IntFn) -> IntFn:
    """The unique d with m(b) = sum_{a <= b} d(a), by back-substitution."""
    p = m.domain
    out: dict = {}
    for b in p.linext:
        out[b] = m.values[b] - sum(out[a] for a in p.strictly_below[b])
    return IntFn(p, out)


def pushforward(f: Mapping, m: IntFn, target: FinitePoset) -> IntFn:
    """Fiber sums of ``m`` along ``f``; ``f`` need not be monotone."""
    out = {q: 0 for q in target.elements}
    for x, v in m.values.items():
        try:
            y = f[x]
        except KeyError:
            raise UnknownElement(f"map undefined at {x!r}", witness=x) from None
        if y not in out:
            raise UnknownElement(f"image {y!r} of {x!r} is not in the target", witness=(x, y))
        out[y] += v
    return IntFn(target, out)


def pullback(f: Mapping, n: IntFn, source: FinitePoset) -> IntFn:
    return IntFn(source, {x: n[f[x]] for x in source.elements})


class Check(NamedTuple):
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def rgct_check(c: GaloisConnection, m: IntFn) -> Check:
    """Evaluate both sides of d_Q(m o g) = f_#(d_P m); report the first differing element."""
    lhs = mobius_invert(pullback(c.g, m, c.target))
    rhs = pushforward(c.f, mobius_invert(m), c.target)
    if lhs == rhs:
        return Check(True)
    x = lhs.first_difference(rhs)
    return Check(False, (x, lhs[x], rhs[x]))


def constructible_invert(ins: GaloisConnection, mprime: IntFn) -> IntFn:
    """Mobius inversion of m' o beta on the target, computed as alpha_#(d m')."""
    if not ins.insertion:
        raise NotInsertion("constructible inversion needs a Galois insertion")
    return pushforward(ins.f, mobius_invert(mprime), ins.target)


def classical_rota_check(c: GaloisConnection, p, q) -> Check:
    """sum_{v: g(v)=p} mu_Q(v,q) == sum_{u: f(u)=q} mu_P(p,u)."""
    zq, zp = c.target.zeta_data(), c.source.zeta_data()
    lhs = sum(zq.mu_value(v, q) for v in c.target.elements if c.g[v] == p)
    rhs = sum(zp.mu_value(p, u) for u in c.source.elements if c.f[u] == q)
    return Check(lhs == rhs, None if lhs == rhs else (p, q, lhs, rhs))


def mobius_invert_matrix(m: IntFn) -> IntFn:
    """Row vector times mu; an independent route used to cross-check back-substitution."""
    zd = m.domain.zeta_data()
    vec = np.array([m.values[x] for x in zd.order], dtype=object)
    res = vec.dot(zd.mu) if len(vec) else vec
    return IntFn(m.domain, {x: int(v) for x, v in zip(zd.order, res)})
