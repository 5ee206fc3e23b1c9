import itertools

import pytest

from galoisph.generators import random_galois_connection, random_intfn, random_poset
from galoisph.mobius import (
    IntFn,
    classical_rota_check,
    constructible_invert,
    mobius_invert,
    mobius_invert_matrix,
    pullback,
    pushforward,
    rgct_check,
    zeta_transform,
)
from galoisph.poset import (
    Interval,
    chain,
    identity_connection,
    validate_galois,
)

from conftest import iv


def brute_mu(p):
    """Recursive Mobius function straight from its definition."""
    mu = {}
    for a in p.elements:
        for b in p.linext:
            if not p.leq(a, b):
                mu[(a, b)] = 0
            elif a == b:
                mu[(a, b)] = 1
            else:
                mu[(a, b)] = -sum(mu[(a, c)] for c in p.elements
                                  if p.leq(a, c) and p.lt(c, b))
    return mu


def test_zeta_of_indicator_and_counts(P):
    c3 = chain([0, 1, 2])
    assert zeta_transform(IntFn.indicator(c3, 0)).values == {0: 1, 1: 1, 2: 1}
    ones = IntFn(P, {x: 1 for x in P.elements})
    assert zeta_transform(ones).values == {"a": 1, "b": 2, "c": 3, "d": 3}


def test_golden_kernel_inversion(P):
    bar = P.bar
    ker = IntFn(bar, {iv("a", "b"): 1, iv("a", "c"): 3, iv("a", "d"): 4,
                      iv("b", "c"): 2, iv("b", "d"): 3})
    d = mobius_invert(ker)
    assert d.support() == {iv("a", "b"): 1, iv("a", "c"): 2, iv("a", "d"): 3,
                           iv("b", "b"): -1, iv("c", "c"): -2, iv("d", "d"): -3}


def test_constant_function_inverts_to_bottom(P):
    d = mobius_invert(IntFn(P, {x: 7 for x in P.elements}))
    assert d.support() == {"a": 7}


def test_chain_telescopes(rng):
    c = chain(range(6))
    m = random_intfn(rng, c)
    d = mobius_invert(m)
    for i in range(6):
        assert d[i] == m[i] - (m[i - 1] if i else 0)


def test_back_substitution_matches_mu_and_brute_force(rng):
    for _ in range(30):
        p = random_poset(rng, rng.randint(1, 7))
        m = random_intfn(rng, p)
        assert mobius_invert(m) == mobius_invert_matrix(m)
        mu = brute_mu(p)
        for b in p.elements:
            assert mobius_invert(m)[b] == sum(m[a] * mu[(a, b)] for a in p.elements)


def test_roundtrip_and_linearity(rng):
    for _ in range(50):
        p = random_poset(rng, rng.randint(1, 8))
        m, n = random_intfn(rng, p), random_intfn(rng, p)
        assert zeta_transform(mobius_invert(m)) == m
        assert mobius_invert(zeta_transform(m)) == m
        assert mobius_invert(m + n) == mobius_invert(m) + mobius_invert(n)
        assert mobius_invert(m.scale(3)) == mobius_invert(m).scale(3)


def test_pushforward_and_pullback_basics(P, M):
    from galoisph.diagram import diagram_of
    m = IntFn(P, {"a": 1, "b": 2, "c": -1, "d": 5})
    ident = {x: x for x in P.elements}
    assert pushforward(ident, m, P) == m
    pt = chain([0])
    assert pushforward({x: 0 for x in P.elements}, m, pt)[0] == 7
    assert pullback(ident, m, P) == m
    assert set(pullback({0: "b"}, m, pt).values.values()) == {2}
    # the birth-death diagram of the example lands on the diagonal under (a, b) -> (a, a)
    from galoisph.pmod import presentation_from_generators
    import numpy as np
    e = np.eye(4, dtype=np.int64)
    pres = presentation_from_generators(M, ["a"] * 5, [e[0], e[1], e[2], e[3], np.zeros(4)])
    raw = diagram_of(M, "presentation", pres).raw
    to_diag = {j: Interval(j.lo, j.lo) for j in P.bar.elements}
    pushed = pushforward(to_diag, raw, P.bar)
    assert pushed.support() == {iv("a", "a"): 1 + 1 + 2 + 3}


def test_rgct_identity_and_diagonal_connection(P):
    from galoisph.poset import adjoin_top
    assert rgct_check(identity_connection(P), IntFn(P, {"a": 3, "c": -2}))
    # bar(P + T) -> diagonal, (a, b) -> (a, a), with right adjoint (c, c) -> (c, T)
    pt = adjoin_top(P, "T")
    bar = pt.bar
    diag = bar.subposet([Interval(x, x) for x in pt.elements])
    f = {j: Interval(j.lo, j.lo) for j in bar.elements}
    g = {j: Interval(j.lo, "T") for j in diag.elements}
    c = validate_galois(f, g, bar, diag)
    ell = IntFn(bar, {j: (1 if j.lo == "a" else 0) + (2 if j.hi == "T" else 0)
                      for j in bar.elements})
    assert rgct_check(c, ell)


def test_rgct_random(rng):
    for _ in range(200):
        c = random_galois_connection(rng, 8)
        assert rgct_check(c, random_intfn(rng, c.source))


def test_rgct_detects_wrong_connection():
    two = chain([0, 1])
    from galoisph.poset import GaloisConnection
    # not an adjunction: both maps constant
    bogus = GaloisConnection(two, two, {0: 1, 1: 1}, {0: 0, 1: 0}, False)
    chk = rgct_check(bogus, IntFn(two, {0: 1, 1: 0}))
    assert not chk and chk.witness is not None


def test_constructible_inversion():
    c4, c2 = chain(range(4)), chain([1, 3])
    up = {x: min(y for y in c2.elements if y >= x) if x <= 3 else 3 for x in c4.elements}
    # insertion onto {1, 3}: ceiling, with the inclusion as right adjoint
    ins = validate_galois(up, {1: 1, 3: 3}, c4, c2, require_insertion=True)
    m = IntFn(c4, {0: 2, 1: -1, 2: 4, 3: 1})
    direct = mobius_invert(pullback(ins.g, m, c2))
    assert constructible_invert(ins, m) == direct
    ident = identity_connection(c4)
    assert constructible_invert(ident, m) == mobius_invert(m)


def test_classical_rota(rng):
    c3, c2 = chain([0, 1, 2]), chain([0, 2])
    up = {x: min(y for y in c2.elements if y >= x) for x in c3.elements}
    ins = validate_galois(up, {0: 0, 2: 2}, c3, c2, True)
    for p, q in itertools.product(c3.elements, c2.elements):
        assert classical_rota_check(ins, p, q)
    for p in c3.elements:
        assert classical_rota_check(identity_connection(c3), p, p)
    for _ in range(30):
        c = random_galois_connection(rng, 6)
        for p, q in itertools.product(c.source.elements, c.target.elements):
            assert classical_rota_check(c, p, q)


def test_unknown_image_rejected(P):
    from galoisph.errors import UnknownElement
    with pytest.raises(UnknownElement):
        pushforward({x: "zz" for x in P.elements}, IntFn(P, {"a": 1}), P)
