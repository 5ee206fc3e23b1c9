from fractions import Fraction

import numpy as np
import pytest

from galoisph.diagram import diagram_of
from galoisph.errors import CriticalBetween, GaloisPHError, NotUnique
from galoisph.generators import random_interleaving, random_module, shift_instance
from galoisph.interleave import (
    Interleaving,
    build_from_shift,
    critical_points,
    induced_morphism,
    interpolate,
    restrict_to_finite,
    stability_matching,
)
from galoisph.matching import bottleneck_distance, validate_matching
from galoisph.poset import build_poset, chain

from conftest import bar_module, iv

LINE = chain(range(6))


def unit_shift():
    m, n = bar_module(LINE, 0, 3), bar_module(LINE, 1, 4)

    def cross(a, b):
        out = {}
        for x in LINE.elements:
            if x + 1 in LINE.position:
                out[x] = np.ones((b.dims[x + 1], a.dims[x]), dtype=np.int64)
        return out
    return build_from_shift(m, n, 1, cross(m, n), cross(n, m))


def test_shift_interleaving_cost_and_ends():
    il = unit_shift()
    assert il.cost == 1
    assert diagram_of(il.m0).points() == {iv(0, 3): 1}
    assert diagram_of(il.m1).points() == {iv(1, 4): 1}


def test_shift_criticals_and_certificate():
    il = unit_shift()
    interp = interpolate(il)
    assert interp.critical_ts == [0, Fraction(1, 2), 1]
    rep = stability_matching(il)
    assert rep.ok and rep.cost == 1
    assert validate_matching(rep.matching, rep.start, rep.end)
    assert all(c <= b for c, b in zip(rep.step_costs, rep.step_bounds))
    assert bottleneck_distance(rep.start, rep.end).distance <= rep.cost


def test_critical_points_examples():
    f = {"r": 0, "s": 2}
    assert critical_points(f, f) == [0, 1]
    assert critical_points({"r": 0, "s": 1}, {"r": 3, "s": 1}) == [0, Fraction(1, 3), 1]
    # parallel trajectories never meet
    assert critical_points({"r": 0, "s": 1}, {"r": 2, "s": 3}) == [0, 1]


def test_induced_morphism_rules():
    interp = interpolate(unit_shift())
    q = Fraction(1, 4)
    same = induced_morphism(interp, q, q)
    assert all(same.conn.f[x] == x for x in interp.slice(q).elements)
    for x in interp.slice(q).elements:
        assert np.array_equal(same.witness_isos[x] % 2, np.eye(interp.module(q).dims[x], dtype=np.int64))
    induced_morphism(interp, q, 0)
    induced_morphism(interp, q, Fraction(1, 2))
    with pytest.raises(CriticalBetween):
        induced_morphism(interp, q, 1)
    with pytest.raises(NotUnique):
        induced_morphism(interp, Fraction(1, 2), 1)


def test_repeated_trajectory_rejected(rng):
    r = build_poset(["u", "v"], [])
    gamma = random_module(rng, r, 2)
    with pytest.raises(NotUnique):
        Interleaving.from_adjoints(gamma, {"u": 0, "v": 0}, {"u": 1, "v": 1})


def test_non_monotone_rejected(rng):
    r = build_poset(["u", "v"], [("u", "v")])
    gamma = random_module(rng, r, 2)
    with pytest.raises(GaloisPHError):
        Interleaving.from_adjoints(gamma, {"u": 1, "v": 0}, {"u": 1, "v": 2})


def test_zero_shift():
    m = bar_module(LINE, 1, 4)
    il = build_from_shift(m, m, 0, {x: np.eye(m.dims[x], dtype=np.int64) for x in LINE.elements}, None)
    assert il.cost == 0
    rep = stability_matching(il)
    assert rep.ok and rep.cost == 0 and rep.critical_ts == [0, 1]
    assert restrict_to_finite(il) is il


def test_shift_needs_one_finite_chain():
    m = bar_module(chain([0, 1, 2]), 0, 1)
    with pytest.raises(GaloisPHError):
        build_from_shift(m, bar_module(chain([0, 1, 3]), 0, 1), 1, {}, {})
    c = chain([0, 1, "inf"])
    with pytest.raises(GaloisPHError):
        build_from_shift(bar_module(c, 0, 1), bar_module(c, 0, 1), 1, {}, {})


@pytest.mark.parametrize("eps", [0, Fraction(1, 2), 1, Fraction(3, 2)])
def test_random_interleavings_are_stable(rng, eps):
    for _ in range(3):
        il = random_interleaving(rng, eps)
        assert il.cost <= eps
        rep = stability_matching(il)
        assert rep.ok
        assert bottleneck_distance(rep.start, rep.end).distance <= il.cost
    m, n, e, phi, psi = shift_instance(rng, eps if eps else Fraction(1, 2))
    rep = stability_matching(build_from_shift(m, n, e, phi, psi))
    assert rep.ok and rep.cost <= e
