import numpy as np
import pytest

from galoisph.diagram import (
    Diagram,
    diagram_of,
    equivalent,
    fibered_barcode,
    fibered_barcode_direct,
    from_points,
    positivity_check,
    pushforward_diagram,
    rank_diagram_direct,
    rank_diagram_via_formula,
    slice_insertion,
)
from galoisph.errors import BadDirection, BaseMismatch, EmptyIntersection, IntervalViolation, NoTopElement, NotTotalOrder
from galoisph.generators import product_filtration, random_chain_module, random_grid_module, random_module
from galoisph.homology import parse_filtration, persistence_module
from galoisph.mobius import IntFn
from galoisph.pmod import PersistenceModule, adjoin_zero_top, presentation_from_generators, zero_module
from galoisph.poset import chain, grid, identity_connection, validate_galois

from conftest import bar_module, iv


def pts(d):
    return {(j.lo, j.hi): v for j, v in d.points().items()}


def test_golden_diagrams(M):
    dk = diagram_of(M)
    assert pts(dk) == {("a", "b"): 1, ("a", "c"): 2, ("a", "d"): 3}
    assert dk.raw.support()[iv("d", "d")] == -3
    e = np.eye(4, dtype=np.int64)
    pres = presentation_from_generators(M, ["a"] * 5, [e[0], e[1], e[2], e[3], np.zeros(4)])
    dp = diagram_of(M, "presentation", pres)
    assert dp.raw.support() == {iv("a", "a"): 1, iv("a", "b"): 1, iv("a", "c"): 2, iv("a", "d"): 3}
    assert equivalent(dk, dp)
    assert dk == diagram_of(M, "presentation")
    assert pts(diagram_of(zero_module(M.base))) == {}


def test_equivalence_is_modulo_diagonal(P):
    d = from_points(P, {("a", "b"): 2, ("b", "b"): 1})
    assert equivalent(d, from_points(P, {("a", "b"): 2, ("b", "b"): -4}))
    assert not equivalent(d, from_points(P, {("a", "b"): 1}))
    with pytest.raises(BaseMismatch):
        equivalent(d, from_points(chain([0, 1]), {}))
    with pytest.raises(IntervalViolation):
        from_points(P, {("c", "d"): 1})


def test_pushforward_identity_and_collapse(P):
    d = from_points(P, {("a", "b"): 2, ("a", "c"): 1})
    assert pushforward_diagram({x: x for x in P.elements}, d, P) == d
    pt = chain([0])
    assert pts(pushforward_diagram({x: 0 for x in P.elements}, d, pt)) == {}


def test_functoriality_on_example(M):
    top = adjoin_zero_top(M, "T")
    base = top.base
    q = chain([0, 1])
    f = {x: (0 if x == "a" else 1) for x in base.elements}
    ins = validate_galois(f, {0: "a", 1: "T"}, base, q, True)
    from galoisph.pmod import pull_module
    assert pushforward_diagram(ins.f, diagram_of(top), q) == diagram_of(pull_module(top, ins))
    assert pts(diagram_of(pull_module(top, ins))) == {(0, 1): 4}


def test_positivity(rng, M):
    for _ in range(20):
        m = random_chain_module(rng, rng.randint(1, 8))
        assert positivity_check(diagram_of(m, "presentation"))
    with pytest.raises(NotTotalOrder):
        positivity_check(diagram_of(M))
    assert positivity_check(diagram_of(zero_module(chain([0, 1]))))


def test_rank_diagram_examples(M):
    assert rank_diagram_direct(M).raw.support() == {iv("a", "a"): 1, iv("a", "b"): 2,
                                                    iv("a", "c"): 1}
    two = chain([0, 1])
    ones = bar_module(two, 0, 2)
    assert rank_diagram_direct(ones).raw.support() == {iv(0, 1): 1}
    assert rank_diagram_direct(zero_module(two)).raw.support() == {}


def test_rank_formula_needs_zero_top(M):
    with pytest.raises(NoTopElement):
        rank_diagram_via_formula(M)
    with_top = adjoin_zero_top(M, "T")
    direct = rank_diagram_direct(with_top)
    assert rank_diagram_via_formula(with_top) == direct
    on_original = {j: v for j, v in direct.raw.support().items() if "T" not in j}
    assert on_original == rank_diagram_direct(M).raw.support()
    ones = adjoin_zero_top(bar_module(chain([0, 1]), 0, 2), "T")
    assert rank_diagram_via_formula(ones) == rank_diagram_direct(ones)
    z = zero_module(chain([0, 1, 2]))
    assert rank_diagram_via_formula(z) == rank_diagram_direct(z)
    const = bar_module(chain([0, 1]), 0, 2)
    with pytest.raises(NoTopElement):
        rank_diagram_via_formula(const)


def test_fiber_of_product_filtration_matches_one_parameter(data):
    one = parse_filtration((data / "cycle.filt").read_text())
    two = product_filtration(one)
    for d in (0, 1):
        m2 = persistence_module(two, d)
        pushed, direct = fibered_barcode(m2, (0, 0), (1, 1), check=True)
        assert pushed == direct
        assert pts(pushed) == pts(diagram_of(persistence_module(one, d)))


def test_fiber_bottom_row_matches_restriction(rng):
    inf = float("inf")
    for _ in range(10):
        m = random_grid_module(rng, 4, 3)
        # the row y = 0, with the line's point at infinity carrying the zero space
        row = chain([0, 1, 2, 3, inf])
        dims = {x: (m.dims[(x, 0)] if x != inf else 0) for x in row.elements}
        edges = {(x, y): m.map((x, 0), (y, 0)) for x, y in row.hasse if y != inf}
        restricted = PersistenceModule(row, dims, edges, m.p)
        assert pts(fibered_barcode(m, (0, 0), (1, 0))) == pts(diagram_of(restricted))


def test_fiber_zero_and_errors():
    g = grid([range(3), range(3)])
    z = zero_module(g)
    assert pts(fibered_barcode(z, (0, 0), (1, 2))) == {}
    with pytest.raises(BadDirection):
        slice_insertion(g, (0, 0), (1, -1))
    with pytest.raises(BadDirection):
        slice_insertion(g, (0, 0), (0, 0))
    with pytest.raises(EmptyIntersection):
        slice_insertion(g, (-5, 10), (0, 1))


def test_fiber_random_lines(rng):
    for _ in range(10):
        m = random_grid_module(rng, 4, 4)
        for line in [((0, 0), (1, 1)), ((1, 0), (0, 1)), ((0, 1), (2, 1)), ((-1, 0), (1, 3))]:
            a, b = fibered_barcode(m, *line, check=True)
            assert a == b == fibered_barcode_direct(m, *line)
