import pytest

from galoisph.diagram import diagram_of, rank_diagram_direct, rank_diagram_via_formula
from galoisph.errors import ClosureViolation, ParseError
from galoisph.ext import INF
from galoisph.generators import product_filtration, random_filtration
from galoisph.homology import (
    betti_numbers,
    format_filtration,
    make_filtration,
    parse_filtration,
    persistence_module,
)

from conftest import DATA, iv
from oracles import reduction_barcode


def load(name):
    return parse_filtration((DATA / name).read_text())


def bars(d):
    return sorted((j.lo, j.hi) for j, v in d.points().items() for _ in range(v))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("route", ["kernel", "presentation"])
def test_triangle_cycle(p, route):
    f = load("cycle.filt")
    m = persistence_module(f, 1, p)
    assert [m.dims[x] for x in range(6)] == [0, 0, 1, 1, 1, 0]
    assert diagram_of(m, route).points() == {iv(2, 5): 1}
    assert bars(diagram_of(persistence_module(f, 0, p))) == [(0, 1), (0, INF), (1, 2)]


def test_merge():
    d = diagram_of(persistence_module(load("merge.filt"), 0))
    assert d.points() == {iv(0, 1): 1, iv(0, INF): 1}


def test_single_vertex_and_empty():
    f = make_filtration([(["x"], 3)])
    assert diagram_of(persistence_module(f, 0)).points() == {iv(3, INF): 1}
    assert diagram_of(persistence_module(f, 1)).points() == {}
    e = load("empty.filt")
    assert diagram_of(persistence_module(e, 0)).points() == {}


def test_closure_violation_names_face():
    with pytest.raises(ClosureViolation) as ei:
        load("bad_closure.filt")
    assert ei.value.witness == ("a",)
    with pytest.raises(ClosureViolation):
        make_filtration([(["a"], 0), (["b"], 0), (["a", "b"], 0), (["a", "b", "c"], 1)])


@pytest.mark.parametrize("text", [
    "params 3\n",
    "s a @ 0\ns a @ 1\n",
    "s a @ inf\n",
    "grid 0 0 1\ns a @ 2\n",
    "s a 0\n",
    "bogus 1\n",
    "params 1\ngrid 1 0 1\ns a @ 0\n",
    "s a @ 0 0\ns b @ 1\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_filtration(text)


def test_parse_error_has_line_number():
    with pytest.raises(ParseError, match="line 3"):
        parse_filtration("params 1\ns a @ 0\ns a b\n")


def test_format_roundtrip(rng):
    for _ in range(10):
        f = random_filtration(rng, 4, 12)
        assert parse_filtration(format_filtration(f)) == f


def test_betti_numbers_agree_with_module(rng):
    for _ in range(10):
        f = random_filtration(rng, 5, 20)
        for d in (0, 1):
            m = persistence_module(f, d)
            for g in f.axes[0]:
                assert m.dims[g] == betti_numbers(f, g, d)


def test_against_column_reduction(rng):
    for _ in range(30):
        f = random_filtration(rng, rng.randint(1, 6), 30)
        for d in (0, 1, 2):
            got = bars(diagram_of(persistence_module(f, d)))
            assert got == reduction_barcode(f, d)


def test_two_parameter_rank_formula():
    f = load("product.filt")
    m = persistence_module(f, 1)
    assert rank_diagram_via_formula(m) == rank_diagram_direct(m)
    assert m.dims[(2, 2)] == 1 and m.dims[(2, 5)] == 1 and m.dims[(5, 5)] == 0


def test_product_of_random_filtration(rng):
    for _ in range(5):
        f = product_filtration(random_filtration(rng, 4, 10, max_grade=3))
        m = persistence_module(f, 0)
        assert rank_diagram_via_formula(m) == rank_diagram_direct(m)
