import numpy as np
import pytest

from galoisph import io
from galoisph.diagram import diagram_of, from_points
from galoisph.errors import ParseError, UnknownElement
from galoisph.ext import INF
from galoisph.generators import (
    random_diagram,
    random_grid_module,
    random_interleaving,
    random_intfn,
    random_module,
    random_poset,
)
from galoisph.matching import bottleneck_distance, validate_matching
from galoisph.poset import chain

from conftest import DATA, example_module, iv


def same_module(a, b):
    assert a.base == b.base and a.dims == b.dims
    for e in a.base.hasse:
        assert np.array_equal(a.map(*e) % a.p, b.map(*e) % b.p)


def test_poset_and_function_roundtrip(rng):
    for _ in range(10):
        p = random_poset(rng, rng.randint(1, 7))
        q = io.parse_poset(io.format_poset(p))
        assert q == p
        fn = random_intfn(rng, p)
        assert io.parse_intfn(io.format_intfn(fn), q) == fn


def test_module_roundtrip(rng):
    m = example_module(3)
    same_module(io.parse_module(io.format_module(m), field=3), m)
    for _ in range(10):
        m = random_module(rng, random_poset(rng, 5), 2)
        same_module(io.parse_module(io.format_module(m)), m)


def test_module_fixture():
    m = io.parse_module((DATA / "example.mod").read_text())
    assert m.dims == {"a": 4, "b": 3, "c": 1, "d": 0, "top": 0}
    assert np.array_equal(m.map("a", "c"), np.array([[1, 0, 0, 0]]))


def test_diagram_roundtrip(rng):
    c = chain([0, 1, 2, 3, INF])
    for _ in range(10):
        d = random_diagram(rng, c, 4)
        assert io.parse_diagram(io.format_diagram(d)).points() == d.points()
    g = diagram_of(random_grid_module(rng, 3, 3))
    back = io.parse_diagram(io.format_diagram(g))
    assert back.poset == g.poset and back.points() == g.points()


def test_diagram_without_header():
    d = io.parse_diagram("0 5 1\n1/2 inf 2\n")
    assert d.points() == {iv(0, 5): 1, iv(0.5, INF): 2}


def test_diagram_with_poset_reference():
    d = io.parse_diagram("flavor bar\nposet example.poset\na c 1\n", path=str(DATA / "x.dgm"))
    assert d.points() == {iv("a", "c"): 1}
    with pytest.raises(ParseError):
        io.parse_diagram("chain 0 1 2\n2 0 1\n")
    with pytest.raises(UnknownElement):
        io.parse_diagram("chain 0 1 2\n0 7 1\n")
    with pytest.raises(ParseError):
        io.parse_diagram("flavor wide\n")


def test_certificate_roundtrip():
    a = io.parse_diagram((DATA / "bars_a.dgm").read_text())
    b = io.parse_diagram((DATA / "bars_b.dgm").read_text())
    res = bottleneck_distance(a, b)
    text = io.format_certificate(res.certificate)
    cost, m = io.parse_certificate(text, a.poset, b.poset)
    assert cost == res.distance == m.cost
    assert validate_matching(m, a, b)


def test_certificate_with_diagonal():
    c = chain([0, 1, 2, 3])
    a = from_points(c, {(0, 3): 1})
    res = bottleneck_distance(a, from_points(c, {}))
    text = io.format_certificate(res.certificate)
    assert "DIAG" in text
    cost, m = io.parse_certificate(text, c, c)
    assert validate_matching(m, a, from_points(c, {}))


def test_interleaving_roundtrip(rng):
    il = io.parse_interleaving((DATA / "unit_shift.il").read_text())
    assert il.cost == 1
    for _ in range(5):
        il = random_interleaving(rng, 1)
        back = io.parse_interleaving(io.format_interleaving(il))
        assert back.f0 == il.f0 and back.f1 == il.f1
        same_module(back.gamma, il.gamma)


def test_interleaving_missing_value():
    text = (DATA / "unit_shift.il").read_text().replace("f1 5,1 5\n", "")
    with pytest.raises(ParseError):
        io.parse_interleaving(text)
