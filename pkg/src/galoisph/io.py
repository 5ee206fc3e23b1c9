"""Line-oriented text formats for posets, integer functions, modules, diagrams,
matching certificates and interleavings.

Element ids: string ids stay as written, numeric chain elements are written as
``p/q`` or ``inf``, and grid tuples as comma-joined coordinates (``1,inf``).
"""
from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from .diagram import Diagram
from .errors import ParseError, UnknownElement
from .ext import ext, fmt, is_inf
from .matching import DiagonalPoint, Matching
from .mobius import IntFn
from .pmod import PersistenceModule
from .poset import FinitePoset, Interval, build_poset, chain, grid


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def elt_id(x) -> str:
    if isinstance(x, tuple):
        return ",".join(elt_id(v) for v in x)
    if isinstance(x, (Fraction, int)) or is_inf(x):
        return fmt(x)
    return str(x)


def id_table(p: FinitePoset) -> dict:
    return {elt_id(x): x for x in p.elements}


def _lookup(table: dict, tok: str, lineno: int):
    if tok in table:
        return table[tok]
    # numeric ids may be written differently ("0.5" for "1/2")
    try:
        key = ",".join(fmt(ext(t)) for t in tok.split(","))
    except (ValueError, ZeroDivisionError, TypeError):
        key = None
    if key in table:
        return table[key]
    raise UnknownElement(f"line {lineno}: unknown element {tok!r}", witness=tok)


# -- posets ---------------------------------------------------------------------------
def parse_poset(text: str) -> FinitePoset:
    elems, rels, coords = [], [], {}
    for lineno, tok in _lines(text):
        if tok[0] == "elt":
            if len(tok) < 2:
                raise ParseError(f"line {lineno}: elt needs an id", witness=lineno)
            if tok[1] in coords or tok[1] in elems:
                raise ParseError(f"line {lineno}: duplicate element {tok[1]!r}", witness=tok[1])
            elems.append(tok[1])
            try:
                coords[tok[1]] = tuple(ext(v) for v in tok[2:])
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"line {lineno}: {e}", witness=lineno) from None
        elif tok[0] == "le":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: le needs two ids", witness=lineno)
            rels.append((tok[1], tok[2]))
        elif tok[0] in ("dim", "map", "f0", "f1", "poset"):
            continue
        else:
            raise ParseError(f"line {lineno}: unknown directive {tok[0]!r}", witness=lineno)
    arities = {len(c) for c in coords.values()}
    use = None
    if arities and arities != {0}:
        if len(arities) != 1:
            raise ParseError("elements have coordinate vectors of different lengths")
        use = coords
    return build_poset(elems, rels, use)


def format_poset(p: FinitePoset) -> str:
    out = []
    for x in p.elements:
        c = ""
        if p.coords is not None:
            c = " " + " ".join(fmt(v) for v in p.coord(x))
        out.append(f"elt {elt_id(x)}{c}")
    for a, b in p.hasse:
        out.append(f"le {elt_id(a)} {elt_id(b)}")
    return "\n".join(out) + "\n"


# -- integer functions ------------------------------------------------------------------
def parse_intfn(text: str, domain: FinitePoset) -> IntFn:
    table = id_table(domain)
    vals = {}
    for lineno, tok in _lines(text):
        if len(tok) != 2:
            raise ParseError(f"line {lineno}: expected '<id> <int>'", witness=lineno)
        x = _lookup(table, tok[0], lineno)
        try:
            vals[x] = int(tok[1])
        except ValueError:
            raise ParseError(f"line {lineno}: {tok[1]!r} is not an integer", witness=lineno) from None
    return IntFn(domain, vals)


def format_intfn(fn: IntFn) -> str:
    return "".join(f"{elt_id(x)} {fn[x]}\n" for x in fn.domain.elements)


# -- modules ----------------------------------------------------------------------------
def parse_module(text: str, base: FinitePoset | None = None, field=2) -> PersistenceModule:
    """Module from ``dim``/``map`` lines; the base comes from inline elt/le lines if not given."""
    if base is None:
        base = parse_poset(text)
    table = id_table(base)
    dims, raw = {}, {}
    for lineno, tok in _lines(text):
        if tok[0] == "dim":
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: expected 'dim <elt> <n>'", witness=lineno)
            dims[_lookup(table, tok[1], lineno)] = _int(tok[2], lineno)
        elif tok[0] == "map":
            if len(tok) < 3:
                raise ParseError(f"line {lineno}: expected 'map <a> <b> ...'", witness=lineno)
            a, b = _lookup(table, tok[1], lineno), _lookup(table, tok[2], lineno)
            raw[(a, b)] = ([_int(v, lineno) for v in tok[3:]], lineno)
    maps = {}
    for (a, b), (entries, lineno) in raw.items():
        rows, cols = dims.get(b, 0), dims.get(a, 0)
        if len(entries) != rows * cols:
            raise ParseError(f"line {lineno}: map {tok_pair(a, b)} needs {rows * cols} entries",
                             witness=(a, b))
        maps[(a, b)] = np.array(entries, dtype=np.int64).reshape(rows, cols)
    return PersistenceModule(base, dims, maps, field)


def tok_pair(a, b) -> str:
    return f"{elt_id(a)}->{elt_id(b)}"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: {tok!r} is not an integer", witness=lineno) from None


def format_module(m: PersistenceModule, with_poset: bool = True) -> str:
    out = [format_poset(m.base).rstrip("\n")] if with_poset else []
    for x in m.base.elements:
        out.append(f"dim {elt_id(x)} {m.dims[x]}")
    for (a, b), mat in m.edge_maps.items():
        if mat.size:
            out.append(f"map {elt_id(a)} {elt_id(b)} " + " ".join(str(int(v)) for v in mat.ravel()))
    return "\n".join(out) + "\n"


# -- diagrams ---------------------------------------------------------------------------
def _grid_header(p: FinitePoset) -> list[str] | None:
    """Reconstruct ``chain``/``grid`` header lines for grid-shaped posets."""
    if p.coords is None:
        return None
    if p.is_chain() and all(not isinstance(x, (tuple, str)) for x in p.elements):
        return ["chain " + " ".join(fmt(v) for v in p.elements)]
    if all(isinstance(x, tuple) for x in p.elements):
        k = len(p.elements[0])
        axes = [sorted({x[i] for x in p.elements if not is_inf(x[i])}) for i in range(k)]
        if grid(axes) == p:
            return [f"grid {i} " + " ".join(fmt(v) for v in ax) for i, ax in enumerate(axes)]
    return None


def format_diagram(d: Diagram, poset_ref: str | None = None) -> str:
    out = [f"flavor {d.flavor}"]
    header = _grid_header(d.poset)
    if poset_ref is not None:
        out.append(f"poset {poset_ref}")
    elif header is not None:
        out.extend(header)
    pos = d.base.position
    for iv, v in sorted(d.points().items(), key=lambda kv: pos[kv[0]]):
        out.append(f"{elt_id(iv.lo)} {elt_id(iv.hi)} {v}")
    return "\n".join(out) + "\n"


def parse_diagram(text: str, poset: FinitePoset | None = None, path: str | None = None) -> Diagram:
    """Diagram with an optional ``chain``/``grid``/``poset <file>`` header.

    Without any header the base is the chain of all endpoint values.
    """
    flavor, axes, chain_vals, ref = "bar", {}, None, None
    rows = []
    for lineno, tok in _lines(text):
        try:
            if tok[0] == "flavor":
                if len(tok) != 2 or tok[1] not in ("bar", "hat"):
                    raise ParseError("flavor must be bar or hat")
                flavor = tok[1]
            elif tok[0] == "chain":
                chain_vals = [ext(v) for v in tok[1:]]
            elif tok[0] == "grid":
                axes[int(tok[1])] = [ext(v) for v in tok[2:]]
            elif tok[0] == "poset":
                ref = tok[1]
            elif len(tok) == 3:
                rows.append((lineno, tok[0], tok[1], int(tok[2])))
            else:
                raise ParseError(f"unexpected line {' '.join(tok)!r}")
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}", witness=lineno) from None
        except (ValueError, ZeroDivisionError, IndexError) as e:
            raise ParseError(f"line {lineno}: {e}", witness=lineno) from None
    if poset is None:
        if ref is not None:
            full = ref if path is None or os.path.isabs(ref) else os.path.join(os.path.dirname(path), ref)
            with open(full, encoding="utf-8") as fh:
                poset = parse_poset(fh.read())
        elif axes:
            poset = grid([axes[i] for i in sorted(axes)])
        elif chain_vals is not None:
            poset = chain(chain_vals)
        else:
            vals = set()
            for lineno, lo, hi, _ in rows:
                try:
                    vals.update((ext(lo), ext(hi)))
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"line {lineno}: non-numeric endpoint without a poset header",
                                     witness=lineno) from None
            poset = chain(vals)
    table = id_table(poset)
    base = poset.bar if flavor == "bar" else poset.hat
    vals: dict = {}
    for lineno, lo, hi, v in rows:
        iv = Interval(_lookup(table, lo, lineno), _lookup(table, hi, lineno))
        if iv not in base.index:
            raise ParseError(f"line {lineno}: [{lo}, {hi}] is not an interval", witness=(lo, hi))
        vals[iv] = vals.get(iv, 0) + v
    return Diagram(poset, flavor, IntFn(base, vals), "file")


# -- matching certificates --------------------------------------------------------------
def _endpoint(x) -> str:
    if isinstance(x, DiagonalPoint):
        return "DIAG " + ",".join(fmt(v) for v in x.at)
    return f"{elt_id(x.lo)} {elt_id(x.hi)}"


def format_certificate(m: Matching) -> str:
    out = [f"cost {fmt(m.cost)}"]
    for l, r, mult in m.rows:
        if mult:
            out.append(f"{_endpoint(l)} {_endpoint(r)} {mult}")
    return "\n".join(out) + "\n"


def parse_certificate(text: str, left: FinitePoset, right: FinitePoset) -> tuple:
    """Returns ``(declared_cost, Matching)``; ``left``/``right`` are the diagram posets."""
    cost, rows = None, []
    lt, rt = id_table(left), id_table(right)
    for lineno, tok in _lines(text):
        if tok[0] == "cost":
            cost = ext(tok[1])
            continue
        if len(tok) != 5:
            raise ParseError(f"line {lineno}: expected five fields", witness=lineno)

        def end(a, b, table):
            if a == "DIAG":
                return DiagonalPoint(tuple(ext(v) for v in b.split(",")))
            return Interval(_lookup(table, a, lineno), _lookup(table, b, lineno))
        rows.append((end(tok[0], tok[1], lt), end(tok[2], tok[3], rt), _int(tok[4], lineno)))
    return cost, Matching(left.bar, right.bar, tuple(rows))


# -- interleavings ----------------------------------------------------------------------
def parse_interleaving(text: str, field=2):
    """Middle poset (elt/le), module on it (dim/map) and the tables f0, f1."""
    from .interleave import Interleaving
    r = parse_poset(text)
    gamma = parse_module(text, r, field)
    table = id_table(r)
    f = {"f0": {}, "f1": {}}
    for lineno, tok in _lines(text):
        if tok[0] in f:
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: expected '{tok[0]} <elt> <value>'", witness=lineno)
            try:
                f[tok[0]][_lookup(table, tok[1], lineno)] = ext(tok[2])
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"line {lineno}: bad value {tok[2]!r}", witness=lineno) from None
    for name, tab in f.items():
        missing = [x for x in r.elements if x not in tab]
        if missing:
            raise ParseError(f"{name} has no value for {elt_id(missing[0])!r}", witness=missing[0])
    return Interleaving.from_adjoints(gamma, f["f0"], f["f1"])


def format_interleaving(i) -> str:
    out = [format_module(i.gamma).rstrip("\n")]
    for name, tab in (("f0", i.f0), ("f1", i.f1)):
        for x in i.gamma.base.elements:
            out.append(f"{name} {elt_id(x)} {fmt(tab[x])}")
    return "\n".join(out) + "\n"


__all__ = [
    "elt_id", "format_certificate", "format_diagram", "format_intfn", "format_interleaving",
    "format_module", "format_poset", "id_table", "parse_certificate", "parse_diagram",
    "parse_intfn", "parse_interleaving", "parse_module", "parse_poset",
]
