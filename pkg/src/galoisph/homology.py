"""Simplicial filtrations graded by one or two parameters and their homology
modules over grid posets.

Text format, one directive per line::

    params 1
    grid 0 0 1 2 3 4 5
    s a @ 0
    s a b @ 1
    # comment

``grid <axis> ...`` is 0-based. An axis without a ``grid`` line takes the grade
values that occur on it. The module lives on the grid with a top element
adjoined, and the top carries the zero space so that classes which never die
are recorded as dying there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import ClosureViolation, ParseError
from .ext import ext, is_inf
from .pmod import PersistenceModule
from .poset import FinitePoset, grid


def _vertex_key(v: str):
    try:
        return (0, int(v), v)
    except ValueError:
        return (1, 0, v)


@dataclass(frozen=True)
class Filtration:
    params: int
    axes: tuple
    simplices: tuple  # ((vertex, ...), grade) in declaration order

    @property
    def vertices(self) -> tuple:
        vs = {v for s, _ in self.simplices for v in s}
        return tuple(sorted(vs, key=_vertex_key))

    def grade_of(self) -> dict:
        return {s: g for s, g in self.simplices}

    def grid_poset(self) -> FinitePoset:
        return grid(self.axes, top=True)

    def element(self, grade: tuple):
        return grade[0] if self.params == 1 else tuple(grade)


def _leq(g, h) -> bool:
    return all(a <= b for a, b in zip(g, h))


def make_filtration(simplices, params: int = 1, axes=None) -> Filtration:
    """Validate a list of ``(vertices, grade)`` pairs; grades may be scalars when params is 1."""
    if params not in (1, 2):
        raise ParseError(f"params must be 1 or 2, got {params}")
    seen: dict = {}
    order = []
    for verts, grade in simplices:
        if not isinstance(grade, (tuple, list)):
            grade = (grade,)
        grade = tuple(ext(x) for x in grade)
        if len(grade) != params:
            raise ParseError(f"simplex {verts!r} has {len(grade)} grades, expected {params}",
                             witness=tuple(verts))
        if any(is_inf(x) for x in grade):
            raise ParseError(f"simplex {verts!r} has an infinite grade", witness=tuple(verts))
        names = [str(v) for v in verts]
        if not names or len(set(names)) != len(names):
            raise ParseError(f"bad vertex list {verts!r}", witness=tuple(verts))
        key = tuple(sorted(names, key=_vertex_key))
        if key in seen:
            raise ParseError(f"simplex {key!r} declared twice", witness=key)
        seen[key] = grade
        order.append(key)
    for s in order:
        if len(s) == 1:
            continue
        for face in itertools.combinations(s, len(s) - 1):
            if face not in seen:
                raise ClosureViolation(f"face {face!r} of {s!r} is missing", witness=face)
            if not _leq(seen[face], seen[s]):
                raise ClosureViolation(f"face {face!r} enters after {s!r}", witness=face)
    if axes is None:
        axes = [None] * params
    axes = list(axes)
    if len(axes) != params:
        raise ParseError(f"expected {params} grid axes, got {len(axes)}")
    for i in range(params):
        used = {seen[s][i] for s in order}
        if axes[i] is None:
            axes[i] = tuple(sorted(used))
            continue
        vals = tuple(sorted({ext(x) for x in axes[i]}))
        if any(is_inf(x) for x in vals):
            raise ParseError(f"grid axis {i} contains inf; the top is adjoined automatically")
        off = sorted(used - set(vals))
        if off:
            raise ParseError(f"grade {off[0]} is not on grid axis {i}", witness=off[0])
        axes[i] = vals
    return Filtration(params, tuple(axes), tuple((s, seen[s]) for s in order))


def parse_filtration(text: str) -> Filtration:
    params = None
    axes: dict = {}
    simplices = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "params":
                if len(tok) != 2 or params is not None:
                    raise ParseError("expected a single 'params <1|2>'")
                params = int(tok[1])
                if params not in (1, 2):
                    raise ParseError(f"params must be 1 or 2, got {params}")
            elif tok[0] == "grid":
                if len(tok) < 2:
                    raise ParseError("grid needs an axis")
                ax = int(tok[1])
                if ax in axes:
                    raise ParseError(f"grid axis {ax} declared twice")
                axes[ax] = [ext(v) for v in tok[2:]]
            elif tok[0] == "s":
                if "@" not in tok:
                    raise ParseError("simplex line needs '@'")
                at = tok.index("@")
                verts, grade = tok[1:at], [ext(v) for v in tok[at + 1:]]
                if not verts or not grade:
                    raise ParseError("simplex line needs vertices and a grade")
                simplices.append((verts, tuple(grade)))
            else:
                raise ParseError(f"unknown directive {tok[0]!r}")
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}", witness=lineno) from None
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise ParseError(f"line {lineno}: {e}", witness=lineno) from None
    if params is None:
        params = len(simplices[0][1]) if simplices else 1
    bad = [a for a in axes if not 0 <= a < params]
    if bad:
        raise ParseError(f"grid axis {bad[0]} out of range for {params} parameter(s)")
    return make_filtration(simplices, params, [axes.get(i) for i in range(params)])


def format_filtration(f: Filtration) -> str:
    from .ext import fmt
    out = [f"params {f.params}"]
    for i, ax in enumerate(f.axes):
        out.append(f"grid {i} " + " ".join(fmt(v) for v in ax))
    for s, g in f.simplices:
        out.append("s " + " ".join(s) + " @ " + " ".join(fmt(v) for v in g))
    return "\n".join(out) + "\n"


def boundary_matrix(f: Filtration, d: int, p: int):
    """Boundary from d-simplices to (d-1)-simplices, both in declaration order."""
    rows = [s for s, _ in f.simplices if len(s) == d]
    cols = [s for s, _ in f.simplices if len(s) == d + 1]
    pos = {s: i for i, s in enumerate(rows)}
    mat = la.zeros(len(rows), len(cols))
    if d == 0:
        return mat, rows, cols
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            mat[pos[face], j] = (-1) ** i % p
    return mat, rows, cols


@dataclass(frozen=True, eq=False)
class _Homology:
    cells: list      # global column indices of d-simplices present
    z: la.Subspace   # cycles inside C_d(a)
    q: np.ndarray    # Z-coordinates -> homology
    reps: np.ndarray  # C_d(a) representatives of the homology basis


def _homology_at(present, bd, bu, p) -> _Homology:
    cd, cl, cu = present
    dd = bd[np.ix_(cl, cd)] if cl else la.zeros(0, len(cd))
    z = la.kernel_basis(dd, p) if cd else la.zero_subspace(0, p)
    if len(cd) and z.ambient_dim == 0:
        z = la.full_space(len(cd), p)
    b = la.image(bu[np.ix_(cd, cu)], p) if (cd and cu) else la.zero_subspace(len(cd), p)
    if b.dim:
        coords = la.solve(z.basis, b.basis, p)
        w = la.span(coords, p, z.dim)
    else:
        w = la.zero_subspace(z.dim, p)
    q, sec = la.quotient_map(z.dim, w, with_section=True)
    reps = la.matmul(z.basis, sec, p) if z.dim else la.zeros(len(cd), 0)
    return _Homology(cd, z, q, reps)


def persistence_module(f: Filtration, d: int, field=2) -> PersistenceModule:
    """H_d of the filtration over F_p on the grid poset (zero at the adjoined top)."""
    if d < 0:
        raise ValueError("homology degree must be nonnegative")
    p = la.PrimeField(int(field)).p if not isinstance(field, la.PrimeField) else field.p
    base = f.grid_poset()
    top = base.top
    bd, low_cells, cells = boundary_matrix(f, d, p)
    bu, _, up_cells = boundary_matrix(f, d + 1, p)
    grade = f.grade_of()
    hom, dims = {}, {}
    for x in base.elements:
        if x == top:
            dims[x] = 0
            continue
        c = base.coord(x)
        present = tuple(
            [i for i, s in enumerate(group) if _leq(grade[s], c)]
            for group in (cells, low_cells, up_cells)
        )
        h = _homology_at(present, bd, bu, p)
        hom[x] = h
        dims[x] = h.q.shape[0]
    maps = {}
    for a, b in base.hasse:
        if b == top or dims[a] == 0 or dims[b] == 0:
            maps[(a, b)] = la.zeros(dims[b], dims[a])
            continue
        ha, hb = hom[a], hom[b]
        where = {g: i for i, g in enumerate(hb.cells)}
        emb = la.zeros(len(hb.cells), len(ha.cells))
        for j, g in enumerate(ha.cells):
            emb[where[g], j] = 1
        z = la.matmul(emb, ha.reps, p)
        coords = la.solve(hb.z.basis, z, p)
        maps[(a, b)] = la.matmul(hb.q, coords, p)
    return PersistenceModule(base, dims, maps, p)


def betti_numbers(f: Filtration, grade_point, d: int, field=2) -> int:
    """dim H_d of the subcomplex at one grade, by ranks alone."""
    p = int(field)
    c = tuple(ext(v) for v in (grade_point if isinstance(grade_point, (tuple, list))
                               else (grade_point,)))
    grade = f.grade_of()
    bd, low, cells = boundary_matrix(f, d, p)
    bu, _, up = boundary_matrix(f, d + 1, p)
    cd = [i for i, s in enumerate(cells) if _leq(grade[s], c)]
    cl = [i for i, s in enumerate(low) if _leq(grade[s], c)]
    cu = [i for i, s in enumerate(up) if _leq(grade[s], c)]
    rd = la.rank(bd[np.ix_(cl, cd)], p) if (cl and cd) else 0
    ru = la.rank(bu[np.ix_(cd, cu)], p) if (cd and cu) else 0
    return len(cd) - rd - ru


__all__ = [
    "Filtration", "betti_numbers", "boundary_matrix", "format_filtration",
    "make_filtration", "parse_filtration", "persistence_module",
]
