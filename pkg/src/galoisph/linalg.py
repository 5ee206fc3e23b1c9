"""Exact linear algebra over a prime field F_p.

Matrices are plain 2-d ``numpy`` int64 arrays with entries in ``[0, p)``.
Subspaces are stored by a basis in reduced column echelon form, which is
canonical, so two spans of the same space compare equal entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyDownset, GaloisPHError, NotSubspace

MAX_PRIME = 2**31 - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise GaloisPHError(f"field size {self.p!r} is not a prime")
        if self.p > MAX_PRIME:
            raise GaloisPHError(f"prime {self.p} exceeds {MAX_PRIME}")

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)


def as_mat(a, p: int, shape=None) -> np.ndarray:
    m = np.array(a, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return m % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot compose {a.shape} with {b.shape}")
    inner = a.shape[1]
    if inner and inner * (p - 1) ** 2 >= 2**62:
        return (a.astype(object) @ b.astype(object) % p).astype(np.int64)
    return (a @ b) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        if col.any():
            m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of the columns of ``basis`` (ambient_dim x dim), canonical form."""

    ambient_dim: int
    basis: np.ndarray
    p: int

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.p == other.p
                and np.array_equal(self.basis, other.basis))

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.p, self.basis.tobytes()))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(self.ambient_dim, -1)
        return rank(np.hstack([self.basis, v]), self.p) == self.dim


def span(vectors: np.ndarray, p: int, ambient_dim: int | None = None) -> Subspace:
    """Column span of ``vectors`` in canonical reduced column echelon form."""
    v = np.asarray(vectors, dtype=np.int64)
    n = v.shape[0] if ambient_dim is None else ambient_dim
    if n == 0 or v.size == 0:
        return Subspace(n, zeros(n, 0), p)
    v = v.reshape(n, -1) % p
    if v.shape[1] == 0 or n == 0:
        return Subspace(n, zeros(n, 0), p)
    r, piv = rref(v.T, p)
    return Subspace(n, np.ascontiguousarray(r[: len(piv)].T), p)


def zero_subspace(n: int, p: int) -> Subspace:
    return Subspace(n, zeros(n, 0), p)


def full_space(n: int, p: int) -> Subspace:
    return Subspace(n, identity(n), p)


def image(a: np.ndarray, p: int) -> Subspace:
    return span(a, p, a.shape[0])


def kernel_basis(a: np.ndarray, p: int) -> Subspace:
    """Null space of ``a`` with dimension cols - rank."""
    rows, cols = a.shape
    if cols == 0:
        return zero_subspace(0, p)
    if rows == 0:
        return full_space(cols, p)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    vecs = zeros(cols, len(free))
    for k, fc in enumerate(free):
        vecs[fc, k] = 1
        for i, pc in enumerate(piv):
            vecs[pc, k] = (-r[i, fc]) % p
    return span(vecs, p, cols)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    return span(np.hstack([u.basis, v.basis]), u.p, u.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """U cap V from the kernel of [U | -V]."""
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    p = u.p
    if u.dim == 0 or v.dim == 0:
        return zero_subspace(u.ambient_dim, p)
    stacked = np.hstack([u.basis, (-v.basis) % p])
    k = kernel_basis(stacked, p)
    return span(matmul(u.basis, k.basis[: u.dim], p), p, u.ambient_dim)


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Some x with a x = b (b may have several columns), or ``None``."""
    rows, cols = a.shape
    b = np.asarray(b, dtype=np.int64).reshape(rows, -1) % p
    if cols == 0:
        return zeros(0, b.shape[1]) if not b.any() else None
    r, piv = rref(np.hstack([a % p, b]), p)
    if any(c >= cols for c in piv):
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(piv):
        x[pc] = r[i, cols:]
    return x


def inverse(a: np.ndarray, p: int):
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    if n == 0:
        return zeros(0, 0)
    r, piv = rref(np.hstack([a % p, identity(n)]), p)
    if piv[:n] != list(range(n)):
        return None
    return np.ascontiguousarray(r[:, n:])


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def quotient_map(ambient_dim: int, w: Subspace, with_section: bool = False):
    """A surjection with kernel exactly W (and optionally a right inverse).

    The complement is spanned by the standard vectors at the non-pivot rows
    of W's canonical basis.
    """
    if w.ambient_dim != ambient_dim:
        raise NotSubspace(f"subspace lives in dimension {w.ambient_dim}, not {ambient_dim}")
    p = w.p
    pivot_rows = []
    for k in range(w.dim):
        pivot_rows.append(int(np.nonzero(w.basis[:, k])[0][0]))
    comp = [i for i in range(ambient_dim) if i not in set(pivot_rows)]
    sec = zeros(ambient_dim, len(comp))
    for k, i in enumerate(comp):
        sec[i, k] = 1
    full = np.hstack([w.basis, sec])
    inv = inverse(full, p)
    if inv is None:
        raise NotSubspace("basis is not in canonical form")
    q = np.ascontiguousarray(inv[w.dim:])
    return (q, sec) if with_section else q


@dataclass(frozen=True, eq=False)
class Colimit:
    """Colimit of a diagram of vector spaces over a finite poset.

    ``quotient`` maps the direct sum of the spaces (blocks in ``order``) onto the
    colimit; ``section`` is a right inverse, used to transport elements.
    """

    order: tuple
    offsets: dict
    dims: dict
    quotient: np.ndarray
    section: np.ndarray
    p: int

    @property
    def dim(self) -> int:
        return self.quotient.shape[0]

    def component(self, a) -> np.ndarray:
        o = self.offsets[a]
        return self.quotient[:, o:o + self.dims[a]]


def colimit(dims: dict, arrows, p: int, order=None) -> Colimit:
    """Direct sum of the spaces modulo x - (a->b)(x) for every supplied arrow a -> b.

    ``arrows`` is an iterable of ``(a, b, matrix)``; passing Hasse edges is enough
    since composites add no new relations.
    """
    order = tuple(order if order is not None else dims)
    if not order:
        raise EmptyDownset("colimit over an empty diagram")
    offsets, total = {}, 0
    for a in order:
        offsets[a] = total
        total += dims[a]
    rel_cols = []
    for a, b, mat in arrows:
        for i in range(dims[a]):
            v = np.zeros(total, dtype=np.int64)
            v[offsets[a] + i] = 1
            if dims[b]:
                v[offsets[b]:offsets[b] + dims[b]] = (-mat[:, i]) % p
            rel_cols.append(v)
    rel = span(np.array(rel_cols).T if rel_cols else zeros(total, 0), p, total)
    q, sec = quotient_map(total, rel, with_section=True)
    return Colimit(order, offsets, dict(dims), q, sec, p)


def colimit_map(src: Colimit, dst: Colimit) -> np.ndarray:
    """Map between colimits induced by inclusion of the index diagram of src into dst."""
    embed = zeros(sum(dst.dims.values()), sum(src.dims.values()))
    for a in src.order:
        d = src.dims[a]
        so, do = src.offsets[a], dst.offsets[a]
        embed[do:do + d, so:so + d] = identity(d)
    return matmul(dst.quotient, matmul(embed, src.section, src.p), src.p)
