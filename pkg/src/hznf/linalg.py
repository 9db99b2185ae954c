"""Exact rational linear algebra: row reduction, kernels, preimages, complements.

Dense helpers take matrices as lists of rows.  The normal-form engine works
with sparse vectors (``dict`` from coordinate key to :class:`Fraction`)
through :class:`Echelon`, which keeps an incremental echelon basis with a
caller-chosen pivot order and tracks how each row was combined.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "solve_in_image",
    "inverse",
    "Subspace",
    "Echelon",
    "select_complement",
    "keep_priority",
]


def _mat(M) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns (left to right)."""
    A = _mat(M)
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], cols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``, one vector per free column."""
    R, pivots = rref(M)
    n = len(M[0]) if M else (cols or 0)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def solve_in_image(M: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some ``x`` with ``M x = b`` (free variables zero), or ``None``."""
    if not M:
        return [] if not any(b) else None
    n = len(M[0])
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[sum((Fraction(a) * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


class Subspace:
    """Span of coordinate vectors over an ordered list of coordinate keys.

    The basis is kept in reduced echelon form with respect to that order.
    """

    def __init__(self, coords: Sequence[Hashable], vectors: Iterable[Sequence] = ()):
        self.coords = list(coords)
        rows = [list(v) for v in vectors]
        if rows:
            R, piv = rref(rows)
            self.basis = R[: len(piv)]
            self.pivots = piv
        else:
            self.basis, self.pivots = [], []

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vector: Sequence) -> bool:
        return rank(self.basis + [list(vector)]) == self.dim if self.basis else not any(vector)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={len(self.coords)})"


def _axpy(target: dict, f: Fraction, src: dict):
    for k, c in src.items():
        s = target.get(k, 0) - f * c
        if s:
            target[k] = s
        else:
            target.pop(k, None)


class Echelon:
    """Incremental sparse echelon basis.

    ``order`` maps a coordinate key to a sortable value; the pivot of each row
    is its maximal coordinate under that order.  Each row carries a ``tag``
    dictionary recording the linear combination of inserted vectors that
    produced it, plus an optional ``extra`` payload carried along linearly.
    """

    def __init__(self, order: Callable | None = None):
        self.order = order or (lambda k: k)
        self.rows: dict = {}  # pivot -> (vec, tag, extra)

    def __len__(self):
        return len(self.rows)

    def _pivot(self, vec: dict):
        return max(vec, key=self.order)

    def reduce(self, vec: dict, tag: dict | None = None, extra: dict | None = None):
        """Reduce until the leading coordinate is not a pivot; return (vec, tag, extra)."""
        vec = dict(vec)
        tag = dict(tag or {})
        extra = dict(extra or {})
        while vec:
            p = self._pivot(vec)
            row = self.rows.get(p)
            if row is None:
                break
            f = vec[p]
            _axpy(vec, f, row[0])
            _axpy(tag, f, row[1])
            _axpy(extra, f, row[2])
        return vec, tag, extra

    def reduce_full(self, vec: dict, tag: dict | None = None):
        """Eliminate every pivot coordinate from ``vec``."""
        vec = dict(vec)
        tag = dict(tag or {})
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec, tag
            p = max(hits, key=self.order)
            row = self.rows[p]
            f = vec[p]
            _axpy(vec, f, row[0])
            _axpy(tag, f, row[1])

    def insert(self, vec: dict, tag: dict | None = None, extra: dict | None = None):
        """Insert a vector; return ``None`` if it was independent, otherwise the
        ``(tag, extra)`` of the dependency it reduced to."""
        vec, tag, extra = self.reduce(vec, tag, extra)
        if not vec:
            return tag, extra
        p = self._pivot(vec)
        inv = 1 / vec[p]
        self.rows[p] = (
            {k: c * inv for k, c in vec.items()},
            {k: c * inv for k, c in tag.items()},
            {k: c * inv for k, c in extra.items()},
        )
        return None

    def pivots(self) -> set:
        return set(self.rows)


def keep_priority(key) -> tuple:
    """Style order: monomials that sort first are kept first.

    Smaller ``l``, then smaller ``k``, then lexicographically smaller
    parameter exponent.
    """
    l, k, m = key
    return (l, k, tuple(m))


def select_complement(image: Iterable, coords: Sequence[Hashable],
                      priority: Callable = keep_priority) -> list:
    """Greedy style complement.

    ``image`` holds vectors over ``coords`` (dense sequences or sparse
    dicts).  Monomials are scanned in ``priority`` order and a monomial is
    kept iff it is independent of the image plus the ones already kept.
    """
    coords = list(coords)
    ech = Echelon(order=priority)
    for vec in image:
        if not isinstance(vec, dict):
            vec = {c: Fraction(x) for c, x in zip(coords, vec) if x != 0}
        ech.insert(vec)
    # pivots under "max = least preferred" are exactly the removed monomials
    removed = ech.pivots()
    return sorted((c for c in coords if c not in removed), key=priority)
