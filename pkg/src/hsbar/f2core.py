"""Linear algebra over F_2 with int bitsets, plus subset/ANF helpers.

Vectors are Python ints: bit ``j`` is the ``j``-th coordinate. A matrix stores
its rows as such ints, so ``rows[i] >> j & 1`` is the entry ``(i, j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_DIM = 16


def popcount(v: int) -> int:
    return bin(v).count("1")


def parity(v: int) -> int:
    return popcount(v) & 1


def bits(v: int) -> Iterator[int]:
    """Indices of the set bits of ``v``, in increasing order."""
    i = 0
    while v:
        if v & 1:
            yield i
        v >>= 1
        i += 1


# ----------------------------------------------------------------------------
# subsets of {1..n}
# ----------------------------------------------------------------------------


def subset_string(mask: int) -> str:
    """``0b101`` -> ``"13"``; the empty subset is ``""``."""
    return "".join(str(i + 1) for i in bits(mask))


def parse_subset(text: str, n: int) -> int:
    """Inverse of :func:`subset_string`; digits must be increasing and in 1..n."""
    mask = 0
    last = 0
    for ch in text:
        if not ch.isdigit():
            raise ValueError(f"bad subset string {text!r}")
        i = int(ch)
        if not 1 <= i <= n or i <= last:
            raise ValueError(f"bad subset string {text!r} for n={n}")
        last = i
        mask |= 1 << (i - 1)
    return mask


def subsets_of_size(n: int, k: int) -> list[int]:
    out = []
    for combo in combinations(range(n), k):
        m = 0
        for i in combo:
            m |= 1 << i
        out.append(m)
    return out


def moebius_transform(values: Sequence[int]) -> list[int]:
    """Binary Moebius transform (truth table <-> ANF coefficients).

    ``values`` has ``2**n`` entries indexed by subset masks. The result ``a``
    satisfies ``f(x) = sum(a[S] for S subset of x) mod 2``. The transform is
    its own inverse.
    """
    size = len(values)
    if size == 0 or size & (size - 1):
        raise ValueError("table length must be a power of two")
    a = [v & 1 for v in values]
    step = 1
    while step < size:
        for x in range(size):
            if x & step:
                a[x] ^= a[x ^ step]
        step <<= 1
    return a


# ----------------------------------------------------------------------------
# incremental echelon basis
# ----------------------------------------------------------------------------


class Echelon:
    """A basis kept in echelon form, keyed by leading (highest) bit.

    Each stored vector remembers which of the inserted vectors it is a
    combination of, so membership tests can also return coordinates.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int) -> tuple[int, int]:
        """Return ``(residue, combo)`` with ``v = residue + sum(inserted[i] for i in combo)``.

        The residue is fully reduced: it has no bit at any pivot position.
        """
        combo = 0
        for p in sorted(self._pivots, reverse=True):
            if v >> p & 1:
                vec, c = self._pivots[p]
                v ^= vec
                combo ^= c
        return v, combo

    def add(self, v: int) -> bool:
        """Insert ``v``; returns False (and stores nothing) if it is dependent."""
        tag = 1 << self._count
        self._count += 1
        residue, combo = self.reduce(v)
        if residue == 0:
            return False
        self._pivots[residue.bit_length() - 1] = (residue, combo ^ tag)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank_of(vectors: Iterable[int]) -> int:
    e = Echelon()
    return sum(1 for v in vectors if e.add(v))


def independent_subset(vectors: Iterable[int]) -> list[int]:
    e = Echelon()
    return [v for v in vectors if e.add(v)]


def in_span(v: int, vectors: Iterable[int]) -> bool:
    e = Echelon()
    for w in vectors:
        e.add(w)
    return e.contains(v)


def coordinates(v: int, basis: Sequence[int]) -> int:
    """Coefficients of ``v`` in the independent list ``basis`` (bit i <-> basis[i])."""
    e = Echelon()
    for w in basis:
        if not e.add(w):
            raise ValueError("basis vectors are dependent")
    residue, combo = e.reduce(v)
    if residue:
        raise ValueError("vector is not in the span")
    return combo


def combine(coeffs: int, vectors: Sequence[int]) -> int:
    out = 0
    for i in bits(coeffs):
        out ^= vectors[i]
    return out


def kernel_of_images(images: Sequence[int]) -> list[int]:
    """Basis of ``{c : sum(c_j * images[j]) = 0}``; ``c`` is a bitset over ``len(images)``."""
    e = Echelon()
    kernel = []
    for j, img in enumerate(images):
        residue, combo = e.reduce(img)
        if residue == 0:
            kernel.append(combo | (1 << j))
        e.add(img)
    # add() consumes one tag per call, so combo bits are indices j
    return kernel


def complement_in(sub: Iterable[int], ambient: Iterable[int]) -> list[int]:
    """Vectors from ``ambient`` extending a basis of span(sub) to span(sub + ambient)."""
    e = Echelon()
    for v in sub:
        e.add(v)
    return [v for v in ambient if e.add(v)]


def quotient_basis(space_dim: int, subspace: Iterable[int]) -> list[int]:
    """Standard basis vectors completing ``subspace`` to a basis of ``F_2^space_dim``."""
    return complement_in(subspace, (1 << i for i in range(space_dim)))


# ----------------------------------------------------------------------------
# dense matrices
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond ncols")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> "F2Matrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            v = 0
            for j, x in enumerate(row):
                if x & 1:
                    v |= 1 << j
            rows.append(v)
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "F2Matrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in bits(col):
                rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def to_lists(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.ncols)] for r in self.rows]

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return cols

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.ncols, self.nrows, tuple(self.columns()))

    def apply(self, v: int) -> int:
        """Matrix times column vector ``v``."""
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & v):
                out |= 1 << i
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        rows = []
        for r in self.rows:
            acc = 0
            for k in bits(r):
                acc ^= other.rows[k]
            rows.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(rows))

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return F2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and rank(self) == self.nrows

    def inverse(self) -> "F2Matrix":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        n = self.nrows
        work = [(self.rows[i], 1 << i) for i in range(n)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if work[i][0] >> col & 1), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            pr, pa = work[col]
            for i in range(n):
                if i != col and work[i][0] >> col & 1:
                    work[i] = (work[i][0] ^ pr, work[i][1] ^ pa)
        return F2Matrix(n, n, tuple(a for _, a in work))


def rank(m: F2Matrix) -> int:
    return rank_of(m.rows)


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of ``{v : m v = 0}`` as bitsets over ``m.ncols``."""
    return kernel_of_images(m.columns())


def image_basis(m: F2Matrix) -> list[int]:
    return independent_subset(m.columns())


def all_invertible(n: int) -> Iterator[F2Matrix]:
    """Every element of GL(n, F_2), generated column by column."""

    def extend(cols: list[int], ech: Echelon) -> Iterator[list[int]]:
        if len(cols) == n:
            yield cols
            return
        for v in range(1, 1 << n):
            if ech.contains(v):
                continue
            e2 = _copy_echelon(ech)
            e2.add(v)
            yield from extend(cols + [v], e2)

    for cols in extend([], Echelon()):
        yield F2Matrix.from_columns(cols, n)


def _copy_echelon(e: Echelon) -> Echelon:
    out = Echelon()
    out._pivots = dict(e._pivots)
    out._count = e._count
    return out
