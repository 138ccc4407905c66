"""Graded modules over F[Q]/Q^3 with Z/4 gradings (one V-periodicity window)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InconsistentPresentation
from .f2core import F2Matrix, bits, rank

PERIOD = 4


@dataclass(frozen=True, order=True)
class CyclicSummand:
    """A copy of F[Q]/Q^length whose generator sits in degree ``top`` (mod 4)."""

    length: int
    top: int

    def __post_init__(self) -> None:
        if self.length not in (1, 2, 3):
            raise ValueError(f"cyclic summand length must be 1, 2 or 3, got {self.length}")
        object.__setattr__(self, "top", self.top % PERIOD)

    def degrees(self) -> list[int]:
        return [(self.top - k) % PERIOD for k in range(self.length)]

    def shift(self, d: int) -> "CyclicSummand":
        return CyclicSummand(self.length, self.top + d)


@dataclass(frozen=True)
class GradedModule:
    summands: tuple[CyclicSummand, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "GradedModule":
        """``GradedModule.of((3, 0), (2, 1))``"""
        return cls(tuple(CyclicSummand(length, top) for length, top in pairs))

    def __add__(self, other: "GradedModule") -> "GradedModule":
        return GradedModule(self.summands + other.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def shift(self, d: int) -> "GradedModule":
        return shift(self, d)

    def rank_vector(self) -> tuple[int, int, int, int]:
        out = [0] * PERIOD
        for s in self.summands:
            for d in s.degrees():
                out[d] += 1
        return tuple(out)

    @property
    def total_rank(self) -> int:
        return sum(s.length for s in self.summands)

    def pairs(self) -> list[tuple[int, int]]:
        return [(s.length, s.top) for s in self.summands]

    def to_json(self) -> list[dict]:
        return [{"length": s.length, "top": s.top} for s in self.summands]

    def describe(self) -> str:
        if not self.summands:
            return "0"
        groups = Counter(s.length for s in self.summands)
        parts = []
        for length in sorted(groups, reverse=True):
            tops = sorted(s.top for s in self.summands if s.length == length)
            parts.append(
                f"{groups[length]} x F[Q]/Q^{length} tops {{{','.join(map(str, tops))}}}"
            )
        return " + ".join(parts)


RTILDE = GradedModule.of((3, 0))
IMOD = GradedModule.of((2, 0))


def shift(m: GradedModule, d: int) -> GradedModule:
    """Translate every degree up by ``d`` (so ``M<d>_i = M_{i-d}``)."""
    return GradedModule(tuple(s.shift(d) for s in m.summands))


def gysin_summand_quota(m: GradedModule) -> int:
    return len(m.summands)


@dataclass(frozen=True)
class QModulePresentation:
    """Graded dimensions per residue and the Q maps ``M_d -> M_{d-1}``.

    ``q_matrices[d]`` has shape ``graded_dims[d-1] x graded_dims[d]``.
    """

    graded_dims: tuple[int, int, int, int]
    q_matrices: tuple[F2Matrix, F2Matrix, F2Matrix, F2Matrix]

    def __post_init__(self) -> None:
        for d in range(PERIOD):
            q = self.q_matrices[d]
            if (q.nrows, q.ncols) != (self.graded_dims[(d - 1) % PERIOD], self.graded_dims[d]):
                raise InconsistentPresentation(f"Q matrix out of degree {d} has wrong shape")

    def q_power(self, d: int, k: int) -> F2Matrix:
        """Matrix of ``Q^k: M_d -> M_{d-k}``."""
        out = F2Matrix.identity(self.graded_dims[d % PERIOD])
        for step in range(k):
            out = self.q_matrices[(d - step) % PERIOD] @ out
        return out


def reconstruct(m: GradedModule) -> QModulePresentation:
    """The standard presentation of a direct sum of cyclic summands."""
    dims = [0] * PERIOD
    # index of each summand cell within its degree
    slots: dict[tuple[int, int], int] = {}
    for idx, s in enumerate(m.summands):
        for k, d in enumerate(s.degrees()):
            slots[(idx, k)] = dims[d]
            dims[d] += 1
    cols: list[list[int]] = [[0] * dims[d] for d in range(PERIOD)]
    for idx, s in enumerate(m.summands):
        for k in range(s.length - 1):
            d = s.degrees()[k]
            cols[d][slots[(idx, k)]] = 1 << slots[(idx, k + 1)]
    q = tuple(F2Matrix.from_columns(cols[d], dims[(d - 1) % PERIOD]) for d in range(PERIOD))
    return QModulePresentation(tuple(dims), q)


def decompose(p: QModulePresentation) -> GradedModule:
    """Cyclic decomposition from the ranks of Q and Q^2.

    The number of summands of length at least ``k+1`` with top in degree ``t``
    is ``rank(Q^k on M_t) - rank(Q^(k+1) on M_(t+1))``.
    """
    for d in range(PERIOD):
        if not p.q_power(d, 3).is_zero():
            raise InconsistentPresentation(f"Q^3 is nonzero out of degree {d}")

    def r(d: int, k: int) -> int:
        if k >= 3:
            return 0
        return rank(p.q_power(d, k))

    summands = []
    for t in range(PERIOD):
        at_least = [r(t, k) - r(t + 1, k + 1) for k in range(3)] + [0]
        for length in (1, 2, 3):
            count = at_least[length - 1] - at_least[length]
            if count < 0:
                raise InconsistentPresentation("rank profile is not realisable")
            summands.extend([CyclicSummand(length, t)] * count)
    return GradedModule(tuple(summands))


def module_type(degrees: Sequence[int], q: F2Matrix) -> GradedModule:
    """Cyclic decomposition of a module given by cell degrees and a Q matrix."""
    dims = [0] * PERIOD
    local = []
    for d in degrees:
        local.append(dims[d % PERIOD])
        dims[d % PERIOD] += 1
    cols: list[list[int]] = [[0] * dims[d] for d in range(PERIOD)]
    for j, col in enumerate(q.columns()):
        d = degrees[j] % PERIOD
        v = 0
        for i in bits(col):
            if degrees[i] % PERIOD != (d - 1) % PERIOD:
                raise InconsistentPresentation("Q does not lower degree by one")
            v |= 1 << local[i]
        cols[d][local[j]] = v
    mats = tuple(F2Matrix.from_columns(cols[d], dims[(d - 1) % PERIOD]) for d in range(PERIOD))
    return decompose(QModulePresentation(tuple(dims), mats))


# ----------------------------------------------------------------------------
# grids
# ----------------------------------------------------------------------------


def _lift_rows(pieces: Sequence[tuple[int, int, int]]) -> dict[tuple[int, int], int]:
    """Lay out (filtration, length, top) pieces with integer degrees of minimal span.

    Tops are lifted below a common anchor; among the four anchors the one with
    the smallest occupied span wins, ties broken by the lowest anchor residue.
    Returns a Counter keyed by (integer degree, filtration).
    """
    best = None
    for anchor in range(PERIOD):
        cells: Counter = Counter()
        for filt, length, top in pieces:
            lifted = anchor - ((anchor - top) % PERIOD)
            for k in range(length):
                cells[(lifted - k, filt)] += 1
        if not cells:
            return {}
        degrees = [d for d, _ in cells]
        span = max(degrees) - min(degrees)
        # the topmost row should be occupied: prefer layouts whose anchor is used
        key = (span, max(degrees) != anchor, anchor)
        if best is None or key < best[0]:
            best = (key, cells)
    return dict(best[1])


def grid_cells(pieces: Iterable[tuple[int, int, int]]) -> dict[tuple[int, int], int]:
    return _lift_rows(list(pieces))


def render_grid(
    pieces: Iterable[tuple[int, int, int]] | GradedModule | Mapping[int, GradedModule],
    columns: Sequence[int] | None = None,
    show_degrees: bool = True,
) -> str:
    """Text grid: rows are degrees (descending), columns filtrations (descending).

    ``pieces`` is an iterable of ``(filtration, length, top)``, a single
    :class:`GradedModule` (one column at filtration 0), or a mapping
    filtration -> module.
    """
    if isinstance(pieces, GradedModule):
        pieces = {0: pieces}
    if isinstance(pieces, Mapping):
        pieces = [(f, s.length, s.top) for f, mod in pieces.items() for s in mod.summands]
    pieces = list(pieces)
    cells = _lift_rows(pieces)
    if not cells:
        return ""
    if columns is None:
        columns = sorted({f for f, _, _ in pieces}, reverse=True)
    hi = max(d for d, _ in cells)
    lo = min(d for d, _ in cells)

    def entry(k: int) -> str:
        if k == 0:
            return "."
        return "F" if k == 1 else f"F^{k}"

    table = []
    for d in range(hi, lo - 1, -1):
        row = [entry(cells.get((d, f), 0)) for f in columns]
        table.append((d % PERIOD, row))
    width = max(len(e) for _, row in table for e in row)
    width = max(width, max(len(str(f)) for f in columns))
    lines = []
    header = " ".join(str(f).rjust(width) for f in columns)
    lines.append(("deg | " if show_degrees else "") + header)
    for d, row in table:
        body = " ".join(e.rjust(width) for e in row)
        lines.append((f"{d:>3} | " if show_degrees else "") + body)
    return "\n".join(lines)


def rank_table(
    pieces: Iterable[tuple[int, int, int]], columns: Sequence[int] | None = None
) -> list[list[int]]:
    """Grid as a matrix of ranks: rows by descending degree, columns by descending filtration."""
    pieces = list(pieces)
    cells = _lift_rows(pieces)
    if not cells:
        return []
    if columns is None:
        columns = sorted({f for f, _, _ in pieces}, reverse=True)
    hi = max(d for d, _ in cells)
    lo = min(d for d, _ in cells)
    return [[cells.get((d, f), 0) for f in columns] for d in range(hi, lo - 1, -1)]
