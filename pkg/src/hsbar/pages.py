"""Pages of the spectral sequence filtered by the Morse index on the torus.

A page is a finite F_2 vector space with one basis cell per generator of one
V-periodicity window. Every column (filtration level) is kept in a Jordan
basis for Q: the cells of a cyclic summand are stored contiguously as
``g, Qg, Q^2 g``. The differential of page ``r`` lowers filtration by ``r``
and degree by one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Iterator

from .errors import BudgetExceeded, InvariantViolation
from .f2core import (
    F2Matrix,
    Echelon,
    bits,
    combine,
    complement_in,
    coordinates,
    kernel_of_images,
    popcount,
    subset_string,
)
from .forms import RokhlinMap
from .rmod import PERIOD, CyclicSummand, GradedModule, QModulePresentation, decompose, render_grid

DEFAULT_CANDIDATE_LIMIT = 1 << 20


@dataclass(frozen=True)
class Cell:
    origin: int  # subset of the leading E^1 term of the representative
    power: int  # position inside its Q-chain
    lineage: int  # representative cycle, as a bitset over E^1 cells
    filtration: int
    degree: int
    top: int  # page index of the chain's generator
    length: int

    @property
    def label(self) -> str:
        return f"e{{{subset_string(self.origin)}}}.{self.power}"


@dataclass(frozen=True)
class ChainPage:
    n: int
    r: int
    cells: tuple[Cell, ...]
    q_action: F2Matrix
    differential: F2Matrix

    @property
    def size(self) -> int:
        return len(self.cells)

    def column(self, p: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.filtration == p]

    def filtrations(self) -> list[int]:
        return sorted({c.filtration for c in self.cells}, reverse=True)

    def generators(self) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.power == 0]

    def pieces(self) -> list[tuple[int, int, int]]:
        """``(filtration, length, top degree)`` for every cyclic summand."""
        return [(c.filtration, c.length, c.degree) for c in self.cells if c.power == 0]

    def column_module(self, p: int) -> GradedModule:
        return GradedModule(
            tuple(CyclicSummand(length, top) for f, length, top in self.pieces() if f == p)
        )

    def signature(self) -> tuple:
        """Isomorphism type of the page: per filtration, the sorted summand list."""
        return tuple(
            (p, tuple(self.column_module(p).pairs())) for p in self.filtrations()
        )

    def total_rank(self) -> int:
        return self.size

    def euler_characteristic(self) -> int:
        """``sum((-1)**degree)`` over cells; every differential has degree -1."""
        return sum(-1 if c.degree % 2 else 1 for c in self.cells)

    def with_differential(self, d: F2Matrix) -> "ChainPage":
        return replace(self, differential=d)

    def render(self, columns=None) -> str:
        if columns is None:
            columns = list(range(self.n, -1, -1))
        return render_grid(self.pieces(), columns)


def _chain_q_action(cells: list[Cell]) -> F2Matrix:
    cols = []
    for i, c in enumerate(cells):
        cols.append(1 << (i + 1) if c.power + 1 < c.length else 0)
    return F2Matrix.from_columns(cols, len(cells))


def e1_degree(mu: RokhlinMap, subset: int, q: int) -> int:
    return (popcount(subset) - 2 * mu(subset) - q) % PERIOD


def build_e1(mu: RokhlinMap) -> ChainPage:
    """E^1: one copy of F[Q]/Q^3 per spin structure, d^1 given by Q^2 where mu jumps."""
    n = mu.n
    cells = []
    for subset in range(1 << n):
        base = 3 * subset
        for q in range(3):
            cells.append(
                Cell(
                    origin=subset,
                    power=q,
                    lineage=1 << (base + q),
                    filtration=popcount(subset),
                    degree=e1_degree(mu, subset, q),
                    top=base,
                    length=3,
                )
            )
    cols = [0] * len(cells)
    for subset in range(1 << n):
        image = 0
        for i in bits(subset):
            face = subset ^ (1 << i)
            jump = mu(face) != mu(subset)
            degree_ok = (e1_degree(mu, subset, 0) - e1_degree(mu, face, 2)) % PERIOD == 1
            if jump != degree_ok:
                raise InvariantViolation(
                    f"d1 adjacency and degree rule disagree at {subset_string(subset)!r}"
                )
            if jump:
                image |= 1 << (3 * face + 2)
        cols[3 * subset] = image
    page = ChainPage(
        n=n,
        r=1,
        cells=tuple(cells),
        q_action=_chain_q_action(cells),
        differential=F2Matrix.from_columns(cols, len(cells)),
    )
    check_invariants(page)
    return page


def check_invariants(page: ChainPage) -> None:
    d, q = page.differential, page.q_action
    if not (d @ d).is_zero():
        raise InvariantViolation(f"d o d != 0 on page {page.r}")
    if d @ q != q @ d:
        raise InvariantViolation(f"differential is not Q-equivariant on page {page.r}")
    if not (q @ q @ q).is_zero():
        raise InvariantViolation("Q^3 != 0")
    for i, row in enumerate(d.rows):
        for j in bits(row):
            src, dst = page.cells[j], page.cells[i]
            if src.filtration - dst.filtration != page.r:
                raise InvariantViolation(f"d_{page.r} entry changes filtration wrongly")
            if (src.degree - dst.degree) % PERIOD != 1:
                raise InvariantViolation(f"d_{page.r} entry does not have degree -1")
    for i, row in enumerate(q.rows):
        for j in bits(row):
            src, dst = page.cells[j], page.cells[i]
            if src.filtration != dst.filtration or (src.degree - dst.degree) % PERIOD != 1:
                raise InvariantViolation("Q entry breaks the grading")


# ----------------------------------------------------------------------------
# homology
# ----------------------------------------------------------------------------


def jordan_generators(pres: QModulePresentation) -> list[tuple[int, int, int]]:
    """Generators ``(degree, length, vector)`` of a cyclic decomposition.

    Generators of length ``k`` in degree ``t`` complete
    ``ker Q^(k-1) + Q(ker Q^(k+1))`` inside ``ker Q^k``; ``vector`` is a bitset
    over the basis of ``M_t``.
    """

    def kernel(t: int, k: int) -> list[int]:
        dim = pres.graded_dims[t]
        if k == 0:
            return []
        if k >= 3:
            return [1 << i for i in range(dim)]
        return kernel_of_images(pres.q_power(t, k).columns())

    gens = []
    for t in range(PERIOD):
        up = (t + 1) % PERIOD
        q_in = pres.q_matrices[up]
        for k in (3, 2, 1):
            sub = kernel(t, k - 1) + [q_in.apply(v) for v in kernel(up, k + 1)]
            for v in complement_in(sub, kernel(t, k)):
                gens.append((t, k, v))
    return gens


def _vector_degree_split(page: ChainPage, idx: list[int]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {d: [] for d in range(PERIOD)}
    for i in idx:
        out[page.cells[i].degree].append(i)
    return out


def page_homology(page: ChainPage) -> tuple[ChainPage, dict[int, QModulePresentation]]:
    """Homology of ``page`` as the next page, rebased to Jordan chains.

    Also returns, per filtration, the Q-module presentation of the homology in
    the basis chosen before rebasing.
    """
    check_invariants(page)
    d = page.differential
    d_cols = d.columns()
    q = page.q_action
    new_cells: list[Cell] = []
    presentations: dict[int, QModulePresentation] = {}

    for p in page.filtrations():
        by_deg = _vector_degree_split(page, page.column(p))
        sources = _vector_degree_split(page, page.column(p + page.r))
        cycles: dict[int, list[int]] = {}
        bounds: dict[int, list[int]] = {}
        homology: dict[int, list[int]] = {}
        for deg in range(PERIOD):
            local = by_deg[deg]
            ker = kernel_of_images([d_cols[i] for i in local])
            cycles[deg] = [combine(v, [1 << i for i in local]) for v in ker]
            bounds[deg] = [d_cols[i] for i in sources[(deg + 1) % PERIOD] if d_cols[i]]
            homology[deg] = complement_in(bounds[deg], cycles[deg])

        dims = tuple(len(homology[deg]) for deg in range(PERIOD))
        q_mats = []
        for deg in range(PERIOD):
            below = (deg - 1) % PERIOD
            basis = homology[below]
            bound_basis = complement_in([], bounds[below])
            full = basis + bound_basis
            cols = []
            for h in homology[deg]:
                combo = coordinates(q.apply(h), full)
                cols.append(combo & ((1 << len(basis)) - 1))
            q_mats.append(F2Matrix.from_columns(cols, len(basis)))
        pres = QModulePresentation(dims, tuple(q_mats))
        presentations[p] = pres

        gens = jordan_generators(pres)
        gens.sort(key=lambda g: (-g[1], g[0], g[2]))
        produced: dict[int, Echelon] = {deg: Echelon() for deg in range(PERIOD)}
        for deg, length, vec in gens:
            top_index = len(new_cells)
            v = vec
            for k in range(length):
                dk = (deg - k) % PERIOD
                if not produced[dk].add(v):
                    raise InvariantViolation("Jordan chains are not independent")
                rep = combine(v, homology[dk])
                lineage = 0
                for i in bits(rep):
                    lineage ^= page.cells[i].lineage
                origin = page.cells[rep.bit_length() - 1].origin
                new_cells.append(
                    Cell(
                        origin=origin,
                        power=k,
                        lineage=lineage,
                        filtration=p,
                        degree=dk,
                        top=top_index,
                        length=length,
                    )
                )
                v = q_mats[dk].apply(v)
            if v:
                raise InvariantViolation("Jordan chain longer than its length")
        for deg in range(PERIOD):
            if len(produced[deg]) != dims[deg]:
                raise InvariantViolation("Jordan chains do not span the homology")
        if decompose(pres) != GradedModule(
            tuple(CyclicSummand(length, deg) for deg, length, _ in gens)
        ):
            raise InvariantViolation("Jordan basis disagrees with the rank profile")

    nxt = ChainPage(
        n=page.n,
        r=page.r + 1,
        cells=tuple(new_cells),
        q_action=_chain_q_action(new_cells),
        differential=F2Matrix.zeros(len(new_cells), len(new_cells)),
    )
    check_invariants(nxt)
    return nxt, presentations


# ----------------------------------------------------------------------------
# candidate differentials
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorChoice:
    source: int  # page index of a chain generator
    targets: tuple[int, ...]  # basis of admissible images (bitsets over page cells)


def admissible_images(page: ChainPage) -> list[GeneratorChoice]:
    """For each generator, the images allowed by degree, filtration and Q-linearity."""
    r = page.r
    q = page.q_action
    out = []
    for g in page.generators():
        cell = page.cells[g]
        target_deg = (cell.degree - 1) % PERIOD
        local = [
            i
            for i, c in enumerate(page.cells)
            if c.filtration == cell.filtration - r and c.degree == target_deg
        ]
        if not local:
            continue
        images = []
        for i in local:
            v = 1 << i
            for _ in range(cell.length):
                v = q.apply(v)
            images.append(v)
        ker = kernel_of_images(images)
        basis = tuple(combine(v, [1 << i for i in local]) for v in ker)
        if basis:
            out.append(GeneratorChoice(g, basis))
    return out


def candidate_count(page: ChainPage) -> int:
    return 1 << sum(len(c.targets) for c in admissible_images(page))


def _assemble(page: ChainPage, choices: list[GeneratorChoice], picks) -> F2Matrix:
    cols = [0] * page.size
    q = page.q_action
    for choice, y in zip(choices, picks):
        g = choice.source
        for k in range(page.cells[g].length):
            cols[g + k] = y
            y = q.apply(y)
    return F2Matrix.from_columns(cols, page.size)


def iter_candidate_differentials(
    page: ChainPage, limit: int = DEFAULT_CANDIDATE_LIMIT
) -> Iterator[F2Matrix]:
    if page.r < 2:
        raise ValueError("higher differentials start on page 2")
    choices = admissible_images(page)
    total = 1 << sum(len(c.targets) for c in choices)
    if total > limit:
        raise BudgetExceeded(f"{total} candidate differentials on page {page.r} (limit {limit})")
    spans = []
    for c in choices:
        span = []
        for code in range(1 << len(c.targets)):
            span.append(combine(code, list(c.targets)))
        spans.append(span)
    for picks in product(*spans):
        d = _assemble(page, choices, picks)
        if (d @ d).is_zero():
            yield d


def candidate_differentials(page: ChainPage, limit: int = DEFAULT_CANDIDATE_LIMIT) -> list[F2Matrix]:
    """Every Q-linear map of degree -1 dropping filtration by ``page.r`` with square zero.

    The zero map comes first; order is lexicographic in the generator images.
    """
    return list(iter_candidate_differentials(page, limit))
