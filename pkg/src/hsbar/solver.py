"""Search over higher differentials and extensions, filtered by the Gysin quota.

The differentials ``d_r`` for ``r >= 2`` are unknowns: every Q-linear map with
the right degree and filtration drop is a branch. A branch reaches E-infinity
once ``r`` exceeds the filtration range; its module extensions are then
enumerated and every outcome whose number of cyclic summands differs from the
HM-bar quota is discarded.

Branches are memoised on the isomorphism type of the page (per filtration,
the multiset of cyclic summands): the admissible differentials and their
outcomes depend on nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DimensionTooLarge, NoConsistentAnswer
from .f2core import F2Matrix, all_invertible, combine, rank
from .forms import CupForm, EquivalenceWitness, RokhlinMap, transport, validate_rokhlin
from .hmbar import gysin_degree_check, gysin_quota, hm_ranks
from .pages import (
    DEFAULT_CANDIDATE_LIMIT,
    ChainPage,
    build_e1,
    candidate_differentials,
    page_homology,
)
from .rmod import PERIOD, CyclicSummand, GradedModule, module_type

DEFAULT_BUDGET = 200_000
DEFAULT_EXTENSION_LIMIT = 1 << 20
ORBIT_MAX_N = 3

Piece = tuple[int, int, int]  # (filtration, length, top)


# ----------------------------------------------------------------------------
# extensions
# ----------------------------------------------------------------------------


EXTENSION_MODES = ("merge", "general")


def resolve_extensions(
    pieces: Iterable[Piece], mode: str = "merge", limit: int = DEFAULT_EXTENSION_LIMIT
) -> list[GradedModule]:
    """Candidate modules whose associated graded is the given E-infinity page.

    ``mode="merge"`` glues a higher piece (length a, top t) onto the generator
    of a lower piece (length b, top t - a) whenever a + b <= 3, iterated, and
    always keeps the unglued outcome.

    ``mode="general"`` enumerates every filtered module with this associated
    graded: each piece's chain ``g, Qg, .., Q^(a-1) g`` is lifted and ``Q^a g``
    may be any element of strictly lower filtration in degree ``top - a``.
    Besides merges this allows landings inside a lower chain, which trade
    length between summands (two copies of F[Q]/Q^2 can become F[Q]/Q^3 + F).
    """
    if mode not in EXTENSION_MODES:
        raise ValueError(f"unknown extension mode {mode!r}")
    pieces = tuple(sorted(pieces, key=lambda x: (-x[0], -x[1], x[2] % PERIOD)))
    if mode == "merge":
        return list(_merge_cached(pieces))
    return list(_resolve_cached(pieces, limit))


@lru_cache(maxsize=4096)
def _merge_cached(pieces: tuple[Piece, ...]) -> tuple[GradedModule, ...]:
    # state: sorted tuple of (top filtration, bottom filtration, length, top)
    start = tuple(sorted((f, f, length, top % PERIOD) for f, length, top in pieces))
    seen = {start}
    stack = [start]
    while stack:
        state = stack.pop()
        for i, (fa, ba, a, t) in enumerate(state):
            for j, (fb, bb, b, tb) in enumerate(state):
                if i == j or fb >= ba or a + b > 3 or tb != (t - a) % PERIOD:
                    continue
                rest = [x for k, x in enumerate(state) if k not in (i, j)]
                nxt = tuple(sorted(rest + [(fa, bb, a + b, t)]))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    found = {GradedModule.of(*((length, top) for _, _, length, top in st)) for st in seen}
    return tuple(sorted(found, key=_module_key))


@lru_cache(maxsize=4096)
def _resolve_cached(pieces: tuple[Piece, ...], limit: int) -> tuple[GradedModule, ...]:
    degrees: list[int] = []
    filts: list[int] = []
    chains: list[tuple[int, int]] = []  # (first cell index, length)
    for f, length, top in pieces:
        chains.append((len(degrees), length))
        for k in range(length):
            degrees.append((top - k) % PERIOD)
            filts.append(f)
    size = len(degrees)

    # overflow targets per chain: cells of lower filtration in degree top - length
    options = []
    for (start, length), (f, _, top) in zip(chains, pieces):
        if length == 3:
            options.append([0])  # Q^3 g = 0 already
            continue
        want = (top - length) % PERIOD
        cells = [i for i in range(size) if filts[i] < f and degrees[i] == want]
        options.append([combine(code, [1 << i for i in cells]) for code in range(1 << len(cells))])
    total = 1
    for o in options:
        total *= len(o)
    if total > limit:
        raise BudgetExceeded(f"{total} extension choices exceed the limit {limit}")

    base_cols = [0] * size
    for start, length in chains:
        for k in range(length - 1):
            base_cols[start + k] = 1 << (start + k + 1)
    found = set()
    for picks in product(*options):
        cols = list(base_cols)
        for (start, length), over in zip(chains, picks):
            cols[start + length - 1] = over
        q = F2Matrix.from_columns(cols, size)
        if not (q @ q @ q).is_zero():
            continue
        found.add(module_type(degrees, q))
    return tuple(sorted(found, key=_module_key))


def _module_key(m: GradedModule) -> tuple:
    return (len(m), m.pairs())


# ----------------------------------------------------------------------------
# closed forms
# ----------------------------------------------------------------------------


def standard_answer(n: int) -> GradedModule:
    """Vanishing cup form and constant Rokhlin map: C(n, k) copies of F[Q]/Q^3 with top k."""
    out = []
    for k in range(n + 1):
        out.extend([CyclicSummand(3, k)] * comb(n, k))
    return GradedModule(tuple(out))


# ----------------------------------------------------------------------------
# report
# ----------------------------------------------------------------------------


@dataclass
class Outcome:
    module: GradedModule
    passes: bool


@dataclass
class Branch:
    """One choice of ``d_r`` and everything explored below it."""

    page: int
    choice: int
    rank: int
    result: ChainPage
    children: list["Branch"] = field(default_factory=list)
    outcomes: list[Outcome] = field(default_factory=list)
    duplicate: bool = False
    survives: bool = False

    @property
    def nonzero(self) -> bool:
        return self.rank > 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def label(self) -> str:
        return f"d{self.page}#{self.choice}"

    def walk(self, path: tuple = ()):
        path = path + (self,)
        yield path
        for c in self.children:
            yield from c.walk(path)


@dataclass
class SolveReport:
    cup: CupForm
    mu: RokhlinMap
    normalized_mu: RokhlinMap
    shift: int
    quota: int
    hm: tuple[int, int]
    e1: ChainPage
    e2: ChainPage
    branches: list[Branch]
    einfinity: list[tuple[Piece, ...]]
    final: list[GradedModule]
    explored: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def unique(self) -> GradedModule | None:
        return self.final[0] if len(self.final) == 1 else None

    def reported(self, m: GradedModule) -> GradedModule:
        """``m`` in the gradings of the un-normalized Rokhlin map."""
        return m.shift(self.shift)

    def branches_at(self, page: int) -> list[Branch]:
        out = []
        for b in self.branches:
            for path in b.walk():
                if path[-1].page == page:
                    out.append(path[-1])
        return out

    def surviving_paths(self) -> list[tuple[Branch, ...]]:
        out = []
        for b in self.branches:
            for path in b.walk():
                leaf = path[-1]
                if leaf.is_leaf and leaf.survives:
                    out.append(path)
        return out


class _Search:
    def __init__(self, n: int, quota: int, budget: int, limit: int, extensions: str):
        self.n = n
        self.extensions = extensions
        self.quota = quota
        self.budget = budget
        self.limit = limit
        self.explored = 0
        self.memo: dict[tuple, tuple[bool, list[tuple[Piece, ...]], list[GradedModule]]] = {}

    def expand(self, page: ChainPage) -> list[Branch]:
        """Branches for every ``d_r`` on ``page`` (whose differential is still zero)."""
        branches = []
        for i, d in enumerate(candidate_differentials(page, self.limit)):
            self.explored += 1
            if self.explored > self.budget:
                raise BudgetExceeded(f"explored more than {self.budget} branches")
            nxt, _ = page_homology(page.with_differential(d))
            branch = Branch(page=page.r, choice=i, rank=rank(d), result=nxt)
            self.follow(branch)
            branches.append(branch)
        return branches

    def follow(self, branch: Branch) -> None:
        page = branch.result
        key = (page.r, page.signature())
        if key in self.memo:
            branch.duplicate = True
            branch.survives = self.memo[key][0]
            return
        if self.finished(page):
            pieces = tuple(sorted(page.pieces()))
            for m in resolve_extensions(pieces, self.extensions):
                branch.outcomes.append(Outcome(m, len(m) == self.quota))
            branch.survives = any(o.passes for o in branch.outcomes)
            einf = [pieces]
            finals = [o.module for o in branch.outcomes if o.passes]
        else:
            branch.children = self.expand(page)
            branch.survives = any(c.survives for c in branch.children)
            einf, finals = [], []
            for c in branch.children:
                ce, cf = self.collect(c)
                einf.extend(ce)
                finals.extend(cf)
        self.memo[key] = (branch.survives, einf, finals)

    def collect(self, branch: Branch):
        page = branch.result
        _, einf, finals = self.memo[(page.r, page.signature())]
        return einf, finals

    def finished(self, page: ChainPage) -> bool:
        filts = page.filtrations()
        return not filts or page.r > max(filts) - min(filts)


def solve(
    cup: CupForm,
    mu: RokhlinMap,
    budget: int = DEFAULT_BUDGET,
    normalize: bool = True,
    candidate_limit: int = DEFAULT_CANDIDATE_LIMIT,
    raise_on_empty: bool = True,
    extensions: str = "merge",
    orbit: bool = False,
) -> SolveReport:
    """Run the spectral sequence search for ``(cup, mu)``.

    With ``normalize`` the map is replaced by ``mu + mu(0)`` and the discarded
    constant is reported as ``shift = 2 mu(0) mod 4``; gradings in the report
    are those of the normalized map (use :meth:`SolveReport.reported` to
    undo). Without it, the raw map is used and ``shift`` is 0. ``extensions``
    selects the extension model, see :func:`resolve_extensions`.

    With ``orbit`` (and ``n <= 3``) the candidates are also intersected, up to
    a grading shift, with those of every affinely equivalent presentation of
    the same data: a change of basis or of base spin structure describes the
    same manifold, so the true module survives in each presentation.
    """
    validate_rokhlin(mu, cup)
    if normalize:
        work, c = mu.normalized()
    else:
        work, c = mu, 0
    quota = gysin_quota(cup)
    search = _Search(mu.n, quota, budget, candidate_limit, extensions)
    e1 = build_e1(work)
    e2, _ = page_homology(e1)
    root = Branch(page=1, choice=0, rank=rank(e1.differential), result=e2)
    search.follow(root)
    _, einf, finals = search.memo[(e2.r, e2.signature())]

    unique_einf = sorted(set(einf))
    final = sorted(set(finals), key=_module_key)
    report = SolveReport(
        cup=cup,
        mu=mu,
        normalized_mu=work,
        shift=(2 * c) % PERIOD,
        quota=quota,
        hm=hm_ranks(cup),
        e1=e1,
        e2=e2,
        branches=[root],
        einfinity=unique_einf,
        final=final,
        explored=search.explored,
    )
    if orbit:
        final, dropped, count = _orbit_filter(
            work, cup, final, budget, candidate_limit, extensions
        )
    else:
        dropped, count = [], None
    report.final = final
    ranks = {m.total_rank for m in final}
    report.diagnostics = {
        "equal_total_rank": len(ranks) <= 1,
        "gysin_degree_check": [gysin_degree_check(m, cup) for m in final],
        "branches": search.explored,
        "memoised_pages": len(search.memo),
        "presentations": count,
        "dropped_by_orbit": dropped,
    }
    if not final and raise_on_empty:
        err = NoConsistentAnswer(
            f"no branch matches the Gysin quota {quota} (explored {search.explored} branches)"
        )
        err.report = report
        raise err
    return report


def presentations(mu: RokhlinMap) -> list[RokhlinMap]:
    """Normalized maps ``mu(M x + t)`` over all affine changes of coordinates.

    Only used for ``n <= 3``, where every invertible matrix preserves the
    mod-2 cup form (it is zero or the single triple).
    """
    if mu.n > ORBIT_MAX_N:
        raise DimensionTooLarge(f"presentations are enumerated for n <= {ORBIT_MAX_N}")
    seen = {}
    for m in all_invertible(mu.n):
        for t in range(1 << mu.n):
            w = EquivalenceWitness(m, t, 0)
            image, _ = transport(mu, CupForm.zero(mu.n), w)
            image, _ = image.normalized()
            seen.setdefault(image.encode(), image)
    return [seen[k] for k in sorted(seen)]


@lru_cache(maxsize=1024)
def _candidates(n, triples, values, budget, limit, extensions) -> frozenset[GradedModule]:
    cup = CupForm.from_mod2(n, triples)
    report = solve(
        cup, RokhlinMap(n, values), budget=budget, candidate_limit=limit,
        raise_on_empty=False, extensions=extensions, orbit=False,
    )
    return frozenset(report.final)


def _orbit_filter(mu, cup, final, budget, limit, extensions):
    if mu.n > ORBIT_MAX_N or not final:
        return final, [], None
    others = presentations(mu)
    keep = list(final)
    for p in others:
        cands = _candidates(mu.n, cup.mod2, p.values, budget, limit, extensions)
        keep = [m for m in keep if any(m.shift(s) in cands for s in range(PERIOD))]
    dropped = [m for m in final if m not in keep]
    return keep, dropped, len(others)


def solve_module(cup: CupForm, mu: RokhlinMap, **kwargs) -> GradedModule | None:
    return solve(cup, mu, **kwargs).unique


def same_up_to_shift(a: GradedModule, b: GradedModule) -> list[int]:
    """All ``s`` with ``a.shift(s) == b``."""
    return [s for s in range(PERIOD) if a.shift(s) == b]


def path_pages(path: Sequence[Branch]) -> list[tuple[str, ChainPage]]:
    return [(f"E{b.result.r}", b.result) for b in path]
