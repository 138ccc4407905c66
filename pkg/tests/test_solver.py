from itertools import product

import pytest

from hsbar.errors import BudgetExceeded, NoConsistentAnswer
from hsbar.f2core import rank
from hsbar.forms import CupForm, RokhlinMap, classify_orbits
from hsbar.pages import check_invariants
from hsbar.rmod import GradedModule
from hsbar.solver import (
    presentations,
    resolve_extensions,
    same_up_to_shift,
    solve,
    solve_module,
    standard_answer,
)

CUP3 = CupForm.from_dict(3, {(1, 2, 3): 1})
T3 = RokhlinMap.from_function(3, lambda x: int(x == 0))


def linear_maps(n):
    for c, coeffs in product((0, 1), product((0, 1), repeat=n)):
        monos = ([0] if c else []) + [1 << i for i, a in enumerate(coeffs) if a]
        yield RokhlinMap.from_anf(n, monos)


# --------------------------------------------------------------------------
# extensions


def test_single_summand_has_no_extension():
    assert resolve_extensions([(2, 3, 1)]) == [GradedModule.of((3, 1))]


def test_arrow_extension():
    out = resolve_extensions([(3, 1, -1), (1, 2, -2)])
    assert out == [GradedModule.of((3, -1)), GradedModule.of((1, -1), (2, -2))]


def test_length_cap():
    assert resolve_extensions([(2, 3, 0), (0, 3, 3)]) == [GradedModule.of((3, 0), (3, 3))]


def test_extension_needs_lower_filtration_and_right_degree():
    # same filtration: nothing to glue
    assert len(resolve_extensions([(1, 1, 0), (1, 2, 3)])) == 1
    # wrong degree
    assert len(resolve_extensions([(2, 1, 0), (1, 2, 0)])) == 1
    # the lower piece cannot be on top
    assert len(resolve_extensions([(1, 1, 0), (2, 2, 3)])) == 1


def test_general_mode_trades_length():
    pieces = [(3, 2, 2), (2, 2, 1)]
    assert resolve_extensions(pieces) == [GradedModule.of((2, 2), (2, 1))]
    general = resolve_extensions(pieces, mode="general")
    assert GradedModule.of((3, 2), (1, 1)) in general
    assert GradedModule.of((2, 2), (2, 1)) in general


@pytest.mark.parametrize(
    "pieces",
    [
        [(3, 1, 3), (2, 1, 2), (1, 1, 1), (0, 2, 0)],
        [(2, 2, 1), (1, 1, 3), (0, 2, 2), (0, 1, 0)],
        [(3, 1, 0), (2, 2, 3), (1, 1, 1), (0, 3, 0)],
    ],
)
def test_general_mode_contains_merges_and_keeps_rank(pieces):
    merged = set(resolve_extensions(pieces))
    general = set(resolve_extensions(pieces, mode="general"))
    assert merged <= general
    total = sum(length for _, length, _ in pieces)
    assert {m.total_rank for m in general} == {total}


def test_unknown_mode():
    with pytest.raises(ValueError):
        resolve_extensions([(0, 1, 0)], mode="other")


# --------------------------------------------------------------------------
# closed forms and small cases


def test_standard_answer():
    assert standard_answer(0) == GradedModule.of((3, 0))
    assert standard_answer(1) == GradedModule.of((3, 0), (3, 1))
    assert standard_answer(2) == GradedModule.of((3, 0), (3, 1), (3, 1), (3, 2))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_linear_maps_agree_with_closed_forms(n):
    for mu in linear_maps(n):
        report = solve(CupForm.zero(n), mu)
        assert report.unique is not None
        if len(set(mu.values)) == 1:
            assert report.unique == standard_answer(n)
        elif n == 1:
            assert report.unique == GradedModule.of((2, 0), (2, 2))
        else:
            assert report.unique == GradedModule.of((2, 0), (2, 1), (2, 2), (2, 3))


def test_constant_maps_with_even_cup():
    for m in (0, 2):
        cup = CupForm.from_dict(3, {(1, 2, 3): m}) if m else CupForm.zero(3)
        report = solve(cup, RokhlinMap.constant(3))
        assert standard_answer(3) in report.final


def test_quadratic_maps_on_two_torus_are_not_forced():
    # x1x2 passes validation with a vanishing cup form but is not realized by any
    # manifold; the constraints leave more than one candidate
    report = solve(CupForm.zero(2), RokhlinMap.from_anf(2, [3]))
    assert len(report.final) == 2


def test_three_torus():
    report = solve(CUP3, T3)
    assert report.unique == GradedModule.of(*[(3, 0)] * 3, *[(3, 3)] * 3)
    assert report.shift == 2
    assert report.quota == 6
    d2 = report.branches_at(2)
    assert len(d2) == 8
    assert [b.survives for b in d2 if b.nonzero] == [False] * 7
    assert [b.survives for b in d2 if not b.nonzero] == [True]
    d3 = [b for b in report.branches_at(3)]
    assert any(b.nonzero and b.survives for b in d3)
    assert not any(not b.nonzero and b.survives for b in d3)


def test_reported_gradings_undo_normalization():
    report = solve(CUP3, T3)
    raw = solve(CUP3, T3, normalize=False)
    assert raw.shift == 0
    assert [report.reported(m) for m in report.final] == raw.final


def test_budget():
    with pytest.raises(BudgetExceeded):
        solve(CUP3, T3, budget=3)


def test_no_consistent_answer_carries_report():
    # the dual of the quadratic case above: same data with an impossible quota
    from hsbar import solver

    original = solver.gysin_quota
    solver.gysin_quota = lambda cup: 99
    try:
        with pytest.raises(NoConsistentAnswer) as info:
            solve(CupForm.zero(1), RokhlinMap.from_anf(1, [1]))
        assert info.value.report.final == []
    finally:
        solver.gysin_quota = original


def test_every_explored_page_is_sound():
    for mu in (T3, RokhlinMap.from_anf(3, [0b111, 0b001])):
        report = solve(CUP3, mu)
        chi = report.e1.euler_characteristic()
        for root in report.branches:
            for path in root.walk():
                sizes = [b.result.size for b in path]
                assert sizes == sorted(sizes, reverse=True)
                for b in path:
                    check_invariants(b.result)
                    assert b.result.euler_characteristic() == chi
        for m in report.final:
            assert m.total_rank in {sum(p[1] for p in e) for e in report.einfinity}


def test_diagnostics():
    report = solve(CUP3, T3)
    assert report.diagnostics["equal_total_rank"]
    assert report.diagnostics["gysin_degree_check"] == [True]


def test_same_up_to_shift():
    a = GradedModule.of((3, 0), (2, 1))
    assert same_up_to_shift(a, a.shift(3)) == [3]
    assert solve_module(CupForm.zero(0), RokhlinMap.constant(0)) == GradedModule.of((3, 0))


# --------------------------------------------------------------------------
# presentations


def test_presentations_of_the_three_torus():
    pres = presentations(T3)
    # the odd spin structure can sit at any of the eight points
    assert len(pres) == 8
    assert all(p(0) == 0 for p in pres)


def test_general_extensions_keep_the_three_torus_answer_in_every_presentation():
    """Moving the odd spin structure never loses the answer when all extensions are allowed."""
    expected = GradedModule.of(*[(3, 0)] * 3, *[(3, 3)] * 3)
    for mu in presentations(T3):
        report = solve(CUP3, mu, extensions="general")
        assert any(expected.shift(s) in report.final for s in range(4))


def test_orbit_filter_with_general_extensions_forces_the_three_torus():
    odd_at_x1 = RokhlinMap.from_function(3, lambda x: int(x == 1))
    plain = solve(CUP3, odd_at_x1, extensions="general")
    assert len(plain.final) > 1
    report = solve(CUP3, odd_at_x1, extensions="general", orbit=True)
    assert report.unique is not None
    assert len(report.unique) == 6
    assert {s.length for s in report.unique.summands} == {3}
    assert report.diagnostics["presentations"] == 8


def test_merge_extensions_disagree_across_presentations():
    """With the merge rule alone, moving the odd spin structure changes the answer."""
    odd_at_x1 = RokhlinMap.from_function(3, lambda x: int(x == 1))
    a = solve(CUP3, T3).unique
    b = solve(CUP3, odd_at_x1).unique
    assert a is not None and b is not None
    assert not any(a.shift(s) == b for s in range(4))
    assert sorted(s.length for s in b.summands) == [1, 3, 3, 3, 3, 3]


def test_orbit_filter_records_its_work():
    report = solve(CupForm.zero(1), RokhlinMap.from_anf(1, [1]), orbit=True)
    assert report.diagnostics["presentations"] == 1
    assert report.unique == GradedModule.of((2, 0), (2, 2))


def test_orbit_representatives_cover_the_family():
    sizes = sum(o.size for o in classify_orbits(3, [0b111]))
    assert sizes == 128
