import random
from itertools import combinations_with_replacement

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsbar.errors import InconsistentPresentation
from hsbar.f2core import F2Matrix, all_invertible
from hsbar.rmod import (
    IMOD,
    RTILDE,
    CyclicSummand,
    GradedModule,
    QModulePresentation,
    decompose,
    gysin_summand_quota,
    module_type,
    rank_table,
    reconstruct,
    render_grid,
    shift,
)

SUMMANDS = [CyclicSummand(length, top) for length in (1, 2, 3) for top in range(4)]


def test_decompose_inverts_reconstruct_exhaustively():
    for size in range(5):
        for combo in combinations_with_replacement(SUMMANDS, size):
            m = GradedModule(combo)
            assert decompose(reconstruct(m)) == m


def test_summand_basics():
    s = CyclicSummand(3, 5)
    assert s.top == 1
    assert s.degrees() == [1, 0, 3]
    with pytest.raises(ValueError):
        CyclicSummand(4, 0)


def test_shift_translates_up():
    m = GradedModule.of((2, 0), (3, 3))
    assert shift(m, 1) == GradedModule.of((2, 1), (3, 0))
    assert m.shift(4) == m
    # M<d>_i = M_{i-d}: ranks move up by d
    rv = m.rank_vector()
    assert shift(m, 1).rank_vector() == tuple(rv[(i - 1) % 4] for i in range(4))


def test_constants_and_quota():
    assert RTILDE.rank_vector() == (1, 0, 1, 1)
    assert RTILDE.total_rank == 3 and IMOD.total_rank == 2
    assert gysin_summand_quota(IMOD + IMOD.shift(2)) == 2


def test_describe():
    m = GradedModule.of((2, 0), (2, 2))
    assert m.describe() == "2 x F[Q]/Q^2 tops {0,2}"
    assert GradedModule().describe() == "0"
    mixed = GradedModule.of((1, 3), (3, 0), (3, 1))
    assert mixed.describe() == "2 x F[Q]/Q^3 tops {0,1} + 1 x F[Q]/Q^1 tops {3}"
    assert mixed.to_json()[0] == {"length": 1, "top": 3}


def conjugate(pres: QModulePresentation, rng) -> QModulePresentation:
    """Change basis in each degree by random invertible matrices."""
    changes = []
    for d in range(4):
        mats = list(all_invertible(pres.graded_dims[d])) if pres.graded_dims[d] <= 3 else None
        changes.append(rng.choice(mats) if mats else F2Matrix.identity(pres.graded_dims[d]))
    q = []
    for d in range(4):
        below = (d - 1) % 4
        q.append(changes[below] @ pres.q_matrices[d] @ changes[d].inverse())
    return QModulePresentation(pres.graded_dims, tuple(q))


@given(st.lists(st.sampled_from(SUMMANDS), max_size=4), st.integers(0, 10**6))
def test_decompose_is_basis_independent(summands, seed):
    m = GradedModule(tuple(summands))
    pres = reconstruct(m)
    if max(pres.graded_dims) > 3:
        return
    assert decompose(conjugate(pres, random.Random(seed))) == m


def test_decompose_rejects_q_cubed():
    # one cell per degree, Q an isomorphism all the way round
    one = F2Matrix.identity(1)
    pres = QModulePresentation((1, 1, 1, 1), (one, one, one, one))
    with pytest.raises(InconsistentPresentation):
        decompose(pres)


def test_presentation_shape_checked():
    with pytest.raises(InconsistentPresentation):
        QModulePresentation((1, 1, 0, 0), tuple(F2Matrix.zeros(1, 1) for _ in range(4)))


def test_module_type_of_rearranged_chain():
    # cells a, Qa (degrees 2, 1) and b, Qb (degrees 1, 0) with Q^2 a = Qb
    degrees = [2, 1, 1, 0]
    cols = [0b0010, 0b1000, 0b1000, 0]
    assert module_type(degrees, F2Matrix.from_columns(cols, 4)) == GradedModule.of((3, 2), (1, 1))


def test_render_and_rank_table():
    pieces = [(1, 3, 1), (0, 3, 0)]
    assert rank_table(pieces) == [[1, 0], [1, 1], [1, 1], [0, 1]]
    assert rank_table(pieces, [2, 1, 0]) == [[0, 1, 0], [0, 1, 1], [0, 1, 1], [0, 0, 1]]
    text = render_grid(pieces)
    assert text.splitlines()[0].split() == ["deg", "|", "1", "0"]
    assert render_grid([]) == ""
    assert "F" in render_grid(RTILDE)
