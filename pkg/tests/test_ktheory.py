from math import comb

import pytest

from hsbar.errors import DimensionTooLarge
from hsbar.ktheory import (
    KSP_TABLE,
    AbGroupSum,
    kq1_torus,
    kq1_torus_recursive,
    ksp,
    reduced_kq_circle,
    torsion_bit_census,
)


def test_ksp_table_and_periodicity():
    assert KSP_TABLE == ("Z", "0", "0", "0", "Z", "Z/2", "Z/2", "0")
    for i in range(-16, 16):
        assert ksp(i) == ksp(i + 8)
    assert ksp(-6) == "Z/2"
    assert ksp(-4) == "Z"


def test_circle():
    assert kq1_torus(1) == AbGroupSum(1, 0)
    assert reduced_kq_circle(1) == AbGroupSum(1, 0)
    assert str(kq1_torus(1)) == "Z/2^1"


@pytest.mark.parametrize("n,expected", [(0, (0, 0)), (2, (3, 0)), (3, (6, 1))])
def test_small_tori(n, expected):
    assert (kq1_torus(n).z2_count, kq1_torus(n).z_count) == expected


def test_closed_form_matches_recursion():
    for n in range(13):
        assert kq1_torus(n) == kq1_torus_recursive(n)


def test_pascal_consistency():
    for n in range(1, 13):
        prev, cur = kq1_torus(n - 1), kq1_torus(n)
        # each C(n,k) = C(n-1,k) + C(n-1,k-1)
        shifted = sum(comb(n - 1, k - 1) for k in range(1, n + 1) if k % 8 in (1, 2))
        assert cur.z2_count == prev.z2_count + shifted


def test_free_part_for_small_n():
    for n in range(8):
        assert kq1_torus(n).z_count == comb(n, 3) + comb(n, 7)


def test_census():
    assert torsion_bit_census(3) == 6
    assert torsion_bit_census(1) == 1
    assert torsion_bit_census(0) == 0
    with pytest.raises(DimensionTooLarge):
        torsion_bit_census(8)


def test_limits_and_formatting():
    with pytest.raises(DimensionTooLarge):
        kq1_torus(65)
    with pytest.raises(ValueError):
        kq1_torus(-1)
    with pytest.raises(ValueError):
        AbGroupSum(-1, 0)
    assert str(AbGroupSum()) == "0"
    assert str(AbGroupSum(6, 1)) == "Z/2^6 + Z^1"
    assert AbGroupSum(1, 2) * 3 + AbGroupSum(1, 0) == AbGroupSum(4, 6)
    assert kq1_torus(64).z2_count > 2**62
