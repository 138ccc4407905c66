"""KQ^1 of tori with the involution x -> -x, and the KSp groups of a point."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import DimensionTooLarge

MAX_N = 64

# KSp^{-i}(pt) for i = 0..7; entries are "Z", "0" or "Z/2"
KSP_TABLE: tuple[str, ...] = ("Z", "0", "0", "0", "Z", "Z/2", "Z/2", "0")


def ksp(i: int) -> str:
    """``KSp^i(pt)``, 8-periodic in ``i``."""
    return KSP_TABLE[(-i) % 8]


@dataclass(frozen=True)
class AbGroupSum:
    z2_count: int = 0
    z_count: int = 0

    def __post_init__(self) -> None:
        if self.z2_count < 0 or self.z_count < 0:
            raise ValueError("summand counts are non-negative")

    def __add__(self, other: "AbGroupSum") -> "AbGroupSum":
        return AbGroupSum(self.z2_count + other.z2_count, self.z_count + other.z_count)

    def __mul__(self, k: int) -> "AbGroupSum":
        return AbGroupSum(self.z2_count * k, self.z_count * k)

    def __str__(self) -> str:
        parts = []
        if self.z2_count:
            parts.append(f"Z/2^{self.z2_count}")
        if self.z_count:
            parts.append(f"Z^{self.z_count}")
        return " + ".join(parts) if parts else "0"


def _check(n: int) -> None:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_N:
        raise DimensionTooLarge(f"n={n} exceeds {MAX_N}")


def kq1_torus(n: int) -> AbGroupSum:
    """Closed form: Z/2 per k = 1, 2 mod 8 and Z per k = 3, 7 mod 8, each C(n, k) times."""
    _check(n)
    z2 = sum(comb(n, k) for k in range(1, n + 1) if k % 8 in (1, 2))
    z = sum(comb(n, k) for k in range(1, n + 1) if k % 8 in (3, 7))
    return AbGroupSum(z2, z)


def _group(name: str) -> AbGroupSum:
    return {"Z": AbGroupSum(0, 1), "0": AbGroupSum(), "Z/2": AbGroupSum(1, 0)}[name]


def reduced_kq_circle(k: int) -> AbGroupSum:
    """Reduced KQ^k of the circle with involution, read off the KSp table."""
    return _group(ksp(k - 7))


def kq1_torus_recursive(n: int) -> AbGroupSum:
    """Independent route: splitting the torus into smash products of circles.

    Builds the multiplicities C(n, k) through the stable splitting
    T^n = T^1 x T^(n-1) rather than the binomial formula.
    """
    _check(n)
    # mult[k] = number of k-fold smash summands in the stable splitting of T^m
    mult = [1]
    for _ in range(n):
        nxt = [0] * (len(mult) + 1)
        for k, c in enumerate(mult):
            nxt[k] += c  # summand from T^(m-1)
            nxt[k + 1] += c  # smashed with the new circle (k = 0 is the circle itself)
        mult = nxt
    total = AbGroupSum()
    for k in range(1, n + 1):
        total = total + reduced_kq_circle(k) * mult[k]
    return total


def torsion_bit_census(n: int) -> int:
    if n > 7:
        raise DimensionTooLarge("the census identifies bits with subsets only for n <= 7")
    count = kq1_torus(n).z2_count
    subsets = comb(n, 1) + comb(n, 2)
    if count != subsets:
        raise AssertionError(f"KQ^1 torsion {count} != {subsets} singletons and pairs")
    return count
