"""Triple cup forms, Rokhlin maps and the affine equivalence between them.

Spin structures are indexed by subset masks relative to a base spin structure
at the empty subset: bit ``i`` of a mask is the coefficient of the basis class
``x_{i+1}``. A Rokhlin map is the truth table of a Boolean function on
``F_2^n``; its algebraic normal form has degree at most three, and the degree
three coefficients are the mod-2 triple cup products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping

from .errors import CubicPartMismatch, DimensionTooLarge, NotARefinement, NotCubic, ValidationError
from .f2core import (
    MAX_DIM,
    Echelon,
    F2Matrix,
    all_invertible,
    bits,
    moebius_transform,
    parity,
    popcount,
    subset_string,
    subsets_of_size,
)

Triple = tuple[int, int, int]

EQUIVALENCE_MAX_N = 4


def _triple_mask(t: Triple) -> int:
    return (1 << (t[0] - 1)) | (1 << (t[1] - 1)) | (1 << (t[2] - 1))


def _mask_triple(mask: int) -> Triple:
    i, j, k = (b + 1 for b in bits(mask))
    return (i, j, k)


@dataclass(frozen=True)
class CupForm:
    """Alternating trilinear form on H^1(Y; Z), stored on increasing triples (1-based)."""

    n: int
    coeffs: tuple[tuple[Triple, int], ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_DIM:
            raise ValidationError(f"b1={self.n} outside 0..{MAX_DIM}")
        seen = set()
        cleaned = []
        for t, v in self.coeffs:
            t = tuple(int(x) for x in t)
            if len(t) != 3 or not (1 <= t[0] < t[1] < t[2] <= self.n):
                raise ValidationError(f"cup triple {t} must be strictly increasing in 1..{self.n}")
            if t in seen:
                raise ValidationError(f"cup triple {t} given twice")
            seen.add(t)
            if v:
                cleaned.append((t, int(v)))
        object.__setattr__(self, "coeffs", tuple(sorted(cleaned)))

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping[Triple, int]) -> "CupForm":
        return cls(n, tuple(coeffs.items()))

    @classmethod
    def zero(cls, n: int) -> "CupForm":
        return cls(n, ())

    @classmethod
    def from_mod2(cls, n: int, triples: Iterable[int]) -> "CupForm":
        """Build a form with value 1 on each triple mask in ``triples``."""
        return cls(n, tuple((_mask_triple(m), 1) for m in triples))

    def value(self, t: Triple) -> int:
        return dict(self.coeffs).get(tuple(t), 0)

    @cached_property
    def mod2(self) -> frozenset[int]:
        """Triple masks with odd coefficient."""
        return frozenset(_triple_mask(t) for t, v in self.coeffs if v % 2)

    def evaluate_mod2(self, u: int, v: int, w: int) -> int:
        """Value of the mod-2 form on three vectors of F_2^n (as masks)."""
        total = 0
        for m in self.mod2:
            a, b, c = bits(m)
            # 3x3 determinant mod 2 of the rows (u, v, w) restricted to a, b, c
            r = [[x >> a & 1, x >> b & 1, x >> c & 1] for x in (u, v, w)]
            det = (
                r[0][0] * (r[1][1] * r[2][2] + r[1][2] * r[2][1])
                + r[0][1] * (r[1][0] * r[2][2] + r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] + r[1][1] * r[2][0])
            )
            total ^= det & 1
        return total

    def pullback_mod2(self, m: F2Matrix) -> frozenset[int]:
        """Mod-2 triples of the form ``(x, y, z) -> self(Mx, My, Mz)``."""
        cols = m.columns()
        out = set()
        for t in subsets_of_size(self.n, 3):
            i, j, k = bits(t)
            if self.evaluate_mod2(cols[i], cols[j], cols[k]):
                out.add(t)
        return frozenset(out)

    def to_json(self) -> list[dict]:
        return [{"indices": list(t), "value": v} for t, v in self.coeffs]


@dataclass(frozen=True)
class RokhlinMap:
    """Truth table of mu: F_2^n -> F_2, indexed by subset mask."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_DIM:
            raise ValidationError(f"b1={self.n} outside 0..{MAX_DIM}")
        if len(self.values) != 1 << self.n:
            raise ValidationError(
                f"Rokhlin table has {len(self.values)} entries, expected {1 << self.n}"
            )
        object.__setattr__(self, "values", tuple(int(v) & 1 for v in self.values))

    @classmethod
    def from_anf(cls, n: int, monomials: Iterable[int]) -> "RokhlinMap":
        coeffs = [0] * (1 << n)
        for m in monomials:
            coeffs[m] ^= 1
        return cls(n, tuple(moebius_transform(coeffs)))

    @classmethod
    def from_function(cls, n: int, f) -> "RokhlinMap":
        return cls(n, tuple(f(x) & 1 for x in range(1 << n)))

    @classmethod
    def constant(cls, n: int, c: int = 0) -> "RokhlinMap":
        return cls(n, (c & 1,) * (1 << n))

    def __call__(self, mask: int) -> int:
        return self.values[mask]

    @cached_property
    def anf(self) -> tuple[int, ...]:
        return tuple(moebius_transform(self.values))

    @property
    def degree(self) -> int:
        return max((popcount(m) for m, a in enumerate(self.anf) if a), default=-1)

    @property
    def weight(self) -> int:
        return sum(self.values)

    def monomials(self) -> list[int]:
        return [m for m, a in enumerate(self.anf) if a]

    def normalized(self) -> tuple["RokhlinMap", int]:
        """Return ``(mu + mu(0), mu(0))`` so that the base spin structure has value 0."""
        c = self.values[0]
        if not c:
            return self, 0
        return RokhlinMap(self.n, tuple(v ^ 1 for v in self.values)), c

    def encode(self) -> int:
        """Canonical integer encoding of the table (bit x = mu(x))."""
        return sum(v << x for x, v in enumerate(self.values))

    def describe(self) -> str:
        terms = []
        for m in sorted(self.monomials(), key=lambda m: (popcount(m), m)):
            terms.append("1" if m == 0 else "".join(f"x{i + 1}" for i in bits(m)))
        return " + ".join(terms) if terms else "0"


def validate_rokhlin(mu: RokhlinMap, cup: CupForm) -> tuple[RokhlinMap, CupForm]:
    """Check that ``mu`` is cubic with cubic part the mod-2 cup form."""
    if mu.n != cup.n:
        raise ValidationError(f"dimension mismatch: Rokhlin map n={mu.n}, cup form n={cup.n}")
    anf = mu.anf
    for m, a in enumerate(anf):
        if a and popcount(m) > 3:
            raise NotCubic(m, mu.n)
    for t in subsets_of_size(mu.n, 3):
        cup_bit = 1 if t in cup.mod2 else 0
        if anf[t] != cup_bit:
            raise CubicPartMismatch(_mask_triple(t), anf[t], cup_bit)
    return mu, cup


def cubic_part(mu: RokhlinMap) -> dict[int, int]:
    """Degree three ANF coefficients, keyed by triple mask."""
    anf = mu.anf
    return {t: anf[t] for t in subsets_of_size(mu.n, 3)}


def spectral_flow_mod2(mu: RokhlinMap, a: int, b: int) -> int:
    """Mod-2 spectral flow between the Dirac operators of two spin structures."""
    limit = 1 << mu.n
    if not (0 <= a < limit and 0 <= b < limit):
        raise ValidationError("subset outside 1..n")
    return mu(a) ^ mu(b)


@dataclass(frozen=True)
class FamilyInvariant:
    free: tuple[tuple[int, int], ...]
    torsion: tuple[tuple[int, int], ...]
    experimental: bool = False

    def is_zero(self) -> bool:
        return not any(v for _, v in self.free) and not any(v for _, v in self.torsion)


def family_invariant(cup: CupForm, mu: RokhlinMap) -> FamilyInvariant:
    """Free (cup mod 2) and torsion (mod-2 spectral flow) parts of the Dirac family class."""
    validate_rokhlin(mu, cup)
    free = tuple((t, 1 if t in cup.mod2 else 0) for t in subsets_of_size(cup.n, 3))
    torsion = []
    for k in range(1, mu.n + 1):
        if k % 8 in (1, 2):
            for s in subsets_of_size(mu.n, k):
                torsion.append((s, mu(s) ^ mu(0)))
    return FamilyInvariant(free, tuple(torsion), experimental=mu.n > 7)


# ----------------------------------------------------------------------------
# equivalence
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    """``mu1(M x + t) + c = mu0(x)`` for all x, and ``M`` pulls cup1 back to cup0 mod 2."""

    matrix: F2Matrix
    translation: int
    constant: int

    def __post_init__(self) -> None:
        if not self.matrix.is_invertible():
            raise ValidationError("witness matrix is not invertible over F_2")

    def apply(self, x: int) -> int:
        return self.matrix.apply(x) ^ self.translation


def transport(mu: RokhlinMap, cup: CupForm, w: EquivalenceWitness) -> tuple[RokhlinMap, CupForm]:
    """The pair ``(mu1, cup1)`` that ``w`` relates to ``(mu, cup)``."""
    n = mu.n
    table = [0] * (1 << n)
    for x in range(1 << n):
        table[w.apply(x)] = mu(x) ^ w.constant
    inv = w.matrix.inverse()
    return RokhlinMap(n, tuple(table)), CupForm.from_mod2(n, cup.pullback_mod2(inv))


def check_witness(mu0, cup0, mu1, cup1, w: EquivalenceWitness) -> bool:
    if any(mu1(w.apply(x)) ^ w.constant != mu0(x) for x in range(1 << mu0.n)):
        return False
    return cup1.pullback_mod2(w.matrix) == cup0.mod2


def equivalent(
    mu0: RokhlinMap, cup0: CupForm, mu1: RokhlinMap, cup1: CupForm
) -> EquivalenceWitness | None:
    """Search for an affine isomorphism relating the two Rokhlin maps.

    Backtracks over the columns of the linear part, pruning with the values
    of ``mu`` on the span of the columns fixed so far.
    """
    n = mu0.n
    if mu1.n != n or cup0.n != n or cup1.n != n:
        raise ValidationError("equivalence needs equal dimensions")
    if n > EQUIVALENCE_MAX_N:
        raise DimensionTooLarge(f"equivalence search supports n <= {EQUIVALENCE_MAX_N}, got {n}")
    w0, w1 = mu0.weight, mu1.weight
    size = 1 << n
    if w0 != w1 and w0 != size - w1:
        return None

    for c in (0, 1):
        if c == 0 and w0 != w1 or c == 1 and w0 != size - w1:
            continue
        for t in range(size):
            if mu1(t) ^ c != mu0(0):
                continue
            cols = _extend_columns(mu0, mu1, t, c, [], [0], Echelon(), cup0, cup1)
            if cols is not None:
                return EquivalenceWitness(F2Matrix.from_columns(cols, n), t, c)
    return None


def _extend_columns(mu0, mu1, t, c, cols, images, ech, cup0, cup1):
    """``images[x]`` is ``M x`` for every x supported on the first len(cols) coordinates."""
    n = mu0.n
    k = len(cols)
    if k == n:
        m = F2Matrix.from_columns(cols, n)
        return cols if cup1.pullback_mod2(m) == cup0.mod2 else None
    for v in range(1, 1 << n):
        if ech.contains(v):
            continue
        new_images = images + [img ^ v for img in images]
        ok = True
        for low in range(len(images)):
            x = low | (1 << k)
            if mu1(new_images[x] ^ t) ^ c != mu0(x):
                ok = False
                break
        if not ok:
            continue
        e2 = Echelon()
        for col in cols + [v]:
            e2.add(col)
        found = _extend_columns(mu0, mu1, t, c, cols + [v], new_images, e2, cup0, cup1)
        if found is not None:
            return found
    return None


# ----------------------------------------------------------------------------
# orbit classification
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    representative: RokhlinMap
    size: int
    weights: tuple[int, int]
    members: tuple[int, ...] = field(repr=False, default=())


def cubic_family(n: int, cubic: Iterable[int], max_degree: int = 2) -> list[RokhlinMap]:
    """All Rokhlin maps with the given cubic monomials and free lower-degree part."""
    cubic = sorted(set(cubic))
    for m in cubic:
        if popcount(m) != 3 or m >> n:
            raise ValidationError(f"{subset_string(m)!r} is not a cubic monomial for n={n}")
    lower = [m for m in range(1 << n) if popcount(m) <= max_degree]
    out = []
    for choice in product((0, 1), repeat=len(lower)):
        monos = [m for m, bit in zip(lower, choice) if bit] + cubic
        out.append(RokhlinMap.from_anf(n, monos))
    return out


def classify_orbits(n: int, cubic: Iterable[int], max_degree: int = 2) -> list[Orbit]:
    """Group the cubic family into affine-equivalence orbits (n <= 3).

    Orbits are generated by applying every affine map and constant shift that
    preserves the cubic part; each orbit is reported with its smallest table
    as representative and the unordered value count ``(#mu^-1(a), #mu^-1(b))``.
    """
    if n > 3:
        raise DimensionTooLarge(f"orbit classification supports n <= 3, got {n}")
    cubic = frozenset(cubic)
    family = cubic_family(n, cubic, max_degree)
    cup = CupForm.from_mod2(n, cubic)
    codes = {mu.encode() for mu in family}
    group = []
    for m in all_invertible(n):
        if cup.pullback_mod2(m) != cup.mod2:
            continue
        for t in range(1 << n):
            for c in (0, 1):
                group.append(EquivalenceWitness(m, t, c))

    seen: set[int] = set()
    orbits = []
    for mu in sorted(family, key=RokhlinMap.encode):
        code = mu.encode()
        if code in seen:
            continue
        members = set()
        for w in group:
            image, _ = transport(mu, cup, w)
            members.add(image.encode())
        members &= codes
        seen |= members
        w1 = mu.weight
        weights = tuple(sorted((w1, (1 << n) - w1)))
        rep = RokhlinMap(n, tuple(min(members) >> x & 1 for x in range(1 << n)))
        orbits.append(Orbit(rep, len(members), weights, tuple(sorted(members))))
    orbits.sort(key=lambda o: o.representative.encode())
    return orbits


# ----------------------------------------------------------------------------
# quadratic refinements and the Arf invariant
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticForm:
    """``q(x) = sum(linear_i x_i) + sum(x_i x_j for (i, j) in quadratic)`` on F_2^{2g}.

    Coordinates are 0-based; the symplectic pairs are ``(2k, 2k+1)``.
    """

    g: int
    linear: tuple[int, ...]
    quadratic: frozenset[tuple[int, int]]

    @classmethod
    def build(cls, g: int, linear: Iterable[int] = (), quadratic: Iterable[tuple[int, int]] = ()):
        lin = [0] * (2 * g)
        for i in linear:
            lin[i] ^= 1
        quad: set[tuple[int, int]] = set()
        for i, j in quadratic:
            key = (min(i, j), max(i, j))
            quad ^= {key}
        return cls(g, tuple(lin), frozenset(quad))

    @classmethod
    def direct_sum(cls, a: "QuadraticForm", b: "QuadraticForm") -> "QuadraticForm":
        off = 2 * a.g
        return cls(
            a.g + b.g,
            a.linear + b.linear,
            a.quadratic | {(i + off, j + off) for i, j in b.quadratic},
        )

    def __call__(self, x: int) -> int:
        v = 0
        for i in bits(x):
            v ^= self.linear[i]
        for i, j in self.quadratic:
            v ^= (x >> i) & (x >> j) & 1
        return v


def intersection(g: int, x: int, y: int) -> int:
    """Standard symplectic pairing on F_2^{2g}."""
    even = int("01" * g, 2) if g else 0
    odd = even << 1
    return parity(((x & even) << 1 & y) | ((x & odd) >> 1 & y))


def is_refinement(q: QuadraticForm) -> bool:
    size = 1 << (2 * q.g)
    for x in range(size):
        qx = q(x)
        for y in range(size):
            if q(x ^ y) ^ qx ^ q(y) != intersection(q.g, x, y):
                return False
    return True


def arf(q: QuadraticForm) -> int:
    """Arf invariant: the value ``q`` takes on the majority of F_2^{2g}."""
    if not is_refinement(q):
        raise NotARefinement("form does not refine the standard intersection pairing")
    size = 1 << (2 * q.g)
    ones = sum(q(x) for x in range(size))
    return 1 if 2 * ones > size else 0
