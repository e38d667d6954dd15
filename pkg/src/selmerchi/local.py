"""Per-prime data: reduction classification and the assembled local packet."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from sympy import isprime

from .counting import trace_of_frobenius
from .curves import WeierstrassCurve, minimal_model, reduce_mod, valuation
from .tate import ADDITIVE, GOOD, NONSPLIT, SPLIT, tate_algorithm


class ReductionType(str, Enum):
    GOOD_ORDINARY = "good_ordinary"
    GOOD_SUPERSINGULAR = "good_supersingular"
    SPLIT_MULTIPLICATIVE = "split_multiplicative"
    NONSPLIT_MULTIPLICATIVE = "nonsplit_multiplicative"
    ADDITIVE = "additive"

    @property
    def is_good(self) -> bool:
        return self in (ReductionType.GOOD_ORDINARY, ReductionType.GOOD_SUPERSINGULAR)


def _p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


@dataclass(frozen=True)
class LocalData:
    """Everything the Euler characteristic formula needs at one prime."""

    prime: int
    reduction: ReductionType
    a_q: int | None  # trace of Frobenius; only for good reduction
    kodaira: str
    conductor_exp: int
    tamagawa: int

    def __post_init__(self):
        if self.a_q is not None:
            assert self.a_q * self.a_q <= 4 * self.prime, "Hasse bound violated"
        if self.reduction.is_good:
            assert (self.kodaira, self.conductor_exp, self.tamagawa) == ("I0", 0, 1)

    def point_count(self) -> int | None:
        """|E~(F_q)| for good reduction, else None."""
        if self.a_q is None:
            return None
        return self.prime + 1 - self.a_q

    def tamagawa_p_part(self, p: int) -> int:
        return _p_part(self.tamagawa, p)

    def d_p_part(self, p: int) -> int | None:
        """p-part of |E~(F_p)|; defined only at q = p with good reduction."""
        if self.prime != p or not self.reduction.is_good:
            return None
        return _p_part(self.point_count(), p)

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "reduction": self.reduction.value,
            "a_q": self.a_q,
            "kodaira": self.kodaira,
            "conductor_exp": self.conductor_exp,
            "tamagawa": self.tamagawa,
        }

    @staticmethod
    def from_dict(d: dict) -> "LocalData":
        return LocalData(
            prime=d["prime"],
            reduction=ReductionType(d["reduction"]),
            a_q=d["a_q"],
            kodaira=d["kodaira"],
            conductor_exp=d["conductor_exp"],
            tamagawa=d["tamagawa"],
        )


def _trace_at_two(c: WeierstrassCurve) -> int:
    """a_2 for a curve with good reduction at 2, by direct enumeration of F_2^2."""
    red = reduce_mod(c, 2)
    a1, a2, a3, a4, a6 = red.ainvs()
    n = 1
    for x in (0, 1):
        for y in (0, 1):
            if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                n += 1
    return 2 + 1 - n


def classify_reduction(c: WeierstrassCurve, q: int) -> ReductionType:
    """Reduction type at an odd prime q, computed on the global minimal model."""
    if q == 2 or not isprime(q):
        raise ValueError("classification needs an odd prime")
    cmin, _ = minimal_model(c)
    if valuation(cmin.delta, q) == 0:
        a_q = trace_of_frobenius(reduce_mod(cmin, q))
        return (
            ReductionType.GOOD_SUPERSINGULAR
            if a_q % q == 0
            else ReductionType.GOOD_ORDINARY
        )
    res = tate_algorithm(cmin, q)
    return {
        SPLIT: ReductionType.SPLIT_MULTIPLICATIVE,
        NONSPLIT: ReductionType.NONSPLIT_MULTIPLICATIVE,
        ADDITIVE: ReductionType.ADDITIVE,
    }[res.reduction]


def local_data(c: WeierstrassCurve, q: int) -> LocalData:
    """Full local packet at q (q = 2 allowed: Tamagawa numbers are needed there)."""
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    cmin, _ = minimal_model(c)
    res = tate_algorithm(cmin, q)
    if res.reduction == GOOD:
        if q == 2:
            a_q = _trace_at_two(cmin)
        else:
            a_q = trace_of_frobenius(reduce_mod(cmin, q))
        red = (
            ReductionType.GOOD_SUPERSINGULAR
            if a_q % q == 0
            else ReductionType.GOOD_ORDINARY
        )
        return LocalData(q, red, a_q, "I0", 0, 1)
    red = {
        SPLIT: ReductionType.SPLIT_MULTIPLICATIVE,
        NONSPLIT: ReductionType.NONSPLIT_MULTIPLICATIVE,
        ADDITIVE: ReductionType.ADDITIVE,
    }[res.reduction]
    return LocalData(q, red, None, res.kodaira, res.conductor_exp, res.tamagawa)


def local_packet(c: WeierstrassCurve, q: int, p: int) -> LocalData:
    """Local data at q, for use in the p-formula; both primes must be odd."""
    if q == 2 or p == 2 or not isprime(q) or not isprime(p):
        raise ValueError("local packets are defined for odd primes q and p")
    return local_data(c, q)


def bad_primes(c: WeierstrassCurve) -> list[int]:
    """Primes of bad reduction of the minimal model, ascending."""
    from sympy import factorint

    cmin, _ = minimal_model(c)
    return sorted(factorint(abs(int(cmin.delta))).keys())
