"""Hypothesis checking and assembly of the Euler characteristic.

The value assembled here is

    sha_p / torsion_p^2  x  prod over finite places of the p-part of the
    Tamagawa number  x  prod over ordinary places above p of d^2,

an exact (signed) power of p.  The Sha order is always an input: finiteness
of the full Selmer group cannot be checked by this tool and is carried as an
explicit assertion everywhere.

Sign vectors index the supersingular places above p.  The assembled value
does not depend on the signs; what the signs control is which hypothesis set
applies (the local-degree condition is waived exactly on the all-minus
vector).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .counting import trace_of_frobenius
from .curves import WeierstrassCurve, minimal_model, reduce_mod
from .errors import (
    EvenOrCompositeP,
    HypothesisFailure,
    NonFiniteInvariants,
    NonPPower,
    PrecisionExhausted,
    SignLengthMismatch,
    TooManySigns,
)
from .local import LocalData, ReductionType, _p_part, bad_primes, local_data

SignVector = tuple[str, ...]

MAX_SIGN_RANK = 10


def parse_signs(text: str) -> SignVector:
    signs = tuple(text.strip()) if text and text.strip() else ()
    for s in signs:
        if s not in "+-":
            raise ValueError(f"sign vector may only contain + and -, got {text!r}")
    return signs


def _check_p(p: int) -> None:
    if p == 2 or not isprime(p):
        raise EvenOrCompositeP(f"p must be an odd prime, got {p}")


def p_power_exponent(value: int, p: int) -> int:
    """Exponent k with value = p^k; raises NonPPower otherwise."""
    if value < 1:
        raise NonPPower(f"{value} is not a power of {p}")
    k = 0
    while value % p == 0:
        value //= p
        k += 1
    if value != 1:
        raise NonPPower(f"{value * p ** k} is not a power of {p}")
    return k


# ---------------------------------------------------------------------------
# normalised local input

@dataclass(frozen=True)
class PlaceAboveP:
    """One place above p, with exactly the data the formula consumes."""

    label: str
    ramification: int  # e
    residue_degree: int  # f
    reduction: ReductionType
    a: int | None = None
    d_p_part: int | None = None  # p-part of the reduced point count (good only)
    tamagawa_p_part: int = 1
    base_is_qp: bool = True
    unramified_over_base: bool = True

    def __post_init__(self):
        if self.ramification < 1 or self.residue_degree < 1:
            raise ValueError("ramification and residue degrees must be positive")
        if (self.d_p_part is not None) != self.reduction.is_good:
            raise ValueError("d_p_part must be present exactly for good reduction")

    @property
    def local_degree(self) -> int:
        return self.ramification * self.residue_degree

    @property
    def supersingular(self) -> bool:
        return self.reduction == ReductionType.GOOD_SUPERSINGULAR


@dataclass(frozen=True)
class FieldLocalData:
    """User-supplied local arithmetic of a general base field."""

    p: int
    primes_above_p: tuple[PlaceAboveP, ...]
    away_tamagawa_p_parts: tuple[tuple[str, int], ...]
    torsion_p_part: int
    sha_p_order: int
    selmer_finite_asserted: bool

    def __post_init__(self):
        _check_p(self.p)
        p_power_exponent(self.torsion_p_part, self.p)
        p_power_exponent(self.sha_p_order, self.p)
        for place in self.primes_above_p:
            if place.d_p_part is not None:
                p_power_exponent(place.d_p_part, self.p)
            p_power_exponent(place.tamagawa_p_part, self.p)
        for _, value in self.away_tamagawa_p_parts:
            p_power_exponent(value, self.p)


@dataclass(frozen=True)
class LocalPicture:
    """Common normalised form behind both the curve and field-data modes."""

    p: int
    places_above_p: tuple[PlaceAboveP, ...]
    away_tamagawa_p_parts: tuple[tuple[str, int], ...]
    torsion_p_part: int
    notes: tuple[str, ...] = ()

    @property
    def supersingular_places(self) -> tuple[PlaceAboveP, ...]:
        return tuple(w for w in self.places_above_p if w.supersingular)


def picture_from_curve(c: WeierstrassCurve, p: int) -> LocalPicture:
    """Local picture of a curve over Q: one place above p, away places from delta."""
    from .torsion import torsion_p_part as torsion_part

    _check_p(p)
    cmin, _ = minimal_model(c)
    rows = {q: local_data(cmin, q) for q in bad_primes(cmin)}
    if p not in rows:
        a_p = trace_of_frobenius(reduce_mod(cmin, p))
        red = (
            ReductionType.GOOD_SUPERSINGULAR
            if a_p % p == 0
            else ReductionType.GOOD_ORDINARY
        )
        rows[p] = LocalData(p, red, a_p, "I0", 0, 1)
    return picture_from_rows(rows, p, torsion_part(cmin, p))


def picture_from_rows(rows: dict[int, LocalData], p: int, torsion_p: int) -> LocalPicture:
    """Assemble the picture from precomputed per-prime local data."""
    at_p = rows[p]
    place = PlaceAboveP(
        label=str(p),
        ramification=1,
        residue_degree=1,
        reduction=at_p.reduction,
        a=at_p.a_q,
        d_p_part=at_p.d_p_part(p),
        tamagawa_p_part=at_p.tamagawa_p_part(p),
    )
    away = tuple(
        (str(q), rows[q].tamagawa_p_part(p)) for q in sorted(rows) if q != p
    )
    return LocalPicture(p, (place,), away, torsion_p)


def picture_from_field_data(fd: FieldLocalData) -> LocalPicture:
    return LocalPicture(
        fd.p, fd.primes_above_p, fd.away_tamagawa_p_parts, fd.torsion_p_part
    )


def _as_picture(source, p: int) -> LocalPicture:
    if isinstance(source, LocalPicture):
        if source.p != p:
            raise ValueError(f"picture is for p={source.p}, not p={p}")
        return source
    if isinstance(source, FieldLocalData):
        if source.p != p:
            raise ValueError(f"field data is for p={source.p}, not p={p}")
        return picture_from_field_data(source)
    if isinstance(source, WeierstrassCurve):
        return picture_from_curve(source, p)
    raise TypeError(f"cannot interpret {type(source).__name__} as local input")


# ---------------------------------------------------------------------------
# hypotheses

PASS = "pass"
FAIL = "fail"
WAIVED = "waived"


@dataclass(frozen=True)
class CheckStatus:
    status: str
    reason: str | None = None

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _pass() -> CheckStatus:
    return CheckStatus(PASS)


@dataclass(frozen=True)
class HypothesisReport:
    s1: CheckStatus
    s2: CheckStatus
    s3: CheckStatus
    s4: CheckStatus
    selmer_finiteness: str  # "asserted" | "not_asserted"
    overall: bool
    sign_vector: SignVector
    supersingular_count: int
    notes: tuple[str, ...] = field(default_factory=tuple)

    def failures(self) -> list[str]:
        out = []
        for name in ("s1", "s2", "s3", "s4"):
            check: CheckStatus = getattr(self, name)
            if check.failed:
                out.append(f"{name}: {check.reason}")
        return out


def check_hypotheses(
    source, p: int, signs: SignVector, selmer_finite_asserted: bool = False
) -> HypothesisReport:
    """Evaluate the four standing hypotheses for the given sign vector."""
    _check_p(p)
    pic = _as_picture(source, p)
    ss = pic.supersingular_places
    r = len(ss)
    if len(signs) != r:
        raise SignLengthMismatch(
            f"sign vector has length {len(signs)} but there are {r} supersingular"
            f" places above {p}"
        )
    notes = list(pic.notes)

    bad = [w.label for w in pic.places_above_p if not w.reduction.is_good]
    if bad:
        s1 = CheckStatus(FAIL, f"bad reduction above p at: {', '.join(bad)}")
    else:
        s1 = _pass()
    if r == 0 and not bad:
        notes.append(
            "no supersingular place above p: the classical ordinary-case formula"
            " applies (empty supersingular product)"
        )

    s2_problems = []
    for w in ss:
        if not w.base_is_qp:
            s2_problems.append(f"{w.label}: base completion is not Q_p")
        if w.a != 0:
            s2_problems.append(f"{w.label}: a = {w.a} != 0")
    s2 = CheckStatus(FAIL, "; ".join(s2_problems)) if s2_problems else _pass()

    s3_problems = [
        f"{w.label}: ramified over the base field"
        for w in ss
        if not w.unramified_over_base
    ]
    s3 = CheckStatus(FAIL, "; ".join(s3_problems)) if s3_problems else _pass()

    all_minus = r >= 1 and all(s == "-" for s in signs)
    if all_minus:
        s4 = CheckStatus(WAIVED, "all signs are -, so the local-degree condition is not needed")
    else:
        s4_problems = [
            f"{w.label}: local degree {w.local_degree} is divisible by 4"
            for w in ss
            if w.local_degree % 4 == 0
        ]
        s4 = CheckStatus(FAIL, "; ".join(s4_problems)) if s4_problems else _pass()

    finiteness = "asserted" if selmer_finite_asserted else "not_asserted"
    overall = (
        not any(c.failed for c in (s1, s2, s3, s4)) and selmer_finite_asserted
    )
    return HypothesisReport(
        s1, s2, s3, s4, finiteness, overall, tuple(signs), r, tuple(notes)
    )


# ---------------------------------------------------------------------------
# the formula

@dataclass(frozen=True)
class EulerCharBreakdown:
    sha_p: int
    torsion_p_sq: int
    tamagawa_product_p_part: int
    ordinary_d_sq_product: int


@dataclass(frozen=True)
class EulerCharResult:
    p: int
    chi_exponent: int
    breakdown: EulerCharBreakdown
    sign_vector_used: SignVector
    notes: tuple[str, ...]

    @property
    def chi(self):
        """Exact power of p; a Fraction when the exponent is negative."""
        if self.chi_exponent >= 0:
            return self.p ** self.chi_exponent
        return Fraction(1, self.p ** (-self.chi_exponent))


def euler_char(
    source,
    p: int,
    signs: SignVector,
    sha_p_order: int,
    selmer_finite_asserted: bool = False,
    override_hypotheses: bool = False,
) -> EulerCharResult:
    """Assemble the predicted Euler characteristic as an exact power of p."""
    _check_p(p)
    sha_exp = p_power_exponent(sha_p_order, p)
    pic = _as_picture(source, p)
    report = check_hypotheses(pic, p, signs, selmer_finite_asserted)
    notes = list(report.notes)
    if not report.overall:
        if not override_hypotheses:
            raise HypothesisFailure(report)
        notes.append(
            "hypotheses did not all pass; value computed under an explicit override"
        )
        notes.extend(report.failures())
        if not selmer_finite_asserted:
            notes.append("Selmer finiteness was not asserted")

    tors_exp = p_power_exponent(pic.torsion_p_part, p)
    tam_exp = 0
    for w in pic.places_above_p:
        tam_exp += p_power_exponent(w.tamagawa_p_part, p)
    for _, value in pic.away_tamagawa_p_parts:
        tam_exp += p_power_exponent(value, p)
    d_exp = 0
    for w in pic.places_above_p:
        if w.reduction == ReductionType.GOOD_ORDINARY:
            d_exp += 2 * p_power_exponent(w.d_p_part, p)

    chi_exp = sha_exp - 2 * tors_exp + tam_exp + d_exp
    if chi_exp < 0:
        notes.append(
            "warning: negative exponent; the true Euler characteristic is a"
            " positive integer, so the inputs are inconsistent"
        )
    notes.append("the assembled value does not depend on the sign vector")
    return EulerCharResult(
        p,
        chi_exp,
        EulerCharBreakdown(
            p ** sha_exp, p ** (2 * tors_exp), p ** tam_exp, p ** d_exp
        ),
        tuple(signs),
        tuple(notes),
    )


@dataclass(frozen=True)
class SignSweepOutcome:
    consistent: bool
    values: tuple[tuple[SignVector, int], ...]  # (signs, chi_exponent)
    hypothesis_failures: tuple[tuple[SignVector, tuple[str, ...]], ...]


def sign_independence(
    source, p: int, sha_p_order: int, selmer_finite_asserted: bool = True
) -> SignSweepOutcome:
    """Evaluate every sign vector and confirm all passing ones agree."""
    pic = _as_picture(source, p)
    r = len(pic.supersingular_places)
    if r < 1:
        raise ValueError("sign sweep needs at least one supersingular place")
    if r > MAX_SIGN_RANK:
        raise TooManySigns(f"2^{r} sign vectors exceed the sweep guard")
    values = []
    failures = []
    for signs in itertools.product("+-", repeat=r):
        try:
            res = euler_char(pic, p, signs, sha_p_order, selmer_finite_asserted)
            values.append((signs, res.chi_exponent))
        except HypothesisFailure as exc:
            failures.append((signs, tuple(exc.report.failures())))
    consistent = len({e for _, e in values}) <= 1
    return SignSweepOutcome(consistent, tuple(values), tuple(failures))


@dataclass(frozen=True)
class VanishingConclusions:
    asserted: SignVector
    conclusions: tuple[SignVector, ...]
    note: str


def propagate_vanishing(source, p: int, asserted: SignVector) -> VanishingConclusions:
    """From one vanishing signed Selmer group, conclude all of them vanish.

    Theorem-derived inference: the tool verifies the standing hypotheses, not
    the vanishing assertion itself.  Vanishing of the asserted group forces
    the full Selmer group over the base to vanish, so finiteness holds.
    """
    pic = _as_picture(source, p)
    r = len(pic.supersingular_places)
    if len(asserted) != r:
        raise SignLengthMismatch(
            f"asserted vector has length {len(asserted)}, expected {r}"
        )
    if r > MAX_SIGN_RANK:
        raise TooManySigns(f"2^{r} sign vectors exceed the sweep guard")
    for signs in itertools.product("+-", repeat=r):
        report = check_hypotheses(pic, p, signs, selmer_finite_asserted=True)
        if report.failures():
            raise HypothesisFailure(report)
    conclusions = tuple(itertools.product("+-", repeat=r))
    return VanishingConclusions(
        tuple(asserted),
        conclusions,
        "vanishing of one signed Selmer group propagates to all 2^r of them;"
        " finiteness of the base Selmer group follows from the assertion",
    )


# ---------------------------------------------------------------------------
# characteristic-series evaluation

@dataclass(frozen=True)
class LambdaSeries:
    """Finite-precision characteristic series in the Iwasawa variable T."""

    p: int
    coeffs: tuple[int, ...]
    precision: int = 64

    def __post_init__(self):
        _check_p(self.p)
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        if not self.coeffs or all(c == 0 for c in self.coeffs):
            raise ValueError("series must have a nonzero coefficient")

    def constant_term(self) -> int:
        return self.coeffs[0]


def lambda_euler_char(series: LambdaSeries) -> int:
    """p^(v_p(f(0))) for a series with finite invariants; errors otherwise."""
    c0 = series.constant_term()
    if c0 == 0:
        raise NonFiniteInvariants("constant term vanishes: Euler characteristic undefined")
    v = 0
    while c0 % series.p == 0:
        c0 //= series.p
        v += 1
    if v >= series.precision:
        raise PrecisionExhausted(
            f"v_p of the constant term reaches the declared precision {series.precision}"
        )
    return series.p ** v


def multiply_series(f: LambdaSeries, g: LambdaSeries) -> LambdaSeries:
    """Product series, at the weaker of the two precisions."""
    if f.p != g.p:
        raise ValueError("series must share the prime")
    coeffs = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            coeffs[i + j] += a * b
    return LambdaSeries(f.p, tuple(coeffs), min(f.precision, g.precision))
