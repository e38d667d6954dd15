"""Weierstrass models over Q: invariants, transforms, global minimal models, reduction.

Coefficients are exact `Fraction`s; all invariant identities are verified at
construction time.  Minimisation follows the Laska-Kraus-Connell procedure,
so one canonical reduced model serves every local computation downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from sympy import factorint

from .errors import NonRational, NotIntegralAt, SingularModel

Rat = Fraction


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise NonRational(f"cannot parse {x!r} as a rational") from exc
    if isinstance(x, float):
        raise NonRational("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    raise NonRational(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction
    b2: Fraction = field(init=False)
    b4: Fraction = field(init=False)
    b6: Fraction = field(init=False)
    b8: Fraction = field(init=False)
    c4: Fraction = field(init=False)
    c6: Fraction = field(init=False)
    delta: Fraction = field(init=False)
    label: str | None = None

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        delta = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if delta == 0:
            raise SingularModel(f"discriminant vanishes for a-invariants {self.ainvs()}")
        # self-checks: standard identities must hold exactly
        assert 4 * b8 == b2 * b6 - b4 * b4
        assert 1728 * delta == c4 ** 3 - c6 ** 2
        object.__setattr__(self, "b2", b2)
        object.__setattr__(self, "b4", b4)
        object.__setattr__(self, "b6", b6)
        object.__setattr__(self, "b8", b8)
        object.__setattr__(self, "c4", c4)
        object.__setattr__(self, "c6", c6)
        object.__setattr__(self, "delta", delta)

    def ainvs(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs())

    def __str__(self):
        coeffs = ",".join(str(a) for a in self.ainvs())
        return f"[{coeffs}]" if self.label is None else f"{self.label} [{coeffs}]"


def new_curve(a1, a2, a3, a4, a6, label=None) -> WeierstrassCurve:
    """Build a curve from five exact rationals; rejects delta = 0."""
    return WeierstrassCurve(
        _to_fraction(a1), _to_fraction(a2), _to_fraction(a3),
        _to_fraction(a4), _to_fraction(a6), label=label,
    )


def parse_curve(text: str, label=None) -> WeierstrassCurve:
    """Parse the CLI/batch text format "a1,a2,a3,a4,a6" (integer or p/q entries)."""
    parts = [p for p in text.split(",")]
    if len(parts) != 5:
        raise NonRational(f"expected 5 comma-separated coefficients, got {len(parts)}")
    return new_curve(*parts, label=label)


@dataclass(frozen=True)
class ModelTransform:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + u^2 s x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def __post_init__(self):
        if self.u == 0:
            raise ValueError("transform scale u must be nonzero")

    @staticmethod
    def identity() -> "ModelTransform":
        return ModelTransform(Rat(1), Rat(0), Rat(0), Rat(0))

    def is_identity(self) -> bool:
        return (self.u, self.r, self.s, self.t) == (1, 0, 0, 0)

    def compose(self, other: "ModelTransform") -> "ModelTransform":
        """This transform followed by `other` (acting on the resulting model)."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return ModelTransform(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1 * u1 * s1 * r2 + u1 ** 3 * t2,
        )

    def inverse(self) -> "ModelTransform":
        u, r, s, t = self.u, self.r, self.s, self.t
        return ModelTransform(1 / u, -r / u ** 2, -s / u, (r * s - t) / u ** 3)

    def apply(self, c: WeierstrassCurve) -> WeierstrassCurve:
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = c.ainvs()
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        na3 = (a3 + r * a1 + 2 * t) / u ** 3
        na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
        na6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
        return WeierstrassCurve(na1, na2, na3, na4, na6, label=c.label)

    def apply_point(self, pt):
        """Map an affine point of the source model to the target model."""
        if pt is None:
            return None
        x, y = pt
        u, r, s, t = self.u, self.r, self.s, self.t
        nx = (x - r) / (u * u)
        ny = (y - s * (x - r) - t) / u ** 3
        return (nx, ny)


@dataclass(frozen=True)
class CurveOverFp:
    """Reduction of an (integral-at-q) model modulo q."""

    q: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    singular: bool

    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)


def valuation(x: Fraction, q: int) -> int | None:
    """q-adic valuation of a rational; None encodes +infinity (x = 0)."""
    if x == 0:
        return None
    v = 0
    n = x.numerator
    while n % q == 0:
        n //= q
        v += 1
    d = x.denominator
    while d % q == 0:
        d //= q
        v -= 1
    return v


def reduce_mod(c: WeierstrassCurve, q: int) -> CurveOverFp:
    """Reduce coefficients mod q; flags singularity when q | delta."""
    for a in c.ainvs():
        if a.denominator % q == 0:
            raise NotIntegralAt(q)
    coeffs = tuple(int(a.numerator * pow(a.denominator, -1, q)) % q for a in c.ainvs())
    v = valuation(c.delta, q)
    singular = v is None or v > 0
    return CurveOverFp(q, *coeffs, singular=singular)


# ---------------------------------------------------------------------------
# Laska-Kraus-Connell global minimal model

def _kraus_admissible(c4: int, c6: int) -> bool:
    """Does some integral model have invariants (c4, c6)?

    Assumes (c4^3 - c6^2)/1728 is a nonzero integer, which our callers
    guarantee; then the obstructions live at 2 and 3 only.
    """
    # at 3: v3(c6) != 2
    if c6 % 9 == 0 and c6 % 27 != 0:
        return False
    # at 2
    if c6 % 4 == 3:
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _curve_from_c_invariants(c4: int, c6: int) -> WeierstrassCurve:
    """Reconstruct the reduced integral model with the given invariants."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, rem = divmod(b2 * b2 - c4, 24)
    assert rem == 0, "b4 reconstruction failed; invariants not admissible"
    b6, rem = divmod(-b2 ** 3 + 36 * b2 * b4 - c6, 216)
    assert rem == 0, "b6 reconstruction failed; invariants not admissible"
    a1 = b2 % 2
    a2 = (b2 - a1) // 4
    a3 = b6 % 2
    a4, rem = divmod(b4 - a1 * a3, 2)
    assert rem == 0
    a6, rem = divmod(b6 - a3, 4)
    assert rem == 0
    curve = new_curve(a1, a2, a3, a4, a6)
    assert (curve.c4, curve.c6) == (c4, c6)
    return curve


def _solve_transform(src: WeierstrassCurve, dst: WeierstrassCurve, u: Fraction) -> ModelTransform:
    """The unique (u, r, s, t) carrying src to dst for the given scale u."""
    s = (u * dst.a1 - src.a1) / 2
    r = (u ** 2 * dst.a2 - src.a2 + s * src.a1 + s * s) / 3
    t = (u ** 3 * dst.a3 - src.a3 - r * src.a1) / 2
    tr = ModelTransform(u, r, s, t)
    assert tr.apply(src).ainvs() == dst.ainvs()
    return tr


def minimal_model(c: WeierstrassCurve) -> tuple[WeierstrassCurve, ModelTransform]:
    """Global minimal (reduced) model over Q and the transform reaching it.

    Idempotent: feeding the output back returns the identity transform.
    """
    # clear denominators: scaling by u = 1/n multiplies a_i by n^i
    n = lcm(*(a.denominator for a in c.ainvs()))
    work = ModelTransform(Rat(1, n), Rat(0), Rat(0), Rat(0)).apply(c) if n > 1 else c

    c4, c6, delta = int(work.c4), int(work.c6), int(work.delta)
    exps: dict[int, int] = {}
    for q, e in factorint(abs(delta)).items():
        if e < 12:
            continue
        ec4 = valuation(Fraction(c4), q)
        ec6 = valuation(Fraction(c6), q)
        bound = e // 12
        if ec4 is not None:
            bound = min(bound, ec4 // 4)
        if ec6 is not None:
            bound = min(bound, ec6 // 6)
        if bound > 0:
            exps[q] = bound

    def scaled(es):
        u = 1
        for q, e in es.items():
            u *= q ** e
        return u, c4 // u ** 4, c6 // u ** 6

    u_int, c4m, c6m = scaled(exps)
    # Kraus obstructions can force one step down at 2 and at 3
    while not _kraus_admissible(c4m, c6m):
        if c6m % 9 == 0 and c6m % 27 != 0 and exps.get(3, 0) > 0:
            exps[3] -= 1
        elif exps.get(2, 0) > 0:
            exps[2] -= 1
        else:
            raise AssertionError("minimisation failed to reach an admissible pair")
        u_int, c4m, c6m = scaled(exps)

    minimal = _curve_from_c_invariants(c4m, c6m)
    if minimal.ainvs() == c.ainvs():
        return WeierstrassCurve(*c.ainvs(), label=c.label), ModelTransform.identity()
    u_total = Fraction(u_int, n)
    tr = _solve_transform(c, minimal, u_total)
    minimal = WeierstrassCurve(*minimal.ainvs(), label=c.label)
    return minimal, tr
