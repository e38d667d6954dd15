"""Rational torsion via Nagell-Lutz, and the supersingular torsion-vanishing check.

Candidate points are collected on the scaled short model
Y^2 = X^3 - 27 c4 X - 54 c6 (integral whenever the source model is), validated
by checking that some multiple <= 12 is the identity, and mapped back to the
minimal model.  Orders are capped at 12 by Mazur's theorem, which is what
kills Nagell-Lutz candidates of infinite order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .curves import ModelTransform, WeierstrassCurve, minimal_model, new_curve
from .local import ReductionType, _p_part, classify_reduction

Point = tuple[Fraction, Fraction] | None  # None is the identity

MAZUR_MAX_ORDER = 12


def negate(c: WeierstrassCurve, P: Point) -> Point:
    if P is None:
        return None
    x, y = P
    return (x, -y - c.a1 * x - c.a3)


def add(c: WeierstrassCurve, P: Point, Q: Point) -> Point:
    """Chord-and-tangent addition on a long Weierstrass model."""
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = c.ainvs()
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        nu = (-(x1 ** 3) + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def multiply(c: WeierstrassCurve, k: int, P: Point) -> Point:
    if k < 0:
        return multiply(c, -k, negate(c, P))
    R: Point = None
    while k:
        if k & 1:
            R = add(c, R, P)
        P = add(c, P, P)
        k >>= 1
    return R


def on_curve(c: WeierstrassCurve, P: Point) -> bool:
    if P is None:
        return True
    x, y = P
    return (
        y * y + c.a1 * x * y + c.a3 * y
        == x ** 3 + c.a2 * x * x + c.a4 * x + c.a6
    )


@dataclass(frozen=True)
class TorsionInfo:
    group_structure: str  # "trivial", "Z/n", or "Z/2 x Z/2m"
    order: int
    generators: tuple[Point, ...]
    points: tuple[Point, ...]  # all affine torsion points, on the minimal model

    def p_part(self, p: int) -> int:
        return _p_part(self.order, p)


def _integer_roots_monic_cubic(a: int, b: int) -> list[int]:
    """Integer roots of X^3 + a X + b, by exact divisor search."""
    if b == 0:
        roots = [0]
        # remaining factor X^2 + a
        if a < 0:
            s = _isqrt_exact(-a)
            if s is not None:
                roots += [s, -s]
        return roots
    roots = []
    for d in _divisors(abs(b)):
        for r in (d, -d):
            if r ** 3 + a * r + b == 0:
                roots.append(r)
    return sorted(set(roots))


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    s = isqrt(n)
    return s if s * s == n else None


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return divs


def _point_order(c: WeierstrassCurve, P: Point) -> int | None:
    """Order of P if it divides one of Mazur's admissible orders, else None."""
    R = P
    for k in range(1, MAZUR_MAX_ORDER + 1):
        if R is None:
            assert k != 11, "order 11 contradicts Mazur's theorem"
            return k
        R = add(c, R, P)
    return None


def torsion_subgroup(c: WeierstrassCurve) -> TorsionInfo:
    """The full rational torsion subgroup, points given on the minimal model."""
    cmin, _ = minimal_model(c)
    short = new_curve(0, 0, 0, -27 * cmin.c4, -54 * cmin.c6)
    # (u, r, s, t) killing a1, a2, a3 at scale u = 1/6
    s = -cmin.a1 / 2
    r = -cmin.b2 / 12
    t = -(cmin.a3 + r * cmin.a1) / 2
    to_short = ModelTransform(Fraction(1, 6), r, s, t)
    assert to_short.apply(cmin).ainvs() == short.ainvs()
    back = to_short.inverse()

    A = int(short.a4)
    B = int(short.a6)
    disc = abs(int(short.delta))
    y_candidates = [0]
    square_part = 1
    for p, e in factorint(disc).items():
        square_part *= p ** (e // 2)
    y_candidates += _divisors(square_part)

    torsion_points: dict[tuple, Point] = {None: None}
    for y in y_candidates:
        for x in _integer_roots_monic_cubic(A, B - y * y):
            P = (Fraction(x), Fraction(y))
            key = (P[0], P[1])
            if key in torsion_points:
                continue
            if _point_order(short, P) is not None:
                torsion_points[key] = P
                mP = negate(short, P)
                torsion_points[(mP[0], mP[1])] = mP

    points = [P for P in torsion_points.values() if P is not None]
    order = len(points) + 1

    # structure: full 2-torsion means Z/2 x Z/2m, otherwise cyclic
    two_torsion = [P for P in points if add(short, P, P) is None]
    orders = {(P[0], P[1]): _point_order(short, P) for P in points}
    max_order = max(orders.values(), default=1)
    if len(two_torsion) == 3:
        structure = f"Z/2 x Z/{order // 2}"
        gen_main = next(P for P in points if orders[(P[0], P[1])] == order // 2)
        half = {
            _as_key(multiply(short, k, gen_main)) for k in range(order // 2)
        }
        gen_two = next(P for P in two_torsion if _as_key(P) not in half)
        generators = (gen_main, gen_two)
    elif order == 1:
        structure = "trivial"
        generators = ()
    else:
        assert max_order == order, "torsion set is not closed"
        structure = f"Z/{order}"
        generators = (next(P for P in points if orders[(P[0], P[1])] == order),)

    to_min = [back.apply_point(P) for P in points]
    gen_min = tuple(back.apply_point(P) for P in generators)
    assert all(on_curve(cmin, P) for P in to_min)
    return TorsionInfo(structure, order, gen_min, tuple(to_min))


def _as_key(P: Point):
    return None if P is None else (P[0], P[1])


def torsion_p_part(c: WeierstrassCurve, p: int) -> int:
    """Exact p-part of the rational torsion order."""
    return torsion_subgroup(c).p_part(p)


@dataclass(frozen=True)
class TorsionVanishingVerdict:
    status: str  # "consistent" or "inconsistent_with_lemma"
    vacuous: bool
    a_p: int | None
    torsion_p_part: int | None

    @property
    def consistent(self) -> bool:
        return self.status == "consistent"


def check_torsion_vanishing(c: WeierstrassCurve, p: int) -> TorsionVanishingVerdict:
    """Supersingular with a_p = 0 forces trivial p-torsion; verify it.

    An inconsistency would mean an implementation bug, since the statement is
    a theorem; the verdict carries both computed values for debugging.
    """
    from .counting import trace_of_frobenius
    from .curves import reduce_mod

    red_type = classify_reduction(c, p)
    if red_type != ReductionType.GOOD_SUPERSINGULAR:
        return TorsionVanishingVerdict("consistent", True, None, None)
    cmin, _ = minimal_model(c)
    a_p = trace_of_frobenius(reduce_mod(cmin, p))
    if a_p != 0:
        return TorsionVanishingVerdict("consistent", True, a_p, None)
    part = torsion_p_part(c, p)
    status = "consistent" if part == 1 else "inconsistent_with_lemma"
    return TorsionVanishingVerdict(status, False, a_p, part)
