"""Tate's algorithm at a rational prime.

Produces the Kodaira symbol, conductor exponent and Tamagawa number of the
q-minimal model; a non-minimal input triggers the usual rescale-and-restart.
Conductor exponents come out of the component count (Ogg's relation
f = v(delta) + 1 - m), which stays valid at the wild primes 2 and 3.

The only subtle parts are the coordinate changes between steps; each one is
commented with the divisibility it establishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .curves import ModelTransform, WeierstrassCurve
from .modarith import _poly_gcd, legendre

GOOD = "good"
SPLIT = "split_multiplicative"
NONSPLIT = "nonsplit_multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class TateResult:
    kodaira: str
    conductor_exp: int
    tamagawa: int
    vdelta: int  # valuation of the q-minimal discriminant
    reduction: str
    restarts: int


def _vq(x: int, q: int) -> int:
    """q-adic valuation of an integer, with a large sentinel for 0."""
    if x == 0:
        return 10 ** 9
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


def _b_invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    delta = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, delta


def _translate(a, r, t):
    """x -> x + r, y -> y + t (u = 1, s = 0); delta is unchanged."""
    a1, a2, a3, a4, a6 = a
    return (
        a1,
        a2 + 3 * r,
        a3 + r * a1 + 2 * t,
        a4 + 2 * r * a2 - t * a1 + 3 * r * r,
        a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1,
    )


def _shear(a, s):
    """y -> y + s x (u = 1, r = t = 0); a3 and a6 are unchanged."""
    a1, a2, a3, a4, a6 = a
    return (a1 + 2 * s, a2 - s * a1 - s * s, a3, a4 - s * a3, a6)


def _quad_profile(qa: int, qb: int, qc: int, q: int):
    """Root structure of qa*X^2 + qb*X + qc over F_q (qa a unit).

    Returns ("rational"|"irrational"|"double", double_root_or_None).
    """
    qa %= q
    qb %= q
    qc %= q
    if q == 2:
        if qb == 1:  # separable; X=0 and X=1 both evaluate to qc
            return ("rational" if qc == 0 else "irrational", None)
        return ("double", qc)  # qa = 1: X^2 + qc = (X + qc)^2
    d = (qb * qb - 4 * qa * qc) % q
    if d == 0:
        return ("double", (-qb) * pow(2 * qa, -1, q) % q)
    return ("rational" if legendre(d, q) == 1 else "irrational", None)


def _cubic_profile(c2: int, c1: int, c0: int, q: int):
    from .modarith import cubic_root_profile

    return cubic_root_profile(c2, c1, c0, q)


def _singular_point(a, q):
    """The unique singular point of the reduction mod q (q | delta)."""
    a1, a2, a3, a4, a6 = (x % q for x in a)
    if q <= 3:
        for x in range(q):
            for y in range(q):
                f = (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % q
                fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
                fy = (2 * y + a1 * x + a3) % q
                if f == 0 and fx == 0 and fy == 0:
                    return x, y
        raise AssertionError("no singular point found on a singular reduction")
    b2, b4, b6, _, _ = _b_invariants(a)
    g = [b6 % q, 2 * b4 % q, b2 % q, 4 % q]
    gp = [2 * b4 % q, 2 * b2 % q, 12 % q]
    h = _poly_gcd(g, gp, q)
    if len(h) == 2:  # node: double root of g
        x0 = (-h[0]) % q
    elif len(h) == 3:  # cusp: triple root, h = (x - x0)^2
        x0 = (-h[1]) * pow(2, -1, q) % q
    else:
        raise AssertionError("gcd degree unexpected for a singular reduction")
    y0 = (-(a1 * x0 + a3)) * pow(2, -1, q) % q
    return x0, y0


def tate_algorithm(curve: WeierstrassCurve, q: int) -> TateResult:
    """Kodaira symbol, conductor exponent and Tamagawa number at q."""
    n_clear = lcm(*(x.denominator for x in curve.ainvs()))
    if n_clear > 1:
        scale = ModelTransform(Fraction(1, n_clear), Fraction(0), Fraction(0), Fraction(0))
        curve = scale.apply(curve)
    a = tuple(int(x) for x in curve.ainvs())

    restarts = 0
    while True:
        b2, b4, b6, b8, delta = _b_invariants(a)
        n = _vq(delta, q)
        if n == 0:
            return TateResult("I0", 0, 1, 0, GOOD, restarts)

        # step 2 preparation: move the singular point to the origin,
        # giving q | a3, a4, a6
        x0, y0 = _singular_point(a, q)
        a = _translate(a, x0, y0)
        b2, b4, b6, b8, delta = _b_invariants(a)
        assert all(a[i] % q == 0 for i in (2, 3, 4))

        if b2 % q != 0:
            # multiplicative: In with n = v(delta); tangent cone T^2 + a1 T - a2
            kind, _ = _quad_profile(1, a[0], -a[1], q)
            if kind == "rational":
                return TateResult(f"I{n}", 1, n, n, SPLIT, restarts)
            return TateResult(f"I{n}", 1, 2 if n % 2 == 0 else 1, n, NONSPLIT, restarts)

        if _vq(a[4], q) < 2:
            return TateResult("II", n, 1, n, ADDITIVE, restarts)
        if _vq(b8, q) < 3:
            return TateResult("III", n - 1, 2, n, ADDITIVE, restarts)
        if _vq(b6, q) < 3:
            kind, _ = _quad_profile(1, a[2] // q, -(a[4] // (q * q)), q)
            c = 3 if kind == "rational" else 1
            return TateResult("IV", n - 2, c, n, ADDITIVE, restarts)

        # prepare for the cubic step: the quadratic Y^2 + a_{3,1} Y - a_{6,2}
        # now has a double root y1; translating by q*y1 gives q^2 | a3, q^3 | a6
        kind, y1 = _quad_profile(1, a[2] // q, -(a[4] // (q * q)), q)
        assert kind == "double"
        a = _translate(a, 0, q * y1)
        # shear so that q | a1 and q | a2 (a3, a6 untouched)
        if q == 2:
            s = a[1] % 2  # a1 is already even since 2 | b2
        else:
            s = (-a[0]) * pow(2, -1, q) % q
        a = _shear(a, s)
        assert _vq(a[0], q) >= 1 and _vq(a[1], q) >= 1
        assert _vq(a[2], q) >= 2 and _vq(a[4], q) >= 3
        assert _vq(a[3], q) >= 2  # forced by q^3 | b8

        # step 6: P(T) = T^3 + a_{2,1} T^2 + a_{4,2} T + a_{6,3}
        kind, nroots, root = _cubic_profile(
            a[1] // q, a[3] // (q * q), a[4] // q ** 3, q
        )
        if kind == "distinct":
            return TateResult("I0*", n - 4, 1 + nroots, n, ADDITIVE, restarts)

        if kind == "double":
            # move the double root of P to T = 0: v(a2) = 1, v(a4) >= 3, v(a6) >= 4
            a = _translate(a, q * root, 0)
            nstar, c = _instar_loop(a, q)
            return TateResult(f"I{nstar}*", n - 4 - nstar, c, n, ADDITIVE, restarts)

        # triple root: move it to T = 0: v(a2) >= 2, v(a4) >= 3, v(a6) >= 4
        a = _translate(a, q * root, 0)
        kind, y2 = _quad_profile(1, a[2] // (q * q), -(a[4] // q ** 4), q)
        if kind != "double":
            c = 3 if kind == "rational" else 1
            return TateResult("IV*", n - 6, c, n, ADDITIVE, restarts)
        # double root: translating by q^2*y2 gives q^3 | a3, q^5 | a6
        a = _translate(a, 0, q * q * y2)
        if _vq(a[3], q) < 4:
            return TateResult("III*", n - 7, 2, n, ADDITIVE, restarts)
        if _vq(a[4], q) < 6:
            return TateResult("II*", n - 8, 1, n, ADDITIVE, restarts)

        # step 11: the model was not minimal at q
        a = (a[0] // q, a[1] // q ** 2, a[2] // q ** 3, a[3] // q ** 4, a[4] // q ** 6)
        restarts += 1


def _instar_loop(a, q):
    """The I_n* chain: alternate Y- and X-quadratics until one is separable.

    Entry: v(a2) = 1, v(a3) >= 2, v(a4) >= 3, v(a6) >= 4.  Returns (n, c).
    """
    nstar = 1
    kx = ky = 2
    while True:
        assert nstar <= _vq(_b_invariants(a)[4], q), "I_n* chain failed to terminate"
        # Y-quadratic: Y^2 + (a3/q^ky) Y - a6/q^(kx+ky)
        kind, root = _quad_profile(1, a[2] // q ** ky, -(a[4] // q ** (kx + ky)), q)
        if kind != "double":
            return nstar, 4 if kind == "rational" else 2
        a = _translate(a, 0, root * q ** ky)
        nstar += 1
        ky += 1
        # X-quadratic: (a2/q) X^2 + (a4/q^(kx+1)) X + a6/q^(kx+ky)
        kind, root = _quad_profile(
            a[1] // q, a[3] // q ** (kx + 1), a[4] // q ** (kx + ky), q
        )
        if kind != "double":
            return nstar, 4 if kind == "rational" else 2
        a = _translate(a, root * q ** kx, 0)
        nstar += 1
        kx += 1
