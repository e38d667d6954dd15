"""Arithmetic mod a prime: quadratic characters, square roots, small-degree polynomials.

Everything here works with plain Python ints.  Polynomials are lists of
coefficients, lowest degree first, always reduced mod q.
"""

from __future__ import annotations


def legendre(a: int, q: int) -> int:
    """Quadratic character of a mod an odd prime q: 1, -1, or 0."""
    a %= q
    if a == 0:
        return 0
    t = pow(a, (q - 1) // 2, q)
    return -1 if t == q - 1 else 1


def sqrt_mod(a: int, q: int) -> int:
    """One square root of a mod an odd prime q (Tonelli-Shanks).

    Caller must ensure a is a quadratic residue.
    """
    a %= q
    if a == 0:
        return 0
    if q % 4 == 3:
        return pow(a, (q + 1) // 4, q)
    # q = 1 mod 4: Tonelli-Shanks
    s, t = 0, q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = 2
    while legendre(z, q) != -1:
        z += 1
    g = pow(z, t, q)
    x = pow(a, (t + 1) // 2, q)
    b = pow(a, t, q)
    r = s
    while b != 1:
        m = 0
        b2 = b
        while b2 != 1:
            b2 = b2 * b2 % q
            m += 1
        w = pow(g, 1 << (r - m - 1), q)
        g = w * w % q
        x = x * w % q
        b = b * g % q
        r = m
    return x


def quad_roots(a: int, b: int, c: int, q: int) -> list[int]:
    """Distinct roots of a*Y^2 + b*Y + c in F_q (a may be 0, giving a linear solve)."""
    a %= q
    b %= q
    c %= q
    if a == 0:
        if b == 0:
            return []  # constant; "all of F_q" for c=0 never needed here
        return [(-c) * pow(b, q - 2, q) % q]
    if q == 2:
        return [y for y in (0, 1) if (a * y * y + b * y + c) % 2 == 0]
    d = (b * b - 4 * a * c) % q
    chi = legendre(d, q)
    if chi == -1:
        return []
    inv2a = pow(2 * a, q - 2, q)
    if chi == 0:
        return [(-b) * inv2a % q]
    s = sqrt_mod(d, q)
    return sorted({(-b + s) * inv2a % q, (-b - s) * inv2a % q})


# ---------------------------------------------------------------------------
# small polynomial arithmetic over F_q

def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(f: list[int], g: list[int], q: int) -> list[int]:
    """Remainder of f modulo a nonzero polynomial g, over F_q."""
    f = [x % q for x in f]
    _poly_trim(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], q - 2, q)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        factor = f[-1] * inv_lead % q
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - factor * gi) % q
        _poly_trim(f)
    return f


def _poly_gcd(f: list[int], g: list[int], q: int) -> list[int]:
    """Monic gcd over F_q."""
    f = _poly_trim([x % q for x in f])
    g = _poly_trim([x % q for x in g])
    while g:
        f, g = g, _poly_mod(f, g, q)
    if f:
        inv = pow(f[-1], q - 2, q)
        f = [x * inv % q for x in f]
    return f


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], q: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % q
    return _poly_mod(prod, mod, q)


def _x_pow_q_mod(mod: list[int], q: int) -> list[int]:
    """x^q reduced mod the polynomial `mod`, by square and multiply."""
    result = [1]
    base = _poly_mod([0, 1], mod, q)
    e = q
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, q)
        base = _poly_mulmod(base, base, mod, q)
        e >>= 1
    return result


def count_roots(poly: list[int], q: int) -> int:
    """Number of distinct roots of poly in F_q (poly nonconstant, any degree <= 3)."""
    poly = _poly_trim([c % q for c in poly])
    if q <= 64:
        # brute force; also covers the characteristic-2/3 quirks
        return sum(
            1
            for x in range(q)
            if sum(c * pow(x, i, q) for i, c in enumerate(poly)) % q == 0
        )
    xq = _x_pow_q_mod(poly, q)
    # gcd(x^q - x, poly) has the rational roots as its roots
    xq_minus_x = list(xq)
    while len(xq_minus_x) < 2:
        xq_minus_x.append(0)
    xq_minus_x[1] = (xq_minus_x[1] - 1) % q
    g = _poly_gcd(poly, xq_minus_x, q)
    return len(g) - 1 if g else 0


def cubic_root_profile(a2: int, a4: int, a6: int, q: int):
    """Analyse T^3 + a2*T^2 + a4*T + a6 over F_q.

    Returns a triple (kind, n_rational, root):
      ("distinct", n, None) - separable with n roots in F_q,
      ("double", None, r)   - one double and one simple root,
      ("triple", None, r)   - a triple root.
    A repeated root of a cubic is fixed by Frobenius, hence lies in F_q.
    """
    a2 %= q
    a4 %= q
    a6 %= q
    if q <= 3:
        roots = [t for t in range(q) if (t ** 3 + a2 * t * t + a4 * t + a6) % q == 0]
        for r in roots:
            # synthetic division by (T - r): quotient T^2 + c1*T + c0
            c1 = (a2 + r) % q
            c0 = (a4 + r * c1) % q
            if (r * r + c1 * r + c0) % q == 0:
                # multiplicity >= 2; the other quadratic root is -(c1 + r)
                if (c1 + 2 * r) % q == 0:
                    return ("triple", None, r)
                return ("double", None, r)
        return ("distinct", len(roots), None)
    # q >= 5: the derivative has honest degree 2
    poly = [a6, a4, a2, 1]
    deriv = [a4, 2 * a2 % q, 3 % q]
    g = _poly_gcd(poly, deriv, q)
    if len(g) <= 1:
        return ("distinct", count_roots(poly, q), None)
    if len(g) == 2:  # linear gcd: double root
        return ("double", None, (-g[0]) % q)
    # quadratic gcd (T - r)^2: triple root
    r = (-g[1]) * pow(2, q - 2, q) % q
    return ("triple", None, r)
