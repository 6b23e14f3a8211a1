"""Dense univariate polynomials in q and reduced rational functions.

Polynomials are tuples of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``. Coefficients are ints
whenever possible and Fractions otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

Poly = tuple


def _norm(c) -> Fraction | int:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def poly(coeffs: Sequence) -> Poly:
    c = [_norm(x) for x in coeffs]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def poly_add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return poly(out)


def poly_neg(a: Poly) -> Poly:
    return tuple(-v for v in a)


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly(out)


def poly_scale(a: Poly, c) -> Poly:
    return poly([v * c for v in a])


def poly_shift(a: Poly, k: int) -> Poly:
    """Multiply by q^k, k >= 0."""
    if not a or not k:
        return a
    return (0,) * k + a


def poly_pow(a: Poly, n: int) -> Poly:
    out: Poly = (1,)
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def degree(a: Poly) -> int:
    return len(a) - 1


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(v) for v in a]
    lead = Fraction(b[-1])
    db = len(b) - 1
    quot = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = rem[k + db] / lead
        if c:
            quot[k] = c
            for j, bv in enumerate(b):
                rem[k + j] -= c * bv
    return poly(quot), poly(rem[:db] if db else [])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q."""
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return ()
    return poly_scale(a, Fraction(1) / Fraction(a[-1]))


def poly_eval(a: Poly, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_str(a: Poly, var: str = "q") -> str:
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append("-" + mono)
        elif mono:
            terms.append(f"{c}*{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms).replace("+ -", "- ")


@lru_cache(maxsize=None)
def q_minus_one_power(n: int) -> Poly:
    return poly_pow((-1, 1), n)


@lru_cache(maxsize=None)
def gl_order_poly(n: int) -> Poly:
    """|GL_n(F_q)| = prod_{k<n} (q^n - q^k)."""
    out: Poly = (1,)
    for k in range(n):
        factor = [0] * (n + 1)
        factor[n] += 1
        factor[k] -= 1
        out = poly_mul(out, poly(factor))
    return out


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> Poly:
    """Gaussian binomial [n choose k]_q as a polynomial in q."""
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    # [n,k] = [n-1,k-1] + q^k [n-1,k]
    return poly_add(q_binomial(n - 1, k - 1), poly_shift(q_binomial(n - 1, k), k))


class RationalFunctionQ:
    """Reduced fraction of polynomials in q with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence, den: Sequence = (1,)):
        num, den = poly(num), poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        lead = Fraction(den[-1])
        if lead != 1:
            num = poly_scale(num, 1 / lead)
            den = poly_scale(den, 1 / lead)
        self.num, self.den = num, den

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunctionQ(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionQ(poly_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunctionQ(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunctionQ(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, tuple):
            other = _as_rf(other)
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def evaluate(self, q0) -> Fraction:
        d = poly_eval(self.den, Fraction(q0))
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q={q0}")
        return Fraction(poly_eval(self.num, Fraction(q0))) / d

    def __repr__(self):
        return f"RationalFunctionQ(({poly_str(self.num)}) / ({poly_str(self.den)}))"

    def __str__(self):
        if self.den == (1,):
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"


def _as_rf(x) -> RationalFunctionQ:
    if isinstance(x, RationalFunctionQ):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunctionQ((x,))
    if isinstance(x, tuple):
        return RationalFunctionQ(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunctionQ")
