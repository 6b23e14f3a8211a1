"""Laurent polynomials in q^{1/2} with exact rational coefficients.

Exponents are stored as integers counting powers of q^{1/2}, so the key
``3`` means q^{3/2}.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


def _frac(x) -> Scalar:
    """Exact rational; integral values are kept as int for speed."""
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class HalfLaurent:
    """Element of Q[q^{1/2}, q^{-1/2}].

    Immutable; zero coefficients are never stored. Coefficients are ints or
    Fractions, compared by value.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                if not isinstance(k, int):
                    raise TypeError("half-exponents must be integers")
                v = _frac(v)
                if v:
                    c[k] = v
        self._c = c
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, value: Scalar) -> "HalfLaurent":
        return cls({0: value})

    @classmethod
    def monomial(cls, halves: int, coeff: Scalar = 1) -> "HalfLaurent":
        """``coeff * q^{halves/2}``."""
        return cls({halves: coeff})

    @classmethod
    def _raw(cls, c: dict) -> "HalfLaurent":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    # -- access -------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, halves: int) -> Fraction:
        return Fraction(self._c.get(halves, 0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def min_exponent(self) -> int:
        return min(self._c)

    def max_exponent(self) -> int:
        return max(self._c)

    def constant(self) -> Fraction:
        return self.coeff(0)

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._c)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return HalfLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return HalfLaurent._raw({})
            return HalfLaurent._raw({k: v * other for k, v in self._c.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c: dict[int, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                c[k] = c.get(k, 0) + v1 * v2
        return HalfLaurent._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            ((k, v),) = self._c.items()
            return HalfLaurent._raw({-k * (-n): Fraction(1) / v ** (-n)})
        result = HalfLaurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, halves: int) -> "HalfLaurent":
        """Multiply by q^{halves/2}."""
        if not halves:
            return self
        return HalfLaurent._raw({k + halves: v for k, v in self._c.items()})

    def divide_exact(self, other: "HalfLaurent") -> "HalfLaurent":
        """Exact division; raises ``ArithmeticError`` if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return self
        hi, lo = other.max_exponent(), other.min_exponent()
        lead = other._c[hi]
        floor = min(self._c) - lo
        rem = dict(self._c)
        quot: dict[int, Fraction] = {}
        while rem:
            k = max(rem) - hi
            if k < floor:
                break
            v = _frac(Fraction(rem[k + hi]) / lead)
            quot[k] = v
            for ok, ov in other._c.items():
                key = k + ok
                s = rem.get(key, 0) - v * ov
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return HalfLaurent._raw(quot)

    # -- involutions and evaluation -----------------------------------
    def bar(self) -> "HalfLaurent":
        """q^{1/2} -> q^{-1/2}."""
        return HalfLaurent._raw({-k: v for k, v in self._c.items()})

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    def at_one(self) -> Fraction:
        """Classical specialization q^{1/2} = 1."""
        return sum(self._c.values(), Fraction(0))

    def evaluate(self, sqrt_q: Scalar) -> Fraction:
        sqrt_q = Fraction(_frac(sqrt_q))
        return sum((v * sqrt_q**k for k, v in self._c.items()), Fraction(0))

    # -- comparison / display -----------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"HalfLaurent({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items(), reverse=True):
            if k == 0:
                mono = ""
            elif k == 2:
                mono = "q"
            elif k % 2 == 0:
                mono = f"q^{k // 2}"
            else:
                mono = f"q^({k}/2)"
            if mono and v == 1:
                term = mono
            elif mono and v == -1:
                term = "-" + mono
            elif mono:
                term = f"{v}*{mono}"
            else:
                term = str(v)
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[list[int]]:
        """``[[half_exponent, num, den], ...]`` in increasing exponent order."""
        return [[k, v.numerator, v.denominator] for k, v in sorted(self._c.items())]

    @classmethod
    def from_json(cls, rows: Iterable) -> "HalfLaurent":
        return cls({int(k): Fraction(int(n), int(d)) for k, n, d in rows})


def _coerce(x):
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, (int, Fraction)):
        return HalfLaurent.const(x)
    return NotImplemented


ZERO = HalfLaurent()
ONE = HalfLaurent.const(1)
SQRT_Q = HalfLaurent.monomial(1)


def quantum_integer(n: int) -> HalfLaurent:
    """[n]_q = (q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2}); odd in n."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    n = abs(n)
    return HalfLaurent({n - 1 - 2 * i: sign for i in range(n)})
