"""Truncated series in deformation parameters and the quantum torus.

Both types truncate by total t-degree (cap ``L``). A quantum torus element
may additionally carry per-variable exponent bounds; the ideal generated by
``t_j^(b_j+1)`` is preserved by every operation here, so the extra
truncation never changes surviving coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .laurent import ONE, ZERO, HalfLaurent


class ConfigurationError(ValueError):
    """Operands built over different variables or caps."""


class SeriesDomainError(ValueError):
    """log/exp applied outside their domain."""


def skew(m: Sequence[int], mp: Sequence[int]) -> int:
    """<(a,b),(a',b')> = a b' - a' b."""
    return m[0] * mp[1] - mp[0] * m[1]


def _as_hl(c) -> HalfLaurent:
    return c if isinstance(c, HalfLaurent) else HalfLaurent.const(c)


# ---------------------------------------------------------------------------
# commutative truncated series


class TruncatedSeries:
    """Sum of HalfLaurent * t^a over exponent vectors a with |a| <= cap."""

    __slots__ = ("variables", "cap", "terms")

    def __init__(self, variables: Sequence[str], cap: int, terms: Mapping | None = None):
        self.variables = tuple(variables)
        self.cap = cap
        n = len(self.variables)
        clean = {}
        for a, c in (terms or {}).items():
            a = tuple(a)
            if len(a) != n:
                raise ConfigurationError("exponent vector length mismatch")
            if sum(a) > cap:
                continue
            c = _as_hl(c)
            if c:
                clean[a] = c
        self.terms = clean

    def _check(self, other):
        if self.variables != other.variables or self.cap != other.cap:
            raise ConfigurationError("series over different variables or caps")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, ZERO) + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return TruncatedSeries(self.variables, self.cap, out)

    def __neg__(self):
        return TruncatedSeries(self.variables, self.cap, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, HalfLaurent)):
            return TruncatedSeries(self.variables, self.cap, {a: c * other for a, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for a, c in self.terms.items():
            da = sum(a)
            for b, d in other.terms.items():
                if da + sum(b) > self.cap:
                    continue
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = out.get(k, ZERO) + c * d
        return TruncatedSeries(self.variables, self.cap, out)

    __rmul__ = __mul__

    def coefficient(self, a: Sequence[int]) -> HalfLaurent:
        return self.terms.get(tuple(a), ZERO)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.variables, self.cap, self.terms) == (other.variables, other.cap, other.terms)

    def __repr__(self):
        body = " + ".join(
            f"({c})*{_mono_str(self.variables, a)}" for a, c in sorted(self.terms.items())
        )
        return f"TruncatedSeries[{self.cap}]({body or '0'})"


def _mono_str(names, a) -> str:
    bits = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e]
    return "*".join(bits) or "1"


# ---------------------------------------------------------------------------
# quantum torus


class QuantumTorusElement:
    """Finite sum of HalfLaurent * t^a * zhat^m truncated at t-degree ``cap``.

    Product rule: zhat^m zhat^m' = q^{<m,m'>/2} zhat^{m+m'}. With
    ``quantum=False`` the twist is dropped and the algebra is commutative
    (the q^{1/2} = 1 specialization).
    """

    __slots__ = ("nvars", "cap", "bounds", "quantum", "terms")

    def __init__(
        self,
        nvars: int,
        cap: int,
        terms: Mapping | None = None,
        *,
        bounds: Sequence[int] | None = None,
        quantum: bool = True,
    ):
        self.nvars = nvars
        self.cap = cap
        self.bounds = None if bounds is None else tuple(bounds)
        self.quantum = quantum
        clean = {}
        for (a, m), c in (terms or {}).items():
            a, m = tuple(a), tuple(m)
            if len(a) != nvars or len(m) != 2:
                raise ConfigurationError("bad monomial key")
            if not self.admissible(a):
                continue
            c = _as_hl(c)
            if not quantum and not c.is_constant():
                c = HalfLaurent.const(c.at_one())
            if c:
                clean[(a, m)] = c
        self.terms = clean

    # -- helpers ------------------------------------------------------
    def admissible(self, a) -> bool:
        if sum(a) > self.cap:
            return False
        if self.bounds is not None:
            return all(x <= b for x, b in zip(a, self.bounds))
        return True

    def like(self, terms) -> "QuantumTorusElement":
        return QuantumTorusElement(self.nvars, self.cap, terms, bounds=self.bounds, quantum=self.quantum)

    def _raw(self, terms) -> "QuantumTorusElement":
        obj = QuantumTorusElement.__new__(QuantumTorusElement)
        obj.nvars, obj.cap, obj.bounds, obj.quantum = self.nvars, self.cap, self.bounds, self.quantum
        obj.terms = terms
        return obj

    def same_space(self, other) -> None:
        if (self.nvars, self.cap, self.bounds, self.quantum) != (
            other.nvars,
            other.cap,
            other.bounds,
            other.quantum,
        ):
            raise ConfigurationError("quantum torus elements over different variables, caps or bounds")

    @classmethod
    def one(cls, nvars, cap, **kw):
        return cls(nvars, cap, {((0,) * nvars, (0, 0)): ONE}, **kw)

    @classmethod
    def monomial(cls, nvars, cap, a, m, coeff=1, **kw):
        return cls(nvars, cap, {(tuple(a), tuple(m)): coeff}, **kw)

    def constant_term(self) -> HalfLaurent:
        return self.terms.get(((0,) * self.nvars, (0, 0)), ZERO)

    def min_t_degree(self) -> int:
        return min((sum(a) for a, _ in self.terms), default=self.cap + 1)

    def coefficient(self, a, m) -> HalfLaurent:
        return self.terms.get((tuple(a), tuple(m)), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def specialize(self) -> "QuantumTorusElement":
        """q^{1/2} = 1 image, as a commutative element."""
        return QuantumTorusElement(self.nvars, self.cap, self.terms, bounds=self.bounds, quantum=False)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, HalfLaurent)):
            other = self.one(self.nvars, self.cap, bounds=self.bounds, quantum=self.quantum) * other
        self.same_space(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, HalfLaurent)):
            if not self.quantum and isinstance(other, HalfLaurent):
                other = other.at_one()
            return self._raw({k: c * other for k, c in self.terms.items() if c * other})
        return qt_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, HalfLaurent)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return series_inverse(self) ** (-n)
        out = self.one(self.nvars, self.cap, bounds=self.bounds, quantum=self.quantum)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, QuantumTorusElement):
            return NotImplemented
        return (self.nvars, self.cap, self.bounds, self.quantum, self.terms) == (
            other.nvars,
            other.cap,
            other.bounds,
            other.quantum,
            other.terms,
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, m), c in sorted(self.terms.items()):
            tpart = _mono_str([f"t{i + 1}" for i in range(self.nvars)], a)
            parts.append(f"({c})*{tpart}*z^{m}")
        return " + ".join(parts)


def qt_multiply(x: QuantumTorusElement, y: QuantumTorusElement) -> QuantumTorusElement:
    """Bilinear product with the q-commutation twist, truncated at the cap."""
    x.same_space(y)
    out: dict = {}
    cap, bounds, quantum = x.cap, x.bounds, x.quantum
    for (a, m), c in x.terms.items():
        da = sum(a)
        for (b, mp), d in y.terms.items():
            if da + sum(b) > cap:
                continue
            ab = tuple(i + j for i, j in zip(a, b))
            if bounds is not None and any(e > bd for e, bd in zip(ab, bounds)):
                continue
            key = (ab, (m[0] + mp[0], m[1] + mp[1]))
            prod = c * d
            if quantum:
                prod = prod.shift(skew(m, mp))
            prev = out.get(key)
            out[key] = prod if prev is None else prev + prod
    return x._raw({k: v for k, v in out.items() if v})


def series_inverse(f: QuantumTorusElement) -> QuantumTorusElement:
    """Inverse of an element with constant term 1 modulo the cap."""
    if f.constant_term() != ONE:
        raise SeriesDomainError("only elements with constant term 1 are inverted")
    x = f - 1
    out = f.one(f.nvars, f.cap, bounds=f.bounds, quantum=f.quantum)
    power = out
    for _ in range(f.cap):
        power = -(power * x)
        if power.is_zero():
            break
        out = out + power
    return out


def series_log(f: QuantumTorusElement) -> QuantumTorusElement:
    """log(1 + X) = sum_k (-1)^{k-1} X^k / k, terminating at the cap."""
    if f.constant_term() != ONE or any(sum(a) == 0 and m != (0, 0) for a, m in f.terms):
        raise SeriesDomainError("log needs constant term 1 and no other t-degree-0 terms")
    x = f - 1
    out = f.like({})
    power = f.one(f.nvars, f.cap, bounds=f.bounds, quantum=f.quantum)
    for k in range(1, f.cap + 1):
        power = power * x
        if power.is_zero():
            break
        out = out + power * Fraction((-1) ** (k - 1), k)
    return out


def series_exp(g: QuantumTorusElement) -> QuantumTorusElement:
    """exp(g) = sum_k g^k / k!, for g without t-degree-0 part."""
    if any(sum(a) == 0 for a, _ in g.terms):
        raise SeriesDomainError("exp needs an element without t-degree-0 terms")
    out = g.one(g.nvars, g.cap, bounds=g.bounds, quantum=g.quantum)
    power = out
    fact = 1
    for k in range(1, g.cap + 1):
        power = power * g
        if power.is_zero():
            break
        fact *= k
        out = out + power * Fraction(1, fact)
    return out
