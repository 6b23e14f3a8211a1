"""Genus expansion of a bar-invariant Laurent polynomial under q = e^{i hbar}."""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .laurent import HalfLaurent
from .series import SeriesDomainError


def _half_sine_ratio(order: int) -> list[Fraction]:
    """Coefficients in hbar^2 of 2 sin(hbar/2) / hbar, up to hbar^{2*order}."""
    return [Fraction((-1) ** n, 4**n * factorial(2 * n + 1)) for n in range(order + 1)]


def _invert(series: list[Fraction]) -> list[Fraction]:
    out = [Fraction(1) / series[0]]
    for n in range(1, len(series)):
        acc = sum(series[k] * out[n - k] for k in range(1, n + 1))
        out.append(-acc / series[0])
    return out


def cosine_coefficients(P: HalfLaurent, order: int) -> list[Fraction]:
    """hbar^{2n} coefficients of P(e^{i hbar/2}) for palindromic P."""
    out = [Fraction(0)] * (order + 1)
    for k, c in P.items():
        # sine parts cancel between k and -k for palindromic P
        x = Fraction(k, 2)
        for n in range(order + 1):
            out[n] += c * Fraction((-1) ** n) * x ** (2 * n) / factorial(2 * n)
    return out


def hbar_expand(P: HalfLaurent, ell: int, gmax: int) -> list[Fraction]:
    """Return [N_0, ..., N_gmax] with

        sum_g N_g hbar^{2g-1} = (-1)^{ell+1} P(e^{i hbar/2}) / (2 sin(hbar/2)).
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if gmax < 0:
        raise ValueError("gmax must be nonnegative")
    if not P.is_bar_invariant():
        raise SeriesDomainError(f"{P} is not invariant under q^(1/2) -> q^(-1/2)")
    cos_part = cosine_coefficients(P, gmax)
    inv = _invert(_half_sine_ratio(gmax))
    sign = 1 if ell % 2 == 1 else -1
    return [
        sign * sum(cos_part[k] * inv[g - k] for k in range(g + 1))
        for g in range(gmax + 1)
    ]
