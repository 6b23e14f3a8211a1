from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quivergw.algebra import (
    ONE,
    ZERO,
    ConfigurationError,
    HalfLaurent,
    QuantumTorusElement,
    RationalFunctionQ,
    SeriesDomainError,
    TruncatedSeries,
    gl_order_poly,
    hbar_expand,
    q_binomial,
    qt_multiply,
    quantum_integer,
    series_exp,
    series_inverse,
    series_log,
    skew,
)
from quivergw.algebra.hbar import _half_sine_ratio


def z(m, a=(0,), cap=3, coeff=1, **kw):
    return QuantumTorusElement.monomial(len(a), cap, a, m, coeff, **kw)


# --- HalfLaurent ---


def test_half_laurent_drops_zeros():
    p = HalfLaurent({1: 1, -1: 1, 3: 0})
    assert dict(p.items()) == {1: 1, -1: 1}
    assert p - p == ZERO
    assert not ZERO


def test_bar_and_quantum_integers():
    assert quantum_integer(2) == HalfLaurent({1: 1, -1: 1})
    assert quantum_integer(3) == HalfLaurent({2: 1, 0: 1, -2: 1})
    assert quantum_integer(-2) == -quantum_integer(2)
    p = HalfLaurent({3: 2, 0: 1})
    assert p.bar() == HalfLaurent({-3: 2, 0: 1})
    assert not p.is_bar_invariant()
    assert (p + p.bar()).is_bar_invariant()


def test_divide_exact():
    # [4] = [2] (q + q^-1)
    q4 = quantum_integer(4)
    assert q4.divide_exact(quantum_integer(2)) == HalfLaurent({2: 1, -2: 1})
    with pytest.raises(ArithmeticError):
        quantum_integer(3).divide_exact(quantum_integer(2))


def test_evaluate():
    p = HalfLaurent({1: 1, -1: 1})
    assert p.evaluate(2) == Fraction(5, 2)
    assert p.at_one() == 2


def test_json_round_trip():
    p = HalfLaurent({-3: Fraction(1, 2), 4: -7})
    assert HalfLaurent.from_json(p.to_json()) == p


# --- polynomials in q ---


def test_gl_order():
    assert gl_order_poly(0) == (1,)
    assert gl_order_poly(1) == (-1, 1)
    # (q^2-1)(q^2-q) = q^4 - q^3 - q^2 + q
    assert gl_order_poly(2) == (0, 1, -1, -1, 1)


def test_q_binomial_counts_subspaces():
    # number of 2-planes in F_3^4 is 130
    assert sum(c * 3**i for i, c in enumerate(q_binomial(4, 2))) == 130


def test_rational_function_reduces():
    f = RationalFunctionQ((-1, 0, 1), (1, -2, 1))  # (q^2-1)/(q-1)^2
    assert f == RationalFunctionQ((1, 1), (-1, 1))
    assert f.evaluate(2) == 3
    assert not f.is_polynomial()
    assert (f * RationalFunctionQ((-1, 1))).is_polynomial()


# --- quantum torus ---


def test_commutation_examples():
    x = qt_multiply(z((1, 0)), z((0, 1)))
    assert x == z((1, 1), coeff=HalfLaurent.monomial(1))
    y = qt_multiply(z((0, 1)), z((1, 0)))
    assert y == z((1, 1), coeff=HalfLaurent.monomial(-1))


def test_truncation_drops_high_degree():
    f = QuantumTorusElement.one(1, 1) + z((1, 0), a=(1,), cap=1)
    sq = f * f
    assert sq == QuantumTorusElement.one(1, 1) + z((1, 0), a=(1,), cap=1, coeff=2)


def test_mismatched_spaces():
    with pytest.raises(ConfigurationError):
        qt_multiply(z((1, 0), cap=2), z((1, 0), cap=3))
    with pytest.raises(ConfigurationError):
        TruncatedSeries(["t1"], 2) + TruncatedSeries(["t1", "t2"], 2)


def test_truncated_series_product():
    s = TruncatedSeries(["t1", "t2"], 2, {(1, 0): 1, (0, 1): 1})
    sq = s * s
    assert sq.coefficient((1, 1)) == HalfLaurent.const(2)
    assert (s * sq).terms == {}


small = st.integers(-3, 3)
lattice = st.tuples(small, small)
coeff = st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=2).map(HalfLaurent)
term = st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), lattice, coeff)


def element(terms):
    out = {}
    for a, m, c in terms:
        out[(a, m)] = out.get((a, m), ZERO) + c
    return QuantumTorusElement(2, 3, out)


elements = st.lists(term, max_size=5).map(element)


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_associative_and_distributive(x, y, w):
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert (x + y) * w == x * w + y * w


@pytest.mark.parametrize("m", [(a, b) for a in range(-5, 6, 2) for b in range(-5, 6, 3)])
@pytest.mark.parametrize("mp", [(1, 0), (0, 1), (2, -5), (-5, 5), (3, 4)])
def test_cancelling_triple_product(m, mp):
    back = (-m[0] - mp[0], -m[1] - mp[1])
    prod = z(m) * z(mp) * z(back)
    assert prod == z((0, 0), coeff=HalfLaurent.monomial(skew(m, mp)))


def test_log_examples():
    f = QuantumTorusElement.one(1, 2) + z((1, 0), a=(1,), cap=2)
    expect = z((1, 0), a=(1,), cap=2) + z((2, 0), a=(2,), cap=2, coeff=Fraction(-1, 2))
    assert series_log(f) == expect
    assert series_log(QuantumTorusElement.one(1, 2)).is_zero()


def test_exp_log_round_trip():
    one = QuantumTorusElement.one(2, 3)
    f = one + z((1, 0), a=(1, 0)) + z((0, 1), a=(0, 1))
    assert series_exp(series_log(f)) == f
    g = one + z((1, 0), a=(1, 0), coeff=HalfLaurent.monomial(1)) + z((1, 2), a=(1, 1), coeff=-2)
    assert series_exp(series_log(g)) == g
    assert series_inverse(g) * g == one


def test_log_exp_domain_errors():
    with pytest.raises(SeriesDomainError):
        series_log(z((1, 0), coeff=2))
    with pytest.raises(SeriesDomainError):
        series_exp(QuantumTorusElement.one(1, 3))


# --- genus expansion ---


def test_hbar_examples():
    assert hbar_expand(ONE, 1, 2) == [1, Fraction(1, 24), Fraction(7, 5760)]
    kron = -quantum_integer(2)
    assert hbar_expand(kron, 2, 2) == [2, Fraction(-1, 6), Fraction(-1, 360)]
    assert hbar_expand(ZERO, 3, 3) == [0, 0, 0, 0]


def test_hbar_rejects_non_palindromic():
    with pytest.raises(SeriesDomainError):
        hbar_expand(HalfLaurent({1: 1}), 1, 1)


def sympy_oracle(P, ell, gmax):
    h = sympy.symbols("h")
    val = sum(sympy.Rational(c.numerator, c.denominator) * sympy.exp(sympy.I * k * h / 2)
              for k, c in ((k, Fraction(c)) for k, c in P.items()))
    expr = (-1) ** (ell + 1) * val / (2 * sympy.sin(h / 2))
    ser = sympy.series(sympy.simplify(expr.rewrite(sympy.cos)) * h, h, 0, 2 * gmax + 1).removeO()
    ser = sympy.expand(ser)
    return [ser.coeff(h, 2 * g) for g in range(gmax + 1)]


@pytest.mark.parametrize(
    "P, ell",
    [
        (ONE, 1),
        (-quantum_integer(2), 2),
        (quantum_integer(3), 1),
        (HalfLaurent({4: 2, 0: -1, -4: 2}), 3),
    ],
)
def test_hbar_matches_sympy(P, ell):
    ours = hbar_expand(P, ell, 3)
    theirs = sympy_oracle(P, ell, 3)
    assert [sympy.Rational(x.numerator, x.denominator) for x in map(Fraction, ours)] == theirs


@pytest.mark.parametrize("P", [ONE, quantum_integer(2), quantum_integer(5), HalfLaurent({2: 3, -2: 3, 0: 1})])
def test_hbar_round_trip(P):
    # multiply the N_g back by (-1)^{ell+1} 2 sin(h/2)/h and compare with the cosine series
    gmax, ell = 4, 2
    N = hbar_expand(P, ell, gmax)
    sine = _half_sine_ratio(gmax)
    back = [(-1) ** (ell + 1) * sum(N[k] * sine[n - k] for k in range(n + 1)) for n in range(gmax + 1)]
    cos = [Fraction(0)] * (gmax + 1)
    for k, c in P.items():
        for n in range(gmax + 1):
            cos[n] += c * Fraction(-1) ** n * Fraction(k, 2) ** (2 * n) / factorial(2 * n)
    assert back == cos
