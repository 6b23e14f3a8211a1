import itertools
from fractions import Fraction
from math import factorial

import pytest

from quivergw.algebra import HalfLaurent, QuantumTorusElement, quantum_integer, skew
from quivergw.dt import dt_for_class, DtError
from quivergw.geometry import CATALOG, ModelError, UsageError, catalog
from quivergw.scattering import (
    ConsistencyError,
    DilogFactorization,
    InsufficientOrderError,
    Space,
    Wall,
    classical_limit,
    complete_diagram,
    cross_wall,
    dilog_factorize,
    factor_sign,
    gw_block,
    initial_diagram,
    is_consistent,
    required_cap,
    same_walls,
    scat_omega,
    scatter_class,
)

ONE_Q = HalfLaurent.const(1)


def mono(space, a, m, c=1):
    return space.element({(tuple(a), tuple(m)): c})


# --- an independent oracle: the quantum torus at q^(1/2) = 2, conjugation by Psi ---

S = Fraction(2)


class Numeric:
    """Truncated quantum torus with q^(1/2) specialized to 2."""

    def __init__(self, nvars, cap, terms=None):
        self.nvars, self.cap = nvars, cap
        self.terms = {k: v for k, v in (terms or {}).items() if v and sum(k[0]) <= cap}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Numeric(self.nvars, self.cap, out)

    def scale(self, c):
        return Numeric(self.nvars, self.cap, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (a, m), x in self.terms.items():
            for (b, n), y in other.terms.items():
                ab = tuple(i + j for i, j in zip(a, b))
                if sum(ab) > self.cap:
                    continue
                key = (ab, (m[0] + n[0], m[1] + n[1]))
                out[key] = out.get(key, 0) + x * y * S ** skew(m, n)
        return Numeric(self.nvars, self.cap, out)

    def exp(self):
        one = Numeric(self.nvars, self.cap, {((0,) * self.nvars, (0, 0)): Fraction(1)})
        out, power = one, one
        for k in range(1, self.cap + 1):
            power = power * self
            out = out + power.scale(Fraction(1, factorial(k)))
        return out


def log_psi(nvars, cap, a, n_vec, c_halves, eps, E):
    """E * log Psi(eps q^(c/2) t^a zhat^n) with Psi(x) = exp(sum (-1)^(l-1) x^l / (l (q^(l/2) - q^(-l/2))))."""
    terms = {}
    l = 1
    while l * sum(a) <= cap:
        coeff = Fraction(E * (-1) ** (l - 1)) * Fraction(eps) ** l * S ** (l * c_halves) / (l * (S**l - S**-l))
        terms[(tuple(l * x for x in a), (l * n_vec[0], l * n_vec[1]))] = coeff
        l += 1
    return Numeric(nvars, cap, terms)


def numeric(x: QuantumTorusElement) -> Numeric:
    return Numeric(x.nvars, x.cap, {k: v.evaluate(2) for k, v in x.terms.items()})


def conjugate(x, wall, sign, lattice=None):
    y = Numeric(x.nvars, x.cap)
    for (a, k, c), n in wall.factors:
        n_vec = (k * wall.direction[0], k * wall.direction[1])
        y = y + log_psi(x.nvars, x.cap, a, n_vec, c, factor_sign(lattice, a), sign * n)
    return y.exp() * numeric(x) * y.scale(-1).exp()


WALLS = [
    Wall((1, 0), "in", ((((1,), 1, 0), 1),)),
    Wall((1, 0), "out", ((((1,), 1, 1), 2), (((2,), 1, -1), -1))),
    Wall((1, 1), "out", ((((1,), 2, 0), -1),)),
    Wall((2, -1), "out", ((((1,), 1, 3), 1), (((1,), 2, 0), 1))),
]


@pytest.mark.parametrize("wall", WALLS)
@pytest.mark.parametrize("m", [(0, 1), (1, 0), (-1, 2), (3, 1), (0, -2)])
@pytest.mark.parametrize("sign", [1, -1])
def test_cross_wall_is_conjugation_by_dilogarithms(wall, m, sign):
    space = Space(1, 4)
    x = mono(space, (0,), m)
    ours = numeric(cross_wall(x, wall, sign))
    assert ours.terms == conjugate(x, wall, sign).terms


def test_cross_wall_examples():
    space = Space(1, 1)
    wall = Wall((1, 0), "in", ((((1,), 1, 0), 1),))
    image = cross_wall(mono(space, (0,), (0, 1)), wall)
    # zhat^(0,1) (1 + q^(1/2) t zhat^(1,0)) = zhat^(0,1) + t zhat^(1,1)
    assert image == mono(space, (0,), (0, 1)) + mono(space, (1,), (1, 1))
    assert cross_wall(mono(space, (0,), (1, 0)), wall) == mono(space, (0,), (1, 0))
    classical = Space(1, 1, quantum=False)
    image = cross_wall(mono(classical, (0,), (0, 1)), wall)
    assert image == mono(classical, (0,), (0, 1)) + mono(classical, (1,), (1, 1))


def test_initial_diagram_examples():
    D = initial_diagram([(1, 0), (0, 1)], 2)
    assert [(w.direction, w.kind) for w in D.walls] == [((1, 0), "in"), ((0, 1), "in")]
    f = D.walls[0].function(D.space)
    assert f == D.space.one() + mono(D.space, (1, 0), (1, 0))
    D = initial_diagram(catalog("P2(1,4)", d=1).model, 3)
    assert sorted(w.direction for w in D.incoming) == [(-1, 0), (0, -1), (0, -1)]
    with pytest.raises(ModelError):
        initial_diagram([], 2)


def test_basic_example_classical():
    D = complete_diagram(initial_diagram([(1, 0), (0, 1)], 2, quantum=False))
    assert [w.direction for w in D.outgoing] == [(1, 1)]
    ray = D.ray((1, 1))
    assert ray.factors == ((((1, 1), 1, 0), 1),)
    assert ray.function(D.space) == D.space.one() + mono(D.space, (1, 1), (1, 1))


def test_basic_example_quantum():
    D = complete_diagram(initial_diagram([(1, 0), (0, 1)], 2))
    assert [w.direction for w in D.outgoing] == [(1, 1)]
    assert D.ray((1, 1)).factors == ((((1, 1), 1, 0), 1),)
    assert same_walls(classical_limit(D), complete_diagram(initial_diagram([(1, 0), (0, 1)], 2, quantum=False)))


def test_single_line_is_already_consistent():
    D = initial_diagram([(2, 1)], 3)
    assert complete_diagram(D).walls == D.walls
    assert is_consistent(D)


def test_kronecker_two():
    # two lines with pairing 2: the (1,1) class carries a W-boson
    lines = [(-1, 0), (1, 2)]
    assert skew(lines[1], lines[0]) == 2
    D = complete_diagram(initial_diagram(lines, 4))
    assert is_consistent(D)
    ray = D.ray((0, 1))
    w_boson = {c: n for (a, k, c), n in ray.factors if a == (1, 1)}
    assert w_boson == {-1: -1, 1: -1}
    # hypermultiplet rays for the classes (1,2) and (2,1) appear beside it
    assert {w.direction for w in D.outgoing} >= {(1, 4), (-1, 2), (0, 1)}


def test_dilog_factorize_examples():
    space = Space(2, 3)
    f = space.one() + mono(space, (1, 1), (1, 1))
    fac = dilog_factorize(f, (1, 1))
    assert fac.rows() == [((1, 1), 1, 0, 1)]
    space = Space(1, 2)
    x = mono(space, (1,), (1, 0))
    f = (space.one() + x * HalfLaurent.monomial(1)) * (space.one() + x * HalfLaurent.monomial(-1))
    assert dilog_factorize(f, (1, 0)).rows() == [((1,), 1, -1, 1), ((1,), 1, 1, 1)]
    with pytest.raises(ValueError):
        dilog_factorize(space.one() + mono(space, (1,), (0, 1)), (1, 0))


def test_factorization_round_trip():
    space = Space(2, 4)
    for lattice in (None, ((1, 0), (0, 1)), ((1, 0), (1, 2))):
        for factors in [
            {((1, 0), 1, 0): 1, ((1, 1), 2, 1): -2},
            {((0, 1), 1, 2): 3, ((1, 1), 1, -1): 1, ((2, 1), 3, 0): -1},
        ]:
            fac = DilogFactorization((1, 0), factors, lattice)
            f = fac.expand(space)
            again = dilog_factorize(f, (1, 0), lattice)
            assert again.expand(space) == f
            assert again.factors == factors


def test_factor_sign():
    lattice = ((-1, 0), (1, 2))
    assert factor_sign(lattice, (1, 0)) == 1
    assert factor_sign(lattice, (0, 1)) == 1
    # (-1)^(|a| + 1 + a_1 a_2 <m_1, m_2>) with <m_1, m_2> = -2
    assert factor_sign(lattice, (1, 1)) == -1
    assert factor_sign(lattice, (2, 1)) == 1
    assert factor_sign(None, (2, 1)) == 1


def test_extraction_examples():
    for name, params, expect in [
        ("P2(1,4)", {"d": 1}, ONE_Q),
        ("F0(2,2)", {"d1": 1, "d2": 0}, ONE_Q),
        ("P2(1,4)", {"d": 2}, -quantum_integer(2)),
    ]:
        e = catalog(name, params)
        D = scatter_class(e, required_cap(e.model) + 1)
        assert scat_omega(D, e) == expect


def test_insufficient_order():
    e = catalog("P2(1,4)", d=2)
    D = scatter_class(e, 3)
    with pytest.raises(InsufficientOrderError):
        scat_omega(D, e)


def test_gw_block_examples():
    e = catalog("P2(1,4)", d=1)
    D = scatter_class(e)
    assert gw_block(D, e, 1) == [1, Fraction(1, 24)]
    e = catalog("P2(1,4)", d=2)
    D = scatter_class(e)
    assert gw_block(D, e, 1) == [2, Fraction(-1, 6)]
    e = catalog("F1(4,0)", d1=2, d2=1)
    assert gw_block(D, e, 2) == [0, 0, 0]


def test_classical_limit_examples():
    e = catalog("P2(1,4)", d=2)
    D = scatter_class(e)
    assert scat_omega(classical_limit(D), e) == HalfLaurent.const(-2)
    assert scat_omega(D, e).at_one() == -2
    assert classical_limit(initial_diagram([(1, 0)], 1)).outgoing == []


SMALLEST = {
    "P2(1,4)": {"d": 1},
    "P2(4,1)": {"d": 1},
    "F0(2,2)": {"d1": 1, "d2": 1},
    "F1(0,4)": {"d1": 1, "d2": 1},
    "F1(4,0)": {"d1": 1, "d2": 1},
    "F1(1,3)": {"d1": 1, "d2": 1},
    "F1(3,1)": {"d1": 1, "d2": 1},
    "F2(2,2)": {"d1": 1, "d2": 1},
    "FN(-N,N+4)": {"N": 1, "d1": 1, "d2": 2},
    "FN(N+4,-N)": {"N": 1, "d1": 1, "d2": 1},
}


@pytest.mark.parametrize("L", [4, 6])
@pytest.mark.parametrize("name", list(CATALOG))
def test_specialization_commutes_and_loops_close(name, L):
    model = catalog(name, SMALLEST[name]).model
    quantum = complete_diagram(initial_diagram(model, L))
    classical = complete_diagram(initial_diagram(model, L, quantum=False))
    assert is_consistent(quantum)
    assert is_consistent(classical)
    assert same_walls(classical_limit(quantum), classical)


def sweep():
    for name, spec in CATALOG.items():
        if not spec.acyclic:
            continue
        ranges = [range(1, 3) if p == "N" else range(0, 4) for p in spec.params]
        for values in itertools.product(*ranges):
            try:
                e = catalog(name, dict(zip(spec.params, values)))
            except UsageError:
                continue
            if sum(max(x, 0) for x in e.model.dims) <= 6:
                yield e


def test_both_engines_agree_on_small_classes():
    compared = 0
    for e in sweep():
        try:
            omega_dt = dt_for_class(e).omega
        except DtError as exc:
            assert exc.kind == "not-primitive"
            continue
        D = scatter_class(e, required_cap(e.model) + 1) if min(e.model.dims) >= 0 else None
        omega_scat = scat_omega(D, e) if D is not None else HalfLaurent()
        if D is not None:
            assert is_consistent(D)
        assert omega_scat.is_bar_invariant()
        assert omega_scat == omega_dt, (e.name, e.params)
        compared += 1
    assert compared > 40


def test_consistency_error_on_bad_data():
    # a wall with a fractional exponent cannot come out of completion
    with pytest.raises(ValueError):
        Wall((1, 0), "out", ((((1,), 1, 0), Fraction(1, 2)),))
    with pytest.raises(ValueError):
        Wall((2, 0), "out", ())


def test_unbounded_agrees_with_bounded():
    e = catalog("F0(2,2)", d1=1, d2=1)
    bounded = scatter_class(e, required_cap(e.model) + 1)
    free = scatter_class(e, required_cap(e.model) + 1, bounded=False)
    assert is_consistent(free)
    assert scat_omega(bounded, e) == scat_omega(free, e)


def test_json_shape():
    D = complete_diagram(initial_diagram([(1, 0), (0, 1)], 2))
    data = D.to_json()
    assert data["cap"] == 2
    assert {"dir": [1, 1], "kind": "out", "factors": [[[1, 1], 1, 0, 1]]} in data["walls"]


def test_consistency_error_is_raised_for_broken_diagrams():
    D = complete_diagram(initial_diagram([(1, 0), (0, 1)], 2))
    broken = type(D)(tuple(D.incoming), D.space, D.lattice)
    assert not is_consistent(broken)
    assert ConsistencyError.__mro__[1] is RuntimeError
