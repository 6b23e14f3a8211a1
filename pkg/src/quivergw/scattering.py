"""Quantum scattering diagrams in the plane.

Walls carry products of elementary factors (1 + q^c t^a zhat^n)^e with n a
positive multiple of a fixed lattice direction. Crossing a wall acts on the
quantum torus by conjugation with the corresponding quantum dilogarithms,
so on a monomial

    zhat^m  ->  zhat^m * prod_{i<p} (1 + q^{c+i+1/2} nu)^E          (p > 0)
    zhat^m  ->  zhat^m * prod_{i<|p|} (1 + q^{c-i-1/2} nu)^(-E)    (p < 0)

with nu = t^a zhat^n and p = <n, m>. ``E`` is the factor exponent times the
crossing sign. Completion proceeds one t-degree at a time, reading the
defect of the loop around the origin off the images of zhat^(1,0) and
zhat^(0,1) and cancelling it with new outgoing factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Mapping, Sequence

from .algebra import (
    HalfLaurent,
    QuantumTorusElement,
    hbar_expand,
    quantum_integer,
    skew,
)
from .algebra.laurent import ONE, ZERO
from .geometry import CatalogEntry, ModelError, ToricModel, build_quiver, extraction_ray

__all__ = [
    "CALIBRATION",
    "ConsistencyError",
    "DilogFactorization",
    "InsufficientOrderError",
    "ScatteringDiagram",
    "Space",
    "Wall",
    "classical_limit",
    "complete_diagram",
    "cross_wall",
    "dilog_factorize",
    "extraction_sign",
    "gw_block",
    "initial_diagram",
    "is_consistent",
    "loop_image",
    "scat_omega",
    "same_walls",
    "scatter_class",
]

# Incoming line for a blow-up on ray m carries 1 + q^(EPS/2) t_j zhat^(S*m);
# extracted exponents are multiplied by EXTRACTION_SIGN.
INCOMING_DIRECTION_SIGN = 1
INCOMING_HALF_POWER = 0
EXTRACTION_SIGN = 1


def extraction_sign(ell: int) -> int:
    return EXTRACTION_SIGN


def factor_sign(lattice, a) -> int:
    """Sign eps(a) in the elementary factor (1 + eps q^c t^a zhat^n).

    eps(a) = (-1)^(|a| + 1 + sum_{i<j} a_i a_j <m_i, m_j>): the symmetric
    torus differs from the sign-twisted one by this quadratic refinement,
    normalized so that every incoming line has eps = +1. Without lattice
    data the sign is +1.
    """
    if lattice is None:
        return 1
    total = sum(a) + 1
    nz = [(x, m) for x, m in zip(a, lattice) if x]
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            total += nz[i][0] * nz[j][0] * skew(nz[i][1], nz[j][1])
    return -1 if total % 2 else 1


CALIBRATION = {
    "incoming_direction_sign": INCOMING_DIRECTION_SIGN,
    "incoming_half_power": INCOMING_HALF_POWER,
    "extraction_sign": EXTRACTION_SIGN,
    "factor_sign": "(-1)^(|a|+1+sum_{i<j} a_i a_j <m_i,m_j>)",
}


class ConsistencyError(RuntimeError):
    """The loop defect is not of wall form; signals a convention bug."""


class InsufficientOrderError(ValueError):
    pass


@dataclass(frozen=True)
class Space:
    nvars: int
    cap: int
    bounds: tuple[int, ...] | None = None
    quantum: bool = True

    def element(self, terms=None) -> QuantumTorusElement:
        return QuantumTorusElement(self.nvars, self.cap, terms, bounds=self.bounds, quantum=self.quantum)

    def one(self):
        return self.element({((0,) * self.nvars, (0, 0)): ONE})

    def with_cap(self, cap: int) -> "Space":
        return Space(self.nvars, cap, self.bounds, self.quantum)

    def admissible(self, a) -> bool:
        if sum(a) > self.cap:
            return False
        return self.bounds is None or all(x <= b for x, b in zip(a, self.bounds))


def _primitive(v) -> tuple[tuple[int, int], int]:
    g = gcd(abs(v[0]), abs(v[1]))
    if g == 0:
        raise ConsistencyError("zero lattice direction")
    return (v[0] // g, v[1] // g), g


# a factor key is (t-exponent a, multiple k of the wall direction, c in half-units)
FactorKey = tuple


@dataclass(frozen=True)
class Wall:
    direction: tuple[int, int]
    kind: str  # "in" for a full incoming line, "out" for an outgoing ray
    factors: tuple  # sorted ((a, k, c_halves), exponent) pairs
    lattice: tuple | None = None  # directions of the t_j, fixing factor signs

    def __post_init__(self):
        if self.kind not in ("in", "out"):
            raise ValueError("wall kind must be 'in' or 'out'")
        _, g = _primitive(self.direction)
        if g != 1:
            raise ValueError("wall direction must be primitive")
        for (a, k, _), n in self.factors:
            if k < 1 or not any(a) or not isinstance(n, int):
                raise ValueError("bad wall factor")

    @property
    def factor_map(self) -> dict:
        return dict(self.factors)

    def function(self, space: Space) -> QuantumTorusElement:
        return DilogFactorization(self.direction, dict(self.factors), self.lattice).expand(space)


def _freeze(factors: Mapping) -> tuple:
    return tuple(sorted((k, v) for k, v in factors.items() if v))


@dataclass
class DilogFactorization:
    direction: tuple[int, int]
    factors: dict = field(default_factory=dict)
    lattice: tuple | None = None

    def rows(self):
        """[(a, k, c_halves, n)] in canonical order."""
        return [(a, k, c, n) for (a, k, c), n in sorted(self.factors.items())]

    def expand(self, space: Space) -> QuantumTorusElement:
        out = space.one()
        for (a, k, c), n in sorted(self.factors.items()):
            n_vec = (k * self.direction[0], k * self.direction[1])
            out = out * _binomial_power(space, a, n_vec, c, n, factor_sign(self.lattice, a))
        return out


def _binom(E: int, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out = out * (E - i) / (i + 1)
    return out.numerator if out.denominator == 1 else out


def _binomial_power(space: Space, a, n_vec, c_halves: int, E: int, eps: int = 1) -> QuantumTorusElement:
    """(1 + eps q^{c/2} t^a zhat^n)^E via the binomial series (nu commutes with itself)."""
    terms = {((0,) * space.nvars, (0, 0)): ONE}
    j = 1
    while True:
        aj = tuple(j * x for x in a)
        if not space.admissible(aj):
            break
        coeff = _binom(E, j) * eps**j
        if coeff == 0:
            break
        terms[(aj, (j * n_vec[0], j * n_vec[1]))] = HalfLaurent.monomial(j * c_halves, coeff)
        j += 1
    return space.element(terms)


# ---------------------------------------------------------------------------
# wall crossing


def _monomial_image(space: Space, factors, u, sign: int, m, lattice=None) -> QuantumTorusElement:
    """F with theta(zhat^m) = zhat^m F, for factors along the primitive u."""
    F = space.one()
    base = skew(u, m)
    if base == 0:
        return F
    for (a, k, c), e in factors:
        E = sign * e
        eps = factor_sign(lattice, a)
        p = k * base
        n_vec = (k * u[0], k * u[1])
        if p > 0:
            for i in range(p):
                F = F * _binomial_power(space, a, n_vec, c + 2 * i + 1, E, eps)
        else:
            for i in range(-p):
                F = F * _binomial_power(space, a, n_vec, c - 2 * i - 1, -E, eps)
    return F


def _apply(space: Space, x: QuantumTorusElement, walls: Sequence) -> QuantumTorusElement:
    """Apply the automorphism of a group of parallel walls.

    ``walls`` holds (factors, u, sign, lattice); all their monomials commute.
    """
    memo: dict = {}
    acc: dict = {}
    for (a0, m), coeff in x.terms.items():
        F = memo.get(m)
        if F is None:
            F = space.one()
            for factors, u, sign, lattice in walls:
                F = F * _monomial_image(space, factors, u, sign, m, lattice)
            memo[m] = F
        for key, c in (space.element({(a0, m): coeff}) * F).terms.items():
            prev = acc.get(key)
            acc[key] = c if prev is None else prev + c
    return space.element({k: v for k, v in acc.items() if v})


def cross_wall(x: QuantumTorusElement, wall: Wall, sign: int = 1) -> QuantumTorusElement:
    """Conjugate x by the wall's dilogarithm product raised to ``sign``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    space = Space(x.nvars, x.cap, x.bounds, x.quantum)
    return _apply(space, x, [(wall.factors, wall.direction, sign, wall.lattice)])


def _half(v):
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cr = skew(u, v)
    return -1 if cr > 0 else (1 if cr < 0 else 0)


angle_key = cmp_to_key(_angle_cmp)


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class ScatteringDiagram:
    walls: tuple
    space: Space
    lattice: tuple  # monomial direction of each t_j, for homogeneity checks

    @property
    def cap(self) -> int:
        return self.space.cap

    @property
    def incoming(self):
        return [w for w in self.walls if w.kind == "in"]

    @property
    def outgoing(self):
        return [w for w in self.walls if w.kind == "out"]

    def ray(self, direction) -> Wall | None:
        for w in self.outgoing:
            if w.direction == tuple(direction):
                return w
        return None

    def half_rays(self):
        """Crossing data grouped by angle, counterclockwise from angle 0."""
        groups: dict = {}
        for w in self.walls:
            if w.kind == "in":
                neg = (-w.direction[0], -w.direction[1])
                groups.setdefault(w.direction, []).append((w.factors, w.direction, 1, w.lattice))
                groups.setdefault(neg, []).append((w.factors, w.direction, -1, w.lattice))
            else:
                groups.setdefault(w.direction, []).append((w.factors, w.direction, 1, w.lattice))
        return [groups[r] for r in sorted(groups, key=angle_key)]

    def to_json(self) -> dict:
        walls = sorted(self.walls, key=lambda w: (angle_key(w.direction), w.kind, w.factors))
        return {
            "walls": [
                {
                    "dir": list(w.direction),
                    "kind": w.kind,
                    "factors": [[list(a), k, c, n] for (a, k, c), n in w.factors],
                }
                for w in walls
            ],
            "cap": self.cap,
        }


def _lines_from_model(model: ToricModel):
    s = INCOMING_DIRECTION_SIGN
    return [(s * model.ray_of(j)[0], s * model.ray_of(j)[1]) for j in range(len(model.blowups))]


def initial_diagram(
    source,
    L: int,
    *,
    bounds: Sequence[int] | None = None,
    quantum: bool = True,
) -> ScatteringDiagram:
    """One incoming line 1 + t_j zhat^{m_j} per blow-up record.

    ``source`` is a ToricModel or a plain list of line directions.
    """
    if isinstance(source, CatalogEntry):
        source = source.model
    if isinstance(source, ToricModel):
        lattice = _lines_from_model(source)
    else:
        lattice = [tuple(v) for v in source]
    if not lattice:
        raise ModelError("a scattering diagram needs at least one incoming line")
    if L < 1:
        raise ValueError("cap must be positive")
    n = len(lattice)
    if bounds is not None and len(bounds) != n:
        raise ValueError("one bound per variable expected")
    space = Space(n, L, None if bounds is None else tuple(bounds), quantum)
    walls = []
    for j, m in enumerate(lattice):
        u, k = _primitive(m)
        a = tuple(1 if i == j else 0 for i in range(n))
        factors = {(a, k, INCOMING_HALF_POWER): 1} if space.admissible(a) else {}
        walls.append(Wall(u, "in", _freeze(factors), tuple(lattice)))
    return ScatteringDiagram(tuple(walls), space, tuple(lattice))


def loop_image(D: ScatteringDiagram, m, space: Space | None = None) -> QuantumTorusElement:
    """Image of zhat^m under the counterclockwise loop around the origin."""
    space = space or D.space
    x = space.element({((0,) * space.nvars, tuple(m)): ONE})
    for group in D.half_rays():
        x = _apply(space, x, group)
    return x


def is_consistent(D: ScatteringDiagram) -> bool:
    for m in ((1, 0), (0, 1)):
        x = loop_image(D, m)
        if x != D.space.element({((0,) * D.space.nvars, m): ONE}):
            return False
    return True


def _lattice_degree(D: ScatteringDiagram, a) -> tuple[int, int]:
    return (
        sum(x * m[0] for x, m in zip(a, D.lattice)),
        sum(x * m[1] for x, m in zip(a, D.lattice)),
    )


def _defects(D: ScatteringDiagram, order: int):
    """Exponents cancelling the order-``order`` loop defect, keyed by (a, n).

    A factor (1 + eps q^c nu)^e changes the image of zhat^m' at first order by
    eps e q^c [p]_q t^a zhat^{m'+n}, so the exponents are -eps D / [p]_q.
    """
    space = D.space.with_cap(order)
    readings = []
    for mp in ((1, 0), (0, 1)):
        img = loop_image(D, mp, space)
        found = {}
        for (a, m), c in img.terms.items():
            deg = sum(a)
            n = (m[0] - mp[0], m[1] - mp[1])
            if deg == 0:
                if (a, m) != ((0,) * space.nvars, mp) or c != ONE:
                    raise ConsistencyError(f"loop changes the t-degree 0 part: {c} at {m}")
                continue
            if deg < order:
                raise ConsistencyError(f"defect left at t-degree {deg} below order {order}")
            found[(a, n)] = c
        readings.append((mp, found))

    out = {}
    keys = set(readings[0][1]) | set(readings[1][1])
    for a, n in sorted(keys):
        if n == (0, 0):
            raise ConsistencyError(f"defect without lattice direction at t^{a}")
        if n != _lattice_degree(D, a):
            raise ConsistencyError(f"defect at t^{a} has lattice part {n}, expected {_lattice_degree(D, a)}")
        values = []
        eps = factor_sign(D.lattice, a)
        for mp, found in readings:
            p = skew(n, mp)
            c = found.get((a, n), ZERO)
            if p == 0:
                if c:
                    raise ConsistencyError(f"defect {c} on a monomial parallel to {n}")
                continue
            if space.quantum:
                try:
                    values.append(-eps * c.divide_exact(quantum_integer(p)))
                except ArithmeticError as exc:
                    raise ConsistencyError(f"defect {c} not divisible by [{p}]_q") from exc
            else:
                values.append(-eps * c * Fraction(1, p))
        if len(values) == 2 and values[0] != values[1]:
            raise ConsistencyError(f"defect readings disagree at t^{a} z^{n}: {values}")
        if values and values[0]:
            out[(a, n)] = values[0]
    return out


def complete_diagram(D: ScatteringDiagram, L: int | None = None) -> ScatteringDiagram:
    """Add outgoing rays until the loop is trivial modulo t-degree L+1."""
    L = D.cap if L is None else L
    if L > D.cap:
        D = ScatteringDiagram(D.walls, D.space.with_cap(L), D.lattice)
    rays: dict = {w.direction: dict(w.factors) for w in D.outgoing}
    incoming = tuple(D.incoming)

    def build():
        outs = tuple(Wall(r, "out", _freeze(f), D.lattice) for r, f in sorted(rays.items(), key=lambda kv: angle_key(kv[0])) if f)
        return ScatteringDiagram(incoming + outs, D.space, D.lattice)

    current = build()
    for order in range(1, L + 1):
        fixes = _defects(current, order)
        if not fixes:
            continue
        for (a, n), g in fixes.items():
            u, k = _primitive(n)
            bucket = rays.setdefault(u, {})
            for c, e in g.items():
                if e.denominator != 1:
                    raise ConsistencyError(f"non-integral exponent {e} at t^{a} z^{n}")
                key = (a, k, c)
                total = bucket.get(key, 0) + int(e)
                if total:
                    bucket[key] = total
                else:
                    bucket.pop(key, None)
        current = build()
    return current


def dilog_factorize(wall_or_function, direction=None, lattice=None) -> DilogFactorization:
    """Greedy normal form: kill the lowest surviving term with one factor.

    Terms are taken by increasing t-degree, then multiple of the direction,
    then q-power. ``lattice`` fixes the factor signs as in ``factor_sign``.
    """
    if isinstance(wall_or_function, Wall):
        w = wall_or_function
        return DilogFactorization(w.direction, dict(w.factors), w.lattice)
    f = wall_or_function
    if direction is None:
        raise ValueError("direction required when factoring a bare function")
    u = tuple(direction)
    space = Space(f.nvars, f.cap, f.bounds, f.quantum)
    if f.constant_term() != ONE:
        raise ValueError("wall function must have constant term 1")
    factors: dict = {}
    while True:
        rest = [(sum(a), a, m, c) for (a, m), c in f.terms.items() if any(a) or m != (0, 0)]
        if not rest:
            break
        rest.sort(key=lambda r: (r[0], _multiple(r[2], u), r[1]))
        _, a, m, c = rest[0]
        if not any(a):
            raise ValueError("wall function has t-degree 0 terms")
        k = _multiple(m, u)
        if k is None or k < 1:
            raise ValueError(f"monomial {m} is not a positive multiple of {u}")
        h = min(x for x, _ in c.items())
        eps = factor_sign(lattice, a)
        n = c.coeff(h) * eps
        if n.denominator != 1:
            raise ValueError(f"non-integer dilogarithm exponent {n}")
        factors[(a, k, h)] = factors.get((a, k, h), 0) + int(n)
        f = f * _binomial_power(space, a, m, h, -int(n), eps)
    return DilogFactorization(u, {k: v for k, v in factors.items() if v}, lattice)


def _multiple(m, u):
    if u[0]:
        k, r = divmod(m[0], u[0])
    else:
        k, r = divmod(m[1], u[1])
    if r or (k * u[0], k * u[1]) != tuple(m):
        return None
    return k


def classical_limit(D: ScatteringDiagram) -> ScatteringDiagram:
    """q^{1/2} = 1: merge factors that differ only in their q-power."""
    space = Space(D.space.nvars, D.space.cap, D.space.bounds, False)
    walls = []
    for w in D.walls:
        merged: dict = {}
        for (a, k, _), n in w.factors:
            merged[(a, k, 0)] = merged.get((a, k, 0), 0) + n
        if w.kind == "out" and not any(merged.values()):
            continue
        walls.append(Wall(w.direction, w.kind, _freeze(merged), w.lattice))
    return ScatteringDiagram(tuple(walls), space, D.lattice)


def same_walls(D1: ScatteringDiagram, D2: ScatteringDiagram) -> bool:
    def norm(D):
        return sorted((w.direction, w.kind, w.factors) for w in D.walls if w.factors or w.kind == "in")
    return D1.space == D2.space and norm(D1) == norm(D2)


# ---------------------------------------------------------------------------
# extraction for catalog classes


def target_exponents(model: ToricModel) -> tuple[int, ...]:
    return tuple(b.dim for b in model.blowups)


def required_cap(model: ToricModel) -> int:
    return sum(target_exponents(model))


def scatter_class(entry, L: int | None = None, *, bounded: bool = True, quantum: bool = True) -> ScatteringDiagram:
    """Completed diagram for a catalog class, truncated at the target exponents."""
    model = entry.model if isinstance(entry, CatalogEntry) else entry
    target = target_exponents(model)
    if any(x < 0 for x in target):
        raise ValueError("negative target exponent")
    L = required_cap(model) if L is None else L
    D = initial_diagram(model, L, bounds=target if bounded else None, quantum=quantum)
    return complete_diagram(D)


def scat_omega(D: ScatteringDiagram, entry) -> HalfLaurent:
    model = entry.model if isinstance(entry, CatalogEntry) else entry
    target = target_exponents(model)
    if any(x < 0 for x in target):
        return ZERO
    w, ell = extraction_ray(model)
    w = (INCOMING_DIRECTION_SIGN * w[0], INCOMING_DIRECTION_SIGN * w[1])
    if sum(target) > D.cap:
        raise InsufficientOrderError(f"cap {D.cap} below the target degree {sum(target)}")
    if D.space.bounds is not None and any(x > b for x, b in zip(target, D.space.bounds)):
        raise InsufficientOrderError("target exponent exceeds the variable bounds")
    # the ray in direction w also carries the outgoing half of any incoming line along w
    halves = list(D.outgoing) + [wall for wall in D.incoming if wall.direction == w]
    hits = [(wall.direction, key) for wall in halves for key, _ in wall.factors if key[0] == target]
    directions = {h[0] for h in hits}
    if len(directions) > 1:
        raise ConsistencyError(f"target monomial appears on several rays: {sorted(directions)}")
    total = HalfLaurent()
    for wall in halves:
        if wall.direction == w:
            total = total + HalfLaurent({c: n for (a, k, c), n in wall.factors if a == target and k == ell})
    return total * extraction_sign(ell)


def gw_block(D: ScatteringDiagram, entry, gmax: int) -> list[Fraction]:
    model = entry.model if isinstance(entry, CatalogEntry) else entry
    omega = scat_omega(D, model)
    _, ell = extraction_ray(model)
    return hbar_expand(omega, ell, gmax)
