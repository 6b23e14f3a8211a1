"""Refined DT invariants of acyclic quivers by counting over finite fields.

Semistable loci are counted with the Harder-Narasimhan recursion, working
with the integer polynomials |R^ss_d(F_q)| rather than stack volumes so that
every intermediate quantity is a polynomial in q. A brute-force enumerator
over small prime fields serves as an independent check.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from pathlib import Path
from typing import Sequence

from .algebra import HalfLaurent, RationalFunctionQ, gl_order_poly, q_binomial
from .algebra.laurent import ZERO
from .algebra.poly import poly, poly_add, poly_divmod, poly_mul, poly_shift, poly_sub
from .geometry import (
    CatalogEntry,
    DimensionVector,
    Quiver,
    build_quiver,
    catalog,
    is_acyclic,
    skew_form,
)

__all__ = [
    "DtError",
    "DtResult",
    "Stability",
    "brute_force_semistable_count",
    "default_stability",
    "dt_for_class",
    "euler_form",
    "genericity_check",
    "gl_order",
    "hn_semistable_count",
    "natural_stability",
    "omega_for_class",
    "refined_dt",
    "stack_count",
]


class DtError(ValueError):
    """Raised when the DT computation cannot proceed; ``kind`` names why."""

    def __init__(self, kind: str, message: str, diagnostics=None):
        super().__init__(message)
        self.kind = kind
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class Stability:
    theta: tuple

    def slope(self, e: Sequence[int]) -> Fraction:
        total = sum(e)
        if total == 0:
            raise ValueError("slope of the zero vector")
        return Fraction(sum(t * x for t, x in zip(self.theta, e)), total)


def _theta(theta) -> Stability:
    if isinstance(theta, Stability):
        return theta
    return Stability(tuple(Fraction(t) if not isinstance(t, int) else t for t in theta))


def _dims(d) -> tuple[int, ...]:
    return tuple(d.entries if isinstance(d, DimensionVector) else d)


def _check_len(Q: Quiver, *vecs):
    for v in vecs:
        if len(v) != Q.n:
            raise ValueError(f"vector of length {len(v)} for a quiver with {Q.n} vertices")


def euler_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    d, e = _dims(d), _dims(e)
    _check_len(Q, d, e)
    return sum(x * y for x, y in zip(d, e)) - sum(
        k * d[i] * e[j] for i, j, k in Q.arrow_list()
    )


def gl_order(n: int) -> tuple:
    """|GL_n(F_q)| as a coefficient tuple, lowest degree first."""
    if n < 0:
        raise ValueError("negative rank")
    return gl_order_poly(n)


def _group_order(d) -> tuple:
    return reduce(poly_mul, (gl_order_poly(x) for x in d), (1,))


def _arrow_pairing(Q: Quiver, d, e) -> int:
    """sum over arrows i->j of d_i e_j"""
    return sum(k * d[i] * e[j] for i, j, k in Q.arrow_list())


def stack_count(Q: Quiver, d) -> RationalFunctionQ:
    d = _dims(d)
    _check_len(Q, d)
    if any(x < 0 for x in d):
        raise DtError("negative-dimension", "negative dimension")
    return RationalFunctionQ(poly_shift((1,), _arrow_pairing(Q, d, d)), _group_order(d))


def _sub_vectors(d):
    """Nonzero e <= d componentwise, lexicographic."""
    for e in itertools.product(*(range(x + 1) for x in d)):
        if any(e):
            yield e


class HNSolver:
    """Memoized HN recursion for one quiver and stability.

    ``semistable(d)`` is |R^ss_d(F_q)| as an integer polynomial.
    """

    def __init__(self, Q: Quiver, theta: Stability, cache: bool = True):
        self.Q = Q
        self.theta = theta
        self.cache = cache
        self._arrows = Q.arrow_list()
        self._ss: dict = {}
        self._filtered: dict = {}

    def _pair(self, d, e):
        return sum(k * d[i] * e[j] for i, j, k in self._arrows)

    def _glue(self, d, d1):
        """Number of ways to extend: flag choices times free off-diagonal blocks."""
        rest = tuple(a - b for a, b in zip(d, d1))
        out = poly_shift((1,), self._pair(rest, d1))
        for a, b in zip(d, d1):
            if 0 < b < a:
                out = poly_mul(out, q_binomial(a, b))
        return out, rest

    def filtered(self, d, bound):
        """Representations whose HN slopes all lie strictly below ``bound``."""
        if not any(d):
            return (1,)
        key = (d, bound)
        if self.cache and key in self._filtered:
            return self._filtered[key]
        total = ()
        for d1 in _sub_vectors(d):
            mu = self.theta.slope(d1)
            if bound is not None and mu >= bound:
                continue
            glue, rest = self._glue(d, d1)
            if any(rest) and self.theta.slope(rest) >= mu:
                continue  # remaining parts cannot all have slope below mu
            total = poly_add(total, poly_mul(poly_mul(self.semistable(d1), glue), self.filtered(rest, mu)))
        if self.cache:
            self._filtered[key] = total
        return total

    def semistable(self, d):
        d = tuple(d)
        if self.cache and d in self._ss:
            return self._ss[d]
        out = poly_shift((1,), self._pair(d, d))
        mu_d = self.theta.slope(d)
        for d1 in _sub_vectors(d):
            if d1 == d:
                continue
            mu = self.theta.slope(d1)
            if mu <= mu_d:
                continue
            glue, rest = self._glue(d, d1)
            out = poly_sub(out, poly_mul(poly_mul(self.semistable(d1), glue), self.filtered(rest, mu)))
        if self.cache:
            self._ss[d] = out
        return out


def hn_semistable_count(Q: Quiver, d, theta, *, cache: bool = True, solver: HNSolver | None = None) -> RationalFunctionQ:
    """|R^ss_d| / |G_d| as a reduced rational function in q."""
    d = _dims(d)
    _check_len(Q, d)
    if any(x < 0 for x in d):
        raise DtError("negative-dimension", "negative dimension")
    if not any(d):
        return RationalFunctionQ((1,))
    theta = _theta(theta)
    solver = solver or HNSolver(Q, theta, cache=cache)
    return RationalFunctionQ(solver.semistable(d), _group_order(d))


def genericity_check(Q: Quiver, d, theta) -> list[tuple[int, ...]]:
    """Proper nonzero subdimensions with the same slope as d (empty list = ok)."""
    d = _dims(d)
    theta = _theta(theta)
    if not any(d):
        return []
    mu = theta.slope(d)
    return [e for e in _sub_vectors(d) if e != d and theta.slope(e) == mu]


def default_stability(Q: Quiver) -> Stability:
    """theta_k = -k^2 along the topological order."""
    ok, order = is_acyclic(Q)
    if not ok:
        raise DtError("cyclic", "cyclic quiver has no topological order")
    theta = [0] * Q.n
    for k, v in enumerate(order, start=1):
        theta[v] = -k * k
    return Stability(tuple(theta))


@dataclass
class DtResult:
    omega: HalfLaurent
    moduli_dimension: int
    moduli_count: tuple
    theta: tuple
    diagnostics: dict = field(default_factory=dict)

    @property
    def generic(self) -> bool:
        return not self.diagnostics.get("offenders")

    def to_json(self) -> dict:
        return {
            "omega": self.omega.to_json(),
            "dim": self.moduli_dimension,
            "count_poly": [int(c) for c in self.moduli_count],
            "theta": [str(t) for t in self.theta],
            "generic": self.generic,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DtResult":
        return cls(
            omega=HalfLaurent.from_json(data["omega"]),
            moduli_dimension=data["dim"],
            moduli_count=tuple(data["count_poly"]),
            theta=tuple(Fraction(t) for t in data["theta"]),
            diagnostics={"offenders": [] if data["generic"] else ["unknown"]},
        )


def _cache_path(Q: Quiver, d, theta: Stability) -> Path | None:
    root = os.environ.get("TOOL_CACHE_DIR")
    if not root:
        return None
    key = json.dumps(
        {"arrows": [list(r) for r in Q.arrows], "d": list(d), "theta": [str(t) for t in theta.theta]},
        sort_keys=True,
    )
    return Path(root) / (hashlib.sha256(key.encode()).hexdigest() + ".json")


def refined_dt(Q: Quiver, d, theta=None, *, cache: bool = True) -> DtResult:
    d = _dims(d)
    _check_len(Q, d)
    acyclic, _ = is_acyclic(Q)
    if not acyclic:
        raise DtError("cyclic", "cyclic quiver: the DT side needs an acyclic quiver")
    if any(x < 0 for x in d):
        raise DtError("negative-dimension", "negative dimension")
    if not any(d):
        raise DtError("zero-dimension", "zero dimension vector")
    if reduce(gcd, d) != 1:
        raise DtError("not-primitive", f"dimension vector {d} is not primitive")
    theta = default_stability(Q) if theta is None else _theta(theta)
    if len(theta.theta) != Q.n:
        raise ValueError("stability has the wrong length")
    offenders = genericity_check(Q, d, theta)
    if offenders:
        raise DtError(
            "not-generic",
            f"stability {list(theta.theta)} is not generic for {d}",
            {"offenders": offenders},
        )

    spill = _cache_path(Q, d, theta) if cache else None
    if spill is not None and spill.exists():
        return DtResult.from_json(json.loads(spill.read_text()))

    ss = HNSolver(Q, theta, cache=cache).semistable(d)
    # (q - 1) |R^ss| / |G| must be a polynomial: the group acts freely modulo scalars
    count, rem = poly_divmod(poly_mul(ss, (-1, 1)), _group_order(d))
    if rem:
        raise DtError("non-polynomial", "semistable count is not a polynomial", {"numerator": ss})
    count = poly(count)
    if not count:
        raise DtError("empty", f"empty semistable locus for {d} at {list(theta.theta)}", {"offenders": []})
    if any(Fraction(c).denominator != 1 or c < 0 for c in count):
        raise DtError("non-polynomial", "moduli count has negative or fractional coefficients", {"count": count})
    count = tuple(int(c) for c in count)
    dim = 1 - euler_form(Q, d, d)
    if len(count) - 1 != dim:
        raise DtError("dimension-mismatch", f"count degree {len(count) - 1} != expected dimension {dim}")
    sign = -1 if dim % 2 else 1
    omega = HalfLaurent({2 * j - dim: sign * c for j, c in enumerate(count) if c})
    result = DtResult(omega, dim, count, theta.theta, {"offenders": []})
    if spill is not None:
        spill.parent.mkdir(parents=True, exist_ok=True)
        spill.write_text(json.dumps(result.to_json(), sort_keys=True))
    return result


# ---------------------------------------------------------------------------
# stability for catalog classes


def natural_stability(Q: Quiver, d, ray_of: Sequence[tuple[int, int]], tiebreak: Sequence[int]) -> Stability:
    """theta_j = K <m_j, M> + tau_j with M = sum d_j m_j.

    The first term vanishes on d and on every class whose lattice image is
    parallel to M; the small tie-breaker separates those.
    """
    d = _dims(d)
    M = (sum(x * m[0] for x, m in zip(d, ray_of)), sum(x * m[1] for x, m in zip(d, ray_of)))
    K = 2 * max(abs(t) for t in tiebreak) * sum(d) ** 2 + 1
    return Stability(tuple(K * skew_form(m, M) + t for m, t in zip(ray_of, tiebreak)))


def _tiebreaks(order: Sequence[int]):
    n = len(order)
    for f in (lambda k: -k, lambda k: -k * k, lambda k: -(2**k)):
        tau = [0] * n
        for k, v in enumerate(order, start=1):
            tau[v] = f(k)
        yield tau


def _search_stability(Q: Quiver, d):
    """Small strictly decreasing integer theta with a generic, nonempty locus."""
    _, order = is_acyclic(Q)
    n = Q.n
    bound = 4 * n * n
    first = default_stability(Q)
    yield first
    # strictly decreasing along the order: choose gaps >= 1
    for total in range(n - 1, 2 * bound + 1):
        for gaps in _compositions(total, n - 1):
            theta = [0] * n
            value = 0
            for k, v in enumerate(order):
                if k:
                    value -= gaps[k - 1]
                theta[v] = value
            shift = bound if value < -bound else 0
            yield Stability(tuple(t + shift for t in theta))


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class ClassResult:
    omega: HalfLaurent
    theta: tuple | None
    dt: DtResult | None
    reason: str


def dt_for_class(entry: CatalogEntry, theta=None, *, cache: bool = True) -> ClassResult:
    """Omega for a catalog class together with the stability used.

    Invalid dimension vectors give 0. Without an explicit theta the natural
    chamber of the class is used; an empty semistable locus there gives 0.
    Only if no tie-break makes it generic do we fall back to -k^2 and a
    bounded search.
    """
    Q, d = build_quiver(entry.model)
    if not d.valid:
        return ClassResult(ZERO, None, None, "negative dimension: omega set to 0")
    acyclic, order = is_acyclic(Q)
    if not acyclic:
        raise DtError("cyclic", f"{entry.name}: cyclic quiver, the DT side needs an acyclic quiver")
    if theta is not None:
        res = refined_dt(Q, d, theta, cache=cache)
        return ClassResult(res.omega, res.theta, res, "user stability")
    rays = [entry.model.ray_of(j) for j in range(Q.n)]
    failures = []
    for tau in _tiebreaks(order):
        th = natural_stability(Q, d, rays, tau)
        try:
            res = refined_dt(Q, d, th, cache=cache)
            return ClassResult(res.omega, res.theta, res, "natural chamber")
        except DtError as exc:
            if exc.kind == "empty":
                # generic chamber, no semistable representations: nothing to count
                return ClassResult(ZERO, th.theta, None, "natural chamber: empty semistable locus, omega = 0")
            if exc.kind != "not-generic":
                raise
            failures.append(str(exc))
    res = _first_good(Q, d, cache)
    return ClassResult(res.omega, res.theta, res, "searched stability")


def _first_good(Q: Quiver, d, cache=True) -> DtResult:
    tried = 0
    for th in _search_stability(Q, d):
        tried += 1
        try:
            return refined_dt(Q, d, th, cache=cache)
        except DtError as exc:
            if exc.kind not in ("not-generic", "empty"):
                raise
        if tried > 20000:
            break
    raise DtError("no-stability", "no generic stability with nonempty semistable locus found")


def omega_for_class(entry, params: dict | None = None, theta=None) -> HalfLaurent:
    if not isinstance(entry, CatalogEntry):
        entry = catalog(entry, params or {})
    return dt_for_class(entry, theta).omega


# ---------------------------------------------------------------------------
# brute force over F_p


BRUTE_FORCE_LIMIT = 10**7


def _vectors(p, n):
    return list(itertools.product(range(p), repeat=n))


def _subspaces(p, n, k, _cache={}):
    """All k-dimensional subspaces of F_p^n as (basis, set of vectors) pairs."""
    key = (p, n, k)
    if key in _cache:
        return _cache[key]
    if k == 0:
        out = [((), frozenset({(0,) * n}))]
    else:
        seen = set()
        out = []
        vecs = [v for v in _vectors(p, n) if any(v)]
        for basis in itertools.combinations(vecs, k):
            span = _span(p, n, basis)
            if len(span) == p**k and span not in seen:
                seen.add(span)
                out.append((basis, span))
    _cache[key] = out
    return out


def _span(p, n, basis):
    out = {(0,) * n}
    for b in basis:
        out = {tuple((x + c * y) % p for x, y in zip(v, b)) for v in out for c in range(p)}
    return frozenset(out)


def _apply(mat, v, p):
    return tuple(sum(mat[r][c] * v[c] for c in range(len(v))) % p for r in range(len(mat)))


@lru_cache(maxsize=1 << 16)
def _maps_into(mat, basis, target, p) -> bool:
    # a linear map sends U into U' as soon as it sends a basis of U there
    return all(_apply(mat, v, p) in target for v in basis)


class _SubrepSearch:
    """Exhaustive search for a subrepresentation of fixed dimension e.

    Vertices are filled in index order; each choice is checked against the
    arrows joining it to vertices already chosen.
    """

    def __init__(self, arrows, d, e, p):
        self.p = p
        self.n = len(d)
        self.choices = [_subspaces(p, d[i], e[i]) for i in range(self.n)]
        # constraints[i]: arrows between i and an earlier vertex
        self.constraints = [[] for _ in range(self.n)]
        for a, b, _ in arrows:
            if a != b:
                self.constraints[max(a, b)].append((a, b))

    def __call__(self, mats) -> bool:
        p, n, choices, constraints = self.p, self.n, self.choices, self.constraints
        chosen = [None] * n

        def rec(i):
            if i == n:
                return True
            for U in choices[i]:
                chosen[i] = U
                ok = True
                for a, b in constraints[i]:
                    src, dst = chosen[a], chosen[b]
                    for mat in mats[(a, b)]:
                        if not _maps_into(mat, src[0], dst[1], p):
                            ok = False
                            break
                    if not ok:
                        break
                if ok and rec(i + 1):
                    return True
            return False

        return rec(0)


@dataclass
class BruteForceCount:
    semistable: Fraction
    stable_orbits: Fraction
    representations: int


def brute_force_semistable_count(Q: Quiver, d, theta, p: int) -> BruteForceCount:
    """Enumerate all representations over F_p.

    ``semistable`` is |R^ss(F_p)| / |G(F_p)|; ``stable_orbits`` is the number
    of stable isomorphism classes, i.e. |R^st| (p - 1) / |G|.
    """
    d = _dims(d)
    theta = _theta(theta)
    arrows = Q.arrow_list()
    entries = sum(k * d[i] * d[j] for i, j, k in arrows)
    if p**entries > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{p}^{entries} representations exceed the brute-force limit")
    group = 1
    for x in d:
        for k in range(x):
            group *= p**x - p**k
    mu = theta.slope(d)
    subs = [e for e in _sub_vectors(d) if e != d]
    unstable_types = [e for e in subs if theta.slope(e) > mu]
    strict_types = [e for e in subs if theta.slope(e) == mu]

    slots = []  # one entry per arrow copy
    for i, j, k in arrows:
        slots.extend([(i, j)] * k)
    # every d_j x d_i matrix over F_p, as row tuples
    shapes = {}
    for i, j in set(slots):
        rows = _vectors(p, d[i])
        shapes[(i, j)] = list(itertools.product(rows, repeat=d[j]))
    unstable = [_SubrepSearch(arrows, d, e, p) for e in unstable_types]
    strict = [_SubrepSearch(arrows, d, e, p) for e in strict_types]
    keys = sorted(set(slots))
    groups = [(key, [n for n, s in enumerate(slots) if s == key]) for key in keys]
    ss = st = 0
    total = 0
    for choice in itertools.product(*(shapes[s] for s in slots)):
        total += 1
        mats = {key: [choice[n] for n in idx] for key, idx in groups}
        if any(search(mats) for search in unstable):
            continue
        ss += 1
        if not any(search(mats) for search in strict):
            st += 1
    return BruteForceCount(Fraction(ss, group), Fraction(st * (p - 1), group), total)
