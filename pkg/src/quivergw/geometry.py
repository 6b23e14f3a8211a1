"""Toric models, the quiver recipe, and the catalog of worked examples.

A toric model is a complete toric fan plus one record per blown-up boundary
point. Each record remembers the ray carrying the point and the
intersection number of the (pulled-back) curve class with the exceptional
divisor; that number becomes the dimension at the corresponding vertex.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Callable, Sequence

from .algebra import skew

__all__ = [
    "BlowupRecord",
    "CatalogEntry",
    "CATALOG",
    "DimensionVector",
    "ModelError",
    "Quiver",
    "ToricModel",
    "UsageError",
    "build_quiver",
    "catalog",
    "check_balancing",
    "extraction_ray",
    "is_acyclic",
    "load_model",
    "skew_form",
]


class ModelError(ValueError):
    """A toric model whose data is internally inconsistent."""


class UsageError(ValueError):
    """Bad catalog name or parameters."""


def skew_form(m: Sequence[int], mp: Sequence[int]) -> int:
    return skew(m, mp)


def primitive(v: Sequence[int]) -> tuple[tuple[int, int], int]:
    """Split a nonzero lattice vector as (primitive part, divisibility)."""
    g = gcd(abs(v[0]), abs(v[1]))
    if g == 0:
        raise ModelError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g), g


@dataclass(frozen=True)
class BlowupRecord:
    ray: int
    dim: int
    # "d2" marks the points blown up on D_2; "model" the toric-model points
    role: str = "model"


@dataclass(frozen=True)
class ToricModel:
    name: str
    rays: tuple[tuple[int, int], ...]
    blowups: tuple[BlowupRecord, ...]
    tangency_ray: int
    tangency_order: int
    boundary_degrees: tuple[int, ...] | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for r in self.rays:
            if r == (0, 0) or gcd(abs(r[0]), abs(r[1])) != 1:
                raise ModelError(f"ray {r} is not a primitive nonzero vector")
        if not self.blowups:
            raise ModelError("a toric model needs at least one blow-up")
        for b in self.blowups:
            if not 0 <= b.ray < len(self.rays):
                raise ModelError(f"blow-up record refers to missing ray {b.ray}")
        if not 0 <= self.tangency_ray < len(self.rays):
            raise ModelError("tangency ray index out of range")
        if self.tangency_order < 1:
            raise ModelError("tangency order must be positive")
        if self.boundary_degrees is not None and len(self.boundary_degrees) != len(self.rays):
            raise ModelError("one boundary degree per ray expected")

    def ray_of(self, j: int) -> tuple[int, int]:
        return self.rays[self.blowups[j].ray]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.blowups)

    @property
    def d2_count(self) -> int:
        return sum(1 for b in self.blowups if b.role == "d2")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "rays": [list(r) for r in self.rays],
            "blowups": [{"ray": b.ray, "dim": b.dim} for b in self.blowups],
            "tangency_ray": self.tangency_ray,
            "tangency_order": self.tangency_order,
        }
        if self.boundary_degrees is not None:
            out["boundary_degrees"] = list(self.boundary_degrees)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ToricModel":
        try:
            rays = tuple((int(a), int(b)) for a, b in data["rays"])
            blowups = tuple(
                BlowupRecord(int(b["ray"]), int(b["dim"]), b.get("role", "model"))
                for b in data["blowups"]
            )
            degrees = data.get("boundary_degrees")
            return cls(
                name=str(data.get("name", "custom")),
                rays=rays,
                blowups=blowups,
                tangency_ray=int(data["tangency_ray"]),
                tangency_order=int(data["tangency_order"]),
                boundary_degrees=None if degrees is None else tuple(int(x) for x in degrees),
            )
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model description: {exc}") from exc


def load_model(path: str | Path) -> ToricModel:
    model = ToricModel.from_json(json.loads(Path(path).read_text()))
    if model.boundary_degrees is not None:
        check_balancing(model, model.boundary_degrees).raise_for_violations()
    extraction_ray(model)
    return model


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.arrows) != self.n or any(len(row) != self.n for row in self.arrows):
            raise ValueError("arrow matrix must be n x n")
        if any(self.arrows[i][i] for i in range(self.n)):
            raise ValueError("loops are not allowed")
        if any(x < 0 for row in self.arrows for x in row):
            raise ValueError("arrow counts must be nonnegative")

    @classmethod
    def from_arrows(cls, n: int, arrows: dict[tuple[int, int], int]) -> "Quiver":
        mat = [[0] * n for _ in range(n)]
        for (i, j), k in arrows.items():
            mat[i][j] += k
        return cls(n, tuple(tuple(r) for r in mat))

    def arrow_list(self):
        """(i, j, count) for every nonzero entry."""
        return [
            (i, j, self.arrows[i][j])
            for i in range(self.n)
            for j in range(self.n)
            if self.arrows[i][j]
        ]

    def permuted(self, perm: Sequence[int]) -> "Quiver":
        """Relabel: new vertex k is old vertex perm[k]."""
        return Quiver(
            self.n,
            tuple(tuple(self.arrows[perm[i]][perm[j]] for j in range(self.n)) for i in range(self.n)),
        )


@dataclass(frozen=True)
class DimensionVector:
    entries: tuple[int, ...]

    @property
    def valid(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def build_quiver(model: ToricModel) -> tuple[Quiver, DimensionVector]:
    n = len(model.blowups)
    mat = tuple(
        tuple(max(skew_form(model.ray_of(j), model.ray_of(k)), 0) for k in range(n))
        for j in range(n)
    )
    return Quiver(n, mat), DimensionVector(model.dims)


@dataclass
class BalanceReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violations(self):
        if self.violations:
            raise ModelError("; ".join(self.violations))


def check_balancing(model: ToricModel, boundary_degrees: Sequence[int]) -> BalanceReport:
    if len(boundary_degrees) != len(model.rays):
        raise ModelError("one boundary degree per ray expected")
    sx = sum(d * r[0] for d, r in zip(boundary_degrees, model.rays))
    sy = sum(d * r[1] for d, r in zip(boundary_degrees, model.rays))
    problems = []
    if (sx, sy) != (0, 0):
        problems.append(f"sum of degree * ray = ({sx},{sy}) != (0,0)")
    for idx, deg in enumerate(boundary_degrees):
        used = sum(b.dim for b in model.blowups if b.ray == idx)
        if used > deg:
            problems.append(f"ray {model.rays[idx]}: blow-up dimensions {used} exceed boundary degree {deg}")
    return BalanceReport(problems)


def is_acyclic(Q: Quiver) -> tuple[bool, list[int] | None]:
    """Kahn's algorithm, smallest available vertex first."""
    indeg = [sum(Q.arrows[i][j] > 0 for i in range(Q.n)) for j in range(Q.n)]
    ready = sorted(j for j in range(Q.n) if indeg[j] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in range(Q.n):
            if Q.arrows[v][w]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
                    ready.sort()
    if len(order) < Q.n:
        return False, None
    return True, order


def blowup_sum(model: ToricModel) -> tuple[int, int]:
    x = sum(b.dim * model.rays[b.ray][0] for b in model.blowups)
    y = sum(b.dim * model.rays[b.ray][1] for b in model.blowups)
    return x, y


def extraction_ray(model: ToricModel) -> tuple[tuple[int, int], int]:
    """Primitive direction and divisibility of sum_j dim_j m_j.

    The direction must be opposite to the tangency ray and the divisibility
    must equal the tangency order.
    """
    total = blowup_sum(model)
    if total == (0, 0):
        raise ModelError("blow-up contributions sum to zero; no extraction ray")
    w, ell = primitive(total)
    if ell != model.tangency_order:
        raise ModelError(f"divisibility {ell} of {total} differs from tangency order {model.tangency_order}")
    t = model.rays[model.tangency_ray]
    if w != (-t[0], -t[1]):
        raise ModelError(f"extraction direction {w} is not opposite to the tangency ray {t}")
    return w, ell


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    model: ToricModel
    beta_d1: int
    beta_d2: int
    expected_acyclic: bool

    @property
    def degenerate(self) -> bool:
        """No point conditions along D_2 (the class meets D_2 trivially)."""
        return self.beta_d2 == 0


F2_FAN = ((-1, 0), (0, -1), (0, 1), (1, 2))
P2_FAN = ((-1, 0), (0, -1), (1, 1))
F1_FAN = ((-1, 0), (0, -1), (0, 1), (1, 1))
F0_FAN = ((-1, 0), (0, -1), (0, 1), (1, 0))


def _hirzebruch_fan(k: int):
    return ((-1, 0), (0, -1), (0, 1), (1, k))


def _records(*groups) -> tuple[BlowupRecord, ...]:
    """groups: (ray, dim, count, role); sorted by ray, stable within a ray."""
    out = []
    for ray, dim, count, role in groups:
        if count < 0:
            raise UsageError("negative number of blown-up points")
        out.extend(BlowupRecord(ray, dim, role) for _ in range(count))
    return tuple(sorted(out, key=lambda b: b.ray))


def _p2_14(d):
    recs = _records((0, d, 1, "model"), (1, 1, 2 * d, "d2"))
    return F2_FAN, recs, 3, d, (d, 2 * d, 0, d), d, 2 * d


def _p2_41(d):
    recs = _records((0, d, 1, "model"), (3, 1, d, "d2"))
    return F2_FAN, recs, 1, 2 * d, (d, 2 * d, 0, d), 2 * d, d


def _f0_22(d1, d2):
    s = d1 + d2
    recs = _records((1, 1, s, "d2"), (2, d1, 1, "model"), (2, d2, 1, "model"))
    return P2_FAN, recs, 0, s, (s, s, s), s, s


def _f1_04(d1, d2):
    recs = _records((0, d2, 1, "model"), (1, 1, 2 * d2, "d2"), (3, d2 - d1, 1, "model"))
    return F2_FAN, recs, 3, d1, (d2, 2 * d2, 0, d2), d1, 2 * d2


def _f1_40(d1, d2):
    recs = _records((0, d2, 1, "model"), (3, 1, d1, "d2"), (3, d2 - d1, 1, "model"))
    return F2_FAN, recs, 1, 2 * d2, (d2, 2 * d2, 0, d2), 2 * d2, d1


def _f1_13(d1, d2):
    recs = _records((0, d1, 1, "model"), (1, 1, d1 + d2, "d2"), (3, d1, 1, "model"))
    return F1_FAN, recs, 2, d2, (d1, d1 + d2, d2, d1), d2, d1 + d2


def _f1_31(d1, d2):
    recs = _records((0, d1, 1, "model"), (2, 1, d2, "d2"), (3, d1, 1, "model"))
    return F1_FAN, recs, 1, d1 + d2, (d1, d1 + d2, d2, d1), d1 + d2, d2


def _f2_22(d1, d2):
    recs = _records((0, d1, 1, "model"), (1, 1, d2, "d2"), (3, d1, 1, "model"))
    return F0_FAN, recs, 2, d2, (d1, d2, d2, d1), d2, d2


def _fn_neg(N, d1, d2):
    ell = d2 - N * d1
    recs = _records((0, d1, 1, "model"), (1, 1, 2 * d1 + d2, "d2"), (3, d1, 1, "model"))
    return _hirzebruch_fan(N + 2), recs, 2, ell, (d1, 2 * d1 + d2, ell, d1), ell, 2 * d1 + d2


def _fn_pos(N, d1, d2):
    pts = d2 - N * d1
    recs = _records((0, d1, 1, "model"), (2, 1, pts, "d2"), (3, d1, 1, "model"))
    return _hirzebruch_fan(N + 2), recs, 1, 2 * d1 + d2, (d1, 2 * d1 + d2, pts, d1), 2 * d1 + d2, pts


@dataclass(frozen=True)
class _Spec:
    params: tuple[str, ...]
    build: Callable
    acyclic: bool
    surface: str


CATALOG: dict[str, _Spec] = {
    "P2(1,4)": _Spec(("d",), _p2_14, True, "P2, D1 a line, D2 a conic"),
    "P2(4,1)": _Spec(("d",), _p2_41, True, "P2, D1 a conic, D2 a line"),
    "F0(2,2)": _Spec(("d1", "d2"), _f0_22, True, "P1xP1, D1 and D2 of bidegree (1,1)"),
    "F1(0,4)": _Spec(("d1", "d2"), _f1_04, False, "F1, D1 a fiber, D2 ~ C_-1 + 2f"),
    "F1(4,0)": _Spec(("d1", "d2"), _f1_40, True, "F1, D1 ~ C_-1 + 2f, D2 a fiber"),
    "F1(1,3)": _Spec(("d1", "d2"), _f1_13, False, "F1, D1 = C_1, D2 ~ C_-1 + 2f"),
    "F1(3,1)": _Spec(("d1", "d2"), _f1_31, True, "F1, D1 ~ C_-1 + 2f, D2 = C_1"),
    "F2(2,2)": _Spec(("d1", "d2"), _f2_22, True, "F2, D1 = C_2, D2 ~ C_2"),
    "FN(-N,N+4)": _Spec(("N", "d1", "d2"), _fn_neg, False, "FN, D1 = C_-N, D2 ~ C_N + 2f"),
    "FN(N+4,-N)": _Spec(("N", "d1", "d2"), _fn_pos, True, "FN, D1 ~ C_N + 2f, D2 = C_-N"),
}


def catalog(name: str, params: dict | None = None, **kwargs) -> CatalogEntry:
    """Instantiate a catalog entry.

    Degree parameters may be zero as long as the class meets D_1 positively;
    ``N`` must be at least 1.
    """
    if name not in CATALOG:
        raise UsageError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")
    spec = CATALOG[name]
    values = dict(params or {})
    values.update(kwargs)
    missing = [p for p in spec.params if p not in values]
    extra = [p for p in values if p not in spec.params]
    if missing or extra:
        raise UsageError(f"{name} takes parameters {', '.join(spec.params)}")
    args = []
    for p in spec.params:
        v = values[p]
        if isinstance(v, bool) or not isinstance(v, int):
            raise UsageError(f"parameter {p} must be an integer")
        if p == "N" and v < 1:
            raise UsageError("N must be at least 1")
        if v < 0:
            raise UsageError(f"parameter {p} must be nonnegative")
        args.append(v)
    fan, recs, tray, ell, degrees, bd1, bd2 = spec.build(*args)
    if bd1 < 1:
        raise UsageError(f"{name} with {values}: beta.D1 = {bd1} is not positive")
    if bd2 < 0:
        raise UsageError(f"{name} with {values}: beta.D2 = {bd2} is negative")
    model = ToricModel(
        name=name,
        rays=fan,
        blowups=recs,
        tangency_ray=tray,
        tangency_order=ell,
        boundary_degrees=degrees,
        params={p: v for p, v in zip(spec.params, args)},
    )
    return CatalogEntry(name, dict(model.params), model, bd1, bd2, spec.acyclic)


def quiver_json(Q: Quiver, d: DimensionVector) -> dict:
    acyclic, order = is_acyclic(Q)
    return {
        "vertices": Q.n,
        "arrows": [list(r) for r in Q.arrows],
        "dims": list(d.entries),
        "acyclic": acyclic,
        "topo_order": order if order is not None else [],
    }
