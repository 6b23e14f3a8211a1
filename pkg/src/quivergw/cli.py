"""Command-line front end: catalog, quiver, dt, scatter, gw, verify."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import HalfLaurent, hbar_expand
from .dt import DtError, dt_for_class
from .geometry import (
    CATALOG,
    CatalogEntry,
    ModelError,
    UsageError,
    build_quiver,
    catalog,
    extraction_ray,
    is_acyclic,
    load_model,
    quiver_json,
)
from .scattering import (
    CALIBRATION,
    ConsistencyError,
    InsufficientOrderError,
    required_cap,
    scat_omega,
    scatter_class,
)


def _frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep:
                raise UsageError(f"parameter {part!r} is not of the form key=value")
            try:
                out[key.strip()] = int(value)
            except ValueError:
                raise UsageError(f"parameter {key} must be an integer") from None
    return out


def _parse_theta(text):
    if text is None:
        return None
    try:
        return tuple(Fraction(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad stability {text!r}; expected comma-separated rationals") from None


def _entry(args) -> CatalogEntry:
    if args.model:
        if args.name:
            raise UsageError("give either a catalog name or --model, not both")
        model = load_model(args.model)
        return CatalogEntry(model.name, {}, model, model.tangency_order, model.d2_count, None)
    if not args.name:
        raise UsageError("a catalog name or --model is required")
    return catalog(args.name, _parse_params(args.params))


def _emit(args, payload: dict, human: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args) -> int:
    rows = []
    for name, spec in CATALOG.items():
        if args.acyclic and not spec.acyclic or args.cyclic and spec.acyclic:
            continue
        rows.append({"name": name, "params": list(spec.params), "acyclic": spec.acyclic, "surface": spec.surface})
    lines = [f"{'entry':<12} {'parameters':<12} {'acyclic':<8} surface"]
    for r in rows:
        lines.append(f"{r['name']:<12} {','.join(r['params']):<12} {'yes' if r['acyclic'] else 'no':<8} {r['surface']}")
    _emit(args, {"entries": rows}, "\n".join(lines))
    return 0


def cmd_quiver(args) -> int:
    entry = _entry(args)
    Q, d = build_quiver(entry.model)
    payload = quiver_json(Q, d)
    payload["valid"] = d.valid
    lines = [f"{entry.name} {entry.params}: {Q.n} vertices, dims {list(d.entries)}"]
    for i, j, k in Q.arrow_list():
        lines.append(f"  {i} -> {j}  x{k}")
    lines.append("acyclic" if payload["acyclic"] else "contains oriented cycles")
    _emit(args, payload, "\n".join(lines))
    return 0


def _dt(entry, theta):
    res = dt_for_class(entry, theta, cache=True)
    payload = {
        "entry": entry.name,
        "params": entry.params,
        "omega": res.omega.to_json(),
        "theta": None if res.theta is None else [_frac_str(t) for t in res.theta],
        "stability": res.reason,
    }
    if res.dt is not None:
        payload.update({k: v for k, v in res.dt.to_json().items() if k not in ("omega", "theta")})
    return res, payload


def cmd_dt(args) -> int:
    entry = _entry(args)
    res, payload = _dt(entry, _parse_theta(args.theta))
    human = f"{entry.name} {entry.params}: omega = {res.omega}  ({res.reason}"
    human += ")" if res.theta is None else f", theta = {[_frac_str(t) for t in res.theta]})"
    _emit(args, payload, human)
    return 0


def _scatter(entry, order, unbounded):
    L = order if order is not None else required_cap(entry.model) + 1
    D = scatter_class(entry, L, bounded=not unbounded)
    return D, scat_omega(D, entry)


def cmd_scatter(args) -> int:
    entry = _entry(args)
    if any(x < 0 for x in entry.model.dims):
        payload = {"entry": entry.name, "params": entry.params, "omega": [], "diagram": None}
        _emit(args, payload, f"{entry.name} {entry.params}: negative dimension, omega = 0")
        return 0
    D, omega = _scatter(entry, args.order, args.unbounded)
    payload = {
        "entry": entry.name,
        "params": entry.params,
        "omega": omega.to_json(),
        "diagram": D.to_json(),
        "calibration": CALIBRATION,
    }
    lines = [f"{entry.name} {entry.params}: cap {D.cap}, {len(D.outgoing)} outgoing rays"]
    for w in D.outgoing:
        lines.append(f"  ray {w.direction}: {len(w.factors)} factors")
    lines.append(f"omega = {omega}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_gw(args) -> int:
    entry = _entry(args)
    _, ell = extraction_ray(entry.model)
    if any(x < 0 for x in entry.model.dims):
        block = [Fraction(0)] * (args.gmax + 1)
    else:
        _, omega = _scatter(entry, args.order, args.unbounded)
        block = hbar_expand(omega, ell, args.gmax)
    payload = {"entry": entry.name, "params": entry.params, "ell": ell, "N": [_frac_str(x) for x in block]}
    _emit(args, payload, f"{entry.name} {entry.params}: N_g = {[_frac_str(x) for x in block]}")
    return 0


@dataclass
class VerifyReport:
    entry: str
    params: dict
    quiver: dict
    acyclic: bool
    theta: list | None
    omega_dt: list
    omega_scat: list
    equal: bool
    N: list
    diagnostics: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_json(self, with_timings: bool = False) -> dict:
        out = {
            "entry": self.entry,
            "params": self.params,
            "quiver": self.quiver,
            "acyclic": self.acyclic,
            "theta": self.theta,
            "omega_dt": self.omega_dt,
            "omega_scat": self.omega_scat,
            "equal": self.equal,
            "N": self.N,
            "diagnostics": self.diagnostics,
            "calibration": CALIBRATION,
        }
        if with_timings:
            out["timings"] = self.timings
        return out


def verify(entry: CatalogEntry, gmax: int = 2, order: int | None = None, theta=None, unbounded=False) -> VerifyReport:
    Q, d = build_quiver(entry.model)
    acyclic, _ = is_acyclic(Q)
    _, ell = extraction_ray(entry.model)
    diagnostics = []
    t0 = time.perf_counter()
    res = dt_for_class(entry, theta)
    t1 = time.perf_counter()
    if d.valid:
        _, omega_scat = _scatter(entry, order, unbounded)
    else:
        omega_scat = res.omega
        diagnostics.append("negative dimension: both sides set to 0")
    t2 = time.perf_counter()
    equal = res.omega == omega_scat
    if not equal:
        diagnostics.append("omega mismatch")
    if res.dt is not None and not res.dt.generic:
        diagnostics.append("non-generic stability")
    block = hbar_expand(omega_scat, ell, gmax)
    return VerifyReport(
        entry=entry.name,
        params=entry.params,
        quiver=quiver_json(Q, d),
        acyclic=acyclic,
        theta=None if res.theta is None else [_frac_str(t) for t in res.theta],
        omega_dt=res.omega.to_json(),
        omega_scat=omega_scat.to_json(),
        equal=equal,
        N=[_frac_str(x) for x in block],
        diagnostics=diagnostics,
        timings={"dt": round(t1 - t0, 4), "scattering": round(t2 - t1, 4)},
    )


def cmd_verify(args) -> int:
    entry = _entry(args)
    rep = verify(entry, args.gmax, args.order, _parse_theta(args.theta), args.unbounded)
    human = "\n".join(
        [
            f"{rep.entry} {rep.params}",
            f"  quiver: {rep.quiver['vertices']} vertices, dims {rep.quiver['dims']}, acyclic={rep.acyclic}",
            f"  theta: {rep.theta}",
            f"  omega (DT):         {HalfLaurent.from_json(rep.omega_dt)}",
            f"  omega (scattering): {HalfLaurent.from_json(rep.omega_scat)}",
            f"  equal: {rep.equal}",
            f"  N_g: {rep.N}",
            f"  timings: {rep.timings}",
        ]
        + [f"  note: {x}" for x in rep.diagnostics]
    )
    _emit(args, rep.to_json(args.timings), human)
    clean = [x for x in rep.diagnostics if not x.startswith("negative dimension")]
    return 0 if rep.equal and not clean else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quivergw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the built-in examples")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--acyclic", action="store_true")
    group.add_argument("--cyclic", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    def common(p):
        p.add_argument("name", nargs="?", help="catalog entry, e.g. 'P2(1,4)'")
        p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
        p.add_argument("--model", help="JSON toric model file instead of a catalog entry")
        p.add_argument("--json", action="store_true")

    def scattering_opts(p):
        p.add_argument("--order", type=int, help="t-degree cap L (default: target degree + 1)")
        p.add_argument("--unbounded", action="store_true", help="do not bound single variables by the target exponents")

    p = sub.add_parser("quiver", help="quiver and dimension vector of a class")
    common(p)
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("dt", help="refined DT invariant from the quiver side")
    common(p)
    p.add_argument("--theta", help="comma-separated stability, overriding the default chamber")
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("scatter", help="complete the scattering diagram and extract omega")
    common(p)
    scattering_opts(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("gw", help="genus expansion N_0..N_gmax from the scattering side")
    common(p)
    scattering_opts(p)
    p.add_argument("--gmax", type=int, default=2)
    p.set_defaults(func=cmd_gw)

    p = sub.add_parser("verify", help="compare both engines and expand in genus")
    common(p)
    scattering_opts(p)
    p.add_argument("--gmax", type=int, default=2)
    p.add_argument("--theta", help="comma-separated stability, overriding the default chamber")
    p.add_argument("--timings", action="store_true", help="include timings in JSON output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "gmax", 0) is not None and getattr(args, "gmax", 0) < 0:
            raise UsageError("--gmax must be nonnegative")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ModelError, ConsistencyError, InsufficientOrderError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
