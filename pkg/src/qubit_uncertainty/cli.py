"""Command-line front end: ``region | check | saturate | verify | bounds | coeffs``.

Exit codes: 0 success, 2 invalid input, 3 certification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bloch import (
    UncertaintyMeasure,
    entropy_from_expectation,
    f_of_entropy,
    make_state,
    measure_from_expectation,
    std_from_expectation,
)
from .errors import DimensionMismatch, DomainError, UncertaintyError, UnsupportedSetSize
from .export import Table, curves_to_csv, curves_to_json, dumps_json
from .oracle import Sampler, SamplerMode, certify_tightness
from .povm import BinaryPovm, povm_entropic_pair_relation, povm_pair_relation, reduce_to_pauli
from .pseudo import ObservableSet, build_set, realizable
from .regions import pair_region, triple_region
from .relations import (
    VOLUME_TOL,
    _verdict,
    boundary_states_stddev,
    busch_bounds,
    check_all_pair,
    ellipsoid_relation,
    exists_sign_assignment,
    expectation_pair_relation,
    expectation_triple_relation,
    maassen_uffink_bound,
    n_observable_abs_relation,
    n_observable_relation,
    robertson_bound,
    saturating_state_expectations,
    saturating_state_stddev,
    triple_geometry,
    triple_relation,
)

log = logging.getLogger("qubit_uncertainty")

EXIT_OK, EXIT_INVALID, EXIT_CERT = 0, 2, 3
NORM_WARN_TOL = 1e-6
COMMANDS = ("region", "check", "saturate", "verify", "bounds", "coeffs")

DEFAULTS = {
    "measure": "expectation",
    "radius": 1.0,
    "radii": None,
    "grid": 0.005,
    "epsilon": None,
    "samples": 100_000,
    "seed": 0,
    "points": 2000,
    "relation": None,
    "format": "csv",
    "out": None,
    "point": None,
    "state": None,
}


@dataclass
class RunConfig:
    command: str
    observables: list  # [(offset, (x, y, z))]
    measure: UncertaintyMeasure = UncertaintyMeasure.EXPECTATION
    radius: float = 1.0
    radii_list: Optional[list] = None
    sampler: Sampler = field(default_factory=Sampler)
    grid: float = 0.005
    epsilon: Optional[float] = None
    points: int = 2000
    relation: Optional[str] = None
    output_format: str = "csv"
    output_path: Optional[str] = None
    point: Optional[list] = None
    state: Optional[list] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}; choose one of {', '.join(COMMANDS)}")
        self.measure = UncertaintyMeasure(self.measure)
        for r in [self.radius] + list(self.radii_list or []):
            if not 0.0 <= r <= 1.0:
                raise DomainError(f"radius {r} is outside [0, 1]; purities are Bloch-vector norms")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"--format must be csv or json, got {self.output_format!r}")
        if self.points < 2:
            raise DomainError("--points must be at least 2")

    @property
    def povm_mode(self) -> bool:
        return any(off is not None for off, _ in self.observables)

    @property
    def radii(self) -> list:
        return list(self.radii_list) if self.radii_list else [self.radius]

    def echo(self) -> dict:
        return {
            "command": self.command,
            "observables": [
                {"offset": off, "direction": list(v)} if off is not None else list(v)
                for off, v in self.observables
            ],
            "measure": self.measure.value,
            "radii": self.radii,
            "sampler": {"seed": self.sampler.seed, "mode": self.sampler.mode.value, "count": self.sampler.count},
            "grid": self.grid,
            "epsilon": self.epsilon,
            "points": self.points,
            "relation": self.relation,
            "point": self.point,
            "state": self.state,
        }


# -- input parsing ----------------------------------------------------------

def _floats(text: str, what: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"could not parse {what} {text!r}; expected comma-separated numbers") from None


def _vector(v, what: str) -> tuple:
    v = [float(x) for x in v]
    if len(v) != 3:
        raise DimensionMismatch(f"{what} needs 3 components, got {len(v)}")
    return tuple(v)


def parse_observables(spec) -> list:
    """``"x,y,z;x,y,z"`` (optionally ``"alpha:x,y,z"``) or a JSON-style list."""
    if spec is None:
        raise DomainError("no observables given; use --obs 'x,y,z;x,y,z' or an 'observables' config entry")
    items = []
    entries = [e for e in spec.split(";") if e.strip()] if isinstance(spec, str) else list(spec)
    for k, e in enumerate(entries):
        what = f"observable {k + 1}"
        if isinstance(e, str):
            off, _, vec = e.rpartition(":")
            offset = float(off) if off.strip() else None
            items.append((offset, _vector(_floats(vec, what), what)))
        elif isinstance(e, dict):
            items.append((float(e.get("offset", 0.0)), _vector(e["direction"], what)))
        else:
            items.append((None, _vector(e, what)))
    if not items:
        raise DomainError("the observable list is empty")
    return items


def _normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_WARN_TOL and norm > 0.0:
        log.warning("direction %s has norm %.6g; normalizing", v.tolist(), norm)
    return v  # build_set normalizes and rejects zero vectors


def observable_set(cfg: RunConfig) -> ObservableSet:
    if cfg.povm_mode:
        return build_set([reduce_to_pauli(p)[0] for p in povms(cfg)])
    return build_set([_normalized(v) for _, v in cfg.observables])


def povms(cfg: RunConfig) -> list:
    return [BinaryPovm(off or 0.0, v) for off, v in cfg.observables]


def load_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULTS) - {"observables", "command", "obs"}
        if unknown:
            raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in file_cfg.items() if k in DEFAULTS})
    merged.update({k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None})

    obs = args.obs if args.obs is not None else file_cfg.get("observables", file_cfg.get("obs"))
    radii = merged["radii"]
    if isinstance(radii, str):
        radii = _floats(radii, "--radii")
    point, state = merged["point"], merged["state"]
    if isinstance(point, str):
        point = _floats(point, "--point")
    if isinstance(state, str):
        state = _floats(state, "--state")
    return RunConfig(
        command=args.command,
        observables=parse_observables(obs),
        measure=merged["measure"],
        radius=float(merged["radius"]),
        radii_list=[float(r) for r in radii] if radii else None,
        sampler=Sampler(seed=int(merged["seed"]), mode=SamplerMode.PURE_UNIFORM, count=int(merged["samples"])),
        grid=float(merged["grid"]),
        epsilon=None if merged["epsilon"] is None else float(merged["epsilon"]),
        points=int(merged["points"]),
        relation=merged["relation"],
        output_format=merged["format"],
        output_path=merged["out"],
        point=point,
        state=state,
    )


# -- commands ---------------------------------------------------------------

_COLUMN_PREFIX = {
    UncertaintyMeasure.EXPECTATION: "expect",
    UncertaintyMeasure.STDDEV: "stddev",
    UncertaintyMeasure.ENTROPY: "entropy",
}


def _columns(measure: UncertaintyMeasure, n: int) -> list:
    return [f"{_COLUMN_PREFIX[measure]}_{i + 1}" for i in range(n)]


def _require_pauli(cfg: RunConfig):
    if cfg.povm_mode:
        raise DomainError(f"'{cfg.command}' works on Pauli observables only; drop the 'alpha:' offsets")


def cmd_region(cfg: RunConfig) -> str:
    _require_pauli(cfg)
    S = observable_set(cfg)
    if S.n == 2:
        curves = pair_region(S, cfg.measure, cfg.radii, cfg.points)
    elif S.n == 3:
        curves = triple_region(S, cfg.measure, cfg.radii, cfg.points)
    else:
        raise UnsupportedSetSize(f"region output needs 2 or 3 observables, got {S.n}")
    columns = _columns(cfg.measure, S.n)
    meta = cfg.echo()
    if cfg.output_format == "json":
        return curves_to_json(curves, columns, meta)
    return curves_to_csv(curves, columns, meta)


def _verdict_table(verdicts: dict) -> Table:
    t = Table(["relation", "satisfied", "saturated", "unattainable", "lhs", "rhs", "slack"])
    for name, v in verdicts.items():
        t.add(name, bool(v.satisfied), bool(v.saturated), bool(v.unattainable), v.lhs, v.rhs, v.slack)
    return t


def _signs(u) -> list:
    return [1 if x >= 0 else -1 for x in u]


def _check_many(S: ObservableSet, ds, radius, taus=None, u=None) -> dict:
    out = {}
    if u is not None:
        out["ellipsoid"] = ellipsoid_relation(u, S, radius)
    if taus is None:
        found = exists_sign_assignment(ds, S, radius)
        if found is not None:
            taus = list(found.taus)
    if taus is not None:
        out["n_observable"] = n_observable_relation(ds, taus, S, radius)
    out["n_observable_abs"] = n_observable_abs_relation(ds, S, radius)
    if S.n == 3 and triple_geometry(*S.matrix).volume_sq > VOLUME_TOL:
        a, b, c = S.matrix
        if taus is not None:
            out["triple"] = triple_relation(*ds, taus, a, b, c, radius)
        if u is not None:
            out["expectation_triple"] = expectation_triple_relation(*u, a, b, c, radius)
    return out


def _check_state(cfg: RunConfig, S: ObservableSet, meta: dict) -> dict:
    r = make_state(cfg.state)
    u = S.expectations(r)
    ds = np.asarray(std_from_expectation(u))
    hs = np.asarray(entropy_from_expectation(u))
    taus = _signs(u)
    meta.update(expectations=u, stddevs=ds, entropies=hs, taus=taus, sum_variances=float(ds @ ds))
    if S.n == 2:
        ab = float(S.matrix[0] @ S.matrix[1])
        out = {"expectation_pair": expectation_pair_relation(u[0], u[1], ab, cfg.radius)}
        out.update(check_all_pair(ds, ab, "stddev", cfg.radius))
        out.update(check_all_pair(hs, ab, "entropy", cfg.radius))
        bound = robertson_bound(S.matrix[0], S.matrix[1], r)
        prod = float(ds[0] * ds[1])
        meta["robertson_bound"] = bound
        out["robertson"] = _verdict(prod, bound, prod - bound)
        return out
    return _check_many(S, ds, cfg.radius, taus, u)


def _check_point(cfg: RunConfig, S: ObservableSet, meta: dict) -> dict:
    x = np.asarray(cfg.point, dtype=float)
    if x.size != S.n:
        raise DimensionMismatch(f"--point has {x.size} values for {S.n} observables")
    if S.n == 2:
        return check_all_pair(x, float(S.matrix[0] @ S.matrix[1]), cfg.measure.value, cfg.radius)
    if cfg.measure is UncertaintyMeasure.EXPECTATION:
        meta["realizable"] = bool(realizable(S, x, cfg.radius))
        return {"ellipsoid": ellipsoid_relation(x, S, cfg.radius)}
    if cfg.measure is UncertaintyMeasure.ENTROPY:
        f = np.asarray(f_of_entropy(x))
        x = np.sqrt(np.clip(1.0 - f * f, 0.0, 1.0))
        meta["stddevs"] = x
    return _check_many(S, x, cfg.radius)


def _check_povm(cfg: RunConfig, meta: dict) -> dict:
    P = povms(cfg)
    if len(P) != 2:
        raise UnsupportedSetSize(f"POVM checks take 2 measurements, got {len(P)}")
    if cfg.state is not None:
        r = make_state(cfg.state).bloch
        u = [p.offset + p.direction @ r for p in P]
        meta["outcome_expectations"] = u
    elif cfg.point is not None:
        u = cfg.point
        if len(u) != 2:
            raise DimensionMismatch(f"--point has {len(u)} values for 2 measurements")
    else:
        raise DomainError("check needs --point or --state")
    return {
        "povm_pair": povm_pair_relation(P[0], P[1], u[0], u[1], cfg.radius),
        "povm_entropic_pair": povm_entropic_pair_relation(P[0], P[1], u[0], u[1], cfg.radius),
    }


def cmd_check(cfg: RunConfig) -> str:
    meta = cfg.echo()
    if cfg.povm_mode:
        verdicts = _check_povm(cfg, meta)
    else:
        S = observable_set(cfg)
        if cfg.state is not None:
            verdicts = _check_state(cfg, S, meta)
        elif cfg.point is not None:
            verdicts = _check_point(cfg, S, meta)
        else:
            raise DomainError("check needs --point (uncertainty values) or --state (Bloch vector)")
    table = _verdict_table(verdicts)
    return table.to_json(meta) if cfg.output_format == "json" else table.to_csv(meta)


def _pair(cfg: RunConfig) -> ObservableSet:
    _require_pauli(cfg)
    S = observable_set(cfg)
    if S.n != 2:
        raise UnsupportedSetSize(f"saturate needs exactly 2 observables, got {S.n}")
    return S


def cmd_saturate(cfg: RunConfig) -> str:
    S = _pair(cfg)
    a, b = S.matrix
    ab = float(a @ b)
    target = list(cfg.point or [])
    m = cfg.measure
    if len(target) not in (1, 2) or (len(target) == 1 and m is UncertaintyMeasure.EXPECTATION):
        raise DimensionMismatch("saturate needs --point with two target values (or one for stddev/entropy)")
    states = []
    if len(target) == 2:
        if m is UncertaintyMeasure.EXPECTATION:
            states.append(("r", saturating_state_expectations(target[0], target[1], a, b)))
        elif m is UncertaintyMeasure.STDDEV:
            states.append(("r", saturating_state_stddev(target[0], target[1], a, b)))
        else:
            uA = float(f_of_entropy(target[0]))
            uB = (-1.0 if ab < 0 else 1.0) * float(f_of_entropy(target[1]))
            states.append(("r", saturating_state_expectations(uA, uB, a, b)))
    else:
        dA = target[0] if m is UncertaintyMeasure.STDDEV else math.sqrt(max(0.0, 1.0 - float(f_of_entropy(target[0])) ** 2))
        plus, minus = boundary_states_stddev(dA, a, b)
        states += [("r_plus", plus), ("r_minus", minus)]
    cols = _columns(m, 2)
    t = Table(["state", "x", "y", "z"] + cols + ["roundtrip_error"])
    for label, st in states:
        vals = measure_from_expectation(S.expectations(st), m)
        err = float(np.max(np.abs(vals[: len(target)] - np.asarray(target))))
        t.add(label, *st.bloch, *vals, err)
    meta = cfg.echo()
    return t.to_json(meta) if cfg.output_format == "json" else t.to_csv(meta)


_DEFAULT_RELATION = {
    (2, UncertaintyMeasure.EXPECTATION): "expectation_pair",
    (2, UncertaintyMeasure.STDDEV): "stddev_pair",
    (2, UncertaintyMeasure.ENTROPY): "entropic_pair",
    (3, UncertaintyMeasure.STDDEV): "triple",
}


def cmd_verify(cfg: RunConfig):
    _require_pauli(cfg)
    S = observable_set(cfg)
    rel = cfg.relation
    if rel is None:
        rel = _DEFAULT_RELATION.get((S.n, cfg.measure))
        if rel is None:
            rel = "ellipsoid_realizable" if cfg.measure is UncertaintyMeasure.EXPECTATION else "n_observable"
    report = certify_tightness(S, rel, cfg.grid, cfg.sampler, cfg.epsilon, cfg.radius)
    failed = report.soundness_violations > 0 or (report.claimed_tight and not report.passed)
    return dumps_json(report.to_dict()), failed


def cmd_bounds(cfg: RunConfig) -> str:
    S = _pair(cfg)
    a, b = S.matrix
    ab = float(a @ b)
    t = Table(["bound", "value"])
    t.add("a_dot_b", ab)
    t.add("cross_norm", math.sqrt(max(0.0, 1.0 - ab * ab)))
    t.add("busch_sum_rhs", busch_bounds(1.0, 1.0, ab)[0].rhs)
    t.add("busch_squares_rhs", busch_bounds(1.0, 1.0, ab)[1].rhs)
    t.add("maassen_uffink", maassen_uffink_bound(ab))
    if cfg.state is not None:
        t.add("robertson", robertson_bound(a, b, make_state(cfg.state)))
    meta = cfg.echo()
    return t.to_json(meta) if cfg.output_format == "json" else t.to_csv(meta)


def cmd_coeffs(cfg: RunConfig) -> str:
    S = observable_set(cfg)
    meta = cfg.echo()
    if cfg.output_format == "json":
        return dumps_json(
            {"meta": meta, "M": S.matrix, "M_plus": S.pseudoinverse, "coeffs": S.coeffs, "span_rank": S.span_rank}
        )
    t = Table(["matrix", "row", "col", "value"])
    for name, arr in (("M", S.matrix), ("M_plus", S.pseudoinverse), ("coeffs", S.coeffs)):
        for (i, j), v in np.ndenumerate(arr):
            t.add(name, i, j, v)
    meta["span_rank"] = S.span_rank
    return t.to_csv(meta)


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qubit-uncertainty", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "region": "emit boundary curves of the uncertainty region",
        "check": "evaluate every applicable relation at a point or state",
        "saturate": "construct states on the boundary for given target values",
        "verify": "certify a relation against brute-force sampling (JSON report)",
        "bounds": "print the Busch and Maassen-Uffink comparison bounds",
        "coeffs": "print M, its pseudoinverse and the coefficient matrix",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        s.add_argument("--config", help="JSON file with any of the options below; flags take precedence")
        s.add_argument("--obs", help="observables, e.g. '1,0,0;0,1,0' ('alpha:x,y,z' for two-outcome POVMs)")
        s.add_argument("--measure", choices=[m.value for m in UncertaintyMeasure])
        s.add_argument("--radius", type=float, help="maximal Bloch-vector norm (default 1)")
        s.add_argument("--radii", help="comma-separated radii for concentric output")
        s.add_argument("--grid", type=float, help="certification grid resolution")
        s.add_argument("--epsilon", type=float, help="completeness tolerance (default 2 x grid)")
        s.add_argument("--samples", type=int, help="number of random pure states")
        s.add_argument("--seed", type=int)
        s.add_argument("--points", type=int, help="boundary resolution (default 2000)")
        s.add_argument("--relation", help="relation id for verify")
        s.add_argument("--point", help="comma-separated uncertainty values")
        s.add_argument("--state", help="comma-separated Bloch vector")
        s.add_argument("--format", choices=["csv", "json"])
        s.add_argument("--out", help="output file (default stdout)")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    failed = False
    try:
        cfg = load_config(args)
        if cfg.command == "verify":
            text, failed = cmd_verify(cfg)
        else:
            text = {
                "region": cmd_region,
                "check": cmd_check,
                "saturate": cmd_saturate,
                "bounds": cmd_bounds,
                "coeffs": cmd_coeffs,
            }[cfg.command](cfg)
    except (UncertaintyError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_CERT if failed else EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
