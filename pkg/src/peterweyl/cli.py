"""Command-line front end: parse specs, run series, emit CSV.

Orchestration only; all mathematics lives in the library modules.  Exit
codes: 0 success, 1 usage, 2 validation (bad files, unknown names), 3
numeric consistency failure (including an ergodic check missing its
tolerance).  Outputs are byte-identical across runs for a fixed config and
seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, InvalidInputError
from .fusion import (FiniteDualRing, FolnerSchedule, FusionRing, LatticeRing, SU2Ring,
                     boundary, weighted_cardinality)
from .groups import resolve
from .ergodic import ergodic_limit_check, gns_rep, group_rep, point_rep
from .measures import measure_from_json, measure_to_json, scalar_from_json, total_mass
from .wiener import KINDS, run_series

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

DEFAULT_TOL_ENV = "PETERWEYL_TOL"


@dataclass
class RunConfig:
    """Everything one invocation needs; `run` is a pure function of this
    (plus the referenced input files)."""

    subcommand: str
    ring: str | None = None
    schedule: str | None = None
    steps: int = 20
    measure: str | None = None
    spec: str | None = None
    rep: str | None = None
    kind: str | None = None
    at: str | None = None
    labels: str | None = None
    a: str | None = None
    b: str | None = None
    s_labels: str | None = None
    out: str | None = None
    gnuplot: str | None = None
    emit_canonical: str | None = None
    ground_truth: bool = False
    tol: float = field(default=None)  # type: ignore[assignment]
    seed: int = 0

    def __post_init__(self):
        if self.tol is None:
            self.tol = float(os.environ.get(DEFAULT_TOL_ENV, "1e-8"))


class _Parser(argparse.ArgumentParser):
    # usage errors are exit code 1 (argparse's default of 2 is taken by validation)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _split_labels(text: str, ring: FusionRing) -> list:
    # labels are ';'-separated so tuple labels can keep their commas
    chunks = [c for c in text.split(";") if c.strip() != ""]
    if not chunks:
        raise InvalidInputError(f"no labels in {text!r}")
    return [ring.parse_label(c.strip()) for c in chunks]


def _default_schedule_name(ring: FusionRing) -> str:
    if isinstance(ring, LatticeRing):
        return "boxes"
    if isinstance(ring, SU2Ring):
        return "spins"
    if isinstance(ring, FiniteDualRing):
        return "full"
    raise InvalidInputError(f"ring {ring.name} has no named schedules")


def load_schedule(ring: FusionRing, spec: str | None, steps: int) -> FolnerSchedule:
    """A named per-ring default ('default', 'boxes', 'spins', 'full') or a
    JSON file {"description": ..., "sets": [[label literal, ...], ...]}."""
    name = spec or "default"
    if name == "default":
        name = _default_schedule_name(ring)
    if name in ("boxes", "spins", "full"):
        if name != _default_schedule_name(ring):
            raise InvalidInputError(f"schedule {name!r} does not apply to ring {ring.name}")
        if steps < 1:
            raise InvalidInputError("steps must be >= 1")
        return ring.default_schedule(steps)
    obj = _load_json(name)
    try:
        sets = obj["sets"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError("schedule file needs a 'sets' field") from exc
    parsed = [frozenset(ring.parse_label(l) for l in F) for F in sets]
    return FolnerSchedule(tuple(parsed), description=str(obj.get("description", name)))


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"invalid JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_csv(path: str | None, header: list[str], rows):
    fh, owned = _open_out(path)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        if owned:
            fh.close()


def _write_tables(config: RunConfig, header: list[str], rows):
    rows = list(rows)
    _write_csv(config.out, header, rows)
    if config.gnuplot is not None:
        # same table, whitespace-separated with a commented header
        fh, owned = _open_out(config.gnuplot)
        try:
            fh.write("# " + " ".join(header) + "\n")
            for row in rows:
                fh.write(" ".join(str(x) for x in row) + "\n")
        finally:
            if owned:
                fh.close()


def _fmt(x: float) -> str:
    return repr(float(x))


def _run_fusion(config: RunConfig) -> int:
    ring, _ = resolve(config.ring)
    if config.a is None or config.b is None:
        raise InvalidInputError("fusion needs --a and --b labels")
    a = ring.parse_label(config.a)
    b = ring.parse_label(config.b)
    decomposition = ring.fuse(a, b)
    rows = [
        [ring.format_label(c), decomposition[c], ring.dim(c)]
        for c in ring.sorted_labels(decomposition)
    ]
    _write_tables(config, ["label", "multiplicity", "dim"], rows)
    return EXIT_OK


def _run_folner(config: RunConfig) -> int:
    ring, _ = resolve(config.ring)
    if config.s_labels is None:
        raise InvalidInputError("folner needs --S labels")
    S = frozenset(_split_labels(config.s_labels, ring))
    schedule = load_schedule(ring, config.schedule, config.steps)
    rows = []
    for step, F in enumerate(schedule, start=1):
        wf = weighted_cardinality(F, ring)
        wb = weighted_cardinality(boundary(F, S, ring), ring)
        rows.append([step, wf, wb, _fmt(wb / wf)])
    _write_tables(config, ["step", "wcard", "boundary_wcard", "ratio"], rows)
    return EXIT_OK


def _run_wiener(config: RunConfig) -> int:
    if config.kind not in KINDS:
        raise InvalidInputError(f"--kind must be one of {KINDS}")
    if config.measure is None:
        raise InvalidInputError("wiener needs --measure <spec.json>")
    mu = measure_from_json(_load_json(config.measure))
    if config.ring is not None and resolve(config.ring)[0].name != mu.model.ring.name:
        raise InvalidInputError(
            f"--ring {config.ring} does not match the measure's group {mu.model.ring.name!r}"
        )
    if not total_mass(mu) > 0:
        raise InvalidInputError("measure must have positive total mass")
    if config.emit_canonical is not None:
        fh, owned = _open_out(config.emit_canonical)
        try:
            json.dump(measure_to_json(mu), fh, indent=2, sort_keys=True)
            fh.write("\n")
        finally:
            if owned:
                fh.close()
    ring = mu.model.ring
    at = None
    if config.kind == "atom":
        if config.at is None:
            raise InvalidInputError("atom averages need --at <element literal>")
        at = mu.model.parse_element(config.at)
    schedule = load_schedule(ring, config.schedule, config.steps)
    series = run_series(config.kind, mu, schedule, at=at, with_target=config.ground_truth)
    header = ["step", "wcard", "value_re", "value_im"]
    if config.ground_truth:
        header += ["target", "abs_error"]
    rows = []
    for i, value in enumerate(series.values):
        row = [i + 1, int(series.weighted_cardinalities[i]), _fmt(value.real), _fmt(value.imag)]
        if config.ground_truth:
            row += [_fmt(series.target), _fmt(abs(value - series.target))]
        rows.append(row)
    _write_tables(config, header, rows)
    return EXIT_OK


def _matrix_from_json(rows) -> np.ndarray:
    return np.array([[scalar_from_json(e) for e in row] for row in rows], dtype=complex)


def _default_generating_labels(ring: FusionRing) -> list:
    if isinstance(ring, LatticeRing):
        if ring.rank == 1:
            return [1]
        return [tuple(1 if i == j else 0 for i in range(ring.rank)) for j in range(ring.rank)]
    if isinstance(ring, SU2Ring):
        return [1]
    if isinstance(ring, FiniteDualRing):
        return list(ring.full_dual())
    raise InvalidInputError(f"no default generating labels for ring {ring.name}")


def _run_ergodic(config: RunConfig) -> int:
    if config.spec is None:
        raise InvalidInputError("ergodic needs --spec <rep.json>")
    obj = _load_json(config.spec)
    if not isinstance(obj, dict) or "ring" not in obj:
        raise InvalidInputError("rep spec needs a 'ring' field")
    ring, model = resolve(obj["ring"])
    if config.ring is not None and resolve(config.ring)[0].name != ring.name:
        raise InvalidInputError(
            f"--ring {config.ring} does not match the rep spec's ring {ring.name!r}"
        )
    if config.rep == "point":
        if model is None:
            raise InvalidInputError("point reps need a ring with a compact-group model")
        points = [model.parse_element(p) for p in obj.get("points", [])]
        rep = point_rep(model, points)
    elif config.rep == "group":
        generators = [_matrix_from_json(m) for m in obj.get("generators", [])]
        rep = group_rep(ring, generators)
    elif config.rep == "gns":
        if model is None or not hasattr(model, "order"):
            raise InvalidInputError("gns reps are available for finite groups only")
        rep = gns_rep(model, obj.get("state", []))
    else:
        raise InvalidInputError("--rep must be point, group or gns")
    if config.labels is not None:
        gens = _split_labels(config.labels, ring)
    else:
        gens = _default_generating_labels(ring)
    schedule = load_schedule(ring, config.schedule, config.steps)
    report = ergodic_limit_check(rep, schedule, gens, tol=config.tol)
    rows = [
        [i + 1, int(report.weighted_cardinalities[i]), _fmt(report.distances[i]),
         _fmt(report.commutant_residues[i])]
        for i in range(len(schedule))
    ]
    _write_tables(config, ["step", "wcard", "dist_to_projection", "commutant_residue"], rows)
    if not report.passed:
        print(
            f"ergodic check failed: final distance {report.distances[-1]:.3e}, "
            f"final commutant residue {report.commutant_residues[-1]:.3e}, tol {report.tol:.3e}",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    return EXIT_OK


_HANDLERS = {
    "fusion": _run_fusion,
    "folner": _run_folner,
    "wiener": _run_wiener,
    "ergodic": _run_ergodic,
}


def run(config: RunConfig) -> int:
    """Execute one configured run; returns the process exit code."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        raise InvalidInputError(f"unknown subcommand {config.subcommand!r}")
    return handler(config)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="peterweyl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, ring_required=True):
        if ring_required:
            p.add_argument("--ring", required=True,
                           help="Z | Z^d:<d> | SU2 | finite:<name> | dualgroup:Z^d:<d>")
        else:
            p.add_argument("--ring", default=None,
                           help="optional; must agree with the input file's ring")
        p.add_argument("--schedule", default=None, help="named default or JSON file")
        p.add_argument("--steps", type=int, default=20)
        p.add_argument("--out", default=None, help="output CSV path ('-' = stdout)")
        p.add_argument("--gnuplot", default=None,
                       help="also write a gnuplot-compatible data file")
        p.add_argument("--tol", type=float, default=None,
                       help=f"tolerance (default from ${DEFAULT_TOL_ENV} or 1e-8)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fusion", help="decompose a tensor product of two labels")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    common(p)

    p = sub.add_parser("folner", help="boundary sizes and Folner ratios along a schedule")
    p.add_argument("--S", dest="s_labels", required=True,
                   help="';'-separated label literals")
    common(p)

    p = sub.add_parser("wiener", help="atom/energy/char averages of a measure")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--measure", required=True, help="measure spec JSON")
    p.add_argument("--at", default=None, help="element literal (atom kind)")
    p.add_argument("--ground-truth", action="store_true",
                   help="attach the stored-atoms oracle target and per-step error")
    p.add_argument("--emit-canonical", default=None,
                   help="also write the parsed measure back in canonical JSON")
    common(p, ring_required=False)

    p = sub.add_parser("ergodic", help="Cesaro operator averages vs the invariant projection")
    p.add_argument("--rep", required=True, choices=["point", "group", "gns"])
    p.add_argument("--spec", required=True, help="representation spec JSON")
    p.add_argument("--labels", default=None, help="';'-separated generating labels")
    common(p, ring_required=False)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    known = {f.name for f in RunConfig.__dataclass_fields__.values()}
    fields = {k: v for k, v in vars(args).items() if k in known and v is not None}
    config = RunConfig(**fields)
    try:
        return run(config)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as exc:
        print(f"numeric consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
