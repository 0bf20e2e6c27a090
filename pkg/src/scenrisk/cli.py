"""Batch front door: scenario ingestion, risk reports and self checks.

Subcommands
    risk report <file> --config <file> [--format csv|json|text]
    risk check-axioms [--seed N] [--trials N] [--profile FILE]
    risk dual-check <file> --config <file> [--tol X]
    risk dominance <file> --x NAME --y NAME

Exit codes: 0 success, 1 check failure, 2 usage or input error.
Machine-readable output serializes numbers with 17 significant digits
and is byte-identical for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from . import measures
from .acceptance import acceptance_of, check_acceptance_axioms
from .axioms import (
    DEFAULT_PROFILE,
    PROPERTIES,
    PropertyProfile,
    SUITE_KINDS,
    run_axiom_suite,
)
from .construct import MixtureMeasure, RiskMeasureSpec, catalogue_loss, evaluate
from .dominance import fsd_dominated, ssd_dominated
from .duality import (
    avar_representation,
    dirac_density,
    dual_evaluate,
    entropic_representation,
    unit_density,
    worst_case_representation,
)
from .errors import RiskModelError, ValidationError
from .measures import RiskSpectrum
from .space import DEFAULT_TOL, FiniteProbSpace

_INGEST_PROB_TOL = 1e-9


@dataclass(frozen=True)
class ScenarioTable:
    """Parsed scenario file: one space plus named positions on it."""

    space: FiniteProbSpace
    names: Tuple[str, ...]
    positions: Dict[str, np.ndarray]


@dataclass(frozen=True)
class NamedMeasure:
    name: str
    spec: RiskMeasureSpec


@dataclass(frozen=True)
class ReportConfig:
    """Declarative description of a risk report."""

    measures: Tuple[NamedMeasure, ...]
    alpha_grid: Tuple[float, ...] = ()
    tolerance: float = DEFAULT_TOL
    seed: int = 0


def _parse_number(cell: str, where: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ValidationError(f"non-numeric cell {cell!r} in {where}")
    if not np.isfinite(value):
        raise ValidationError(f"non-finite cell {cell!r} in {where}")
    return value


def _build_table(probs, named_columns) -> ScenarioTable:
    probs = np.asarray(probs, dtype=float)
    total = float(probs.sum())
    if abs(total - 1.0) > _INGEST_PROB_TOL:
        raise ValidationError(
            f"probabilities sum to {total!r}; more than {_INGEST_PROB_TOL} away from 1"
        )
    space = FiniteProbSpace(probs / total)
    names = []
    positions = {}
    for name, column in named_columns:
        if name in positions:
            raise ValidationError(f"duplicate position name {name!r}")
        column = np.asarray(column, dtype=float)
        if column.size != space.n_atoms:
            raise ValidationError(
                f"position {name!r} has {column.size} rows, expected {space.n_atoms}"
            )
        names.append(name)
        positions[name] = column
    return ScenarioTable(space, tuple(names), positions)


def ingest(path, fmt: Optional[str] = None) -> ScenarioTable:
    """Read a scenario table from a csv or json file.

    csv needs a header row with a mandatory ``prob`` column; every other
    column is a named position.  json expects an object with a ``probs``
    array and a ``positions`` name-to-array map.  Probabilities are
    renormalized only when their sum is within 1e-9 of one.
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower()
    if fmt not in ("csv", "json"):
        raise ValidationError(f"unsupported scenario format {fmt!r} (use csv or json)")
    text = path.read_text(encoding="utf-8")
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValidationError(f"invalid json in {path}: {err}") from err
        if not isinstance(doc, dict) or "probs" not in doc or "positions" not in doc:
            raise ValidationError("scenario json needs 'probs' and 'positions' entries")
        named = [(str(k), v) for k, v in doc["positions"].items()]
        return _build_table(doc["probs"], named)
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ValidationError(f"empty scenario file {path}")
    header = [h.strip() for h in rows[0]]
    if "prob" not in header:
        raise ValidationError("csv scenario files need a 'prob' column")
    seen = set()
    for name in header:
        if name in seen:
            raise ValidationError(f"duplicate column name {name!r}")
        seen.add(name)
    body = rows[1:]
    if not body:
        raise ValidationError("scenario file has a header but no rows")
    parsed = []
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise ValidationError(f"row {i + 2} has {len(row)} cells, expected {len(header)}")
        parsed.append([_parse_number(cell, f"row {i + 2}") for cell in row])
    columns = list(zip(*parsed))
    by_name = dict(zip(header, columns))
    named = [(name, by_name[name]) for name in header if name != "prob"]
    return _build_table(by_name["prob"], named)


def spec_from_mapping(doc: dict) -> RiskMeasureSpec:
    """Build a measure spec from one config entry."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("each measure entry needs a 'kind'")
    kind = doc["kind"]
    known = {"kind", "name", "level", "beta", "spectrum", "loss", "loss_param", "r0", "mixture"}
    extra = set(doc) - known
    if extra:
        raise ValidationError(f"unknown measure fields {sorted(extra)}")
    kwargs = {}
    if doc.get("level") is not None:
        kwargs["level"] = float(doc["level"])
    if doc.get("beta") is not None:
        kwargs["beta"] = float(doc["beta"])
    if doc.get("spectrum") is not None:
        s = doc["spectrum"]
        kwargs["spectrum"] = RiskSpectrum(
            np.asarray(s["breakpoints"], dtype=float), np.asarray(s["values"], dtype=float)
        )
    if doc.get("mixture") is not None:
        kwargs["mixture"] = MixtureMeasure(tuple((float(a), float(w)) for a, w in doc["mixture"]))
    if doc.get("loss") is not None:
        direction = "increasing" if kind == "shortfall" else "nonincreasing"
        kwargs["loss"] = catalogue_loss(doc["loss"], doc.get("loss_param"), direction)
    if doc.get("r0") is not None:
        kwargs["r0"] = float(doc["r0"])
    return RiskMeasureSpec(kind, **kwargs)


def load_config(path) -> ReportConfig:
    """Read a json report configuration."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid json config {path}: {err}") from err
    if not isinstance(doc, dict) or "measures" not in doc:
        raise ValidationError("config needs a 'measures' list")
    entries = []
    names = set()
    for item in doc["measures"]:
        spec = spec_from_mapping(item)
        name = str(item.get("name", spec.kind))
        if name in names:
            raise ValidationError(f"duplicate measure name {name!r}")
        names.add(name)
        entries.append(NamedMeasure(name, spec))
    return ReportConfig(
        measures=tuple(entries),
        alpha_grid=tuple(float(a) for a in doc.get("alpha_grid", ())),
        tolerance=float(doc.get("tolerance", DEFAULT_TOL)),
        seed=int(doc.get("seed", 0)),
    )


@dataclass
class Report:
    """Evaluated measure table; cells are floats or error strings."""

    positions: Tuple[str, ...]
    measure_names: Tuple[str, ...]
    values: Dict[str, Dict[str, float]] = field(default_factory=dict)
    errors: Dict[str, Dict[str, str]] = field(default_factory=dict)
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


def build_report(table: ScenarioTable, config: ReportConfig) -> Report:
    """Evaluate every configured measure on every position.

    A failing cell is recorded as an error and the remaining cells are
    still computed.
    """
    report = Report(table.names, tuple(m.name for m in config.measures), seed=config.seed)
    for pos_name in table.names:
        x = table.positions[pos_name]
        for m in config.measures:
            try:
                value = evaluate(table.space, x, m.spec)
            except RiskModelError as err:
                report.errors.setdefault(pos_name, {})[m.name] = str(err)
            else:
                report.values.setdefault(pos_name, {})[m.name] = value
    return report


def format_number(x: float) -> str:
    """Serialize with 17 significant digits (round-trip safe)."""
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(float(x), ".17g")


def _json_string(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def render_json(report: Report) -> str:
    """Deterministic json rendering with fixed key order."""
    out = []
    out.append("{")
    out.append(f'  "seed": {report.seed},')
    out.append('  "positions": [' + ", ".join(_json_string(p) for p in report.positions) + "],")
    out.append('  "measures": [' + ", ".join(_json_string(m) for m in report.measure_names) + "],")
    value_rows = []
    for p in report.positions:
        cells = []
        for m in report.measure_names:
            if m in report.values.get(p, {}):
                cells.append(f"{_json_string(m)}: {format_number(report.values[p][m])}")
        value_rows.append(f"    {_json_string(p)}: {{" + ", ".join(cells) + "}")
    if value_rows:
        out.append('  "values": {')
        out.append(",\n".join(value_rows))
        out.append("  },")
    else:
        out.append('  "values": {},')
    error_rows = []
    for p in report.positions:
        if p in report.errors:
            cells = [
                f"{_json_string(m)}: {_json_string(msg)}" for m, msg in report.errors[p].items()
            ]
            error_rows.append(f"    {_json_string(p)}: {{" + ", ".join(cells) + "}")
    if error_rows:
        out.append('  "errors": {')
        out.append(",\n".join(error_rows))
        out.append("  }")
    else:
        out.append('  "errors": {}')
    out.append("}")
    return "\n".join(out) + "\n"


def _cell_text(report: Report, pos: str, m: str) -> str:
    if m in report.values.get(pos, {}):
        return format_number(report.values[pos][m])
    return "ERROR: " + report.errors[pos][m]


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["position", *report.measure_names])
    for p in report.positions:
        writer.writerow([p, *(_cell_text(report, p, m) for m in report.measure_names)])
    return buf.getvalue()


def render_text(report: Report) -> str:
    headers = ["position", *report.measure_names]
    rows = [
        [p, *(_cell_text(report, p, m) for m in report.measure_names)]
        for p in report.positions
    ]
    widths = [max(len(str(r[i])) for r in [headers, *rows]) for i in range(len(headers))]
    lines = []
    for r in [headers, *rows]:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    table = ingest(args.scenarios)
    config = load_config(args.config)
    report = build_report(table, config)
    renderer = {"json": render_json, "csv": render_csv, "text": render_text}[args.format]
    sys.stdout.write(renderer(report))
    return 0 if report.ok else 1


def _load_profile(path) -> Dict[str, PropertyProfile]:
    profile = dict(DEFAULT_PROFILE)
    if path is None:
        return profile
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    for kind, overrides in doc.items():
        if kind not in profile:
            raise ValidationError(f"profile refers to unknown measure kind {kind!r}")
        current = profile[kind]
        profile[kind] = PropertyProfile(
            positive_homogeneity=bool(
                overrides.get("positive_homogeneity", current.positive_homogeneity)
            ),
            subadditivity=bool(overrides.get("subadditivity", current.subadditivity)),
            convexity=bool(overrides.get("convexity", current.convexity)),
        )
    return profile


_ACCEPTANCE_BATTERY = (
    ("avar(0.5)", RiskMeasureSpec("avar", level=0.5), {"clean": True}),
    ("var(0.5)", RiskMeasureSpec("var", level=0.5), {"expect_violated": ("convexity",)}),
    (
        "entropic(1.0)",
        RiskMeasureSpec("entropic", beta=1.0),
        {"expect_violated": ("positive_scaling",)},
    ),
)


def _cmd_check_axioms(args) -> int:
    seed = args.seed
    trials = args.trials
    print(f"seed = {seed}")
    print(f"trials = {trials}")
    if trials == 0:
        print("warning: no trials requested, nothing was checked")
        return 0
    profile = _load_profile(args.profile)
    outcome = run_axiom_suite(trials, seed, profile=profile)
    failures = 0
    for kind in SUITE_KINDS:
        expected = profile[kind]
        for prop in PROPERTIES:
            want_hold = expected.expects(prop)
            holds = outcome.holds(kind, prop)
            status = "ok" if want_hold == holds else "MISMATCH"
            if want_hold != holds:
                failures += 1
            print(
                f"{kind:<14} {prop:<22} expected={'holds' if want_hold else 'fails'} "
                f"observed={'holds' if holds else 'fails'} {status}"
            )
            if want_hold != holds and not holds:
                print(f"    counterexample: {outcome.examples[(kind, prop)]}")

    space = FiniteProbSpace.uniform(4)
    for label, spec, expectation in _ACCEPTANCE_BATTERY:
        acc = acceptance_of(space, spec)
        report = check_acceptance_axioms(acc, space, trials, seed=seed)
        expect_violated = set(expectation.get("expect_violated", ()))
        for prop, finding in report.findings().items():
            want_violation = prop in expect_violated
            status = "ok" if finding.violated == want_violation else "MISMATCH"
            if finding.violated != want_violation:
                failures += 1
            print(
                f"acceptance[{label}] {prop:<18} "
                f"expected={'violated' if want_violation else 'clean'} "
                f"observed={'violated' if finding.violated else 'clean'} {status}"
            )
    print(f"mismatches = {failures}")
    return 0 if failures == 0 else 1


def _cmd_dual_check(args) -> int:
    table = ingest(args.scenarios)
    config = load_config(args.config)
    tol = args.tol if args.tol is not None else config.tolerance
    level = next((m.spec.level for m in config.measures if m.spec.kind == "avar"), 0.5)
    beta = next((m.spec.beta for m in config.measures if m.spec.kind == "entropic"), 1.0)
    space = table.space
    diracs = [dirac_density(space, k) for k in range(space.n_atoms)]
    unit = unit_density(space)
    battery = (
        (
            "worst_case",
            lambda x: measures.worst_case(space, x),
            worst_case_representation(space),
            diracs,
        ),
        (
            f"avar({format_number(level)})",
            lambda x: measures.avar(space, x, level),
            avar_representation(space, level),
            [unit],
        ),
        (
            f"entropic({format_number(beta)})",
            lambda x: measures.entropic(space, x, beta),
            entropic_representation(space, beta),
            [unit],
        ),
    )
    print(f"tolerance = {format_number(tol)}")
    worst_gap = 0.0
    failures = 0
    for name in table.names:
        x = table.positions[name]
        for label, primal_fn, rep, candidates in battery:
            primal = primal_fn(x)
            dual = dual_evaluate(space, x, rep, candidates)
            gap = abs(primal - dual)
            worst_gap = max(worst_gap, gap)
            status = "ok" if gap <= tol else "FAIL"
            if gap > tol:
                failures += 1
            print(
                f"{name:<12} {label:<16} primal={format_number(primal)} "
                f"dual={format_number(dual)} gap={format_number(gap)} {status}"
            )
    print(f"max gap = {format_number(worst_gap)}")
    return 0 if failures == 0 else 1


def _cmd_dominance(args) -> int:
    table = ingest(args.scenarios)
    for name in (args.x, args.y):
        if name not in table.positions:
            print(f"unknown position {name!r}; available: {', '.join(table.names)}", file=sys.stderr)
            return 2
    x = table.positions[args.x]
    y = table.positions[args.y]
    space = table.space
    pairs = (
        (f"{args.x} <= {args.y}", x, y),
        (f"{args.y} <= {args.x}", y, x),
    )
    for label, a, b in pairs:
        for order, verdict in (
            ("first-order ", fsd_dominated(space, a, b)),
            ("second-order", ssd_dominated(space, a, b)),
        ):
            if verdict.dominated:
                print(f"{order} {label}: dominated")
            else:
                print(f"{order} {label}: not dominated (witness level {format_number(verdict.witness)})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risk", description="Scenario-based risk measure toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="evaluate configured measures on scenario positions")
    p_report.add_argument("scenarios", help="scenario csv or json file")
    p_report.add_argument("--config", required=True, help="json report configuration")
    p_report.add_argument("--format", choices=("csv", "json", "text"), default="text")
    p_report.set_defaults(handler=_cmd_report)

    p_axioms = sub.add_parser("check-axioms", help="randomized verification of measure properties")
    p_axioms.add_argument("--seed", type=int, default=0)
    p_axioms.add_argument("--trials", type=int, default=10_000)
    p_axioms.add_argument("--profile", default=None, help="json overrides of the expected profile")
    p_axioms.set_defaults(handler=_cmd_check_axioms)

    p_dual = sub.add_parser("dual-check", help="compare primal values with dual evaluations")
    p_dual.add_argument("scenarios")
    p_dual.add_argument("--config", required=True)
    p_dual.add_argument("--tol", type=float, default=None)
    p_dual.set_defaults(handler=_cmd_dual_check)

    p_dom = sub.add_parser("dominance", help="stochastic dominance verdicts for a pair of positions")
    p_dom.add_argument("scenarios")
    p_dom.add_argument("--x", required=True)
    p_dom.add_argument("--y", required=True)
    p_dom.set_defaults(handler=_cmd_dominance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_err:
        return int(exit_err.code or 0)
    try:
        return args.handler(args)
    except RiskModelError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
