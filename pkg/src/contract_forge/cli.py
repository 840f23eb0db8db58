"""Command-line front end: solve a scenario under one regime, compare regimes
with a hiring recommendation, or sweep a parameter for comparative statics.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 I/O
failure, 2 scenario/sweep validation failure, 3 solver failure.  Tables round
to 4 decimals; json and csv carry full binary64 precision.  The
CONTRACT_FORGE_TOL environment variable overrides the solver tolerance
(default 1e-10).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, replace

from .advisor import ComparisonReport, compare
from .kernel import NoPositiveEffort
from .model import (
    RegimeResult,
    Scenario,
    ScenarioValidationError,
    load_scenario,
    validate_scenario,
    with_alpha,
)
from .regimes import (
    eval_asym_no_intermediary,
    eval_complete_info,
    eval_intermediary_limited,
    eval_intermediary_unlimited,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

_REGIME_EVALS = {
    "complete": eval_complete_info,
    "asymmetric": eval_asym_no_intermediary,
    "intermediary": eval_intermediary_unlimited,
    "intermediary-limited": eval_intermediary_limited,
}
_REGIME_ORDER = ["complete", "asymmetric", "intermediary", "intermediary-limited"]


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_json(payload) -> str:
    """Canonical JSON form: parsing the output and re-rendering it through
    this function is byte-identical."""
    return json.dumps(payload, indent=2, sort_keys=True)


def _num(x) -> str:
    """Full-precision cell for csv (shortest digits that round-trip)."""
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _fmt(x) -> str:
    """4-decimal cell for tables."""
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt_row = lambda row: "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(row) for row in rows)
    return "\n".join(lines)


def _csv_text(headers: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC-4180 style, CRLF line endings
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


_RESULT_COLUMNS = [
    "regime", "producer", "e_f", "e_d", "e4", "h1", "h2", "h3", "h4",
    "s1", "s2", "funding_f", "funding_d", "branch", "contribution", "flags",
]


def _result_cells(result: RegimeResult, cell) -> list[list[str]]:
    rows = []
    for out in result.producers:
        rows.append([
            result.regime.value,
            out.name,
            cell(out.e_f), cell(out.e_d), cell(out.e4),
            cell(out.h1), cell(out.h2), cell(out.h3), cell(out.h4),
            cell(out.s1), cell(out.s2),
            cell(out.funding_f), cell(out.funding_d),
            out.branch.value if out.branch is not None else "",
            cell(out.contribution),
            "|".join(out.flags),
        ])
    return rows


def _render_results_table(results: list[RegimeResult]) -> str:
    chunks = []
    for result in results:
        chunks.append(f"regime: {result.regime.value}")
        headers = _RESULT_COLUMNS[1:]  # regime named above the block
        rows = [cells[1:] for cells in _result_cells(result, _fmt)]
        chunks.append(_table(headers, rows))
        chunks.append(f"principal payoff: {_fmt(result.total)}")
        if result.menus:
            for menu in result.menus:
                chunks.append(f"contract menu [{menu.producer}]")
                menu_rows = [
                    [ln.report_case.name.lower(), _fmt(ln.effort),
                     _fmt(ln.producer_payoff), _fmt(ln.legal_transfer)]
                    for ln in menu.lines
                ]
                chunks.append(_table(["report", "effort", "producer_payoff", "legal_transfer"],
                                     menu_rows))
        chunks.append("")
    return "\n".join(chunks).rstrip()


_COMPARE_COLUMNS = [
    "producer", "h_opt1", "h_opt2", "h_lim_encouragement", "h_lim_exclusion",
    "h_lim", "chosen_branch", "switch_rule_branch", "s1", "s2",
    "info_rent", "delta_vs_direct", "recommendation", "flags", "failed", "error",
]


def _compare_cells(report: ComparisonReport, cell) -> list[list[str]]:
    rows = []
    for r in report.rows:
        rows.append([
            r.name,
            cell(r.h_opt1), cell(r.h_opt2),
            cell(r.h_lim_encouragement), cell(r.h_lim_exclusion), cell(r.h_lim),
            r.chosen_branch.value if r.chosen_branch else "",
            r.switch_rule_branch.value if r.switch_rule_branch else "",
            cell(r.s1), cell(r.s2),
            cell(r.info_rent), cell(r.delta_vs_direct),
            r.recommendation or "",
            "|".join(r.flags),
            str(r.failed).lower(),
            r.error or "",
        ])
    return rows


def _render_compare_table(report: ComparisonReport) -> str:
    lines = [
        _table(_COMPARE_COLUMNS, _compare_cells(report, _fmt)),
        f"totals: h_opt1={_fmt(report.total_h_opt1)}  h_opt2={_fmt(report.total_h_opt2)}  "
        f"h_lim={_fmt(report.total_h_lim)}",
        "ranking: " + ", ".join(report.ranking),
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Parameter sweeps
# ---------------------------------------------------------------------------

_PARAM_RE = re.compile(r"^(?:intermediary\.(mu|alpha)|producers\[(\d+)\]\.(pi|p|h_min))$")


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter grid: path, inclusive endpoints, and step count."""

    param: str
    start: float
    stop: float
    steps: int

    def violations(self) -> list[str]:
        out = []
        if _PARAM_RE.match(self.param) is None:
            out.append(
                f"param: unsupported path {self.param!r} (use intermediary.mu, "
                "intermediary.alpha, producers[k].pi, producers[k].p, or "
                "producers[k].h_min)"
            )
        if self.steps < 2:
            out.append(f"steps: must be >= 2 (got {self.steps})")
        if not self.start < self.stop:
            out.append(f"range: from must be < to (got {self.start!r} .. {self.stop!r})")
        return out

    def values(self) -> list[float]:
        span = self.stop - self.start
        return [self.start + span * i / (self.steps - 1) for i in range(self.steps)]


def apply_param(scenario: Scenario, param: str, value: float) -> Scenario:
    m = _PARAM_RE.match(param)
    if m is None:
        raise ValueError(f"unsupported parameter path {param!r}")
    if m.group(1):
        return replace(scenario, intermediary=replace(scenario.intermediary, **{m.group(1): value}))
    idx, field_name = int(m.group(2)), m.group(3)
    if idx >= len(scenario.producers):
        raise ValueError(f"producer index {idx} out of range")
    producers = list(scenario.producers)
    producers[idx] = replace(producers[idx], **{field_name: value})
    return replace(scenario, producers=tuple(producers))


def run_sweep(scenario: Scenario, spec: SweepSpec) -> dict:
    """Evaluate the comparison on every grid point.

    Invalid grid points are reported inline (valid=false plus the violation
    text), never skipped.  When sweeping intermediary.alpha the per-producer
    branch-switch points of the encouragement rule are collected: the first
    grid value where the rule flips from exclusion to encouragement.
    """
    rows = []
    switch_points: dict[str, float] = {}
    last_branch: dict[str, str] = {}
    for value in spec.values():
        candidate = apply_param(scenario, spec.param, value)
        try:
            validate_scenario(candidate)
        except ScenarioValidationError as err:
            rows.append({
                "value": value, "producer": None, "valid": False,
                "error": "; ".join(err.violations),
            })
            continue
        report = compare(candidate)
        for r in report.rows:
            branch = r.switch_rule_branch.value if r.switch_rule_branch else None
            flipped = (
                r.name in last_branch
                and branch is not None
                and branch != last_branch[r.name]
            )
            if branch is not None:
                last_branch[r.name] = branch
            if flipped and spec.param == "intermediary.alpha" and r.name not in switch_points:
                switch_points[r.name] = value
            rows.append({
                "value": value,
                "producer": r.name,
                "valid": True,
                "error": r.error,
                "h_opt1": r.h_opt1,
                "h_opt2": r.h_opt2,
                "h_lim": r.h_lim,
                "s1": r.s1,
                "s2": r.s2,
                "chosen_branch": r.chosen_branch.value if r.chosen_branch else None,
                "switch_rule_branch": branch,
                "recommendation": r.recommendation,
                "flags": list(r.flags),
                "switch": flipped,
            })
    return {
        "param": spec.param,
        "from": spec.start,
        "to": spec.stop,
        "steps": spec.steps,
        "rows": rows,
        "switch_points": switch_points,
    }


_SWEEP_COLUMNS = [
    "value", "producer", "valid", "h_opt1", "h_opt2", "h_lim", "s1", "s2",
    "chosen_branch", "switch_rule_branch", "recommendation", "switch", "flags", "error",
]


def _sweep_cells(sweep: dict, cell) -> list[list[str]]:
    rows = []
    for r in sweep["rows"]:
        rows.append([
            cell(r["value"]),
            r["producer"] or "",
            str(r["valid"]).lower(),
            cell(r.get("h_opt1")), cell(r.get("h_opt2")), cell(r.get("h_lim")),
            cell(r.get("s1")), cell(r.get("s2")),
            r.get("chosen_branch") or "",
            r.get("switch_rule_branch") or "",
            r.get("recommendation") or "",
            str(r.get("switch", False)).lower(),
            "|".join(r.get("flags", [])),
            r.get("error") or "",
        ])
    return rows


def _render_sweep_table(sweep: dict) -> str:
    lines = [_table(_SWEEP_COLUMNS, _sweep_cells(sweep, _fmt))]
    if sweep["switch_points"]:
        for name, value in sorted(sweep["switch_points"].items()):
            lines.append(f"branch switch [{name}]: first encouragement at {_fmt(value)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _load(path) -> Scenario:
    return load_scenario(path)


def cmd_solve(args) -> int:
    try:
        scenario = _load(args.scenario)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read scenario: {err}", file=sys.stderr)
        return EXIT_IO
    except ScenarioValidationError as err:
        for v in err.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    names = _REGIME_ORDER if args.regime == "all" else [args.regime]
    try:
        results = [_REGIME_EVALS[name](scenario) for name in names]
    except NoPositiveEffort as err:
        print(f"solver: {err}", file=sys.stderr)
        return EXIT_SOLVER
    if args.format == "json":
        print(render_json({"results": [r.to_dict() for r in results]}))
    elif args.format == "csv":
        rows = [cells for r in results for cells in _result_cells(r, _num)]
        sys.stdout.write(_csv_text(_RESULT_COLUMNS, rows))
    else:
        print(_render_results_table(results))
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        scenario = _load(args.scenario)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read scenario: {err}", file=sys.stderr)
        return EXIT_IO
    except ScenarioValidationError as err:
        for v in err.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.alpha is not None:
        scenario = with_alpha(scenario, args.alpha)
        try:
            validate_scenario(scenario)
        except ScenarioValidationError as err:
            for v in err.violations:
                print(f"validation: {v}", file=sys.stderr)
            return EXIT_VALIDATION
    report = compare(scenario)
    if args.format == "json":
        print(render_json(report.to_dict()))
    elif args.format == "csv":
        sys.stdout.write(_csv_text(_COMPARE_COLUMNS, _compare_cells(report, _num)))
    else:
        print(_render_compare_table(report))
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        scenario = _load(args.scenario)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read scenario: {err}", file=sys.stderr)
        return EXIT_IO
    except ScenarioValidationError as err:
        for v in err.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    spec = SweepSpec(param=args.param, start=args.start, stop=args.stop, steps=args.steps)
    problems = spec.violations()
    if problems:
        for v in problems:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    m = _PARAM_RE.match(spec.param)
    if m.group(2) is not None and int(m.group(2)) >= len(scenario.producers):
        print(f"validation: param: producer index {m.group(2)} out of range", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        sweep = run_sweep(scenario, spec)
    except NoPositiveEffort as err:
        print(f"solver: {err}", file=sys.stderr)
        return EXIT_SOLVER
    if args.format == "json":
        print(render_json(sweep))
    elif args.format == "csv":
        sys.stdout.write(_csv_text(_SWEEP_COLUMNS, _sweep_cells(sweep, _num)))
    else:
        print(_render_sweep_table(sweep))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contract-forge",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one regime (or all) for a scenario file")
    p_solve.add_argument("scenario", help="scenario JSON file")
    p_solve.add_argument("--regime", choices=_REGIME_ORDER + ["all"], default="all")
    p_solve.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p_solve.set_defaults(func=cmd_solve)

    p_cmp = sub.add_parser("compare", help="compare regimes and recommend whether to hire")
    p_cmp.add_argument("scenario", help="scenario JSON file")
    p_cmp.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p_cmp.add_argument("--alpha", type=float, default=None,
                       help="override the producer bargaining power for what-if analysis")
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="comparative statics over one parameter")
    p_swp.add_argument("scenario", help="scenario JSON file")
    p_swp.add_argument("--param", required=True,
                       help="intermediary.mu | intermediary.alpha | producers[k].{pi,p,h_min}")
    p_swp.add_argument("--from", dest="start", type=float, required=True)
    p_swp.add_argument("--to", dest="stop", type=float, required=True)
    p_swp.add_argument("--steps", type=int, required=True)
    p_swp.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
