"""Command-line front end: simulate, sweep, fixed-points, preset."""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import (
    NoBoundaryError,
    basin_scan,
    find_fixed_points,
    label_for,
    nearest_fixed_point,
    threshold_bisect,
)
from .config import ConfigError, PRESET_NAMES, load_config, preset_text
from .dynamics import BlowupError, make_rhs
from .integrate import simulate
from .scenario import AXES
from .svgchart import trajectory_svg

CSV_HEADER = "t,x,n,y,u1,u2,u_avg,p12,p21"
SWEEP_CSV_HEADER = "initial,terminal_x,terminal_n,terminal_y,label,converged"


def _fmt(value: float) -> str:
    return "%.17g" % value


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _trajectory_csv(trajectory, truncated_at=None, reason=None) -> str:
    lines = [CSV_HEADER]
    for t, s, d in zip(trajectory.times, trajectory.states, trajectory.derived):
        lines.append(",".join(
            _fmt(v) for v in (t, s.x, s.n, s.y, d.u1, d.u2, d.u_avg, d.p12, d.p21)
        ))
    if truncated_at is not None:
        lines.append(f"# truncated at t={_fmt(truncated_at)}: {reason}")
    return "\n".join(lines) + "\n"


def _state_dict(state) -> dict:
    return {"x": state.x, "n": state.n, "y": state.y}


def _record_dict(record) -> dict:
    return {
        "state": _state_dict(record.state),
        "residual": record.residual,
        "kind": record.kind,
        "family": record.family,
        "label": label_for(record),
    }


def run_simulate(scenario, out_csv, out_json=None, out_svg=None) -> int:
    """Simulate and emit trajectory CSV plus optional JSON summary and SVG
    chart; nonzero on blowup, with the partial CSV retained and marked."""
    try:
        trajectory = simulate(scenario)
    except BlowupError as err:
        if err.partial is not None:
            _write_text(out_csv, _trajectory_csv(err.partial, truncated_at=err.t, reason=err))
        print(f"error: {err}", file=sys.stderr)
        return 1
    _write_text(out_csv, _trajectory_csv(trajectory))

    if out_json is not None:
        records = find_fixed_points(scenario)
        record, dist = nearest_fixed_point(trajectory.terminal, records)
        f = make_rhs(scenario.pair, scenario.env, scenario.trust,
                     scenario.protocol_matrix_mode)
        d = f(trajectory.terminal.x, trajectory.terminal.n, trajectory.terminal.y)
        summary = {
            "terminal": _state_dict(trajectory.terminal),
            "converged": trajectory.converged,
            "t_converged": trajectory.t_converged,
            "nearest_fixed_point": None if record is None else {
                **_record_dict(record), "distance": dist,
            },
            "residual": max(abs(d[0]), abs(d[1]), abs(d[2])),
        }
        _write_text(out_json, json.dumps(summary, indent=2) + "\n")

    if out_svg is not None:
        _write_text(out_svg, trajectory_svg(trajectory, title=scenario.label))
    return 0


def _parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid spec must be lo:hi:count, got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"malformed grid spec {spec!r}") from None
    if count < 1:
        raise ConfigError(f"grid count must be positive, got {count}")
    if not (0.0 <= lo <= hi <= 1.0):
        raise ConfigError(f"grid range must satisfy 0 <= lo <= hi <= 1, got {spec!r}")
    if count == 1:
        return [lo]
    if not lo < hi:
        raise ConfigError(f"grid needs lo < hi for more than one point, got {spec!r}")
    step = (hi - lo) / (count - 1)
    return [lo + step * k for k in range(count)]


def run_sweep(scenario, axis, grid, out_csv, out_json=None) -> int:
    """Basin scan over one initial-condition axis; emits one CSV row per grid
    value and a JSON summary with the bisected boundary when the scan shows
    exactly one label switch.  Nonzero only when every cell fails."""
    records = find_fixed_points(scenario)
    basin = basin_scan(scenario, axis, grid, fixed_points=records)

    lines = [SWEEP_CSV_HEADER]
    for cell in basin.cells:
        if cell.terminal is None:
            lines.append(f"{_fmt(cell.initial)},,,,error,false")
            continue
        label = cell.label if cell.label is not None else "unresolved"
        lines.append(",".join([
            _fmt(cell.initial),
            _fmt(cell.terminal.x),
            _fmt(cell.terminal.n),
            _fmt(cell.terminal.y),
            label,
            "true" if cell.converged else "false",
        ]))
    _write_text(out_csv, "\n".join(lines) + "\n")

    switches = []
    for a, b in zip(basin.cells, basin.cells[1:]):
        if a.label is not None and b.label is not None and a.label != b.label:
            switches.append((a.initial, b.initial))
    boundary = None
    if len(switches) == 1:
        try:
            boundary = threshold_bisect(scenario, axis, switches[0][0], switches[0][1],
                                        fixed_points=records)
        except (NoBoundaryError, BlowupError) as err:
            print(f"warning: boundary bisection failed: {err}", file=sys.stderr)

    if out_json is not None:
        summary = {
            "axis": axis,
            "grid": list(basin.grid),
            "labels": [cell.label for cell in basin.cells],
            "converged": [cell.converged for cell in basin.cells],
            "errors": [cell.error for cell in basin.cells],
            "boundary": boundary,
        }
        _write_text(out_json, json.dumps(summary, indent=2) + "\n")

    if all(cell.terminal is None for cell in basin.cells):
        print("error: every sweep cell failed", file=sys.stderr)
        return 1
    return 0


def run_fixed_points(scenario, out_json) -> int:
    """Write the verified fixed points of a scenario as a JSON list."""
    records = find_fixed_points(scenario)
    _write_text(out_json, json.dumps([_record_dict(r) for r in records], indent=2) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    scenario = load_config(args.config, overrides=args.set or ())
    return run_simulate(scenario, args.out_csv, args.out_json, args.out_svg)


def _cmd_sweep(args) -> int:
    scenario = load_config(args.config, overrides=args.set or ())
    grid = _parse_grid(args.grid)
    return run_sweep(scenario, args.axis, grid, args.out_csv, args.out_json)


def _cmd_fixed_points(args) -> int:
    scenario = load_config(args.config, overrides=args.set or ())
    return run_fixed_points(scenario, args.out_json)


def _cmd_preset(args) -> int:
    _write_text(args.write, preset_text(args.name))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecoopinion",
        description="Deterministic simulator for 2x2 games coupled to "
                    "environmental feedback and opinion imitation dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one scenario")
    p_sim.add_argument("--config", required=True, help="scenario config file")
    p_sim.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
    p_sim.add_argument("--out-csv", required=True, help="trajectory CSV path")
    p_sim.add_argument("--out-json", help="summary JSON path")
    p_sim.add_argument("--out-svg", help="time-series SVG chart path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="basin scan over one initial-condition axis")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_sweep.add_argument("--axis", required=True, choices=AXES)
    p_sweep.add_argument("--grid", required=True, metavar="lo:hi:count")
    p_sweep.add_argument("--out-csv", required=True)
    p_sweep.add_argument("--out-json")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fp = sub.add_parser("fixed-points", help="enumerate verified stationary states")
    p_fp.add_argument("--config", required=True)
    p_fp.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_fp.add_argument("--out-json", required=True)
    p_fp.set_defaults(func=_cmd_fixed_points)

    p_preset = sub.add_parser("preset", help="write a shipped preset config")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--write", required=True, help="destination path")
    p_preset.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BlowupError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
