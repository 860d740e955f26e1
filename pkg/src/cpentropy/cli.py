"""Command-line front end.

Subcommands::

    eval      free energy and entropy at one point (JSON)
    figure    curve data for one figure preset (CSV or JSON)
    critical  critical anisotropy search (JSON)
    table     regenerate the negative-entropy summary table
    verify    closed forms against the Matsubara mode sums

Exit codes: 0 success (including "none-in-range" searches), 1 usage
error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import SystemConfig, classify_table, critical_anisotropy, table_one_rows
from .figures import PRESETS, get_preset, render_csv
from .oracle import pair_free_energy_oracle, plate_free_energy_oracle
from .pair import ParticlePair, pair_entropy, pair_entropy_sectors, pair_free_energy
from .plate import (
    Polarizability,
    ThermalGeometry,
    plate_entropy,
    plate_entropy_TE,
    plate_entropy_TM,
    plate_free_energy,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

COMPONENTS = ("alpha_perp", "alpha_z", "beta_perp", "beta_z")

# short names for the table rows usable with `critical --case`
CASES = {
    "E/E": "E/E",
    "E/M": "E/M",
    "PC/PC": "PC/PC",
    "PC/D": "PC/D",
    "E/TE": "E/TE plate",
    "E/TM": "E/TM plate",
    "E/PC": "E/PC or D plate",
}


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dumps(obj) -> str:
    try:
        return json.dumps(obj, allow_nan=False, separators=(", ", ": "))
    except ValueError as exc:
        raise NumericalFailure(f"non-finite value in output: {exc}") from None


def _floats(obj):
    """Plain Python floats so the JSON encoder prints full precision."""
    if isinstance(obj, dict):
        return {k: _floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_floats(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


def _particle(args, suffix: str = "") -> Polarizability:
    vals = [getattr(args, f"{c}{suffix}") or 0.0 for c in COMPONENTS]
    return Polarizability(*vals)


def _geometry(args) -> ThermalGeometry:
    Z = 1.0 if args.Z is None else args.Z
    if args.T is not None and args.y is not None:
        raise UsageError("give either --T or --y, not both")
    try:
        if args.y is not None:
            if args.y < 0:
                raise UsageError("--y must be non-negative")
            return ThermalGeometry.from_y(args.y, Z)
        return ThermalGeometry(Z, 0.0 if args.T is None else args.T)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args) -> dict:
    geom = _geometry(args)
    out = {"command": "eval", "system": args.system, "Z": geom.Z, "T": geom.T, "y": geom.y}
    if args.system == "plate":
        p = _particle(args)
        S = plate_entropy(p, geom)
        S_E = plate_entropy_TE(p, geom)
        S_H = plate_entropy_TM(p, geom)
        unit = 2.0 * geom.Z**3 / 3.0
        out.update({"inputs": dict(zip(COMPONENTS, p.as_tuple())),
                    "F": plate_free_energy(p, geom), "S": S,
                    "s": unit * S, "s_E": unit * S_E, "s_H": unit * S_H,
                    "dipole_valid": geom.dipole_valid})
    else:
        p1, p2 = _particle(args, "_1"), _particle(args, "_2")
        pair = ParticlePair(p1, p2, geom)
        sectors = pair_entropy_sectors(pair)
        out.update({"inputs": {"p1": dict(zip(COMPONENTS, p1.as_tuple())),
                               "p2": dict(zip(COMPONENTS, p2.as_tuple()))},
                    "F": pair_free_energy(pair), "S": pair_entropy(pair),
                    "S_EE": sectors["EE"], "S_MM": sectors["MM"], "S_EM": sectors["EM"]})
    for key in ("F", "S"):
        if not math.isfinite(out[key]):
            raise NumericalFailure(f"non-finite {key}")
    return out


def cmd_figure(args) -> tuple[str, dict]:
    try:
        preset = get_preset(args.id)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if args.format == "json":
        curves = preset.evaluate()
        body = _dumps(_floats({
            "id": preset.id, "caption": preset.caption, "x_column": preset.x_column,
            "x": preset.grid().tolist(),
            "curves": {c.label: c.s.tolist() for c in curves},
        })) + "\n"
    else:
        body = render_csv(preset)
    report = {"command": "figure", "id": preset.id, "rows": preset.n_rows,
              "columns": [preset.x_column] + [label for label, _ in preset.curves]}
    return body, report


def _config_from_args(args) -> SystemConfig:
    if args.case is not None:
        label = CASES.get(args.case, args.case)
        rows = {r.label: r for r in table_one_rows()}
        if label not in rows:
            raise UsageError(f"unknown case {args.case!r}; choose from {', '.join(CASES)}")
        configs = rows[label].configs
        if args.sweep is None:
            return configs[0]
        for cfg in configs:
            if cfg.swept == args.sweep:
                return cfg
        try:
            return SystemConfig(configs[0].kind, configs[0].particles, args.sweep, configs[0].sector, label)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.sweep is None:
        raise UsageError("--sweep is required without --case")
    if args.system == "plate":
        particles = (_particle(args),)
    else:
        particles = (_particle(args, "_1"), _particle(args, "_2"))
    try:
        return SystemConfig(args.system, particles, args.sweep, args.sector or "total")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_critical(args) -> dict:
    cfg = _config_from_args(args)
    lo, hi = args.gamma_range or (0.1, 3.0)
    y_range = tuple(args.y_range) if args.y_range else (0.05, 50.0)
    tol = args.tol if args.tol is not None else 1e-6
    try:
        res = critical_anisotropy(cfg, (lo, hi), tol, y_range=y_range)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = {"command": "critical", "case": cfg.label or None, "system": cfg.kind, "sector": cfg.sector,
           "gamma_range": [lo, hi], "y_range": list(y_range)}
    out.update(res.to_dict())
    return out


def _format_table(rows: list[dict]) -> str:
    lines = [f"{'system':<18}{'computed':<54}{'printed':<46}match"]
    for r in rows:
        if r["verdict"] == "threshold":
            comp = " or ".join(f"{k}>{v:.4f}" for k, v in r["thresholds"].items())
            comp = "S<0 for " + comp
        else:
            comp = "S<0 " + r["verdict"]
        lines.append(f"{r['label']:<18}{comp:<54}{r['printed']:<46}{'yes' if r['match'] else 'NO'}")
    return "\n".join(lines) + "\n"


def cmd_table(args) -> tuple[str, dict]:
    rows = _floats(classify_table(tol=args.tol if args.tol is not None else 1e-6))
    report = {"command": "table", "rows": rows, "all_match": all(r["match"] for r in rows)}
    return _format_table(rows), report


def verify_grid(gammas=(0.0, 0.5, 1.0, 2.0), ys=(0.2, 1.0, 5.0, 20.0), Z: float = 1.0):
    """Relative deviations between closed forms and mode sums.

    Yields ``(system, gamma_alpha, gamma_beta, y, closed, oracle, rel)``.
    Magnetic parts use conductor-like negative beta so that no sector
    cancels another.
    """
    for ga in gammas:
        for gb in gammas:
            p = Polarizability.from_anisotropy(1.0, ga, -0.5, gb)
            q = Polarizability.from_anisotropy(0.7, gb, -0.3, ga)
            for y in ys:
                geom = ThermalGeometry.from_y(y, Z)
                a, b = plate_free_energy(p, geom), plate_free_energy_oracle(p, geom)
                yield "plate", ga, gb, y, a, b, abs(a - b) / abs(b)
                pr = ParticlePair(p, q, geom)
                a, b = pair_free_energy(pr), pair_free_energy_oracle(pr)
                yield "pair", ga, gb, y, a, b, abs(a - b) / abs(b)


def cmd_verify(args) -> dict:
    tol = args.tol if args.tol is not None else 1e-9
    gammas = tuple(args.gammas) if args.gammas else (0.0, 0.5, 1.0, 2.0)
    ys = tuple(args.ys) if args.ys else (0.2, 1.0, 5.0, 20.0)
    if any(y <= 0 for y in ys):
        raise UsageError("verification needs y > 0 (T > 0)")
    worst = None
    n = 0
    for rec in verify_grid(gammas, ys):
        n += 1
        if worst is None or not rec[-1] <= worst[-1]:
            worst = rec
    ok = worst is not None and math.isfinite(worst[-1]) and worst[-1] <= tol
    return {"command": "verify", "points": n, "tol": tol,
            "max_rel_deviation": worst[-1] if worst else None,
            "worst": {"system": worst[0], "gamma_alpha": worst[1], "gamma_beta": worst[2], "y": worst[3]}
            if worst else None,
            "passed": ok}


def _add_particle_flags(p: argparse.ArgumentParser):
    for c in COMPONENTS:
        flag = c.replace("_", "-")
        p.add_argument(f"--{flag}", dest=c, type=float, help=f"{c} (plate system)")
        for i in (1, 2):
            p.add_argument(f"--{flag}-{i}", dest=f"{c}_{i}", type=float, help=f"{c} of particle {i}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpentropy", description="Casimir-Polder free energies and entropies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="key = value file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="free energy and entropy at one point")
    p.add_argument("--system", choices=("plate", "pair"))
    _add_particle_flags(p)
    p.add_argument("--Z", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--y", type=float)

    p = sub.add_parser("figure", help="curve data for a figure preset")
    p.add_argument("id", nargs="?", help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("critical", help="critical anisotropy search")
    p.add_argument("--case", help=f"table row: {', '.join(CASES)}")
    p.add_argument("--system", choices=("plate", "pair"))
    p.add_argument("--sector", choices=("total", "TE", "TM"))
    p.add_argument("--sweep", help="gamma_alpha, gamma_beta, gamma_alpha_1, ..., ratio")
    _add_particle_flags(p)
    p.add_argument("--gamma-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--y-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--tol", type=float)

    p = sub.add_parser("table", help="regenerate the negative-entropy table")
    p.add_argument("--out", type=Path, help="also write the JSON report here")
    p.add_argument("--format", choices=("text", "json"))
    p.add_argument("--tol", type=float)

    p = sub.add_parser("verify", help="closed forms against Matsubara sums")
    p.add_argument("--tol", type=float)
    p.add_argument("--gammas", type=float, nargs="+")
    p.add_argument("--ys", type=float, nargs="+")
    return parser


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _apply_config(parser, args):
    """Fill options left unset on the command line from ``--config``."""
    cp = configparser.ConfigParser()
    try:
        text = args.config.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    try:
        cp.read_string("[cpentropy]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"bad config file: {exc}") from None
    actions = {a.dest: a for a in _subparser(parser, args.command)._actions}
    for key, raw in cp["cpentropy"].items():
        dest = key.replace("-", "_")
        if dest not in actions:
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, dest, None) is not None:
            continue
        action = actions[dest]
        conv = action.type or str
        try:
            if action.nargs in ("+", 2):
                value = [conv(v) for v in raw.replace(",", " ").split()]
            else:
                value = conv(raw)
        except ValueError:
            raise UsageError(f"bad value for {key}: {raw!r}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"bad value for {key}: {raw!r}")
        setattr(args, dest, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.config is not None:
            _apply_config(parser, args)
        if args.command == "eval":
            if args.system is None:
                raise UsageError("--system is required")
            out = cmd_eval(args)
            out["wall_time"] = time.perf_counter() - start
            print(_dumps(_floats(out)))
            return EXIT_OK
        if args.command == "figure":
            if args.id is None:
                raise UsageError("figure id is required")
            args.format = args.format or "csv"
            body, report = cmd_figure(args)
            if args.out is None:
                sys.stdout.write(body)
            else:
                try:
                    args.out.write_text(body, encoding="utf-8", newline="")
                except OSError as exc:
                    raise UsageError(f"cannot write {args.out}: {exc}") from None
                report.update(path=str(args.out), wall_time=time.perf_counter() - start)
                print(_dumps(report))
            return EXIT_OK
        if args.command == "critical":
            out = cmd_critical(args)
            out["wall_time"] = time.perf_counter() - start
            print(_dumps(_floats(out)))
            return EXIT_OK
        if args.command == "table":
            text, report = cmd_table(args)
            report["wall_time"] = time.perf_counter() - start
            if args.format == "json":
                print(_dumps(report))
            else:
                sys.stdout.write(text)
            if args.out is not None:
                try:
                    args.out.write_text(_dumps(report) + "\n", encoding="utf-8")
                except OSError as exc:
                    raise UsageError(f"cannot write {args.out}: {exc}") from None
            return EXIT_OK if report["all_match"] else EXIT_NUMERIC
        if args.command == "verify":
            out = cmd_verify(args)
            out["wall_time"] = time.perf_counter() - start
            print(_dumps(_floats(out)))
            return EXIT_OK if out["passed"] else EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"cpentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"cpentropy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
