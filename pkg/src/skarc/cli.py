"""``skarc`` command line.

Subcommands: synth, ensemble, run, curve, sweep, contour, project. Settings
come from flags, then an optional ``--config`` JSON file, then defaults.
Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
"""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .ensemble import generate_ensemble, load_ensemble, thread_count
from .errors import SkarcError
from .noisysim import EXACT
from .protocol import (
    SWEEP_TAG,
    RunReport,
    SkarcConfig,
    evaluate_cell,
    precision_sweep,
    sampling_contour,
    subensemble_distance_curve,
)
from .synthesis import DEFAULT_MAX_DEPTH, DEFAULT_MAX_H, synthesize_rz
from .tables import (
    CONTOUR_COLUMNS,
    DM_COLUMNS,
    PROJECTION_COLUMNS,
    contour_rows,
    dm_rows,
    projection_rows,
    write_csv,
    write_tables,
)

log = logging.getLogger("skarc")


class UsageError(Exception):
    pass


def int_list(text):
    """``"4:10"`` (inclusive), ``"4,6,8"`` or a mix such as ``"2,4:6"``."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ":" in part:
            lo, hi = part.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def float_list(text):
    return [float(p) for p in text.split(",") if p.strip()]


def shots_arg(text):
    if str(text).lower() == EXACT:
        return EXACT
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("shots must be positive or 'exact'")
    return n


def _coerce(action, value):
    """Apply an argparse action's type to a config-file value."""
    if action.type is None or value is None:
        return value
    if isinstance(value, list):
        value = ",".join(str(v) for v in value)
    try:
        return action.type(str(value)) if action.type in (int_list, float_list, shots_arg) \
            else action.type(value)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad config value for {action.dest}: {exc}") from None


def _write_json(path, obj):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_synth(args, cfg):
    res = synthesize_rz(args.theta, args.bits, max_h=args.max_h, max_depth=args.max_depth)
    _write_json(args.out, {
        "config": cfg,
        "word": res.word,
        "distance": res.achieved_distance,
        "depth": res.depth_used,
        "total": res.counts.total,
        "t_count": res.counts.t_count,
        "h_count": res.counts.h_count,
    })


def cmd_ensemble(args, cfg):
    ens = generate_ensemble(args.theta, args.bits, args.count, args.seed, max_h=args.max_h,
                            max_depth=args.max_depth, threads=args.threads)
    data = ens.to_dict()
    data["config"] = cfg
    _write_json(args.out, data)


def cmd_run(args, cfg):
    ens = load_ensemble(args.ensemble)
    cell = evaluate_cell(ens, args.delta, args.shots, args.seed, (SWEEP_TAG, 0, 0),
                         args.m_range, args.q_cap)
    report = RunReport(config=cfg, cells=[cell])
    _write_json(args.out, report.to_dict())
    if args.tables:
        write_tables(report, args.tables)


def cmd_curve(args, cfg):
    report = RunReport.from_dict(_read_json(args.report))
    for cell in report.cells:
        m_range = args.m_range if args.m_range is not None else range(1, len(cell.words) + 1)
        cell.dm_curve = subensemble_distance_curve(cell.vectors, cell.target, m_range,
                                                   args.q_cap, args.seed)
    report.config = cfg
    write_csv(args.out, cfg, DM_COLUMNS, dm_rows(report))


def cmd_sweep(args, cfg):
    config = SkarcConfig(theta=args.theta, b_list=args.bits, delta_list=args.delta, r=args.count,
                         shots=args.shots, m_range=args.m_range or [], q_cap=args.q_cap,
                         seed=args.seed, max_h=args.max_h, max_depth=args.max_depth)
    report = precision_sweep(config, threads=args.threads)
    report.config = cfg
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "report.json"), report.to_dict())
    write_tables(report, args.out)


def cmd_contour(args, cfg):
    config = SkarcConfig(theta=args.theta, r=args.count, seed=args.seed, max_h=args.max_h,
                         max_depth=args.max_depth)
    rows = sampling_contour(args.bits, args.shots_grid, args.randomized, config,
                            n_seeds=args.seeds, threads=args.threads)
    write_csv(args.out, cfg, CONTOUR_COLUMNS, contour_rows(rows))


def cmd_project(args, cfg):
    report = RunReport.from_dict(_read_json(args.report))
    write_csv(args.out, cfg, PROJECTION_COLUMNS, projection_rows(report))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (flags take precedence)")
    common.add_argument("-q", "--quiet", action="store_true", help="only log warnings")

    synth_opts = argparse.ArgumentParser(add_help=False)
    synth_opts.add_argument("--max-h", type=int, default=DEFAULT_MAX_H,
                            help="H symbols in the base net (default %(default)s)")
    synth_opts.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH,
                            help="maximum Solovay-Kitaev depth (default %(default)s)")

    parser = argparse.ArgumentParser(prog="skarc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("synth", parents=[common, synth_opts], help="synthesize one Z rotation")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ensemble", parents=[common, synth_opts], help="generate an ensemble file")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("run", parents=[common], help="simulate an ensemble")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--shots", type=shots_arg, default=EXACT)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-range", type=int_list, default=[])
    p.add_argument("--q-cap", type=int, default=1000)
    p.add_argument("--tables", help="also write CSV tables into this directory")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("curve", parents=[common], help="D(m) sub-ensemble curve from a report")
    p.add_argument("--report", required=True)
    p.add_argument("--m-range", type=int_list, default=None)
    p.add_argument("--q-cap", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sweep", parents=[common, synth_opts], help="precision x noise sweep")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--bits", type=int_list, default=int_list("4:10"))
    p.add_argument("--delta", type=float_list, default=[0.0])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--shots", type=shots_arg, default=EXACT)
    p.add_argument("--m-range", type=int_list, default=[])
    p.add_argument("--q-cap", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("contour", parents=[common, synth_opts], help="bits x shots contour")
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--bits", type=int_list, default=int_list("2:8"))
    p.add_argument("--shots-grid", type=int_list,
                   default=[4 ** k for k in range(2, 11)])
    p.add_argument("--randomized", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("project", parents=[common], help="2D target-plane projection")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    return parser, sub.choices


def _prescan(argv):
    """Subcommand name and ``--config`` path, found before full parsing."""
    command = config = None
    it = iter(argv)
    for tok in it:
        if tok == "--config":
            config = next(it, None)
        elif tok.startswith("--config="):
            config = tok.split("=", 1)[1]
        elif command is None and not tok.startswith("-"):
            command = tok
    return command, config


def _apply_config_file(parser, subparsers, argv):
    command, path = _prescan(argv)
    if path and command in subparsers:
        try:
            data = _read_json(path)
        except OSError as exc:
            raise SkarcError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        sp = subparsers[command]
        actions = {a.dest: a for a in sp._actions if a.dest not in ("help", "config")}
        defaults = {}
        for key, value in data.items():
            dest = key.replace("-", "_")
            if dest not in actions:
                raise UsageError(f"unknown config key {key!r} for {command}")
            defaults[dest] = _coerce(actions[dest], value)
            actions[dest].required = False
        sp.set_defaults(**defaults)
    return parser.parse_args(argv)


# output locations do not change results, so they stay out of the embedded config
_NOT_CONFIG = ("func", "config", "quiet", "threads", "out", "tables")


def run_command(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subparsers = build_parser()
    try:
        args = _apply_config_file(parser, subparsers, argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except UsageError as exc:
        print(f"skarc: error: {exc}", file=sys.stderr)
        return 2
    except SkarcError as exc:
        print(f"skarc: error: {exc}", file=sys.stderr)
        return 1
    try:
        args.threads = thread_count()
    except SkarcError as exc:
        print(f"skarc: error: SKARC_THREADS: {exc}", file=sys.stderr)
        return 2

    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("skarc: %(message)s"))
        log.addHandler(handler)
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)

    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    log.info("resolved config: %s", json.dumps(cfg, sort_keys=True))
    try:
        args.func(args, cfg)
    except SkarcError as exc:
        print(f"skarc: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"skarc: I/O error: {exc}", file=sys.stderr)
        return 1
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"skarc: error: malformed input: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
