"""Command-line front end: ``decompound <subcommand> [options]``.

Options given on the command line override values from ``--config``. Exit
status is 1 for configuration errors, 2 for numerical failures and 3 for
I/O failures.
"""

import argparse
import csv
import io
import os
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import __version__
from .config import ParseError, ValidationError, config_from_sections, parse_sections
from .fourier import estimate_fourier, threshold_cf
from .laws import LawSyntaxError
from .mellin import estimate_mellin, threshold_mellin
from .rates import (
    OrdinarySmoothNoise,
    OrdinarySmoothTarget,
    SuperSmoothNoise,
    SuperSmoothTarget,
    theoretical_rate,
)
from .risk import FourierSetting, MellinSetting, sweep_cutoff, sweep_sample_size, sweep_t2
from .rng import resolve_seed
from .simulate import Panel, sample_increments, sample_panel

EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 1, 2, 3

FOURIER_DEFAULTS = {"jump": "mixture(0.3:N(-3.5,1), 0.7:N(3.5,1))", "noise": "N(0,1)", "j": "10000"}
MELLIN_DEFAULTS = {"jump": "beta(200,30)", "n": "5000"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# csv


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def csv_text(header, rows, seed):
    buf = io.StringIO()
    buf.write(f"# decompound-kit {__version__} seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, seed):
    text = csv_text(header, rows, seed)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)
    return path


def read_csv(path):
    """Header and float rows of a CSV written by this tool."""
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        raise ValidationError(f"{path}: no header")
    return header, np.array([[float(c) for c in row] for row in reader if row], dtype=float)


def read_panel(path):
    header, data = read_csv(path)
    if header != ["channel", "time", "value"]:
        raise ValidationError(f"{path}: expected columns channel,time,value")
    times = np.unique(data[:, 1])
    channels = np.unique(data[:, 0])
    obs = np.full((channels.size, times.size), np.nan)
    obs[np.searchsorted(channels, data[:, 0]), np.searchsorted(times, data[:, 1])] = data[:, 2]
    if np.isnan(obs).any():
        raise ValidationError(f"{path}: panel is not complete")
    return Panel(obs, times)


def read_increments(path):
    header, data = read_csv(path)
    if header != ["k", "value"]:
        raise ValidationError(f"{path}: expected columns k,value")
    return data[np.argsort(data[:, 0]), 1]


# argument plumbing


def _global_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=d(None), help="configuration file")
    parser.add_argument("--seed", type=int, default=d(None), help="master seed (fallback: DECOMPOUND_SEED)")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads for replicates")
    parser.add_argument("--out-dir", default=d(None), help="directory for relative output paths")


# (flag, section, key)
MODEL_FLAGS = [("--jump", "model", "jump"), ("--noise", "model", "noise"), ("--J", "model", "j"),
               ("--n", "model", "n"), ("--delta", "model", "delta"), ("--lambda", "model", "lambda"),
               ("--times", "model", "times")]
COMMON_EST = [("--m", "estimator", "m"), ("--kappa", "estimator", "kappa"), ("--alpha", "estimator", "alpha"),
              ("--freq-step", "estimator", "freq_step"), ("--m-search", "estimator", "m_search"),
              ("--x-min", "estimator", "x_min"), ("--x-max", "estimator", "x_max"),
              ("--x-step", "estimator", "x_step"), ("--cutoff-rule", "estimator", "cutoff_rule")]
FOURIER_EST = [("--t1", "estimator", "t1"), ("--t2", "estimator", "t2"), ("--kappa-form", "estimator", "kappa_form")]
MELLIN_EST = [("--c", "estimator", "c"), ("--threshold-form", "estimator", "threshold_form")]


def _dest(flag):
    return "opt_" + flag.lstrip("-").replace("-", "_").lower()


def _add(parser, table):
    for flag, _, _ in table:
        parser.add_argument(flag, dest=_dest(flag), default=None, metavar=flag.lstrip("-").upper())


def build_parser():
    p = _Parser(prog="decompound", description="Nonparametric decompounding of compound Poisson jump laws.")
    p.add_argument("--version", action="version", version=f"decompound-kit {__version__}")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def command(name, help):
        sp = sub.add_parser(name, help=help)
        _global_flags(sp, suppress=True)
        return sp

    sp = command("simulate", "simulate a noisy additive panel or multiplicative increments")
    sp.add_argument("--model", choices=["additive", "multiplicative"], default=None)
    _add(sp, MODEL_FLAGS)
    sp.add_argument("--out", default=None)

    sp = command("estimate-fourier", "two-time Fourier estimate from a panel")
    _add(sp, MODEL_FLAGS + COMMON_EST + FOURIER_EST)
    sp.add_argument("--adaptive", action="store_true")
    sp.add_argument("--input", default=None, help="panel CSV (channel,time,value) instead of simulating")
    sp.add_argument("--out", default=None)
    sp.add_argument("--dump-cf", default=None, help="also write u,re,im,thresholded")

    sp = command("estimate-mellin", "Mellin estimate from multiplicative increments")
    _add(sp, MODEL_FLAGS + COMMON_EST + MELLIN_EST)
    sp.add_argument("--adaptive", action="store_true")
    sp.add_argument("--input", default=None, help="increment CSV (k,value) instead of simulating")
    sp.add_argument("--out", default=None)
    sp.add_argument("--dump-mellin", default=None, help="also write t,re,im")

    sp = command("mise-sweep", "Monte-Carlo MISE over cutoffs or sample sizes")
    sp.add_argument("--model", choices=["additive", "multiplicative"], default=None)
    _add(sp, MODEL_FLAGS + COMMON_EST + FOURIER_EST + MELLIN_EST)
    sp.add_argument("--parameter", default=None, help="m (default), J or n")
    sp.add_argument("--values", default=None, help="a,b,c or grid(start,step,count)")
    sp.add_argument("--replicates", default=None)
    sp.add_argument("--adaptive", action="store_true", help="also evaluate the adaptive cutoff")
    sp.add_argument("--out", default=None)

    sp = command("t2-sweep", "Monte-Carlo MISE of the Fourier estimator over t2")
    _add(sp, MODEL_FLAGS + COMMON_EST + FOURIER_EST)
    sp.add_argument("--values", default=None, help="t2 values: a,b,c or grid(start,step,count)")
    sp.add_argument("--replicates", default=None)
    sp.add_argument("--out", default=None)

    sp = command("rates", "optimal cutoff and risk rates by regularity class")
    for name in ("beta", "a", "b", "c", "s"):
        sp.add_argument(f"--{name}", default="1")
    sp.add_argument("--J", dest="J", type=float, default=None, help="also evaluate at this J")
    return p


def _sections(args, model, table, defaults):
    sections = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            sections = parse_sections(fh.read())
    sections.setdefault("model", {})
    file_model = sections["model"].get("type", (model, None))[0]
    if model is not None and file_model != model:
        raise ValidationError(f"this subcommand needs the {model} model, config declares {file_model!r}")
    model = file_model or "additive"
    sections["model"]["type"] = (model, None)
    if not args.config:
        for key, value in defaults.get(model, {}).items():
            sections["model"].setdefault(key, (value, None))
    for flag, section, key in table:
        value = getattr(args, _dest(flag), None)
        if value is not None:
            sections.setdefault(section, {})[key] = (str(value), None)
    return sections


def _output_path(args, cfg, name):
    out_dir = getattr(args, "out_dir", None) or cfg.output.dir
    return name if os.path.isabs(name) else os.path.join(out_dir, name)


def _seed(args, cfg):
    return resolve_seed(args.seed if args.seed is not None else cfg.seed)


DEFAULTS = {"additive": FOURIER_DEFAULTS, "multiplicative": MELLIN_DEFAULTS}


# subcommands


def cmd_simulate(args):
    sections = _sections(args, args.model, MODEL_FLAGS, DEFAULTS)
    if sections["model"]["type"][0] == "additive":
        sections["model"].setdefault("times", ("0.5,1", None))
    cfg = config_from_sections(sections)
    seed = _seed(args, cfg)
    path = _output_path(args, cfg, args.out or cfg.output.data)
    if cfg.additive:
        panel = sample_panel(cfg.jump, cfg.noise, cfg.J, cfg.observation_times(), seed)
        rows = ((j + 1, t, panel.observations[j, i])
                for j in range(panel.J) for i, t in enumerate(panel.times))
        write_csv(path, ["channel", "time", "value"], rows, seed)
        count = panel.J * panel.n
    else:
        inc = sample_increments(cfg.jump, cfg.lam, cfg.delta, cfg.n, seed).increments
        write_csv(path, ["k", "value"], ((k + 1, v) for k, v in enumerate(inc)), seed)
        count = inc.size
    return f"wrote {count} rows to {path}"


def cmd_estimate_fourier(args):
    panel = read_panel(args.input) if args.input else None
    sections = _sections(args, "additive", MODEL_FLAGS + COMMON_EST + FOURIER_EST, DEFAULTS)
    if panel is not None:
        sections["model"]["j"] = (str(panel.J), None)
    if args.adaptive:
        sections.setdefault("estimator", {})["m"] = ("adaptive", None)
    cfg = config_from_sections(sections)
    est = cfg.estimator
    seed = _seed(args, cfg)
    if panel is None:
        panel = sample_panel(cfg.jump, cfg.noise, cfg.J, cfg.observation_times(), seed)
    res = estimate_fourier(panel.column(est.t1), panel.column(est.t2), est, cfg.adaptive, cfg.cutoff_rule)
    d = res.density
    path = write_csv(_output_path(args, cfg, args.out or cfg.output.density), ["x", "f_hat"],
                     zip(d.x, d.values), seed)
    dump = args.dump_cf or cfg.output.transform
    if dump:
        bar = res.thresholded if res.thresholded is not None else threshold_cf(res.cf, panel.J, est)
        alive = bar.values != 0
        rows = ((u, v.real, v.imag, int(a)) for u, v, a in zip(res.cf.u, res.cf.values, alive))
        write_csv(_output_path(args, cfg, dump), ["u", "re", "im", "thresholded"], rows, seed)
    head = f"m_hat={res.m_hat!r}" if cfg.adaptive else f"m={est.m!r}"
    return f"{head} J={panel.J} out={path}"


def cmd_estimate_mellin(args):
    data = read_increments(args.input) if args.input else None
    sections = _sections(args, "multiplicative", MODEL_FLAGS + COMMON_EST + MELLIN_EST, DEFAULTS)
    if data is not None:
        sections["model"]["n"] = (str(data.size), None)
    if args.adaptive:
        sections.setdefault("estimator", {})["m"] = ("adaptive", None)
    cfg = config_from_sections(sections)
    est = cfg.estimator
    seed = _seed(args, cfg)
    if data is None:
        data = sample_increments(cfg.jump, cfg.lam, cfg.delta, cfg.n, seed).increments
    res = estimate_mellin(data, est, cfg.adaptive, cfg.cutoff_rule)
    d = res.density
    path = write_csv(_output_path(args, cfg, args.out or cfg.output.density), ["x", "f_hat"],
                     zip(d.x, d.values), seed)
    dump = args.dump_mellin or cfg.output.transform
    if dump:
        tr = res.transform
        write_csv(_output_path(args, cfg, dump), ["t", "re", "im"],
                  zip(tr.u, tr.values.real, tr.values.imag), seed)
    head = f"m_hat={res.m_hat!r}" if cfg.adaptive else f"m={est.m!r}"
    return f"{head} n={data.size} out={path}"


def _sweep_summary(report, path):
    lo, hi = float(np.min(report.mise)), float(np.max(report.mise))
    text = f"mise range [{lo:.6g}, {hi:.6g}] argmin {report.parameter}={report.argmin!r}"
    if "adaptive" in report.extra:
        a = report.extra["adaptive"]
        text += f" adaptive mise={a['mise']:.6g} mean m_hat={float(np.mean(a['m_hat'])):.6g}"
    return f"{text} out={path}"


def _sweep_section(args, parameter):
    sw = {}
    if parameter is not None:
        sw["parameter"] = (parameter, None)
    if args.values is not None:
        sw["values"] = (args.values, None)
    if args.replicates is not None:
        sw["replicates"] = (args.replicates, None)
    return sw


def _setting(cfg):
    if cfg.additive:
        return FourierSetting(cfg.jump, cfg.noise, cfg.J, cfg.estimator, cfg.cutoff_rule)
    return MellinSetting(cfg.jump, cfg.n, cfg.estimator, cfg.cutoff_rule)


def cmd_mise_sweep(args):
    sections = _sections(args, args.model, MODEL_FLAGS + COMMON_EST + FOURIER_EST + MELLIN_EST, DEFAULTS)
    sw = sections.setdefault("sweep", {})
    sw.update(_sweep_section(args, args.parameter))
    sw.setdefault("parameter", ("m", None))
    if args.adaptive:
        sw["adaptive"] = ("true", None)
    cfg = config_from_sections(sections)
    spec = cfg.sweep
    if spec.parameter == "t2":
        raise ValidationError("use the t2-sweep subcommand to sweep t2")
    seed = _seed(args, cfg)
    setting = _setting(cfg)
    if spec.parameter == "m":
        report = sweep_cutoff(setting, spec.values, spec.replicates, seed, args.threads, spec.adaptive)
    else:
        report = sweep_sample_size(setting, spec.values, spec.replicates, seed, args.threads)
    path = write_csv(_output_path(args, cfg, args.out or cfg.output.sweep), ["param", "mise", "stderr"],
                     report.rows(), seed)
    return _sweep_summary(report, path)


def cmd_t2_sweep(args):
    sections = _sections(args, "additive", MODEL_FLAGS + COMMON_EST + FOURIER_EST, DEFAULTS)
    if args.values is None and "sweep" not in sections:
        raise ValidationError("no t2 values: pass --values or a [sweep] section")
    sw = sections.setdefault("sweep", {})
    sw.update(_sweep_section(args, "t2"))
    sw.setdefault("parameter", ("t2", None))
    if "values" in sw and "t2" not in sections.get("estimator", {}):
        # t2 itself must sit above t1 for the estimator config; the sweep replaces it
        first = float(sw["values"][0].split(",")[0].replace("grid(", ""))
        t1 = float(sections.get("estimator", {}).get("t1", ("0.5", None))[0])
        sections.setdefault("estimator", {})["t2"] = (repr(max(first, t1 + 1.0)), None)
    cfg = config_from_sections(sections)
    if cfg.sweep.parameter != "t2":
        raise ValidationError("t2-sweep needs 'parameter = t2'")
    seed = _seed(args, cfg)
    report = sweep_t2(_setting(cfg), cfg.sweep.values, cfg.sweep.replicates, seed, args.threads)
    path = write_csv(_output_path(args, cfg, args.out or cfg.output.sweep), ["param", "mise", "stderr"],
                     report.rows(), seed)
    return _sweep_summary(report, path)


def cmd_rates(args):
    try:
        v = {k: Fraction(getattr(args, k)) for k in ("beta", "a", "b", "c", "s")}
        pairs = [
            ("ordinary/ordinary", OrdinarySmoothTarget(v["beta"]), OrdinarySmoothNoise(v["a"])),
            ("ordinary/super", OrdinarySmoothTarget(v["beta"]), SuperSmoothNoise(v["b"], v["s"])),
            ("super/ordinary", SuperSmoothTarget(v["c"], v["s"]), OrdinarySmoothNoise(v["a"])),
            ("super/super", SuperSmoothTarget(v["c"], v["s"]), SuperSmoothNoise(v["b"], v["s"])),
        ]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(str(exc)) from None
    lines = []
    for name, target, noise in pairs:
        rate = theoretical_rate(target, noise)
        line = f"{name:<18} {rate.describe()}"
        if args.J is not None:
            line += f"  at J={args.J:g}: m*={rate.cutoff(args.J):.6g} risk={rate.risk(args.J):.6g}"
        lines.append(line)
    return "\n".join(lines)


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate-fourier": cmd_estimate_fourier,
    "estimate-mellin": cmd_estimate_mellin,
    "mise-sweep": cmd_mise_sweep,
    "t2-sweep": cmd_t2_sweep,
    "rates": cmd_rates,
}


def main(argv=None):
    stderr = sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_CONFIG
    try:
        summary = COMMANDS[args.command](args)
    except (ParseError, ValidationError, LawSyntaxError, UsageError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError, NotImplementedError) as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERIC
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
