"""Command-line front end for the chain sweeps.

Subcommands: ground-sweep, thermal-sweep, trace, spectrum.  Options may also
be supplied through a plain key=value config file (one pair per line, `#`
comments); explicit flags override file entries.  All computation is
dimensionless (|J0| = 1, times in 1/J0); --j0-hz only echoes the physical
time window as metadata.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .model import SpinChainParams
from .protocol import DEFAULT_N_STEPS, DEFAULT_T_MAX, TimeGrid
from .sweep import (
    SweepConfig,
    SweepInvariantError,
    default_b_grid,
    run_ground_sweep,
    run_spectrum_report,
    run_thermal_sweep,
    run_witness_trace,
)

DEFAULT_KT_LIST = (1e-5, 0.1, 1.0)


def parse_b_grid(text: str) -> tuple[float, ...]:
    """Parse a field grid: a single value, `min:max:count`, or `min:max:count:log`."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) in (3, 4):
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be >= 1")
        if len(parts) == 4:
            if parts[3] != "log":
                raise ValueError(f"unknown grid spacing {parts[3]!r}")
            if count == 1:
                return (lo,)
            return tuple(float(x) for x in np.geomspace(lo, hi, count))
        if count == 1:
            return (lo,)
        return tuple(float(x) for x in np.linspace(lo, hi, count))
    raise ValueError(f"cannot parse field grid {text!r}")


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_TRUE_WORDS = {"1", "true", "yes", "on"}


def _as_bool(text: str) -> bool:
    return text.lower() in _TRUE_WORDS


class _Options:
    """Flag values merged over config-file entries over built-in defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.filecfg = _read_config_file(args.config) if args.config else {}

    def get(self, key: str, default, cast):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.filecfg:
            return cast(self.filecfg[key])
        return default

    def get_flag(self, key: str) -> bool:
        if getattr(self.args, key, False):
            return True
        return _as_bool(self.filecfg.get(key, ""))


def _add_common(parser: argparse.ArgumentParser, *, sweep: bool) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--n-spins", type=int, default=None, help="chain length (default 7)")
    parser.add_argument("--alpha", type=float, default=None,
                        help="coupling range exponent (default 1.0)")
    parser.add_argument("--antiferro", action="store_true",
                        help="antiferromagnetic coupling sign (J0 < 0)")
    parser.add_argument("--b-over-j0", default=None,
                        help="field point or grid: X, min:max:count, min:max:count:log")
    parser.add_argument("--t-max", type=float, default=None,
                        help="observation window in 1/J0 (default 2*pi*10)")
    parser.add_argument("--steps", type=int, default=None,
                        help="number of grid times (default 200)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    parser.add_argument("--out", default=None, help="output CSV path")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweep points (default 1)")
    parser.add_argument("--j0-hz", type=float, default=None,
                        help="echo the physical time window for J0 = 2*pi x this (Hz)")
    parser.add_argument("--plot", action="store_true",
                        help="render a PNG figure next to the CSV")
    if sweep:
        parser.add_argument("--kt-over-j0", type=float, action="append", default=None,
                            help="temperature kT/J0; repeat for several (default 1e-5 0.1 1.0)")
        parser.add_argument("--num-bases", type=int, default=None,
                            help="random dephasing bases per point (default 20)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinwitness",
        description="Local dephasing witness sweeps for a long-range Ising chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text, sweep in (
        ("ground-sweep", "ground-state witness across a field grid", True),
        ("thermal-sweep", "sampled-basis witness on Gibbs states", True),
        ("trace", "single-point witness time series", False),
        ("spectrum", "sorted spectrum with parity labels", False),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p, sweep=sweep)
    return parser


def _kt_list(opts: _Options) -> tuple[float, ...]:
    flag = getattr(opts.args, "kt_over_j0", None)
    if flag:
        return tuple(flag)
    if "kt_over_j0" in opts.filecfg:
        return tuple(float(x) for x in opts.filecfg["kt_over_j0"].split(",") if x.strip())
    return DEFAULT_KT_LIST


def _sweep_config(opts: _Options, default_out: str) -> SweepConfig:
    b_text = opts.get("b_over_j0", None, str)
    grid = parse_b_grid(b_text) if b_text is not None else default_b_grid()
    return SweepConfig(
        n_sites=opts.get("n_spins", 7, int),
        alpha=opts.get("alpha", 1.0, float),
        j0_sign=-1 if opts.get_flag("antiferro") else 1,
        b_over_j0_grid=grid,
        kt_over_j0_list=_kt_list(opts),
        t_max=opts.get("t_max", DEFAULT_T_MAX, float),
        n_steps=opts.get("steps", DEFAULT_N_STEPS, int),
        n_bases=opts.get("num_bases", 20, int),
        seed=opts.get("seed", 0, int),
        output=opts.get("out", default_out, str),
        threads=opts.get("threads", 1, int),
    )


def _point_setup(opts: _Options) -> tuple[SpinChainParams, TimeGrid]:
    b_text = opts.get("b_over_j0", "1.0", str)
    grid_b = parse_b_grid(b_text)
    if len(grid_b) != 1:
        raise ValueError("this subcommand expects a single --b-over-j0 value")
    params = SpinChainParams(
        n_sites=opts.get("n_spins", 7, int),
        j0=-1.0 if opts.get_flag("antiferro") else 1.0,
        alpha=opts.get("alpha", 1.0, float),
        b_field=grid_b[0],
    )
    time_grid = TimeGrid(opts.get("t_max", DEFAULT_T_MAX, float),
                         opts.get("steps", DEFAULT_N_STEPS, int))
    return params, time_grid


def _echo_physical_window(opts: _Options, t_max: float) -> None:
    j0_hz = opts.get("j0_hz", None, float)
    if j0_hz:
        t_ms = t_max / (2.0 * math.pi * j0_hz) * 1000.0
        print(f"# t_max = {t_max:g}/J0 = {t_ms:g} ms at J0 = 2*pi x {j0_hz:g} Hz "
              "(metadata only; computation is dimensionless)")


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        opts = _Options(args)
        command = args.command
        if command == "ground-sweep":
            config = _sweep_config(opts, "ground_sweep.csv")
            _echo_physical_window(opts, config.t_max)
            rows = run_ground_sweep(config)
            print(f"wrote {len(rows)} rows to {config.output}")
            if opts.get_flag("plot"):
                from . import plots
                print(f"wrote figure {plots.plot_ground_sweep(rows, _figure_path(config.output))}")
        elif command == "thermal-sweep":
            config = _sweep_config(opts, "thermal_sweep.csv")
            _echo_physical_window(opts, config.t_max)
            rows = run_thermal_sweep(config)
            print(f"wrote {len(rows)} rows to {config.output}")
            if opts.get_flag("plot"):
                from . import plots
                print(f"wrote figure {plots.plot_thermal_sweep(rows, _figure_path(config.output))}")
        elif command == "trace":
            params, time_grid = _point_setup(opts)
            out = opts.get("out", "witness_trace.csv", str)
            _echo_physical_window(opts, time_grid.t_max)
            trace = run_witness_trace(params, time_grid, out)
            print(f"wrote {time_grid.times.size} samples to {out} "
                  f"(d_max = {trace.d_extremum:.6g} at t = {trace.t_at_extremum:.6g})")
            if opts.get_flag("plot"):
                from . import plots
                print(f"wrote figure {plots.plot_witness_trace(trace, _figure_path(out))}")
        elif command == "spectrum":
            params, _ = _point_setup(opts)
            out = opts.get("out", "spectrum.csv", str)
            rows = run_spectrum_report(params, out)
            print(f"wrote {len(rows)} levels to {out}")
            if opts.get_flag("plot"):
                from . import plots
                print(f"wrote figure {plots.plot_spectrum(rows, _figure_path(out))}")
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {command!r}")
    except SweepInvariantError as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
