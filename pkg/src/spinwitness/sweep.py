"""Deterministic parameter sweeps over field strength and temperature.

Every sweep point is a pure function of (config, point index), with the
random basis sample for point k drawn from a stream seeded by seed XOR k, so
results are reproducible and independent of worker scheduling.  Rows are
emitted in ascending (B/J0, kT/J0) order as CSV with a fixed schema:
comma-separated, 12-significant-digit floats, flags as 0/1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .model import (
    ModelSpectrum,
    SpinChainParams,
    energy_gap,
    ground_state,
    spectrum,
    thermal_state,
)
from .protocol import TimeGrid, WitnessTrace, ground_witness_report, witness_dmin, witness_trace
from .qcore import sample_qubit_basis

# The protocol addresses the leftmost spin of the chain.
MEASURED_SITE = 1

BOUND_SLACK = 1e-9

GROUND_HEADER = "b_over_j0,gap,negativity,global_D,d_max,t_at_dmax,degenerate_schmidt"
THERMAL_HEADER = GROUND_HEADER + ",kt_over_j0,sampled_Dmin,d_min"
TRACE_HEADER = "t,m_y,d"
SPECTRUM_HEADER = "index,energy,parity,gap"


class SweepInvariantError(RuntimeError):
    """A bound that must hold row-by-row failed at emission time."""


def default_b_grid(n_points: int = 50, low: float = 0.05, high: float = 20.0) -> tuple[float, ...]:
    """Log-spaced field grid bracketing the ordered and field-aligned limits."""
    return tuple(float(x) for x in np.geomspace(low, high, n_points))


@dataclass(frozen=True)
class SweepConfig:
    """Configuration shared by the sweep drivers."""

    n_sites: int = 7
    alpha: float = 1.0
    j0_sign: int = 1
    b_over_j0_grid: tuple[float, ...] = default_b_grid()
    kt_over_j0_list: tuple[float, ...] = (1e-5, 0.1, 1.0)
    t_max: float = 2.0 * math.pi * 10.0
    n_steps: int = 200
    n_bases: int = 20
    seed: int = 0
    output: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.j0_sign not in (1, -1):
            raise ValueError("j0_sign must be +1 or -1")
        if not self.b_over_j0_grid:
            raise ValueError("field grid must be non-empty")
        if any(b <= 0.0 for b in self.b_over_j0_grid):
            raise ValueError("B/J0 values must be positive")
        if not self.kt_over_j0_list:
            raise ValueError("temperature list must be non-empty")
        if any(kt <= 0.0 for kt in self.kt_over_j0_list):
            raise ValueError("kT/J0 values must be positive")
        if self.n_bases < 1:
            raise ValueError("need at least one sampled basis")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative 64-bit integer")

    def params_at(self, b_over_j0: float) -> SpinChainParams:
        return SpinChainParams(self.n_sites, float(self.j0_sign), self.alpha,
                               float(b_over_j0))

    def grid(self) -> TimeGrid:
        return TimeGrid(self.t_max, self.n_steps)


@dataclass(frozen=True)
class SweepRow:
    """One emitted sweep row; thermal rows carry the per-temperature fields."""

    b_over_j0: float
    gap: float
    negativity: float
    global_D: float
    d_max: float
    t_at_dmax: float
    degenerate_schmidt: bool
    kt_over_j0: float | None = None
    sampled_Dmin: float | None = None
    d_min: float | None = None


@dataclass(frozen=True)
class SpectrumRow:
    index: int
    energy: float
    parity: float
    gap: float


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _check_row(row: SweepRow) -> None:
    if row.d_max > row.global_D + BOUND_SLACK:
        raise SweepInvariantError(
            f"row B/J0={row.b_over_j0!r}: d_max {row.d_max!r} exceeds D {row.global_D!r}"
        )
    if row.d_min is not None and row.d_min > row.sampled_Dmin + BOUND_SLACK:
        raise SweepInvariantError(
            f"row B/J0={row.b_over_j0!r}, kT/J0={row.kt_over_j0!r}: "
            f"d_min {row.d_min!r} exceeds sampled D_min {row.sampled_Dmin!r}"
        )


def _ground_fields(row: SweepRow) -> str:
    return ",".join([
        _fmt(row.b_over_j0),
        _fmt(row.gap),
        _fmt(row.negativity),
        _fmt(row.global_D),
        _fmt(row.d_max),
        _fmt(row.t_at_dmax),
        "1" if row.degenerate_schmidt else "0",
    ])


def write_ground_csv(rows, path) -> None:
    lines = [GROUND_HEADER]
    for row in rows:
        _check_row(row)
        lines.append(_ground_fields(row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_thermal_csv(rows, path) -> None:
    lines = [THERMAL_HEADER]
    for row in rows:
        _check_row(row)
        lines.append(",".join([
            _ground_fields(row),
            _fmt(row.kt_over_j0),
            _fmt(row.sampled_Dmin),
            _fmt(row.d_min),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_trace_csv(trace: WitnessTrace, path) -> None:
    lines = [TRACE_HEADER]
    for t, m, d in zip(trace.grid.times, trace.m_y, trace.d):
        lines.append(",".join([_fmt(t), _fmt(m), _fmt(d)]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_spectrum_csv(rows, path) -> None:
    lines = [SPECTRUM_HEADER]
    for row in rows:
        lines.append(",".join([
            str(row.index), _fmt(row.energy), _fmt(row.parity), _fmt(row.gap),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def _map_points(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, item) for item in items]
        return [f.result() for f in futures]


def _ground_quantities(config: SweepConfig, b: float) -> tuple[ModelSpectrum, SweepRow]:
    ms = spectrum(config.params_at(b))
    gs = ground_state(ms)
    report = ground_witness_report(gs, ms, MEASURED_SITE, config.grid())
    row = SweepRow(
        b_over_j0=b,
        gap=energy_gap(ms),
        negativity=report.negativity,
        global_D=report.global_D,
        d_max=report.d_max,
        t_at_dmax=report.per_basis[0].trace.t_at_extremum,
        degenerate_schmidt=report.degenerate_basis,
    )
    return ms, row


def run_ground_sweep(config: SweepConfig) -> list[SweepRow]:
    """Pure ground-state protocol at every field point.

    Tracks how the spin-rest entanglement and its locally measurable witness
    move as the field drives the chain from the ordered into the
    field-aligned regime.  Writes CSV when the config names an output path.
    """
    grid_b = sorted(config.b_over_j0_grid)
    rows = _map_points(lambda b: _ground_quantities(config, b)[1], grid_b,
                       config.threads)
    for row in rows:
        _check_row(row)
    if config.output is not None:
        write_ground_csv(rows, config.output)
    return rows


def _thermal_point(config: SweepConfig, k: int, b: float) -> list[SweepRow]:
    ms, ground_row = _ground_quantities(config, b)
    rng = np.random.default_rng(config.seed ^ k)
    bases = [sample_qubit_basis(rng) for _ in range(config.n_bases)]
    grid = config.grid()
    rows = []
    for kt in sorted(config.kt_over_j0_list):
        rho = thermal_state(ms, 1.0 / kt)
        report = witness_dmin(rho, ms, MEASURED_SITE, bases, grid)
        rows.append(replace(
            ground_row,
            kt_over_j0=kt,
            sampled_Dmin=report.sampled_Dmin,
            d_min=report.d_min,
        ))
    return rows


def run_thermal_sweep(config: SweepConfig) -> list[SweepRow]:
    """Sampled-basis protocol on Gibbs states across (B/J0, kT/J0).

    Each field point draws its own basis sample from seed XOR point-index and
    reuses it for every temperature and for both the witness and the sampled
    disturbance minimum, so the two columns are directly comparable.
    """
    grid_b = sorted(config.b_over_j0_grid)
    per_point = _map_points(
        lambda item: _thermal_point(config, item[0], item[1]),
        list(enumerate(grid_b)),
        config.threads,
    )
    rows = [row for point_rows in per_point for row in point_rows]
    for row in rows:
        _check_row(row)
    if config.output is not None:
        write_thermal_csv(rows, config.output)
    return rows


def run_witness_trace(params: SpinChainParams, grid: TimeGrid,
                      output=None) -> WitnessTrace:
    """Single-point protocol time series (t, m_y, d) for the ground state."""
    ms = spectrum(params)
    gs = ground_state(ms)
    trace = witness_trace(gs, ms, MEASURED_SITE, grid)
    if output is not None:
        write_trace_csv(trace, output)
    return trace


def run_spectrum_report(params: SpinChainParams, output=None) -> list[SpectrumRow]:
    """Sorted spectrum with parity labels and excitation energies."""
    ms = spectrum(params)
    w = ms.eigenvalues
    rows = [
        SpectrumRow(k, float(w[k]), float(ms.parity_values[k]), float(w[k] - w[0]))
        for k in range(w.size)
    ]
    if output is not None:
        write_spectrum_csv(rows, output)
    return rows
