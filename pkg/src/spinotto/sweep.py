"""Parameter sweeps over tau, pulse shape and spin; CSV output and scans."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .cycle import CycleConfig, run_cycle
from .propagator import IntegratorConfig
from .pulses import PulseShape

CSV_COLUMNS = ("pulse", "n", "two_I", "tau", "W", "eta", "Q1", "Q2", "dS_E", "W_fric", "C", "steps", "converged")


class NoCrossingError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    base: CycleConfig
    tau_grid: tuple
    pulses: tuple = (PulseShape(),)
    spins: tuple = (1,)
    out: Optional[Path] = None

    def __post_init__(self):
        grid = tuple(float(t) for t in self.tau_grid)
        if not grid:
            raise ValueError("tau grid is empty")
        if any(t <= 0 for t in grid):
            raise ValueError("tau grid values must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("tau grid must be strictly ascending")
        object.__setattr__(self, "tau_grid", grid)
        object.__setattr__(self, "pulses", tuple(PulseShape.parse(p) for p in self.pulses))
        object.__setattr__(self, "spins", tuple(int(s) for s in self.spins))
        if not self.pulses or not self.spins:
            raise ValueError("sweep needs at least one pulse and one spin")

    def configs(self):
        for pulse in self.pulses:
            for two_i in self.spins:
                for tau in self.tau_grid:
                    yield replace(self.base, shape=pulse, two_i=two_i, total_tau=tau)


@dataclass(frozen=True)
class SweepRecord:
    pulse: str
    n: Optional[float]
    two_i: int
    tau: float
    w: float
    eta: Optional[float]
    q1: float
    q2: float
    ds_e: float
    w_fric: float
    c: float
    steps: int
    converged: bool
    _order: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_cycle(cls, cfg: CycleConfig, result) -> "SweepRecord":
        return cls(
            pulse=cfg.shape.kind,
            n=cfg.shape.exponent,
            two_i=cfg.two_i,
            tau=cfg.total_tau,
            w=result.net_work,
            eta=result.efficiency,
            q1=result.q_hot,
            q2=result.q_cold,
            ds_e=result.delta_s_e,
            w_fric=result.w_fric_total,
            c=result.coherence_expansion,
            steps=result.steps,
            converged=result.converged,
            _order=(cfg.shape.sort_key(), cfg.two_i, cfg.total_tau),
        )

    def csv_row(self) -> list:
        return [
            self.pulse,
            _fmt(self.n),
            self.two_i,
            _fmt(self.tau),
            _fmt(self.w),
            _fmt(self.eta),
            _fmt(self.q1),
            _fmt(self.q2),
            _fmt(self.ds_e),
            _fmt(self.w_fric),
            _fmt(self.c),
            self.steps,
            int(self.converged),
        ]


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def tau_grid(start: float, stop: float, points: int, spacing: str = "linear") -> tuple:
    if points < 1:
        raise ValueError("tau grid needs at least one point")
    if spacing == "linear":
        grid = np.linspace(start, stop, points)
    elif spacing == "log":
        grid = np.geomspace(start, stop, points)
    else:
        raise ValueError(f"unknown tau spacing {spacing!r}; use 'linear' or 'log'")
    return tuple(float(t) for t in grid)


def _run_point(cfg: CycleConfig) -> SweepRecord:
    return SweepRecord.from_cycle(cfg, run_cycle(cfg, strict=False))


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """One record per (pulse, spin, tau); sorted by pulse, spin, tau.

    Non-converged grid points are kept and flagged, not raised.
    """
    configs = list(spec.configs())
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_point, configs, chunksize=max(1, len(configs) // (4 * workers))))
    else:
        records = [_run_point(cfg) for cfg in configs]
    records.sort(key=lambda r: r._order)
    if spec.out is not None:
        write_csv(records, spec.out)
    return records


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def write_csv(records: Sequence[SweepRecord], path) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    path.write_text(records_to_csv(records))
    return path


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _net_work(base: CycleConfig, pulse: PulseShape, tau: float) -> float:
    return run_cycle(replace(base, shape=pulse, total_tau=tau)).net_work


def find_critical_time(
    base: CycleConfig,
    pulse: PulseShape,
    bracket: tuple = (1.0, 100.0),
    scan_step: float = 1.0,
    tol: float = 1e-3,
) -> float:
    """First tau in ``bracket`` where W(tau) turns from non-positive to positive.

    Scans upward in ``scan_step`` increments, then bisects the first sign
    change down to a width of ``tol``. W(tau) oscillates for some pulses, so
    later crossings are deliberately ignored.
    """
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise ValueError(f"invalid bracket {bracket!r}")
    pulse = PulseShape.parse(pulse)
    left = lo
    w_left = _net_work(base, pulse, left)
    if w_left > 0:
        raise NoCrossingError(f"W({lo:g}) is already positive; no upward crossing in {bracket}")
    right = None
    while left < hi:
        t = min(left + scan_step, hi)
        if _net_work(base, pulse, t) > 0:
            right = t
            break
        left = t
    if right is None:
        raise NoCrossingError(f"W(tau) stays non-positive on [{lo:g}, {hi:g}]")
    while right - left > tol:
        mid = 0.5 * (left + right)
        if _net_work(base, pulse, mid) > 0:
            right = mid
        else:
            left = mid
    return 0.5 * (left + right)


def frictionless_scan(base: CycleConfig, pulse: PulseShape, taus, threshold: float) -> Optional[float]:
    """Smallest tau on the grid whose total friction work is below ``threshold``."""
    taus = list(taus)
    if not taus:
        raise ValueError("tau grid is empty")
    pulse = PulseShape.parse(pulse)
    for tau in taus:
        if run_cycle(replace(base, shape=pulse, total_tau=float(tau))).w_fric_total < threshold:
            return float(tau)
    return None


# JSON config ---------------------------------------------------------------

def config_from_mapping(data: dict) -> tuple:
    """Parse the JSON config layout into (base CycleConfig, pulses, spins, tau grid, out).

    Missing keys fall back to the CycleConfig defaults; the tau grid is None
    when the mapping has no ``tau`` entry.
    """
    known = {"b0", "b1", "b2", "T1", "T2", "two_I", "pulses", "tau", "integrator", "out"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    defaults = CycleConfig()
    integrator = IntegratorConfig(**data.get("integrator", {}))
    spins = data.get("two_I", defaults.two_i)
    spins = tuple(spins) if isinstance(spins, (list, tuple)) else (spins,)
    pulses = data.get("pulses", ["sin"])
    if isinstance(pulses, (str, dict)):
        pulses = [pulses]
    pulses = tuple(PulseShape.parse(p) for p in pulses)
    base = CycleConfig(
        b0=float(data.get("b0", defaults.b0)),
        b1=float(data.get("b1", defaults.b1)),
        b2=float(data.get("b2", defaults.b2)),
        t_hot=float(data.get("T1", defaults.t_hot)),
        t_cold=float(data.get("T2", defaults.t_cold)),
        two_i=spins[0],
        shape=pulses[0],
        integrator=integrator,
    )
    tau = data.get("tau")
    grid = None
    if isinstance(tau, dict):
        grid = tau_grid(float(tau["start"]), float(tau["stop"]), int(tau["points"]), tau.get("spacing", "linear"))
    elif isinstance(tau, (list, tuple)):
        grid = tuple(float(t) for t in tau)
    elif tau is not None:
        grid = (float(tau),)
    out = data.get("out")
    return base, pulses, spins, grid, (Path(out) if out else None)


def load_config(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data

