"""Finite-time quantum Otto cycle with a single driven spin-I working fluid."""

from .cycle import (
    CycleBounds,
    CycleConfig,
    CycleResult,
    adiabatic_limit_cycle,
    carnot_efficiency,
    cycle_bounds,
    max_efficiency,
    positive_work_condition,
    run_cycle,
    sudden_limit_cycle,
)
from .propagator import (
    AdiabaticTarget,
    ConvergenceError,
    IntegratorConfig,
    adiabatic_target,
    evolve,
    evolve_stroke,
    friction_work,
    friction_work_energy,
    sudden_target,
)
from .pulses import FieldProtocol, Hamiltonian, PulseShape, field_value, hamiltonian_at
from .spin_algebra import SpinOperators, commutator, spin_operators
from .states import (
    coherence,
    energy_entropy,
    gibbs_state,
    internal_energy,
    relative_entropy,
    von_neumann_entropy,
)
from .sweep import SweepRecord, SweepSpec, find_critical_time, frictionless_scan, run_sweep

__version__ = "0.1.0"
