"""Transverse control-field profiles and the instantaneous spin Hamiltonian.

H(t) = b0 * I_z + B(t) * I_x, with B(t) ramped from ``b_start`` to ``b_end``
over one stroke of length total_tau / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spin_algebra import SpinOperators

SIN = "sin"
POW = "pow"

# integer codes understood by the propagator kernels
SHAPE_CODES = {SIN: 0, POW: 1}


@dataclass(frozen=True)
class PulseShape:
    kind: str = SIN
    exponent: Optional[float] = None

    def __post_init__(self):
        if self.kind == SIN:
            if self.exponent is not None:
                raise ValueError("sinusoidal pulse takes no exponent")
        elif self.kind == POW:
            if self.exponent is None or not np.isfinite(self.exponent) or self.exponent <= 0:
                raise ValueError(f"power pulse needs an exponent n > 0, got {self.exponent!r}")
            object.__setattr__(self, "exponent", float(self.exponent))
        else:
            raise ValueError(f"unknown pulse kind {self.kind!r}; expected 'sin' or 'pow'")

    @classmethod
    def sinusoidal(cls) -> "PulseShape":
        return cls(SIN)

    @classmethod
    def power(cls, n: float) -> "PulseShape":
        return cls(POW, n)

    @classmethod
    def parse(cls, spec) -> "PulseShape":
        """Accept ``"sin"``, ``"pow"`` (n = 1), ``"pow:0.5"``, ``{"pow": 2}``
        or an existing PulseShape."""
        if isinstance(spec, PulseShape):
            return spec
        if isinstance(spec, dict):
            if len(spec) != 1:
                raise ValueError(f"pulse mapping must have exactly one key, got {spec!r}")
            (kind, n), = spec.items()
            kind = str(kind).lower()
            if kind == SIN:
                return cls.sinusoidal()
            return cls(kind, None if n is None else float(n))
        if isinstance(spec, str):
            kind, _, n = spec.strip().lower().partition(":")
            if kind == SIN and not n:
                return cls.sinusoidal()
            if kind == POW:
                return cls.power(float(n) if n else 1.0)
        raise ValueError(f"cannot parse pulse shape {spec!r}")

    @property
    def code(self) -> int:
        return SHAPE_CODES[self.kind]

    @property
    def label(self) -> str:
        if self.kind == SIN:
            return SIN
        return f"{POW}:{self.exponent:g}"

    def sort_key(self):
        return (self.code, self.exponent or 0.0)

    def to_json(self):
        return SIN if self.kind == SIN else {POW: self.exponent}


def _shape_profile(shape: PulseShape, s):
    """Normalised ramp r(s) for s = t / (total_tau / 2) in [0, 1]; r(0)=0, r(1)=1."""
    if shape.kind == SIN:
        return np.sin(0.5 * np.pi * s)
    return np.power(s, shape.exponent)


@dataclass(frozen=True)
class FieldProtocol:
    """Drive for one adiabatic stroke; the stroke runs for total_tau / 2."""

    b0: float
    b_start: float
    b_end: float
    total_tau: float
    shape: PulseShape = PulseShape()

    def __post_init__(self):
        if not (np.isfinite(self.total_tau) and self.total_tau > 0):
            raise ValueError(f"total_tau must be positive, got {self.total_tau!r}")

    @property
    def duration(self) -> float:
        return 0.5 * self.total_tau

    def reversed(self) -> "FieldProtocol":
        return FieldProtocol(self.b0, self.b_end, self.b_start, self.total_tau, self.shape)


def field_value(proto: FieldProtocol, t):
    """B(t) on [0, total_tau/2]; accepts a scalar or an array of times.

    The ramp is written in terms of s = 2t/tau, so sin(pi t / tau) = sin(pi s / 2)
    and (2t/tau)^n = s^n; both hit b_end exactly at s = 1.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > proto.duration):
        raise ValueError(f"t must lie in [0, {proto.duration}], got {t!r}")
    s = t_arr / proto.duration
    value = proto.b_start + (proto.b_end - proto.b_start) * _shape_profile(proto.shape, s)
    if np.ndim(t) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class Hamiltonian:
    matrix: np.ndarray
    gap: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def hamiltonian_at(b0: float, b: float, ops: SpinOperators) -> Hamiltonian:
    """b0 * I_z + b * I_x; the spectrum is m * sqrt(b0^2 + b^2), m = -I..I."""
    matrix = b0 * ops.iz + b * ops.ix
    matrix.setflags(write=False)
    return Hamiltonian(matrix, float(np.hypot(b0, b)))
