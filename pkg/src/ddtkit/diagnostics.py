"""Identity checks and structural figure checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    PulseTrainSpec,
    ddt_pulse_train_sum,
    ddt_receive_model,
    pulse_train,
    verify_channel_identity,
)
from .signals import (
    ComplexSignal,
    GaussianPulse,
    LinearRate,
    UniformGrid,
    WindowSpec,
    synthesize,
)
from .transforms import TFMap, ddt_general, verify_shift_identity

IDENTITY_RTOL = 1e-9

QPSK = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    error: float
    peak: float
    rtol: float = IDENTITY_RTOL

    @property
    def relative(self) -> float:
        return self.error / self.peak if self.peak > 0 else self.error

    @property
    def passed(self) -> bool:
        return self.error <= self.rtol * self.peak

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: max|err|={self.error:.3e} peak={self.peak:.3e} "
            f"rel={self.relative:.3e} (tol {self.rtol:g})"
        )


def shift_identity(s: ComplexSignal, k0: int, omega: float, g: WindowSpec, out: UniformGrid):
    err = verify_shift_identity(s, k0, omega, g, out)
    lhs = ddt_general(s.shifted(k0), g, LinearRate(omega), out).samples
    return IdentityResult(f"shift(k0={k0}, omega={omega:g})", err, float(np.abs(lhs).max()))


def channel_identity(s: ComplexSignal, g: WindowSpec, omega: float, out: UniformGrid):
    err = verify_channel_identity(s, g, omega, out)
    peak = float(np.abs(ddt_receive_model(s, g, omega, out).samples).max())
    return IdentityResult(f"channel(omega={omega:g})", err, peak)


def default_pulse_train(step: float, symbols=QPSK, symbol_samples: int = 64) -> PulseTrainSpec:
    """Gaussian pulse (``exp(-t^2)``, 2 symbols wide) carrying ``symbols`` every ``symbol_samples``."""
    half = symbol_samples
    pulse = synthesize(GaussianPulse(1.0), UniformGrid(-half * step, step, 2 * half + 1))
    return PulseTrainSpec(np.asarray(symbols), pulse, symbol_samples * step)


def pulse_train_identity(spec: PulseTrainSpec, g: WindowSpec, omega: float, out: UniformGrid | None = None):
    """Decomposed versus direct DDT of a pulse train."""
    if out is None:
        out = spec.covering_grid()
    train = pulse_train(spec, spec.covering_grid())
    direct = ddt_general(train, g, LinearRate(omega), out).samples
    decomposed = ddt_pulse_train_sum(spec, g, omega, out).samples
    err = float(np.abs(direct - decomposed).max())
    return IdentityResult(f"pulse-train(omega={omega:g}, symbols={len(spec.symbols)})", err, float(np.abs(direct).max()))


def identity_suite(s: ComplexSignal, g: WindowSpec, omega: float, k0: int = 32) -> list[IdentityResult]:
    """Shift, channel and pulse-train identities on ``s``'s own grid."""
    out = s.grid
    return [
        shift_identity(s, k0, omega, g, out),
        channel_identity(s, g, omega, out),
        pulse_train_identity(default_pulse_train(s.grid.step), g, omega),
    ]


# --------------------------------------------------------------------------- ridges


def ridge_bins(tf: TFMap) -> np.ndarray:
    """Per-row index of the Omega bin with the largest magnitude."""
    return np.argmax(tf.magnitude, axis=1)


def ridge_deviation(tf: TFMap, inst_freq, t_lo: float, t_hi: float) -> int:
    """Largest bin distance between the magnitude ridge and ``inst_freq(t)`` over ``[t_lo, t_hi]``."""
    t = tf.t_axis.samples
    rows = (t >= t_lo) & (t <= t_hi)
    if not np.any(rows):
        raise ValueError("no map rows inside the requested t range")
    expected = tf.omega_axis.nearest_index(inst_freq(t[rows]))
    return int(np.max(np.abs(ridge_bins(tf)[rows] - expected)))
