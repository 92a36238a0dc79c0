"""Delay-Doppler channel simulation and pulse-train transmission.

The continuous channel is ``h(tau, t) = g(tau) exp(-j Omega(tau) t)``; a
linear-rate Doppler law turns its output into a chirp-modulated DDT of the
input::

    y(t) = DDT_s(t, -W) exp(-j W t^2) + w(t)

so that dechirping with ``exp(+j W t^2)`` leaves a DDT plus rotated noise.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .signals import (
    GRID_RTOL,
    ComplexSignal,
    Constant,
    DopplerLaw,
    Gaussian,
    LinearRate,
    Rectangular,
    TabulatedLaw,
    TabulatedWindow,
    UniformGrid,
    WindowSpec,
    eval_doppler,
    eval_window,
    require_offset,
)
from .transforms import ddt_general


@dataclass(frozen=True)
class Tap:
    delay: float
    gain: complex = 1.0
    doppler: float = 0.0


@dataclass(frozen=True)
class TapChannel:
    """Discrete multipath: ``y(t) = sum_i gain_i s(t - delay_i) exp(-j doppler_i t)``.

    Taps are summed without a quadrature weight.
    """

    taps: tuple

    def __post_init__(self):
        taps = tuple(t if isinstance(t, Tap) else Tap(*t) for t in self.taps)
        if not taps:
            raise ValueError("a tap channel needs at least one tap")
        object.__setattr__(self, "taps", taps)


@dataclass(frozen=True)
class ContinuousChannel:
    """``y(t) = int g(tau) s(t - tau) exp(-j Omega(tau) t) dtau`` as a Riemann sum."""

    amplitude: WindowSpec
    law: DopplerLaw
    tau_grid: UniformGrid


ChannelSpec = Union[TapChannel, ContinuousChannel]


@dataclass(frozen=True)
class NoiseSpec:
    """Complex AWGN with total standard deviation ``sigma`` (``sigma/sqrt2`` per part)."""

    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("noise sigma must be >= 0")


@dataclass
class ChannelDiagnostics:
    # (tap index, requested delay, delay actually applied)
    rounded_taps: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.rounded_taps


def noise_samples(noise: NoiseSpec, count: int) -> np.ndarray:
    """Seeded complex Gaussian noise; sample ``m`` depends only on ``(seed, m)``.

    Uses the counter-based Philox generator: raw words ``2m`` and ``2m + 1``
    feed a Box-Muller transform for sample ``m``.
    """
    if noise.sigma == 0:
        return np.zeros(count, dtype=np.complex128)
    raw = np.random.Philox(key=noise.seed & (2**64 - 1)).random_raw(2 * count)
    u1 = ((raw[0::2] >> np.uint64(11)).astype(float) + 1.0) * 2.0**-53  # (0, 1]
    u2 = (raw[1::2] >> np.uint64(11)).astype(float) * 2.0**-53
    radius = np.sqrt(-2.0 * np.log(u1))
    z = radius * np.exp(2j * np.pi * u2)
    return (noise.sigma / np.sqrt(2.0)) * z


def _lookup_offset(s_grid: UniformGrid, tau_grid: UniformGrid, out: UniformGrid) -> int:
    """Index into ``s`` of ``t_0 - tau_0``; requires all three grids on one lattice."""
    if not (np.isclose(tau_grid.step, s_grid.step, rtol=GRID_RTOL, atol=0.0)
            and np.isclose(out.step, s_grid.step, rtol=GRID_RTOL, atol=0.0)):
        raise ValueError("delay and output grids must share the signal's step")
    pos = (out.start - tau_grid.start - s_grid.start) / s_grid.step
    k = round(pos)
    if abs(pos - k) > GRID_RTOL * max(1.0, abs(pos)):
        raise ValueError("output minus delay grid does not land on the signal grid")
    return int(k)


def simulate_channel(
    s: ComplexSignal, ch: ChannelSpec, noise: NoiseSpec, out: UniformGrid
) -> tuple[ComplexSignal, ChannelDiagnostics]:
    """Like :func:`apply_channel` but also returns tap-rounding diagnostics."""
    diag = ChannelDiagnostics()
    t = out.samples
    step = s.grid.step

    if isinstance(ch, TapChannel):
        y = np.zeros(out.count, dtype=np.complex128)
        for i, tap in enumerate(ch.taps):
            pos = (t - tap.delay - s.grid.start) / step
            idx = np.rint(pos).astype(np.int64)
            if np.max(np.abs(pos - idx)) > GRID_RTOL * max(1.0, np.max(np.abs(pos))):
                applied = tap.delay + float(np.mean(pos - idx)) * step
                diag.rounded_taps.append((i, tap.delay, applied))
            y = y + tap.gain * s.at_indices(idx) * np.exp(-1j * tap.doppler * t)
    elif isinstance(ch, ContinuousChannel):
        base = _lookup_offset(s.grid, ch.tau_grid, out)
        tau = ch.tau_grid.samples
        idx = np.subtract.outer(base + np.arange(out.count), np.arange(ch.tau_grid.count))
        terms = eval_window(ch.amplitude, tau) * s.at_indices(idx)
        phase = np.multiply.outer(t, eval_doppler(ch.law, tau))
        y = ch.tau_grid.step * (terms * np.exp(-1j * phase)).sum(axis=1)
    else:
        raise TypeError(f"unknown channel {ch!r}")

    if noise.sigma > 0:
        y = y + noise_samples(noise, out.count)
    return ComplexSignal(out, y), diag


def apply_channel(
    s: ComplexSignal, ch: ChannelSpec, noise: NoiseSpec, out: UniformGrid
) -> ComplexSignal:
    """Pass ``s`` through a delay-Doppler channel and add noise, sampled on ``out``.

    Off-grid tap delays are rounded to the nearest sample with a warning; use
    :func:`simulate_channel` to get the details.
    """
    y, diag = simulate_channel(s, ch, noise, out)
    if not diag.exact:
        warnings.warn(
            f"{len(diag.rounded_taps)} tap delay(s) rounded to the signal grid", stacklevel=2
        )
    return y


def dechirp(y: ComplexSignal, omega: float) -> ComplexSignal:
    """Multiply by ``exp(+j omega t^2)``."""
    t = y.t
    return ComplexSignal(y.grid, y.samples * np.exp(1j * (omega * (t * t))))


def ddt_receive_model(
    s: ComplexSignal, g: WindowSpec, omega: float, out: UniformGrid
) -> ComplexSignal:
    """Noise-free channel output predicted from the DDT at rate ``-omega``."""
    require_offset(out, s.grid, "output grid")
    d = ddt_general(s, g, LinearRate(-omega), out)
    t = out.samples
    return ComplexSignal(out, d.samples * np.exp(-1j * (omega * (t * t))))


def covering_delay_grid(s_grid: UniformGrid, out: UniformGrid) -> UniformGrid:
    """Delays ``t_m - tau_n`` reachable between ``out`` and ``s_grid``."""
    require_offset(out, s_grid, "output grid")
    return UniformGrid(out.start - s_grid.stop, s_grid.step, out.count + s_grid.count - 1)


def verify_channel_identity(
    s: ComplexSignal, g: WindowSpec, omega: float, out: UniformGrid
) -> float:
    """Max abs gap between the simulated channel and its DDT description.

    The channel's delay grid covers every lag between ``s`` and ``out`` so both
    sides sum the same terms.
    """
    ch = ContinuousChannel(g, LinearRate(omega), covering_delay_grid(s.grid, out))
    y = apply_channel(s, ch, NoiseSpec(0.0), out).samples
    model = ddt_receive_model(s, g, omega, out).samples
    return float(np.max(np.abs(y - model)))


# --------------------------------------------------------------------------- pulse trains


@dataclass(frozen=True, eq=False)
class PulseTrainSpec:
    """``s(t) = sum_n symbols[n] p(t - n T)`` with ``T`` a whole number of pulse samples."""

    symbols: np.ndarray
    pulse: ComplexSignal
    T: float

    def __post_init__(self):
        symbols = np.atleast_1d(np.asarray(self.symbols, dtype=np.complex128))
        if symbols.ndim != 1 or symbols.size == 0:
            raise ValueError("need at least one symbol")
        if not self.T > 0:
            raise ValueError("symbol duration T must be positive")
        ratio = self.T / self.pulse.grid.step
        if abs(ratio - round(ratio)) > GRID_RTOL * max(1.0, ratio):
            raise ValueError("T must be an integer multiple of the pulse step")
        object.__setattr__(self, "symbols", symbols)

    @property
    def samples_per_symbol(self) -> int:
        return int(round(self.T / self.pulse.grid.step))

    def covering_grid(self) -> UniformGrid:
        """Smallest grid on the pulse lattice holding the whole train."""
        g = self.pulse.grid
        return UniformGrid(g.start, g.step, g.count + (len(self.symbols) - 1) * self.samples_per_symbol)


def pulse_train(spec: PulseTrainSpec, out: UniformGrid) -> ComplexSignal:
    off = require_offset(out, spec.pulse.grid, "output grid")
    k = spec.samples_per_symbol
    base = off + np.arange(out.count)
    values = np.zeros(out.count, dtype=np.complex128)
    for n, sym in enumerate(spec.symbols):
        if sym != 0:
            values = values + sym * spec.pulse.at_indices(base - n * k)
    return ComplexSignal(out, values)


def ddt_pulse_train_sum(
    spec: PulseTrainSpec, g: WindowSpec, omega: float, out: UniformGrid
) -> ComplexSignal:
    """DDT of a pulse train assembled from per-symbol DDTs of modulated pulses.

    Term ``n`` is ``DDT_{p_n}(t - nT, W) exp(-j n T W t)`` with
    ``p_n(t) = p(t) exp(-j n T W t)``.
    """
    require_offset(out, spec.pulse.grid, "output grid")
    k = spec.samples_per_symbol
    law = LinearRate(omega)
    t = out.samples
    values = np.zeros(out.count, dtype=np.complex128)
    for n, sym in enumerate(spec.symbols):
        if sym == 0:
            continue
        shift = n * spec.T
        p_n = spec.pulse.modulated(shift * omega)
        d = ddt_general(p_n, g, law, out.shifted(-n * k)).samples
        values = values + sym * d * np.exp(-1j * (shift * omega) * t)
    return ComplexSignal(out, values)


def received_pulse_train_model(
    spec: PulseTrainSpec, g: WindowSpec, omega: float, noise: NoiseSpec, out: UniformGrid
) -> ComplexSignal:
    """Dechirped receiver output for a pulse train sent over a linear-rate channel.

    Equals ``ddt_pulse_train_sum`` at rate ``-omega`` (per-term phase
    ``exp(+j n T W t)``, pulses modulated by ``exp(+j n T W t)``) plus the
    channel noise rotated by ``exp(+j W t^2)``.
    """
    clean = ddt_pulse_train_sum(spec, g, -omega, out).samples
    t = out.samples
    w = noise_samples(noise, out.count) * np.exp(1j * (omega * (t * t)))
    return ComplexSignal(out, clean + w)


# --------------------------------------------------------------------------- JSON


def _grid_from_dict(d) -> UniformGrid:
    return UniformGrid(float(d["start"]), float(d["step"]), int(d["count"]))


def _grid_to_dict(g: UniformGrid) -> dict:
    return {"start": g.start, "step": g.step, "count": g.count}


def window_from_dict(d) -> WindowSpec:
    kind = d.get("type", "gaussian").lower()
    if kind == "gaussian":
        return Gaussian(float(d.get("a", 1.0)))
    if kind in ("rect", "rectangular"):
        return Rectangular(float(d["halfwidth"]))
    if kind == "tabulated":
        re = np.asarray(d["samples_re"], dtype=float)
        im = np.asarray(d.get("samples_im", np.zeros_like(re)), dtype=float)
        return TabulatedWindow(_grid_from_dict(d["grid"]), re + 1j * im)
    raise ValueError(f"unknown window type {kind!r}")


def window_to_dict(w: WindowSpec) -> dict:
    if isinstance(w, Gaussian):
        return {"type": "gaussian", "a": w.a}
    if isinstance(w, Rectangular):
        return {"type": "rect", "halfwidth": w.halfwidth}
    samples = np.asarray(w.samples, dtype=np.complex128)
    return {
        "type": "tabulated",
        "grid": _grid_to_dict(w.grid),
        "samples_re": samples.real.tolist(),
        "samples_im": samples.imag.tolist(),
    }


def law_from_dict(d) -> DopplerLaw:
    kind = d.get("type", "linear").lower()
    if kind == "constant":
        return Constant(float(d["omega0"]))
    if kind in ("linear", "linear_rate"):
        return LinearRate(float(d["rate"]))
    if kind == "tabulated":
        return TabulatedLaw(_grid_from_dict(d["grid"]), d["omegas"])
    raise ValueError(f"unknown Doppler law type {kind!r}")


def law_to_dict(law: DopplerLaw) -> dict:
    if isinstance(law, Constant):
        return {"type": "constant", "omega0": law.omega0}
    if isinstance(law, LinearRate):
        return {"type": "linear", "rate": law.rate}
    return {"type": "tabulated", "grid": _grid_to_dict(law.grid), "omegas": law.omegas.tolist()}


def channel_from_dict(d) -> ChannelSpec:
    if "taps" in d:
        taps = [
            Tap(
                float(tap["delay"]),
                complex(float(tap.get("gain_re", 1.0)), float(tap.get("gain_im", 0.0))),
                float(tap.get("doppler", 0.0)),
            )
            for tap in d["taps"]
        ]
        return TapChannel(tuple(taps))
    if "continuous" in d:
        c = d["continuous"]
        return ContinuousChannel(
            window_from_dict(c["window"]), law_from_dict(c["law"]), _grid_from_dict(c["tau_grid"])
        )
    raise ValueError("channel description needs a 'taps' or 'continuous' key")


def channel_to_dict(ch: ChannelSpec) -> dict:
    if isinstance(ch, TapChannel):
        return {
            "taps": [
                {
                    "delay": tap.delay,
                    "gain_re": complex(tap.gain).real,
                    "gain_im": complex(tap.gain).imag,
                    "doppler": tap.doppler,
                }
                for tap in ch.taps
            ]
        }
    return {
        "continuous": {
            "window": window_to_dict(ch.amplitude),
            "law": law_to_dict(ch.law),
            "tau_grid": _grid_to_dict(ch.tau_grid),
        }
    }


def load_channel(path) -> ChannelSpec:
    with Path(path).open() as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from None
    try:
        return channel_from_dict(d)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed channel description ({exc})") from None
