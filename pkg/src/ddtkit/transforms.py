"""Delay Doppler transform (DDT), STFT baseline and inverse DDT.

All transforms are direct Riemann sums over the input signal's grid::

    DDT_s(t_m, law)   = step * sum_n s[n] g(t_m - tau_n) exp(-j Omega(tau_n) t_m)
    DDT_s(t_m, W)     = step * sum_n s[n] g(t_m - tau_n) exp(-j W tau_n t_m)
    STFT_s(t_m, W)    = step * sum_n s[n] g(tau_n - t_m) exp(-j W tau_n)

The DDT kernel is not shift-invariant in ``tau`` so there is no FFT shortcut;
maps are built column by column (one Omega at a time) in a fixed order.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._parallel import map_columns
from .signals import (
    ComplexSignal,
    DopplerLaw,
    LinearRate,
    UniformGrid,
    WindowSpec,
    eval_doppler,
    eval_window,
    require_offset,
)


class DegenerateWindowError(ValueError):
    """The window has no energy on the span needed for deconvolution."""


class MapKind(str, Enum):
    DDT = "DDT"
    STFT = "STFT"


@dataclass(frozen=True, eq=False)
class TFMap:
    """Complex values on a ``t_axis x omega_axis`` product grid.

    ``values[m, k]`` belongs to ``(t_axis.samples[m], omega_axis.samples[k])``.
    """

    t_axis: UniformGrid
    omega_axis: UniformGrid
    values: np.ndarray
    kind: MapKind

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        shape = (self.t_axis.count, self.omega_axis.count)
        if values.shape != shape:
            raise ValueError(f"map values have shape {values.shape}, expected {shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("map values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", MapKind(self.kind))

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def column(self, omega: float) -> ComplexSignal:
        """The slice at the axis point nearest ``omega``, as a signal over t."""
        k = int(self.omega_axis.nearest_index(omega))
        if not 0 <= k < self.omega_axis.count:
            raise ValueError(f"omega={omega} lies outside the map's axis")
        return ComplexSignal(self.t_axis, self.values[:, k])


@dataclass(frozen=True)
class DeconvOptions:
    lambda_rel: float = 1e-10
    pad_factor: int = 2

    def __post_init__(self):
        if not self.lambda_rel >= 0:
            raise ValueError("lambda_rel must be >= 0")
        if int(self.pad_factor) != self.pad_factor or self.pad_factor < 1:
            raise ValueError("pad_factor must be an integer >= 1")


def _check_signal(s: ComplexSignal):
    if s is None or len(s) == 0:
        raise ValueError("signal is empty")


def _windowed(s: ComplexSignal, g: WindowSpec, out: UniformGrid, *, reverse=False):
    """``s[n] * g(t_m - tau_n)`` (or ``g(tau_n - t_m)``) as an (N_t, N_tau) array."""
    lags = np.subtract.outer(out.samples, s.t)
    if reverse:
        lags = -lags
    return s.samples * eval_window(g, lags)


def convolve(s: ComplexSignal, g: WindowSpec, out: UniformGrid) -> ComplexSignal:
    """``step * sum_n s[n] g(t_m - tau_n)``: the DDT at zero Doppler."""
    _check_signal(s)
    values = s.grid.step * _windowed(s, g, out).sum(axis=1)
    return ComplexSignal(out, values)


def ddt_general(
    s: ComplexSignal, g: WindowSpec, law: DopplerLaw, out: UniformGrid
) -> ComplexSignal:
    """DDT with an arbitrary Doppler law ``Omega(tau)``."""
    _check_signal(s)
    weighted = _windowed(s, g, out)
    phase = np.multiply.outer(out.samples, eval_doppler(law, s.t))
    values = s.grid.step * (weighted * np.exp(-1j * phase)).sum(axis=1)
    return ComplexSignal(out, values)


def ddt_constant(
    s: ComplexSignal, g: WindowSpec, omega0: float, out: UniformGrid
) -> ComplexSignal:
    """Constant-Doppler DDT, evaluated as a phase ramp times a convolution."""
    conv = convolve(s, g, out)
    return ComplexSignal(out, np.exp(-1j * omega0 * out.samples) * conv.samples)


def _check_axes(omega_axis: UniformGrid, t_axis: UniformGrid):
    if omega_axis is None or t_axis is None:
        raise ValueError("both axes are required")
    if omega_axis.count < 1 or t_axis.count < 1:
        raise ValueError("axes must be nonempty")


def ddt_map(
    s: ComplexSignal, g: WindowSpec, omega_axis: UniformGrid, t_axis: UniformGrid
) -> TFMap:
    """Linear-rate DDT over a grid of Doppler rates.

    Column ``k`` equals ``ddt_general(s, g, LinearRate(omega_k), t_axis)``
    bit for bit.
    """
    _check_signal(s)
    _check_axes(omega_axis, t_axis)
    weighted = _windowed(s, g, t_axis)
    t = t_axis.samples
    tau = s.t
    rates = omega_axis.samples
    step = s.grid.step

    def column(k):
        phase = np.multiply.outer(t, eval_doppler(LinearRate(rates[k]), tau))
        return step * (weighted * np.exp(-1j * phase)).sum(axis=1)

    values = map_columns(column, t_axis.count, omega_axis.count)
    return TFMap(t_axis, omega_axis, values, MapKind.DDT)


def stft_map(
    s: ComplexSignal, g: WindowSpec, omega_axis: UniformGrid, t_axis: UniformGrid
) -> TFMap:
    """Short-time Fourier transform with window ``g(tau - t)``."""
    _check_signal(s)
    _check_axes(omega_axis, t_axis)
    weighted = _windowed(s, g, t_axis, reverse=True)
    tau = s.t
    freqs = omega_axis.samples
    step = s.grid.step

    def column(k):
        return step * (weighted * np.exp(-1j * (freqs[k] * tau))).sum(axis=1)

    values = map_columns(column, t_axis.count, omega_axis.count)
    return TFMap(t_axis, omega_axis, values, MapKind.STFT)


def inverse_ddt(
    d0: ComplexSignal, g: WindowSpec, opts: DeconvOptions = DeconvOptions()
) -> ComplexSignal:
    """Recover ``s`` from its zero-Doppler DDT slice by Tikhonov deconvolution.

    ``d0`` is treated as ``step * (s * g)`` sampled on its own grid, and ``s``
    is returned on that same grid. The deconvolution runs on a circular grid
    ``pad_factor`` times longer than ``d0``, with damping
    ``lambda = lambda_rel * max|G|^2``.
    """
    _check_signal(d0)
    n = d0.grid.count
    size = opts.pad_factor * n
    step = d0.grid.step
    lags = (np.arange(size) + size // 2) % size - size // 2
    kernel = step * np.asarray(eval_window(g, lags * step), dtype=np.complex128)
    if not np.any(kernel):
        raise DegenerateWindowError("window is zero everywhere on the deconvolution span")

    G = np.fft.fft(kernel)
    D = np.fft.fft(d0.samples, size)
    power = (G * G.conj()).real
    lam = opts.lambda_rel * power.max()
    denom = power + lam
    gain = np.zeros_like(G)
    nz = denom > 0
    gain[nz] = G.conj()[nz] / denom[nz]
    estimate = np.fft.ifft(D * gain)[:n]
    return ComplexSignal(d0.grid, estimate)


def verify_shift_identity(
    s: ComplexSignal, k0: int, omega: float, g: WindowSpec, out: UniformGrid
) -> float:
    """Max abs residual of the DDT time-shift identity.

    With ``t0 = k0 * step``::

        DDT_{s(. - t0)}(t, W) == DDT_{s(.) exp(-j W t0 .)}(t - t0, W) * exp(-j W t0 t)
    """
    _check_signal(s)
    require_offset(out, s.grid, "output grid")
    if int(k0) != k0:
        raise ValueError("shift must be an integer number of samples")
    k0 = int(k0)
    t0 = k0 * s.grid.step
    law = LinearRate(omega)

    lhs = ddt_general(s.shifted(k0), g, law, out).samples
    rhs = ddt_general(s.modulated(omega * t0), g, law, out.shifted(-k0)).samples
    rhs = rhs * np.exp(-1j * (omega * t0) * out.samples)
    return float(np.max(np.abs(lhs - rhs)))


def map_distance(a: TFMap, b: TFMap) -> float:
    """Normalized Frobenius distance between the magnitudes of two maps."""
    if a.t_axis != b.t_axis or a.omega_axis != b.omega_axis:
        raise ValueError("maps are defined on different axes")
    ma, mb = a.magnitude, b.magnitude
    scale = max(np.linalg.norm(ma), np.linalg.norm(mb))
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(ma - mb) / scale)

