"""Sampling grids, signal synthesis, windows and Doppler laws.

Every integral in the package is a Riemann sum over a signal's grid with
weight ``grid.step``; samples outside a grid are treated as exactly zero.
Windows and Doppler laws, by contrast, can be evaluated at any real argument.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

# relative tolerance used for commensurability and CSV equispacing checks
GRID_RTOL = 1e-9


class SignalFormatError(ValueError):
    """A signal or window file could not be parsed."""


@dataclass(frozen=True)
class UniformGrid:
    """Uniform lattice ``start + m * step`` for ``0 <= m < count``.

    Used both for time axes (t, tau) and for Doppler/frequency axes.
    """

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not np.isfinite(self.start) or not np.isfinite(self.step):
            raise ValueError("grid start and step must be finite")
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"grid count must be a positive integer, got {self.count}")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "count", int(self.count))

    @property
    def samples(self) -> np.ndarray:
        return self.start + np.arange(self.count) * self.step

    @property
    def stop(self) -> float:
        """Last sample (inclusive)."""
        return self.start + (self.count - 1) * self.step

    def nearest_index(self, t):
        """Index of the grid point nearest to ``t`` (may fall outside the grid)."""
        return np.rint((np.asarray(t, dtype=float) - self.start) / self.step).astype(np.int64)

    def offset_from(self, other: UniformGrid) -> int | None:
        """Integer ``k`` with ``self.start == other.start + k * step``, else None."""
        if not np.isclose(self.step, other.step, rtol=GRID_RTOL, atol=0.0):
            return None
        ratio = (self.start - other.start) / other.step
        k = round(ratio)
        if abs(ratio - k) > GRID_RTOL * max(1.0, abs(ratio)):
            return None
        return int(k)

    def is_commensurate(self, other: UniformGrid) -> bool:
        return self.offset_from(other) is not None

    def shifted(self, k: int) -> UniformGrid:
        """The same lattice moved by ``k`` steps."""
        return UniformGrid(self.start + k * self.step, self.step, self.count)

    def __len__(self):
        return self.count


TimeGrid = UniformGrid


def make_grid(start: float, step: float, count: int) -> UniformGrid:
    return UniformGrid(start, step, count)


def require_offset(grid: UniformGrid, ref: UniformGrid, what: str = "grid") -> int:
    k = grid.offset_from(ref)
    if k is None:
        raise ValueError(f"{what} is not commensurate with the signal grid")
    return k


class ComplexSignal:
    """Complex samples living on a :class:`UniformGrid`."""

    __slots__ = ("grid", "samples")

    def __init__(self, grid: UniformGrid, samples):
        samples = np.array(samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.shape[0] != grid.count:
            raise ValueError(
                f"expected {grid.count} samples, got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal samples must be finite")
        samples.setflags(write=False)
        self.grid = grid
        self.samples = samples

    @property
    def t(self) -> np.ndarray:
        return self.grid.samples

    def __len__(self):
        return self.grid.count

    def __repr__(self):
        return f"ComplexSignal(grid={self.grid!r}, peak={np.abs(self.samples).max():.4g})"

    def shifted(self, k: int) -> ComplexSignal:
        """``s(t - k * step)``: same samples on a grid moved by ``k`` steps."""
        return ComplexSignal(self.grid.shifted(k), self.samples)

    def modulated(self, phase_rate: float) -> ComplexSignal:
        """``s(t) * exp(-j * phase_rate * t)``."""
        return ComplexSignal(self.grid, self.samples * np.exp(-1j * phase_rate * self.t))

    def at_indices(self, idx) -> np.ndarray:
        """Samples at integer grid indices, zero outside the grid."""
        idx = np.asarray(idx)
        inside = (idx >= 0) & (idx < self.grid.count)
        out = np.zeros(idx.shape, dtype=np.complex128)
        out[inside] = self.samples[idx[inside]]
        return out


# --------------------------------------------------------------------------- windows


@dataclass(frozen=True)
class Gaussian:
    """``g(t) = exp(-a t^2)``."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("Gaussian window needs a > 0")


@dataclass(frozen=True)
class Rectangular:
    """Unit box on ``[-halfwidth, halfwidth]``."""

    halfwidth: float

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ValueError("Rectangular window needs halfwidth > 0")


@dataclass(frozen=True, eq=False)
class TabulatedWindow:
    """Samples on a grid, linearly interpolated, zero outside the grid."""

    grid: UniformGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.shape != (self.grid.count,):
            raise ValueError("tabulated window length does not match its grid")
        object.__setattr__(self, "samples", samples)


WindowSpec = Union[Gaussian, Rectangular, TabulatedWindow]


def _interp(grid: UniformGrid, values: np.ndarray, t: np.ndarray) -> np.ndarray:
    xp = grid.samples
    if grid.count == 1:
        return np.where(t == xp[0], values[0], 0).astype(values.dtype)
    if np.iscomplexobj(values):
        return np.interp(t, xp, values.real, left=0.0, right=0.0) + 1j * np.interp(
            t, xp, values.imag, left=0.0, right=0.0
        )
    return np.interp(t, xp, values, left=0.0, right=0.0)


def eval_window(w: WindowSpec, t):
    """Evaluate a window at arbitrary real ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if isinstance(w, Gaussian):
        return np.exp(-w.a * t * t)
    if isinstance(w, Rectangular):
        return (np.abs(t) <= w.halfwidth).astype(float)
    if isinstance(w, TabulatedWindow):
        return _interp(w.grid, w.samples, t)
    raise TypeError(f"unknown window {w!r}")


# --------------------------------------------------------------------------- Doppler laws


@dataclass(frozen=True)
class Constant:
    """Same Doppler shift ``omega0`` (rad/s) at every delay."""

    omega0: float


@dataclass(frozen=True)
class LinearRate:
    """``Omega(tau) = rate * tau``, rate in rad/s^2."""

    rate: float


@dataclass(frozen=True, eq=False)
class TabulatedLaw:
    grid: UniformGrid
    omegas: np.ndarray

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.shape != (self.grid.count,):
            raise ValueError("tabulated law length does not match its grid")
        object.__setattr__(self, "omegas", omegas)


DopplerLaw = Union[Constant, LinearRate, TabulatedLaw]


def eval_doppler(law: DopplerLaw, tau):
    tau = np.asarray(tau, dtype=float)
    if isinstance(law, Constant):
        return np.full(tau.shape, float(law.omega0))
    if isinstance(law, LinearRate):
        return law.rate * tau
    if isinstance(law, TabulatedLaw):
        return _interp(law.grid, law.omegas, tau)
    raise TypeError(f"unknown Doppler law {law!r}")


# --------------------------------------------------------------------------- signal expressions


@dataclass(frozen=True)
class LinearChirp:
    """``exp(j alpha t^2)``."""

    alpha: float


@dataclass(frozen=True)
class CubicChirp:
    """``exp(j beta t^3)``."""

    beta: float


@dataclass(frozen=True)
class Tone:
    omega: float


@dataclass(frozen=True)
class GaussianPulse:
    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("GaussianPulse needs a > 0")


@dataclass(frozen=True)
class UnitImpulse:
    """Discrete delta: one sample of height ``1/step`` nearest to ``at``."""

    at: float = 0.0


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __init__(self, *parts):
        if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
            parts = parts[0]
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class FromFile:
    path: str


SignalExpr = Union[LinearChirp, CubicChirp, Tone, GaussianPulse, UnitImpulse, Sum, FromFile]

# the three test signals used for the figures
S1 = LinearChirp(1.0)
S2 = CubicChirp(0.1)
S3 = Sum(S1, S2)


def synthesize(expr: SignalExpr, grid: UniformGrid) -> ComplexSignal:
    """Sample ``expr`` on ``grid``.

    ``FromFile`` ignores ``grid`` and returns the file's own grid.
    """
    t = grid.samples
    match expr:
        case LinearChirp(alpha):
            values = np.exp(1j * (alpha * t * t))
        case CubicChirp(beta):
            values = np.exp(1j * (beta * t * t * t))
        case Tone(omega):
            values = np.exp(1j * (omega * t))
        case GaussianPulse(a):
            values = np.exp(-a * t * t).astype(np.complex128)
        case UnitImpulse(at):
            values = np.zeros(grid.count, dtype=np.complex128)
            k = int(grid.nearest_index(at))
            if not 0 <= k < grid.count:
                raise ValueError(f"impulse at {at} lies outside the grid")
            values[k] = 1.0 / grid.step
        case Sum(parts):
            if not parts:
                return ComplexSignal(grid, np.zeros(grid.count, dtype=np.complex128))
            values = synthesize(parts[0], grid).samples
            for part in parts[1:]:
                values = values + synthesize(part, grid).samples
        case FromFile(path):
            return read_signal_csv(path)
        case _:
            raise TypeError(f"unknown signal expression {expr!r}")
    return ComplexSignal(grid, values)


# --------------------------------------------------------------------------- signal CSV


def read_signal_csv(path) -> ComplexSignal:
    """Read a ``t,re,im`` CSV with strictly increasing, equispaced ``t``."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
        raise SignalFormatError(f"{path}: expected header 't,re,im'")
    try:
        data = np.array([[float(c) for c in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise SignalFormatError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 3:
        raise SignalFormatError(f"{path}: need at least two rows of three columns")
    t = data[:, 0]
    diffs = np.diff(t)
    step = (t[-1] - t[0]) / (len(t) - 1)
    if not step > 0 or np.any(diffs <= 0):
        raise SignalFormatError(f"{path}: t must be strictly increasing")
    if np.max(np.abs(diffs - step)) > GRID_RTOL * step:
        raise SignalFormatError(f"{path}: t is not equispaced")
    grid = UniformGrid(t[0], step, len(t))
    try:
        return ComplexSignal(grid, data[:, 1] + 1j * data[:, 2])
    except ValueError as exc:
        raise SignalFormatError(f"{path}: {exc}") from None


def write_signal_csv(sig: ComplexSignal, path) -> None:
    with Path(path).open("w", newline="") as fh:
        fh.write("t,re,im\n")
        for t, z in zip(sig.t, sig.samples):
            fh.write(f"{t:.17g},{z.real:.17g},{z.imag:.17g}\n")
