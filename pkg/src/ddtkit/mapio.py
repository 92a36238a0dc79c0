"""Map export: lossless complex CSV and binary PGM magnitude images."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .signals import GRID_RTOL, SignalFormatError, UniformGrid
from .transforms import MapKind, TFMap

CSV_CORNER = "t\\omega"


def _fmt_real(x: float) -> str:
    return f"{x:.17g}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def export_map_csv(tf: TFMap, path) -> None:
    """Write ``tf`` as CSV: header row of Omega values, then one row per t.

    Entries are ``<re><sign><im>j`` with 17 significant digits, which
    round-trips doubles exactly.
    """
    lines = [",".join([CSV_CORNER] + [_fmt_real(w) for w in tf.omega_axis.samples])]
    for t, row in zip(tf.t_axis.samples, tf.values):
        lines.append(",".join([_fmt_real(t)] + [_fmt_complex(z) for z in row]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="")


def _axis_from_values(values: np.ndarray, what: str) -> UniformGrid:
    if values.size == 1:
        # a single point carries no step; any positive placeholder works
        return UniformGrid(values[0], 1.0, 1)
    step = (values[-1] - values[0]) / (values.size - 1)
    if not step > 0 or np.max(np.abs(np.diff(values) - step)) > GRID_RTOL * step:
        raise SignalFormatError(f"{what} axis is not increasing and equispaced")
    return UniformGrid(values[0], step, values.size)


def read_map_csv(path, kind: MapKind | str = MapKind.DDT) -> TFMap:
    """Parse a file written by :func:`export_map_csv`.

    Axis grids are rebuilt from their first value and mean step, so only the
    values are guaranteed bit-exact.
    """
    text = Path(path).read_text(encoding="ascii")
    rows = [line.split(",") for line in text.splitlines() if line]
    if not rows or rows[0][0] != CSV_CORNER:
        raise SignalFormatError(f"{path}: not a map CSV (missing '{CSV_CORNER}' header)")
    try:
        omegas = np.array([float(x) for x in rows[0][1:]])
        ts = np.array([float(r[0]) for r in rows[1:]])
        values = np.array([[complex(x) for x in r[1:]] for r in rows[1:]], dtype=np.complex128)
    except ValueError as exc:
        raise SignalFormatError(f"{path}: {exc}") from None
    if values.shape != (ts.size, omegas.size):
        raise SignalFormatError(f"{path}: ragged rows")
    return TFMap(_axis_from_values(ts, "t"), _axis_from_values(omegas, "omega"), values, kind)


def pgm_pixels(tf: TFMap) -> np.ndarray:
    """8-bit magnitude image: rows are decreasing Omega, columns increasing t."""
    mag = tf.magnitude
    peak = mag.max()
    if peak == 0:
        pix = np.zeros(mag.shape, dtype=np.uint8)
    else:
        pix = np.floor(255.0 * (mag / peak) + 0.5).astype(np.uint8)
    return np.ascontiguousarray(pix.T[::-1])


def export_map_pgm(tf: TFMap, path) -> None:
    pix = pgm_pixels(tf)
    height, width = pix.shape
    with Path(path).open("wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary P5 image written by :func:`export_map_pgm`."""
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if len(parts) < 4 or parts[0] != b"P5":
        raise SignalFormatError(f"{path}: not a binary PGM")
    width, height, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    header_len = len(b" ".join(parts[:4])) + 1
    body = data[header_len:]
    if maxval != 255 or len(body) != width * height:
        raise SignalFormatError(f"{path}: unexpected PGM payload")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width)
