"""Regenerate the DDT/STFT magnitude maps of the three test chirps."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .channel import window_to_dict
from .mapio import export_map_csv, export_map_pgm
from .signals import S1, S2, S3, Gaussian, UniformGrid, WindowSpec, synthesize
from .transforms import TFMap, ddt_map, map_distance, stft_map

FIGURE_NUMBERS = {"s1": 1, "s2": 2, "s3": 3}
FORMATS = ("csv", "pgm")


def _default_signals():
    return {"s1": S1, "s2": S2, "s3": S3}


@dataclass
class FigureConfig:
    input_grid: UniformGrid = UniformGrid(-10.0, 20.0 / 512, 512)
    t_axis: UniformGrid = UniformGrid(-5.0, 10.0 / 256, 256)
    omega_axis: UniformGrid = UniformGrid(-5.0, 10.0 / 256, 256)
    window: WindowSpec = Gaussian(1.0)
    signals: dict = field(default_factory=_default_signals)
    output_dir: Path = Path("figures")
    formats: tuple = FORMATS

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        self.formats = tuple(self.formats)
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ValueError(f"unknown output formats: {sorted(unknown)}")
        if self.t_axis.count < 2 or self.omega_axis.count < 2:
            raise ValueError("figure axes need at least two points each")
        if not self.signals:
            raise ValueError("no signals selected")

    def resolved(self) -> dict:
        return {
            "input_grid": asdict(self.input_grid),
            "t_axis": asdict(self.t_axis),
            "omega_axis": asdict(self.omega_axis),
            "window": window_to_dict(self.window),
            "signals": {name: repr(expr) for name, expr in self.signals.items()},
            "output_dir": str(self.output_dir),
            "formats": list(self.formats),
        }


@dataclass
class RunManifest:
    version: str
    config: dict
    files: dict
    distances: dict
    duration_s: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def figure_stem(name: str, kind: str) -> str:
    letter = "a" if kind == "DDT" else "b"
    if name in FIGURE_NUMBERS:
        return f"fig{FIGURE_NUMBERS[name]}{letter}"
    return f"{name}_{letter}"


def compute_maps(cfg: FigureConfig) -> dict[str, tuple[TFMap, TFMap]]:
    """``{name: (ddt, stft)}`` for every configured signal."""
    maps = {}
    for name, expr in cfg.signals.items():
        s = synthesize(expr, cfg.input_grid)
        maps[name] = (
            ddt_map(s, cfg.window, cfg.omega_axis, cfg.t_axis),
            stft_map(s, cfg.window, cfg.omega_axis, cfg.t_axis),
        )
    return maps


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_figures(cfg: FigureConfig) -> RunManifest:
    """Write ``fig{1,2,3}{a,b}.{csv,pgm}`` (a = DDT, b = STFT) and ``manifest.json``."""
    began = time.perf_counter()
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    files, distances = {}, {}
    for name, (ddt, stft) in compute_maps(cfg).items():
        distances[name] = map_distance(ddt, stft)
        for tf in (ddt, stft):
            stem = figure_stem(name, tf.kind.value)
            if "csv" in cfg.formats:
                export_map_csv(tf, out / f"{stem}.csv")
                files[f"{stem}.csv"] = _sha256(out / f"{stem}.csv")
            if "pgm" in cfg.formats:
                export_map_pgm(tf, out / f"{stem}.pgm")
                files[f"{stem}.pgm"] = _sha256(out / f"{stem}.pgm")

    manifest = RunManifest(
        version=__version__,
        config=cfg.resolved(),
        files=files,
        distances=distances,
        duration_s=time.perf_counter() - began,
    )
    (out / "manifest.json").write_text(manifest.to_json() + "\n")
    return manifest
