import json

import numpy as np
import pytest

from ddtkit.figures import FigureConfig, compute_maps, figure_stem, run_figures
from ddtkit.mapio import read_map_csv
from ddtkit.signals import S1, make_grid


@pytest.fixture(scope="module")
def small_cfg(tmp_path_factory):
    return dict(
        input_grid=make_grid(-10, 20 / 256, 256),
        t_axis=make_grid(-5, 10 / 32, 32),
        omega_axis=make_grid(-5, 10 / 24, 24),
    )


def test_stems():
    assert figure_stem("s1", "DDT") == "fig1a"
    assert figure_stem("s3", "STFT") == "fig3b"
    assert figure_stem("chirp", "DDT") == "chirp_a"


def test_full_file_set_and_manifest(tmp_path, small_cfg):
    m = run_figures(FigureConfig(output_dir=tmp_path, **small_cfg))
    names = sorted(p.name for p in tmp_path.iterdir())
    expected = sorted(f"fig{i}{x}.{ext}" for i in (1, 2, 3) for x in "ab" for ext in ("csv", "pgm"))
    assert names == sorted(expected + ["manifest.json"])
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk["files"] == m.files
    assert set(m.files) == set(expected)
    assert on_disk["config"]["t_axis"] == {"start": -5.0, "step": 10 / 32, "count": 32}
    assert m.duration_s >= 0


def test_rerun_identical_checksums(tmp_path, small_cfg):
    a = run_figures(FigureConfig(output_dir=tmp_path / "a", **small_cfg))
    b = run_figures(FigureConfig(output_dir=tmp_path / "b", **small_cfg))
    assert a.files == b.files


def test_subset_and_single_format(tmp_path, small_cfg):
    m = run_figures(FigureConfig(output_dir=tmp_path, signals={"s1": S1}, formats=("csv",), **small_cfg))
    assert sorted(m.files) == ["fig1a.csv", "fig1b.csv"]


def test_csv_matches_computed_map(tmp_path, small_cfg):
    cfg = FigureConfig(output_dir=tmp_path, signals={"s1": S1}, formats=("csv",), **small_cfg)
    run_figures(cfg)
    ddt, stft = compute_maps(cfg)["s1"]
    assert read_map_csv(tmp_path / "fig1a.csv").values.tobytes() == ddt.values.tobytes()
    assert read_map_csv(tmp_path / "fig1b.csv").values.tobytes() == stft.values.tobytes()


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        FigureConfig(output_dir=tmp_path, formats=("png",))
    with pytest.raises(ValueError):
        FigureConfig(output_dir=tmp_path, t_axis=make_grid(0, 1, 1))
    with pytest.raises(ValueError):
        FigureConfig(output_dir=tmp_path, signals={})


def test_unwritable_output(tmp_path, small_cfg):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        run_figures(FigureConfig(output_dir=blocker / "sub", **small_cfg))


def test_distance_reported(tmp_path, small_cfg):
    m = run_figures(FigureConfig(output_dir=tmp_path, formats=("pgm",), **small_cfg))
    assert set(m.distances) == {"s1", "s2", "s3"}
    assert all(0 < d <= 1 for d in m.distances.values())
    assert np.isfinite(list(m.distances.values())).all()
