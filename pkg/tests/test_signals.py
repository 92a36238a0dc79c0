import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddtkit.signals import (
    S1,
    S2,
    S3,
    ComplexSignal,
    Constant,
    CubicChirp,
    FromFile,
    Gaussian,
    GaussianPulse,
    LinearChirp,
    LinearRate,
    Rectangular,
    SignalFormatError,
    Sum,
    TabulatedLaw,
    TabulatedWindow,
    Tone,
    UnitImpulse,
    eval_doppler,
    eval_window,
    make_grid,
    read_signal_csv,
    synthesize,
    write_signal_csv,
)

finite = st.floats(-50, 50, allow_nan=False)


class TestGrid:
    def test_paper_input_grid(self):
        g = make_grid(-10, 20 / 512, 512)
        assert g.samples[0] == -10
        assert g.samples[-1] == pytest.approx(10 - 20 / 512)
        assert len(g.samples) == 512

    def test_single_sample(self):
        g = make_grid(0, 1, 1)
        np.testing.assert_array_equal(g.samples, [0.0])

    def test_figure_axis(self):
        g = make_grid(-5, 10 / 256, 256)
        assert g.samples[0] == -5 and g.stop < 5

    @pytest.mark.parametrize("step,count", [(0, 4), (-1, 4), (1, 0), (1, -3), (1, 2.5)])
    def test_invalid(self, step, count):
        with pytest.raises(ValueError):
            make_grid(0, step, count)

    def test_commensurate(self):
        a = make_grid(-10, 0.25, 80)
        assert a.is_commensurate(a.shifted(7))
        assert a.shifted(-3).offset_from(a) == -3
        assert not a.is_commensurate(make_grid(-10.1, 0.25, 80))
        assert not a.is_commensurate(make_grid(-10, 0.5, 80))

    @given(st.floats(-100, 100), st.floats(1e-3, 10), st.integers(1, 300))
    def test_nearest_index_round_trip(self, start, step, count):
        g = make_grid(start, step, count)
        np.testing.assert_array_equal(g.nearest_index(g.samples), np.arange(count))


class TestSynthesize:
    def test_linear_chirp_three_points(self):
        s = synthesize(LinearChirp(1.0), make_grid(-1, 1, 3))
        np.testing.assert_allclose(s.samples, [cmath.exp(1j), 1, cmath.exp(1j)], rtol=0, atol=1e-15)

    def test_sum_at_two(self):
        s = synthesize(S3, make_grid(2, 1, 1))
        assert abs(s.samples[0] - (cmath.exp(4j) + cmath.exp(0.8j))) < 1e-14

    def test_unit_impulse(self):
        g = make_grid(-1, 0.25, 9)
        s = synthesize(UnitImpulse(0.0), g)
        expected = np.zeros(9)
        expected[4] = 4.0
        np.testing.assert_array_equal(s.samples, expected)

    def test_impulse_outside(self):
        with pytest.raises(ValueError):
            synthesize(UnitImpulse(100.0), make_grid(0, 1, 4))

    def test_sum_is_exactly_elementwise(self, paper_grid):
        total = synthesize(Sum(S1, S2), paper_grid).samples
        parts = synthesize(S1, paper_grid).samples + synthesize(S2, paper_grid).samples
        np.testing.assert_array_equal(total, parts)

    @pytest.mark.parametrize("expr", [S1, S2, Tone(2.0), LinearChirp(-3.7), CubicChirp(0.25)])
    def test_unit_modulus(self, expr, paper_grid):
        s = synthesize(expr, paper_grid)
        assert np.max(np.abs(np.abs(s.samples) - 1)) <= 1e-15

    def test_gaussian_pulse(self):
        s = synthesize(GaussianPulse(2.0), make_grid(-1, 1, 3))
        np.testing.assert_allclose(s.samples, [math.exp(-2), 1, math.exp(-2)])

    def test_signal_rejects_nan(self):
        with pytest.raises(ValueError):
            ComplexSignal(make_grid(0, 1, 2), [1, np.nan])

    def test_signal_length_mismatch(self):
        with pytest.raises(ValueError):
            ComplexSignal(make_grid(0, 1, 3), [1, 2])


class TestSignalFile:
    def test_round_trip(self, tmp_path, s1):
        path = tmp_path / "s1.csv"
        write_signal_csv(s1, path)
        back = synthesize(FromFile(str(path)), s1.grid)
        np.testing.assert_array_equal(back.samples, s1.samples)
        assert back.grid.is_commensurate(s1.grid) and back.grid.offset_from(s1.grid) == 0

    def test_bad_header(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("time,re,im\n0,1,0\n1,1,0\n")
        with pytest.raises(SignalFormatError):
            read_signal_csv(p)

    def test_not_equispaced(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("t,re,im\n0,1,0\n1,1,0\n2.5,1,0\n")
        with pytest.raises(SignalFormatError):
            read_signal_csv(p)

    def test_equispaced_within_tolerance(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("t,re,im\n0,1,0\n0.1,2,0\n0.20000000000000001,3,1\n")
        s = read_signal_csv(p)
        assert s.grid.count == 3 and s.samples[2] == 3 + 1j

    def test_ragged_row(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("t,re,im\n0,1,0\n1,1\n")
        with pytest.raises(SignalFormatError):
            read_signal_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_signal_csv(tmp_path / "nope.csv")


class TestWindow:
    def test_gaussian_values(self):
        assert eval_window(Gaussian(1.0), 0.0) == 1.0
        assert abs(eval_window(Gaussian(1.0), 1.0) - 0.367879441) < 1e-9

    def test_rectangular(self):
        w = Rectangular(2.0)
        assert eval_window(w, 3.0) == 0
        assert eval_window(w, 2.0) == 1
        assert eval_window(w, -1.5) == 1

    def test_tabulated_exact_at_nodes_and_zero_outside(self):
        grid = make_grid(-1, 0.5, 5)
        samples = np.array([0.1, 0.5, 1.0, 0.5 + 0.2j, 0.1])
        w = TabulatedWindow(grid, samples)
        np.testing.assert_array_equal(eval_window(w, grid.samples), samples)
        assert eval_window(w, -1.01) == 0 and eval_window(w, 1.2) == 0
        assert eval_window(w, 0.25) == pytest.approx(0.75 + 0.1j)

    def test_invalid_windows(self):
        with pytest.raises(ValueError):
            Gaussian(0.0)
        with pytest.raises(ValueError):
            Rectangular(-1.0)

    @given(finite)
    def test_gaussian_symmetric(self, t):
        w = Gaussian(1.0)
        assert eval_window(w, t) == eval_window(w, -t)
        assert 0 <= eval_window(w, t) <= 1


class TestDoppler:
    def test_linear(self):
        assert eval_doppler(LinearRate(2.0), 3.0) == 6.0

    @given(finite)
    def test_constant(self, tau):
        assert eval_doppler(Constant(5.0), tau) == 5.0

    def test_tabulated_midpoint(self):
        law = TabulatedLaw(make_grid(0, 1, 2), [0.0, 4.0])
        assert eval_doppler(law, 0.5) == 2.0
        assert eval_doppler(law, 3.0) == 0.0
