import numpy as np
import pytest

from cauchyde.bench import (fev, get_objective, list_functions, load_cec_suite,
                            suite)
from cauchyde.core import ConfigurationError


class TestFev:
    def test_zero_gap(self):
        assert fev(100.0, 100.0) == 0.0

    def test_nonnegative_gap(self):
        assert fev(0.0, 2.5e-3) == 2.5e-3

    def test_signed_inputs(self):
        assert fev(-450.0, -448.0) == 2.0


class TestSuite:
    @pytest.mark.parametrize("name", list_functions())
    @pytest.mark.parametrize("dim", [2, 10, 30])
    def test_optimum_value(self, name, dim):
        objective = get_objective(name, dim)
        assert objective.evaluate(objective.x_star) == pytest.approx(0.0, abs=1e-9)

    def test_ackley_origin_tight(self):
        objective = get_objective("ackley", 30)
        assert abs(objective.evaluate(np.zeros(30))) < 1e-12

    def test_sphere_hand_value(self):
        assert get_objective("sphere", 2).evaluate(np.array([1.0, 2.0])) == 5.0

    def test_rastrigin_origin(self):
        assert get_objective("rastrigin", 7).evaluate(np.zeros(7)) == 0.0

    def test_rosenbrock_hand_value(self):
        # 100 (y - x^2)^2 + (1 - x)^2 at (0, 0) is 1
        assert get_objective("rosenbrock", 2).evaluate(np.zeros(2)) == 1.0

    def test_schwefel_prefix_sums(self):
        # (1)^2 + (1+2)^2 + (1+2+3)^2
        value = get_objective("schwefel_1_2", 3).evaluate(np.array([1.0, 2.0, 3.0]))
        assert value == 1.0 + 9.0 + 36.0

    @pytest.mark.parametrize("name", list_functions())
    def test_never_below_optimum(self, name):
        rng = np.random.default_rng(5)
        objective = get_objective(name, 10)
        points = objective.bounds.lower + rng.random((10_000, 10)) * objective.bounds.span
        values = objective(points)
        assert values.shape == (10_000,)
        assert np.all(values >= objective.f_star - 1e-9)

    @pytest.mark.parametrize("name", list_functions())
    def test_pure_and_batch_consistent(self, name):
        rng = np.random.default_rng(6)
        objective = get_objective(name, 8)
        x = objective.bounds.lower + rng.random((5, 8)) * objective.bounds.span
        batch = objective(x)
        again = objective(x)
        assert np.array_equal(batch, again)  # bit-identical reevaluation
        for i in range(5):
            assert batch[i] == objective.evaluate(x[i])

    def test_unknown_name(self):
        with pytest.raises(ConfigurationError):
            get_objective("not-a-function", 10)

    def test_dimension_mismatch(self):
        objective = get_objective("sphere", 3)
        with pytest.raises(ValueError):
            objective.evaluate(np.zeros(4))

    def test_suite_listing(self):
        objectives = suite(5)
        assert len(objectives) == len(list_functions())
        modalities = {o.modality for o in objectives}
        assert modalities == {"unimodal", "multimodal"}


class TestCecLoader:
    def _write(self, path, fid, dim, shift, rot=None, base="sphere", f_star=100.0):
        header = f"# base={base} f_star={f_star} lower=-100 upper=100"
        body = " ".join(str(v) for v in shift)
        (path / f"{fid}_D{dim}_shift.txt").write_text(header + "\n" + body + "\n")
        if rot is not None:
            (path / f"{fid}_D{dim}_rot.txt").write_text(
                "\n".join(" ".join(str(v) for v in row) for row in rot) + "\n")

    def test_missing_directory_is_silent(self, tmp_path):
        assert load_cec_suite(tmp_path / "nope") == {}

    def test_shifted_function(self, tmp_path):
        self._write(tmp_path, "F1", 2, [3.0, -4.0])
        loaded = load_cec_suite(tmp_path)
        objective = loaded["F1_D2"]
        assert objective.evaluate(np.array([3.0, -4.0])) == pytest.approx(100.0)
        assert objective.f_star == 100.0
        assert objective.evaluate(np.zeros(2)) == pytest.approx(100.0 + 25.0)

    def test_rotated_function(self, tmp_path):
        theta = np.pi / 6
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        self._write(tmp_path, "F2", 2, [1.0, 1.0], rot=rot)
        objective = load_cec_suite(tmp_path)["F2_D2"]
        # rotation preserves the sphere's value profile around the shift
        assert objective.evaluate(np.array([1.0, 1.0])) == pytest.approx(100.0)
        assert objective.evaluate(np.array([2.0, 1.0])) == pytest.approx(101.0)

    def test_dimension_filter(self, tmp_path):
        self._write(tmp_path, "F1", 2, [0.0, 0.0])
        self._write(tmp_path, "F1", 3, [0.0, 0.0, 0.0])
        assert set(load_cec_suite(tmp_path, dimension=3)) == {"F1_D3"}

    def test_bad_header_rejected(self, tmp_path):
        (tmp_path / "F9_D2_shift.txt").write_text("1.0 2.0\n")
        with pytest.raises(ConfigurationError):
            load_cec_suite(tmp_path)

    def test_unknown_base_rejected(self, tmp_path):
        (tmp_path / "F9_D2_shift.txt").write_text("# base=mystery\n1.0 2.0\n")
        with pytest.raises(ConfigurationError):
            load_cec_suite(tmp_path)

    def test_wrong_shift_length(self, tmp_path):
        (tmp_path / "F9_D3_shift.txt").write_text("# base=sphere\n1.0 2.0\n")
        with pytest.raises(ConfigurationError):
            load_cec_suite(tmp_path)
