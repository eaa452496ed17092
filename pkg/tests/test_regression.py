import numpy as np
import pytest

from fsir import fit_gp, mse, predict


@pytest.fixture()
def line_data():
    x = np.linspace(0.0, 1.0, 20)
    return x, x.copy()


class TestFitGp:
    def test_constant_targets(self):
        x = np.linspace(0, 1, 10)
        model = fit_gp(x, np.full(10, 3.25))
        pred = predict(model, np.array([0.1, 7.0]))
        assert np.allclose(pred, 3.25)
        assert mse(predict(model, x), np.full(10, 3.25)) == 0.0

    def test_noise_free_interpolation(self, line_data):
        x, y = line_data
        model = fit_gp(x, y)
        rmse = np.sqrt(mse(predict(model, x), y))
        assert rmse < 0.05 * (y.max() - y.min())
        assert model.noise_var <= 1e-2 * y.var()

    def test_conflicting_duplicates_finite(self):
        x = np.array([0.0, 0.0, 1.0, 2.0])
        y = np.array([0.0, 1.0, 2.0, 3.0])
        model = fit_gp(x, y)
        assert np.all(np.isfinite(predict(model, x)))

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_gp(np.array([0.0, 1.0]), np.array([0.0, 1.0]))

    def test_custom_grid(self, line_data):
        x, y = line_data
        model = fit_gp(x, y, hp_grid={"length_scale": [0.5], "noise_var": [1e-3 * y.var()]})
        assert model.length_scale == 0.5

    def test_target_centering_shift(self, line_data):
        x, y = line_data
        x_new = np.linspace(0.1, 0.9, 7)
        base = predict(fit_gp(x, y), x_new)
        shifted = predict(fit_gp(x, y + 11.0), x_new)
        assert np.abs(shifted - base - 11.0).max() < 1e-10

    def test_permutation_invariance(self, rng):
        x = rng.normal(size=(25, 2))
        y = np.sin(x[:, 0]) + x[:, 1]
        perm = rng.permutation(25)
        x_new = rng.normal(size=(6, 2))
        a = predict(fit_gp(x, y), x_new)
        b = predict(fit_gp(x[perm], y[perm]), x_new)
        assert np.abs(a - b).max() < 1e-10


class TestPredict:
    def test_far_point_returns_mean(self, line_data):
        x, y = line_data
        model = fit_gp(x, y)
        far = predict(model, np.array([1e6]))
        assert abs(far[0] - model.y_mean) < 1e-6

    def test_training_point_recovered(self, line_data):
        x, y = line_data
        model = fit_gp(x, y)
        pred = predict(model, np.array([x[7]]))
        assert pred[0] == pytest.approx(y[7], abs=0.01 * max(1.0, abs(y[7])))

    def test_batched_equals_pointwise(self, line_data):
        x, y = line_data
        model = fit_gp(x, y)
        x_new = np.array([0.05, 0.33, 0.81])
        batch = predict(model, x_new)
        single = np.array([predict(model, np.array([v]))[0] for v in x_new])
        assert np.abs(batch - single).max() < 1e-12

    def test_dimension_mismatch(self, rng):
        model = fit_gp(rng.normal(size=(10, 2)), rng.normal(size=10))
        with pytest.raises(ValueError):
            predict(model, rng.normal(size=(3, 5)))


class TestMse:
    def test_exact(self):
        assert mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_unit_offset(self):
        truth = np.arange(5.0)
        assert mse(truth + 1.0, truth) == 1.0

    def test_mixed(self):
        assert mse([0.0, 2.0], [1.0, 1.0]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            mse([0.0, 1.0], [0.0])
