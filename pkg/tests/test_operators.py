import numpy as np
import pytest

from fsir import (
    Curve,
    OperatorMatrix,
    apply,
    cosine_basis,
    eig_top,
    inner_product,
    make_grid,
    operator_norm,
    orthonormalize,
    outer_product_average,
    ridge_inverse_apply,
    truncated_pinv,
)
from fsir.errors import DegenerateOperatorError
from fsir.metrics import SubspaceBasis


def rank_one(c: Curve) -> OperatorMatrix:
    return OperatorMatrix(grid=c.grid, kernel=np.outer(c.values, c.values))


def compose(a: OperatorMatrix, b: OperatorMatrix) -> np.ndarray:
    """Kernel of the operator a o b (apply b first)."""
    return a.kernel @ (a.grid.weights[:, None] * b.kernel)


class TestOuterProductAverage:
    def test_single_constant_curve(self, grid32):
        op = outer_product_average([cosine_basis(1, grid32)], 1.0)
        assert np.allclose(op.kernel, 1.0)

    def test_sign_cancels(self, grid32):
        p2 = cosine_basis(2, grid32)
        neg = Curve(grid=grid32, values=-p2.values)
        op = outer_product_average([p2, neg], 0.5)
        assert np.abs(op.kernel - np.outer(p2.values, p2.values)).max() < 1e-12

    def test_brute_force_definition(self, grid32, rng):
        # oracle: (1/n) sum_m <X_m, f> X_m with quadrature inner products
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(3)]
        f = Curve(grid=grid32, values=rng.normal(size=32))
        op = outer_product_average(curves, 1.0 / 3.0)
        expected = np.zeros(32)
        for c in curves:
            expected += inner_product(c, f) * c.values
        expected /= 3.0
        assert np.abs(apply(op, f).values - expected).max() < 1e-10

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            outer_product_average([], 1.0)

    def test_output_psd(self, grid32, rng):
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(6)]
        op = outer_product_average(curves, 1.0 / 6.0)
        eigs = np.linalg.eigvalsh(op.weighted())
        assert eigs.min() >= -1e-10 * eigs.max()


class TestApply:
    def test_zero_kernel(self, grid32):
        op = OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))
        f = cosine_basis(2, grid32)
        assert np.all(apply(op, f).values == 0.0)

    def test_rank_one_projector_action(self, grid256):
        p2 = cosine_basis(2, grid256)
        out = apply(rank_one(p2), p2)
        assert np.abs(out.values - p2.values).max() < 1e-3

    def test_rank_one_annihilates_orthogonal(self, grid256):
        p2, p3 = cosine_basis(2, grid256), cosine_basis(3, grid256)
        out = apply(rank_one(p2), p3)
        assert np.abs(out.values).max() < 1e-3

    def test_grid_mismatch(self, grid32, grid64):
        op = OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))
        with pytest.raises(ValueError):
            apply(op, cosine_basis(1, grid64))


class TestEigTop:
    def test_rank_one(self, grid256):
        p2 = cosine_basis(2, grid256)
        eig = eig_top(rank_one(p2), 1)
        assert eig.values[0] == pytest.approx(1.0, abs=1e-3)
        diff = min(
            np.abs(eig.functions[0].values - p2.values).max(),
            np.abs(eig.functions[0].values + p2.values).max(),
        )
        assert diff < 1e-3

    def test_spectral_synthesis(self, grid256):
        p1, p2 = cosine_basis(1, grid256), cosine_basis(2, grid256)
        kernel = 2.0 * np.outer(p1.values, p1.values) + np.outer(p2.values, p2.values)
        eig = eig_top(OperatorMatrix(grid=grid256, kernel=kernel), 2)
        assert eig.values == pytest.approx([2.0, 1.0], abs=1e-3)

    def test_identity_operator(self, grid32):
        kernel = np.diag(1.0 / grid32.weights)
        eig = eig_top(OperatorMatrix(grid=grid32, kernel=kernel), 1)
        assert eig.values[0] == pytest.approx(1.0, abs=1e-10)

    def test_asymmetric_rejected(self, grid32, rng):
        kernel = rng.normal(size=(32, 32))
        with pytest.raises(ValueError):
            OperatorMatrix(grid=grid32, kernel=kernel)

    def test_orthonormality_and_residual(self, grid32, rng):
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(8)]
        op = outer_product_average(curves, 1.0 / 8.0)
        eig = eig_top(op, 5)
        F = eig.function_matrix()
        gram = (F * grid32.weights[None, :]) @ F.T
        assert np.abs(gram - np.eye(5)).max() < 1e-8
        for lam, func in zip(eig.values, eig.functions):
            resid = apply(op, func).values - lam * func.values
            resid_norm = np.sqrt(np.dot(grid32.weights * resid, resid))
            assert resid_norm < 1e-8 * eig.values[0]

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_planted_spectrum_recovery(self, grid32, seed):
        # random rank-r operator with known spectrum, r <= 5, G <= 32
        rng = np.random.default_rng(seed)
        r = int(rng.integers(1, 6))
        raw = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(r)]
        ortho = orthonormalize(SubspaceBasis(raw)).curves
        planted = np.sort(rng.uniform(0.5, 5.0, size=r))[::-1]
        kernel = np.zeros((32, 32))
        for lam, c in zip(planted, ortho):
            kernel += lam * np.outer(c.values, c.values)
        eig = eig_top(OperatorMatrix(grid=grid32, kernel=kernel), r)
        assert np.abs(eig.values - planted).max() < 1e-8

    def test_sign_convention(self, grid256):
        p2 = cosine_basis(2, grid256)
        eig = eig_top(rank_one(p2), 1)
        v = eig.functions[0].values
        assert v[np.argmax(np.abs(v))] > 0


class TestTruncatedPinv:
    def test_rank_one_inversion(self, grid256):
        p1 = cosine_basis(1, grid256)
        op = OperatorMatrix(grid=grid256, kernel=2.0 * np.outer(p1.values, p1.values))
        pinv = truncated_pinv(op, 1)
        assert np.abs(pinv.kernel - 0.5 * np.outer(p1.values, p1.values)).max() < 1e-3

    def test_moore_penrose_identity(self, grid32, rng):
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(6)]
        op = outer_product_average(curves, 1.0 / 6.0)
        pinv = truncated_pinv(op, 4)
        triple = compose(pinv, OperatorMatrix(grid=grid32, kernel=compose(op, pinv)))
        assert np.abs(triple - pinv.kernel).max() < 1e-8

    def test_identity_on_retained_span(self, grid32, rng):
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(6)]
        op = outer_product_average(curves, 1.0 / 6.0)
        m = 3
        pinv = truncated_pinv(op, m)
        for func in eig_top(op, m).functions:
            back = apply(pinv, apply(op, func))
            assert np.abs(back.values - func.values).max() < 1e-8

    def test_floor_guards_rank(self, grid32):
        p1 = cosine_basis(1, grid32)
        op = OperatorMatrix(grid=grid32, kernel=np.outer(p1.values, p1.values))
        pinv = truncated_pinv(op, 10, rel_floor=1e-12)
        assert np.all(np.isfinite(pinv.kernel))
        # only the single genuine direction is inverted
        assert operator_norm(pinv) == pytest.approx(1.0, abs=1e-6)

    def test_degenerate_rejected(self, grid32):
        op = OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))
        with pytest.raises(DegenerateOperatorError):
            truncated_pinv(op, 1)


class TestRidgeInverseApply:
    def test_zero_operator(self, grid32, rng):
        op = OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))
        f = Curve(grid=grid32, values=rng.normal(size=32))
        out = ridge_inverse_apply(op, 2.0, f)
        assert np.abs(out.values - f.values / 2.0).max() < 1e-12

    def test_rank_one_sherman_morrison(self, grid256):
        # (I + phi1 (x) phi1)^-1 phi1 = phi1 / 2
        p1 = cosine_basis(1, grid256)
        out = ridge_inverse_apply(rank_one(p1), 1.0, p1)
        assert np.abs(out.values - p1.values / 2.0).max() < 1e-3

    def test_large_rho_dominates(self, grid32, rng):
        curves = [Curve(grid=grid32, values=rng.normal(size=32)) for _ in range(4)]
        op = outer_product_average(curves, 0.25)
        f = Curve(grid=grid32, values=rng.normal(size=32))
        rho = 1e4
        out = ridge_inverse_apply(op, rho, f)
        assert np.abs(out.values - f.values / rho).max() <= 0.01 * np.abs(f.values / rho).max()

    def test_invalid_rho(self, grid32):
        op = OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))
        with pytest.raises(ValueError):
            ridge_inverse_apply(op, 0.0, cosine_basis(1, grid32))


class TestOperatorNorm:
    def test_zero(self, grid32):
        assert operator_norm(OperatorMatrix(grid=grid32, kernel=np.zeros((32, 32)))) == 0.0

    def test_rank_one(self, grid256):
        assert operator_norm(rank_one(cosine_basis(2, grid256))) == pytest.approx(1.0, abs=1e-3)

    def test_projector_difference(self, grid256):
        p1, p2 = cosine_basis(1, grid256), cosine_basis(2, grid256)
        kernel = np.outer(p1.values, p1.values) - np.outer(p2.values, p2.values)
        op = OperatorMatrix(grid=grid256, kernel=kernel)
        assert operator_norm(op) == pytest.approx(1.0, abs=1e-3)
