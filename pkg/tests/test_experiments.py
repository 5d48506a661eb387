import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import config
from core.errors import DivergenceError, ValidationError
from core.experiments import (ARDatasetSpec, TrainConfig, _clamp, compare_initializations, empirical_mse,
                              gen_ar1, init_scheme, k_init_sweep, learned_kernel, loss_gradient, predict, train)
from core.filter import FilterParams, impulse_response
from core.verification import finite_difference_gradient
from tests.conftest import make_params

TINY_DATA = ARDatasetSpec(60, 10, 0.5, 40, seed=3)
TINY_TRAIN = TrainConfig(S=5, K_init=50, epochs=3, batch_size=10)


class TestDatasetSpec:
    @pytest.mark.parametrize("kwargs", [dict(N=0, t_star=1), dict(N=10, t_star=0), dict(N=10, t_star=11),
                                        dict(N=10, t_star=5, rho=1.0), dict(N=10, t_star=5, num_samples=0),
                                        dict(N=10, t_star=5, seed=-1), dict(N=10, t_star=5, burn_in=-2)])
    def test_invalid_specs(self, kwargs):
        values = {"rho": 0.5, "num_samples": 4, **kwargs}
        with pytest.raises(ValidationError):
            ARDatasetSpec(**values)

    def test_shift(self):
        assert ARDatasetSpec(300, 50, 0.7, 10).K_star == 250


class TestGenAR1:
    def test_same_seed_same_data(self):
        first, second = gen_ar1(TINY_DATA), gen_ar1(TINY_DATA)
        assert_array_equal(first.sequences, second.sequences)

    def test_shapes_and_targets(self):
        data = gen_ar1(ARDatasetSpec(20, 7, 0.3, 5, burn_in=10))
        assert data.sequences.shape == (5, 20)
        assert len(data) == 5
        assert_array_equal(data.targets, data.sequences[:, 6])
        assert len(list(data)) == 5

    def test_first_sample_is_uniform(self):
        data = gen_ar1(ARDatasetSpec(5, 1, 0.0, 500))
        assert np.all((data.targets >= 0) & (data.targets < 1))

    def test_white_noise_has_unit_variance(self):
        u = gen_ar1(ARDatasetSpec(101, 1, 0.0, 1000)).sequences[:, 1:]
        assert 0.98 <= np.var(u) <= 1.02

    def test_lag_one_correlation(self):
        u = gen_ar1(ARDatasetSpec(101, 1, 0.9, 1000, seed=1)).sequences[:, 50:]
        correlation = np.sum(u[:, :-1] * u[:, 1:]) / np.sum(u[:, :-1] ** 2)
        assert 0.88 <= correlation <= 0.92


class TestInitSchemes:
    def test_shiftk_grid(self):
        p = init_scheme(TrainConfig(S=5, K_init=100))
        assert p.convention == "symmetric_T"
        assert_allclose(np.angle(p.a), np.arange(-2, 3) * np.pi / 100, atol=1e-15)

    def test_random_phase(self):
        p = init_scheme(TrainConfig(init_scheme="random_phase", S=6, K_init=100, seed=4))
        assert p.convention == "one_to_S"
        assert_allclose(np.abs(p.a), math.exp(-0.01), rtol=1e-14)
        assert_array_equal(np.sign(p.b.real), [-1, 1, -1, 1, -1, 1])

    def test_random_phase_follows_the_seed(self):
        base = dict(init_scheme="random_phase", S=6, K_init=100)
        first = init_scheme(TrainConfig(**base, seed=1)).a
        assert_array_equal(first, init_scheme(TrainConfig(**base, seed=1)).a)
        assert not np.array_equal(first, init_scheme(TrainConfig(**base, seed=2)).a)

    def test_grid_needs_odd_size(self):
        with pytest.raises(ValidationError):
            TrainConfig(S=4)
        assert TrainConfig(init_scheme="random_phase", S=4).S == 4

    def test_unknown_scheme(self):
        with pytest.raises(ValidationError):
            TrainConfig(init_scheme="hippo")


class TestEmpiricalLoss:
    def test_prediction_is_the_last_output_of_the_recurrence(self, rng):
        p = make_params(rng, 3)
        u = rng.normal(size=(4, 12))
        expected = [np.dot(impulse_response(p, 11).values[::-1], row).real for row in u]
        assert_allclose(predict(p, u), expected, atol=1e-12)

    def test_zero_weights_give_target_power(self, rng):
        u = rng.normal(size=(6, 9))
        p = FilterParams([0.3, 0.6j], [0.0, 0.0])
        assert empirical_mse(p, u, 4) == pytest.approx(np.mean(u[:, 3] ** 2))

    def test_single_sequence(self):
        assert empirical_mse(FilterParams([0.5], [1.0]), np.array([1.0, 0.0]), 1) == pytest.approx(0.25)

    def test_target_must_lie_in_the_sequence(self):
        with pytest.raises(ValidationError):
            empirical_mse(FilterParams([0.5], [1.0]), np.ones((2, 3)), 4)


class TestGradient:
    def test_hand_computed(self):
        grad_a, grad_b = loss_gradient(FilterParams([0.5], [1.0]), np.array([[1.0, 0.0]]), 1)
        assert_allclose(grad_b, [-0.5])
        assert_allclose(grad_a, [-1.0])

    def test_matches_finite_differences(self, rng):
        for _ in range(50):
            p = make_params(rng, int(rng.integers(1, 5)))
            N = int(rng.integers(4, 40))
            batch = rng.normal(size=(8, N))
            t_star = int(rng.integers(1, N + 1))
            analytic = np.concatenate(loss_gradient(p, batch, t_star))
            numeric = np.concatenate(finite_difference_gradient(p, batch, t_star))
            assert np.linalg.norm(analytic - numeric) <= 1e-5 * np.linalg.norm(numeric)


class TestTraining:
    def test_clamp_keeps_poles_inside_the_disk(self):
        clamped = _clamp(np.array([2.0, 0.5j, -1.0]))
        assert_allclose(clamped, [config.STABILITY_RADIUS, 0.5j, -config.STABILITY_RADIUS])

    def test_zero_learning_rate_keeps_the_initial_filter(self):
        run = train(TrainConfig(S=5, K_init=50, epochs=3, batch_size=10, learning_rate=0.0), TINY_DATA)
        assert run.loss_curve == [run.initial_mse] * 3
        assert_array_equal(run.final_params.a, init_scheme(run.config).a)

    def test_runs_are_deterministic(self):
        first, second = train(TINY_TRAIN, TINY_DATA), train(TINY_TRAIN, TINY_DATA)
        assert first.loss_curve == second.loss_curve
        assert len(first.loss_curve) == 3
        assert first.final_mse == first.loss_curve[-1]

    def test_poles_stay_stable(self):
        run = train(TINY_TRAIN, TINY_DATA)
        assert np.max(np.abs(run.final_params.a)) <= config.STABILITY_RADIUS

    def test_large_learning_rate_diverges(self):
        with pytest.raises(DivergenceError):
            train(TrainConfig(S=5, K_init=50, epochs=3, batch_size=5, learning_rate=1e4), TINY_DATA)

    def test_run_json(self):
        record = train(TINY_TRAIN, TINY_DATA).to_json()
        assert set(record) == {"config", "data_spec", "loss_curve", "initial_mse", "final_mse", "final_params"}
        assert record["config"]["S"] == 5
        assert len(record["final_params"]["a"]) == 5

    def test_learned_kernel_spans_the_sequence(self):
        run = train(TINY_TRAIN, TINY_DATA)
        assert len(learned_kernel(run)) == TINY_DATA.N
        assert len(learned_kernel(run, 9)) == 10


class TestDrivers:
    def test_compare_initializations_pairs_every_run(self):
        base = TrainConfig(init_scheme="random_phase", S=4, K_init=30, epochs=1, batch_size=10)
        rows = compare_initializations(base, ARDatasetSpec(40, 10, 0.0, 20), [0.0, 0.5], [0])
        assert [(row.rho, row.seed) for row in rows] == [(0.0, 0), (0.5, 0)]
        assert all(math.isfinite(row.grid_mse) and math.isfinite(row.random_mse) for row in rows)

    def test_k_init_sweep(self):
        results = k_init_sweep(TrainConfig(S=3, epochs=1, batch_size=10), ARDatasetSpec(40, 10, 0.0, 20), [30, 60])
        assert [k for k, _ in results] == [30, 60]


@pytest.mark.slow
def test_grid_initialization_beats_random_phase():
    rows = compare_initializations(TrainConfig(), ARDatasetSpec(300, 50, 0.7, 2000), [0.7], [0, 1, 2])
    assert sum(row.grid_mse < row.random_mse for row in rows) >= 2


@pytest.mark.slow
def test_training_from_the_matched_grid_lowers_the_error():
    run = train(TrainConfig(), ARDatasetSpec(300, 50, 0.7, 2000))
    assert run.final_mse < run.initial_mse


@pytest.mark.slow
def test_shift_matched_initialization_beats_distant_grid_points():
    mse = dict(k_init_sweep(TrainConfig(), ARDatasetSpec(300, 50, 0.7, 2000), [62, 125, 250, 500, 1000]))
    assert mse[250] < min(mse[62], mse[500], mse[1000])
