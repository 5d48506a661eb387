import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import ValidationError
from core.spectral import (ComplexSeq, FreqGrid, NoiseModel, autocorr_spectrum, convolve_causal, dtft_eval,
                           energy, geometric_tail_bound, uniform_grid, weighted_quadrature, window_gamma_mass,
                           window_gamma_mass_quadrature)


class TestComplexSeq:
    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            ComplexSeq([1.0, np.nan])

    def test_values_are_read_only(self):
        seq = ComplexSeq([1.0, 2.0])
        with pytest.raises(ValueError):
            seq.values[0] = 3.0

    def test_delta(self):
        seq = ComplexSeq.delta(3)
        assert len(seq) == 4
        assert_allclose(seq.values, [0, 0, 0, 1])

    def test_indices_follow_offset(self):
        assert list(ComplexSeq([1, 2, 3], offset=-1).indices) == [-1, 0, 1]


class TestFreqGrid:
    def test_midpoint_nodes(self):
        assert_allclose(uniform_grid(4).nodes, np.array([-3, -1, 1, 3]) * np.pi / 4)

    def test_endpoint_nodes_start_at_minus_pi(self):
        grid = uniform_grid(8, "uniform-endpoint")
        assert grid.nodes[0] == -np.pi
        assert grid.nodes[-1] < np.pi

    @pytest.mark.parametrize("nodes, scheme", [([0.0, -1.0], "uniform-midpoint"),
                                               ([0.0, 4.0], "uniform-midpoint"),
                                               ([0.0, 1.0], "chebyshev")])
    def test_invalid_grids(self, nodes, scheme):
        with pytest.raises(ValidationError):
            FreqGrid(nodes, scheme)

    def test_empty_grid_gives_empty_dtft(self):
        assert dtft_eval([1.0, 2.0], uniform_grid(0)).shape == (0,)


def test_dtft_of_delta_is_a_pure_phase():
    grid = uniform_grid(32)
    assert_allclose(dtft_eval(ComplexSeq.delta(2), grid), np.exp(-2j * grid.nodes), atol=1e-14)


def test_parseval_on_midpoint_grid(rng):
    x = rng.normal(size=16) + 1j * rng.normal(size=16)
    grid = uniform_grid(64)
    assert_allclose(weighted_quadrature(np.abs(dtft_eval(x, grid)) ** 2, grid), energy(x), rtol=1e-12)


class TestNoiseModel:
    @pytest.mark.parametrize("rho", [-0.1, 1.0, 1.5])
    def test_rejects_rho_outside_unit_interval(self, rho):
        with pytest.raises(ValidationError):
            NoiseModel(rho)

    def test_white_spectrum_is_flat(self):
        assert_allclose(autocorr_spectrum(NoiseModel(0.0), uniform_grid(16).nodes), 1.0)

    def test_scalar_in_scalar_out(self):
        assert isinstance(autocorr_spectrum(NoiseModel(0.3), 0.2), float)

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_spectrum_integrates_to_autocorrelation(self, k):
        model = NoiseModel(0.5)
        grid = uniform_grid(4096)
        samples = model.spectrum(grid.nodes) * np.exp(1j * k * grid.nodes)
        assert_allclose(weighted_quadrature(samples, grid).real, 0.5**k, atol=1e-12)

    def test_spectrum_is_positive(self):
        assert np.all(autocorr_spectrum(NoiseModel(0.9), uniform_grid(256).nodes) > 0)


def test_quadrature_rejects_length_mismatch():
    with pytest.raises(ValidationError):
        weighted_quadrature(np.ones(3), uniform_grid(4))


def test_geometric_tail_bound_is_exact_for_one_positive_pole():
    explicit = sum(0.5**k for k in range(11, 200))
    assert_allclose(geometric_tail_bound([0.5], 10, [1.0]), explicit, rtol=1e-12)


def test_geometric_tail_bound_rejects_unstable_poles():
    with pytest.raises(ValidationError):
        geometric_tail_bound([1.0], 10)


def test_convolve_causal_truncates_to_input_length():
    y = convolve_causal([1.0, 1.0], [1.0, 2.0, 3.0])
    assert_allclose(y, [1.0, 3.0, 5.0])
    assert convolve_causal([], [1.0, 2.0]).shape == (2,)


class TestWindowGammaMass:
    def test_white_noise_mass_is_proportional_to_width(self):
        assert_allclose(window_gamma_mass(NoiseModel(0.0), 1.0), 1.0 / np.pi, rtol=1e-14)

    def test_full_band_has_unit_mass(self):
        assert_allclose(window_gamma_mass(NoiseModel(0.7), np.pi), 1.0, atol=1e-14)

    def test_matches_quadrature(self):
        model = NoiseModel(0.5)
        assert_allclose(window_gamma_mass(model, 1.0), window_gamma_mass_quadrature(model, 1.0), atol=1e-6)

    def test_rejects_width_beyond_pi(self):
        with pytest.raises(ValidationError):
            window_gamma_mass(NoiseModel(0.1), 4.0)
