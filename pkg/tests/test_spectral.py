import numpy as np
import pytest

from conftest import (
    FOUR_NODE_A,
    FOUR_NODE_P,
    FOUR_NODE_PAIR_REDUCTIONS,
    GOLDEN,
    random_irreducible_matrix,
)
from etlink.errors import ConfigError, NumericalError
from etlink.spectral import (
    isoradial_reduction,
    sequential_reduction,
    spectral_data,
)


class TestSpectralData:
    def test_stochastic_radius_is_one(self):
        sd = spectral_data(FOUR_NODE_P, stochastic=True)
        assert sd.rho == 1.0
        assert sd.residual <= 1e-10

    def test_golden_ratio_radius(self):
        sd = spectral_data(FOUR_NODE_A)
        assert abs(sd.rho - GOLDEN) < 1e-10

    def test_directed_cycle(self):
        C = np.roll(np.eye(3), 1, axis=1)
        sd = spectral_data(C)
        assert abs(sd.rho - 1.0) < 1e-12
        np.testing.assert_allclose(sd.leading_vector, np.full(3, 1 / 3), atol=1e-12)

    def test_positive_vector_sums_to_one(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            M = random_irreducible_matrix(rng, int(rng.integers(2, 25)))
            sd = spectral_data(M)
            assert np.all(sd.leading_vector > 0)
            assert abs(sd.leading_vector.sum() - 1.0) <= 1e-12
            assert sd.residual <= 1e-10

    def test_rejects_empty(self):
        with pytest.raises(ConfigError):
            spectral_data(np.zeros((0, 0)))


class TestIsoradialReduction:
    @pytest.mark.parametrize("pair", sorted(FOUR_NODE_PAIR_REDUCTIONS))
    def test_four_node_pair_reductions(self, pair):
        red = isoradial_reduction(FOUR_NODE_P, pair, 1.0)
        np.testing.assert_allclose(
            red.entries, FOUR_NODE_PAIR_REDUCTIONS[pair], atol=1e-12
        )

    def test_full_subset_returns_matrix(self):
        red = isoradial_reduction(FOUR_NODE_P, (0, 1, 2, 3), 1.0)
        np.testing.assert_array_equal(red.entries, FOUR_NODE_P)

    def test_rejects_empty_subset(self):
        with pytest.raises(ConfigError):
            isoradial_reduction(FOUR_NODE_P, (), 1.0)

    def test_singular_shift_guarded(self):
        # Shifting by an eigenvalue of the complement block makes it singular.
        M = np.array([[1.0, 1, 0], [1, 1, 0], [0, 1, 0]])
        with pytest.raises(NumericalError):
            isoradial_reduction(M, (2,), 2.0)

    def test_radius_preserved_200_random(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            n = int(rng.integers(3, 31))
            M = random_irreducible_matrix(rng, n)
            sd = spectral_data(M)
            k = int(rng.integers(1, n))
            subset = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
            red = isoradial_reduction(M, subset, sd.rho)
            assert np.all(red.entries >= -1e-12)
            rho_red = spectral_data(np.maximum(red.entries, 0.0)).rho
            assert abs(rho_red - sd.rho) <= 1e-8

    def test_leading_vector_projection(self):
        rng = np.random.default_rng(18)
        for _ in range(60):
            n = int(rng.integers(3, 25))
            M = random_irreducible_matrix(rng, n)
            sd = spectral_data(M)
            k = int(rng.integers(1, n))
            subset = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
            red = isoradial_reduction(M, subset, sd.rho)
            v_s = sd.leading_vector[list(subset)]
            np.testing.assert_allclose(
                red.entries @ v_s, sd.rho * v_s, atol=1e-8
            )


class TestSequentialReduction:
    def test_chain_matches_direct_on_four_node_example(self):
        seq = sequential_reduction(FOUR_NODE_P, [(0, 1, 2), (0, 1)], rho=1.0)
        np.testing.assert_allclose(
            seq.entries, FOUR_NODE_PAIR_REDUCTIONS[(0, 1)], atol=1e-12
        )

    def test_single_step_chain_is_direct(self):
        rng = np.random.default_rng(19)
        M = random_irreducible_matrix(rng, 7)
        rho = spectral_data(M).rho
        direct = isoradial_reduction(M, (1, 4), rho)
        seq = sequential_reduction(M, [(1, 4)], rho=rho)
        np.testing.assert_allclose(seq.entries, direct.entries, atol=1e-12)

    def test_path_independence_random(self):
        rng = np.random.default_rng(20)
        for _ in range(40):
            M = random_irreducible_matrix(rng, 6)
            rho = spectral_data(M).rho
            a = sequential_reduction(M, [(0, 1, 2, 3), (0, 3)], rho=rho)
            b = sequential_reduction(M, [(0, 3, 4, 5), (0, 3)], rho=rho)
            assert np.max(np.abs(a.entries - b.entries)) <= 1e-10

    def test_rejects_non_nested_chain(self):
        with pytest.raises(ConfigError):
            sequential_reduction(FOUR_NODE_P, [(0, 1), (0, 2)], rho=1.0)
