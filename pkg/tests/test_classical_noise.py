import tracemalloc
from itertools import product

import numpy as np
import pytest

from hotgate.channel_fidelity import zz_damping_fidelity
from hotgate.classical_noise import (
    CouplingDistribution,
    CouplingEnsemble,
    IndependentDiscreteModel,
    IndependentEnsemble,
    build_ensemble,
    cold_mediator_chain,
    collective_chains,
    converged_order,
    distribution_cold_mediator,
    distribution_collective,
    distribution_independent,
    independent_chains,
    independent_ensemble,
    monte_carlo_estimate,
    sample_coupling,
)
from hotgate.classical_noise.quadrature import gauss_hermite_normal, gaussian_grid, max_order
from hotgate.errors import ConfigError, DomainError, NumericError, SizeError
from hotgate.geometry import CouplingLaw, ModuleLayout, pairwise_coupling
from hotgate.utils_for_testing import random_collective_model


def test_gauss_hermite_moments():
    """Weights sum to one and reproduce the standard-normal moments."""
    t, w = gauss_hermite_normal(10)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.dot(w, t) == pytest.approx(0.0, abs=1e-14)
    assert np.dot(w, t**2) == pytest.approx(1.0, abs=1e-12)
    assert np.dot(w, t**4) == pytest.approx(3.0, abs=1e-12)
    with pytest.raises(ConfigError):
        gauss_hermite_normal(0)


def test_gaussian_grid_collapses_zero_std():
    """An axis with σ = 0 contributes a single node at its mean."""
    nodes, weights = gaussian_grid(8, means=[1.0, 2.0], stds=[0.5, 0.0])
    assert nodes.shape == (8, 2)
    np.testing.assert_allclose(nodes[:, 1], 2.0)
    assert weights.sum() == pytest.approx(1.0, abs=1e-14)


def test_distribution_validation():
    """Unnormalised or non-positive weights are numeric errors."""
    with pytest.raises(NumericError):
        CouplingDistribution([0.1, 0.2], [0.5, 0.6])
    with pytest.raises(NumericError):
        CouplingDistribution([0.1, 0.2], [1.5, -0.5])
    dist = CouplingDistribution([1.0, 3.0], [0.5, 0.5])
    assert dist.mean() == pytest.approx(2.0)
    assert dist.variance() == pytest.approx(1.0)


def test_ensemble_drops_zero_weights():
    ensemble = CouplingEnsemble([0.5, 0.0, 0.5], np.ones((3, 2, 1)))
    assert len(ensemble) == 2
    assert (ensemble.n_a, ensemble.n_b) == (2, 1)


def test_cold_mediator_without_noise(unit_law):
    """σ = 0 leaves one node at the mediator's mean position."""
    model = cold_mediator_chain(3, dx=1.0, dy=1.0, sigma=0.0)
    dist = distribution_cold_mediator(model, [1.0, -0.5, 0.25], 1.0, unit_law)
    assert len(dist) == 1
    center = np.array([1.0, 1.0])
    expected = sum(
        a * pairwise_coupling(unit_law, (float(i), 0.0), center)
        for i, a in enumerate([1.0, -0.5, 0.25])
    )
    assert dist.mu_bar[0] == pytest.approx(expected, abs=1e-14)


def _trivial_fidelity(ensemble, t: float) -> float:
    return zz_damping_fidelity(ensemble.distribution(np.ones(ensemble.n_a), np.ones(ensemble.n_b)), t)


@pytest.mark.parametrize(
    "model, dt_max",
    [
        (cold_mediator_chain(4, dx=1.0, dy=1.0, sigma=3.0), 2.0),
        (collective_chains(4, 4, dx=1.0, dy=1.0, sigma=3.0), 1.0),
    ],
)
def test_quadrature_order_doubling(model, dt_max, unit_law):
    """At the gated order, doubling again moves the fidelity by less than 1e-8 on the whole grid."""
    grid = np.geomspace(0.01, dt_max, 25)
    order = converged_order(model, unit_law, grid)
    assert order < max_order(1)
    coarse = build_ensemble(model, unit_law, order)
    fine = build_ensemble(model, unit_law, 2 * order)
    for t in grid:
        assert abs(_trivial_fidelity(coarse, t) - _trivial_fidelity(fine, t)) < 1e-8


def test_doubling_gate_rejects_discrete_model(unit_law):
    with pytest.raises(ConfigError):
        converged_order(independent_chains(1, 1), unit_law, [1.0])


def test_cold_mediator_quadrature_matches_sampling(unit_law):
    """Fig. 2(c) geometry: quadrature fidelity agrees with Monte Carlo within four standard errors."""
    model = cold_mediator_chain(4, dx=1.0, dy=1.0, sigma=3.0)
    grid = (0.5, 2.0)
    ensemble = build_ensemble(model, unit_law, converged_order(model, unit_law, grid))
    samples = sample_coupling(model, np.ones(4), [1.0], unit_law, rng_seed=7, n=200_000)
    for t in grid:
        mean, stderr = monte_carlo_estimate(samples, lambda mu: np.cos(np.pi / 4 - mu * t) ** 2)
        assert abs(_trivial_fidelity(ensemble, t) - mean) < 4 * stderr


def test_collective_chains_quadrature_matches_sampling(unit_law):
    """Fig. 2(f) geometry: quadrature fidelity agrees with 10^6 draws."""
    model = collective_chains(4, 4, dx=1.0, dy=1.0, sigma=3.0)
    grid = (0.1, 0.5, 1.0)
    ensemble = build_ensemble(model, unit_law, converged_order(model, unit_law, grid))
    samples = sample_coupling(model, np.ones(4), np.ones(4), unit_law, rng_seed=5, n=1_000_000)
    for t in grid:
        mean, stderr = monte_carlo_estimate(samples, lambda mu: np.cos(np.pi / 4 - mu * t) ** 2)
        assert abs(_trivial_fidelity(ensemble, t) - mean) < 4 * stderr


def test_independent_enumeration_matches_sampling(unit_law):
    """Fig. 4(b) geometry: exact enumeration agrees with 10^6 draws."""
    model = independent_chains(2, 2, dx=2.0, dy=4.0, delta_y=1.0)
    ensemble = build_ensemble(model, unit_law)
    samples = sample_coupling(model, np.ones(2), np.ones(2), unit_law, rng_seed=13, n=1_000_000)
    for t in (0.5, 2.0, 10.0):
        mean, stderr = monte_carlo_estimate(samples, lambda mu: np.cos(np.pi / 4 - mu * t) ** 2)
        assert abs(_trivial_fidelity(ensemble, t) - mean) < 4 * stderr



def test_collective_quadrature_matches_sampling(rng, unit_law):
    """Mean coupling under collective noise agrees with Monte Carlo."""
    model = random_collective_model(rng)
    a = rng.uniform(-1, 1, size=len(model.layoutA))
    b = rng.uniform(-1, 1, size=len(model.layoutB))
    dist = distribution_collective(model, a, b, unit_law)
    samples = sample_coupling(model, a, b, unit_law, rng_seed=3, n=200_000)
    mean, stderr = monte_carlo_estimate(samples)
    assert abs(dist.mean() - mean) < 4 * stderr + 1e-3


def test_sampling_is_reproducible(unit_law):
    """Identical seeds give identical draws regardless of the thread count."""
    model = collective_chains(2, 2, sigma=1.0)
    first = sample_coupling(model, [1, 1], [1, -1], unit_law, rng_seed=11, n=70_000, threads=1)
    second = sample_coupling(model, [1, 1], [1, -1], unit_law, rng_seed=11, n=70_000, threads=4)
    np.testing.assert_array_equal(first, second)
    shown = sample_coupling(model, [1, 1], [1, -1], unit_law, rng_seed=11, n=70_000, progress=True)
    np.testing.assert_array_equal(first, shown)
    with pytest.raises(ConfigError):
        sample_coupling(model, [1, 1], [1, -1], unit_law, rng_seed=11, n=0)


def test_standard_error_needs_two_samples():
    with pytest.raises(ConfigError):
        monte_carlo_estimate(np.array([0.3]))
    mean, stderr = monte_carlo_estimate(np.array([1.0, 3.0]))
    assert mean == pytest.approx(2.0)
    assert stderr == pytest.approx(1.0)


def test_independent_enumeration_is_exact(unit_law):
    """Enumerated weights sum to one and the mean matches a direct sum."""
    model = independent_chains(1, 1, dx=2.0, dy=4.0, delta_y=1.0)
    dist = distribution_independent(model, [1.0], [1.0], unit_law)
    assert len(dist) == 9
    assert dist.weights.sum() == pytest.approx(1.0, abs=1e-12)
    steps, probs = (-1.0, 0.0, 1.0), (0.25, 0.5, 0.25)
    expected = sum(
        pa * pb * 1.0 / abs(4.0 + da - db)
        for da, pa in zip(steps, probs)
        for db, pb in zip(steps, probs)
    )
    assert dist.mean() == pytest.approx(expected, abs=1e-14)


def test_independent_ensemble_matches_brute_force(rng):
    """Every configuration's weight and μ̄ agree with a direct loop over the displacements."""
    law = CouplingLaw(J=1.0, gamma=3)
    model = independent_chains(2, 2)
    a, b = rng.uniform(-1, 1, size=2), rng.uniform(-1, 1, size=2)
    ensemble = independent_ensemble(model, law)
    posA, posB = model.layoutA.positions, model.layoutB.positions
    expected_mu, expected_weights = [], []
    for choice in product(range(model.kappa), repeat=4):
        shiftedA = posA + model.offsets[list(choice[:2])]
        shiftedB = posB + model.offsets[list(choice[2:])]
        expected_mu.append(
            sum(a[i] * b[j] * pairwise_coupling(law, shiftedA[i], shiftedB[j]) for i in range(2) for j in range(2))
        )
        expected_weights.append(np.prod(model.probabilities[list(choice)]))
    dist = ensemble.distribution(a, b)
    np.testing.assert_allclose(dist.mu_bar, expected_mu, atol=1e-14)
    np.testing.assert_allclose(dist.weights, expected_weights, atol=1e-16)

    small_chunks = IndependentEnsemble(model, ensemble.table, chunk_size=7)
    np.testing.assert_array_equal(small_chunks.mu_bar(a, b), dist.mu_bar)
    np.testing.assert_allclose(ensemble.mean_matrix(), np.einsum("k,kij->ij", dist.weights, _matrices(model, law)))


def _matrices(model: IndependentDiscreteModel, law: CouplingLaw) -> np.ndarray:
    """Coupling matrix of every configuration, in enumeration order."""
    n_a = len(model.layoutA)
    config = model.configurations(np.arange(model.n_configurations))
    posA = model.layoutA.positions + model.offsets[config[:, :n_a]]
    posB = model.layoutB.positions + model.offsets[config[:, n_a:]]
    return law(np.linalg.norm(posA[:, :, None, :] - posB[:, None, :, :], axis=-1))


def test_large_independent_ensemble_keeps_table_only(unit_law):
    """3^12 configurations are evaluated without materialising their coupling matrices."""
    model = independent_chains(6, 6)
    ensemble = independent_ensemble(model, unit_law)
    assert len(ensemble) == 3**12
    assert ensemble.table.shape == (6, 6, 3, 3)
    assert not hasattr(ensemble, "matrices")

    full_tensor_bytes = 3**12 * 6 * 6 * 8
    tracemalloc.start()
    try:
        mu = ensemble.mu_bar(np.ones(6), np.ones(6))
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert peak < full_tensor_bytes / 3
    assert np.dot(ensemble.weights, mu) == pytest.approx(ensemble.mean_matrix().sum(), rel=1e-12)


def test_independent_model_permutation_invariance(rng):
    """Reordering the qubits of each module, and a, b with them, leaves every expectation unchanged."""
    law = CouplingLaw(J=1.0, gamma=3)
    model = independent_chains(3, 2)
    permA, permB = [2, 0, 1], [1, 0]
    permuted = IndependentDiscreteModel(
        ModuleLayout(model.layoutA.positions[permA]),
        ModuleLayout(model.layoutB.positions[permB]),
        model.displacements,
    )
    a, b = rng.uniform(-1, 1, size=3), rng.uniform(-1, 1, size=2)
    dist = distribution_independent(model, a, b, law)
    other = distribution_independent(permuted, a[permA], b[permB], law)
    assert len(other) == len(dist)
    assert other.mean() == pytest.approx(dist.mean(), abs=1e-14)
    assert other.variance() == pytest.approx(dist.variance(), abs=1e-14)
    for t in (0.5, 3.0, 20.0):
        assert zz_damping_fidelity(other, t) == pytest.approx(zz_damping_fidelity(dist, t), abs=1e-13)
    order = np.lexsort((dist.weights, dist.mu_bar))
    other_order = np.lexsort((other.weights, other.mu_bar))
    np.testing.assert_allclose(other.mu_bar[other_order], dist.mu_bar[order], atol=1e-14)



def test_independent_limits(unit_law):
    """Overlapping displacements and oversized enumerations are rejected."""
    with pytest.raises(DomainError):
        distribution_independent(independent_chains(1, 1, dy=1.0, delta_y=0.5), [1], [1], unit_law)
    with pytest.raises(SizeError):
        build_ensemble(independent_chains(6, 6), unit_law, enumeration_cap=1000)


def test_negative_sigma_rejected():
    with pytest.raises(ConfigError):
        cold_mediator_chain(2, sigma=-1.0)
