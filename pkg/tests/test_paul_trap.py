import numpy as np
import pytest
from numpy.polynomial.hermite import hermval
from scipy.integrate import dblquad, quad
from scipy.special import factorial

from hotgate.channel_fidelity import zz_damping_fidelity
from hotgate.classical_noise import CouplingDistribution
from hotgate.encoding_optimizer import OptimizationConfig, infidelity_curve, log_grid
from hotgate.errors import ConfigError, SizeError
from hotgate.geometry import CouplingLaw
from hotgate.paul_trap import (
    TrapPairConfig,
    TrapSpec,
    diagonal_mode_coupling,
    equilibrium_positions,
    exact_mode_fidelity,
    level_quadrature,
    mode_coupling_ensemble,
    mode_decomposition,
    nondegenerate_fidelity,
    normalized_hermite,
    oscillator_wavefunction,
    partition_function,
    self_mode_couplings,
    thermal_truncation,
)


def _twin(omega_b=0.73, dy=5.0, J=1.0):
    return TrapPairConfig.twin_traps(1, 1, 1.0, omega_b, 1.0, dy, law=CouplingLaw(J=J, gamma=3))


# (setting, T, epsilon, late Δt) of the three thermal Paul trap figures
FIG6_PRESETS = {
    "single_split": (TrapPairConfig.single_trap(4, 1.0, 4.78), 1.3, 0.07, 1e4),
    "cold_mediator": (TrapPairConfig.cold_mediator(2, 1.0, 0.01, 15.97, 20.0), 0.1, 0.05, 1e5),
    "twin_traps": (TrapPairConfig.twin_traps(2, 2, 1.0, 1 / 3, 8.31, 2.0), 0.2, 0.01, 1e3),
}


def test_equilibrium_closed_forms():
    """Two and three ions sit at known dimensionless positions."""
    np.testing.assert_allclose(equilibrium_positions(2), [-(2 ** (-2 / 3)), 2 ** (-2 / 3)], atol=1e-10)
    np.testing.assert_allclose(equilibrium_positions(3), [-(1.25 ** (1 / 3)), 0.0, 1.25 ** (1 / 3)], atol=1e-10)
    np.testing.assert_allclose(equilibrium_positions(1), [0.0])


def test_equilibrium_is_symmetric():
    for K in range(2, 13):
        x = equilibrium_positions(K)
        assert np.all(np.diff(x) > 0)
        np.testing.assert_allclose(x, -x[::-1], atol=1e-12)


def test_three_ion_modes():
    """Eigenvalues 1, 3 and 29/5 with the centre-of-mass, stretch and scissor vectors."""
    modes = mode_decomposition(TrapSpec(3, omega=2.0, length_scale=5.0))
    np.testing.assert_allclose(modes.lambdas, [1.0, 3.0, 29 / 5], atol=1e-10)
    np.testing.assert_allclose(modes.frequencies, 2.0 * np.sqrt([1.0, 3.0, 29 / 5]), atol=1e-10)
    expected = np.array([[1, 1, 1] / np.sqrt(3), [1, 0, -1] / np.sqrt(2), [1, -2, 1] / np.sqrt(6)]).T
    np.testing.assert_allclose(modes.mode_vectors, expected, atol=1e-10)
    np.testing.assert_allclose(modes.equilibrium, 5.0 * equilibrium_positions(3))
    np.testing.assert_allclose(modes.positions(np.zeros(3)), modes.equilibrium)


def test_trap_spec_limits():
    with pytest.raises(ConfigError):
        TrapSpec(13, 1.0, 1.0)
    with pytest.raises(ConfigError):
        TrapSpec(2, -1.0, 1.0)


def test_normalized_hermite_matches_closed_form():
    """The recurrence reproduces H_n / sqrt(2^n n! sqrt(π))."""
    xi = np.linspace(-3, 3, 11)
    values = normalized_hermite(8, xi)
    for n in range(9):
        coefficients = np.zeros(n + 1)
        coefficients[n] = 1.0
        expected = hermval(xi, coefficients) / np.sqrt(2.0**n * factorial(n) * np.sqrt(np.pi))
        np.testing.assert_allclose(values[n], expected, rtol=1e-12, atol=1e-12)


def test_level_quadrature_is_orthonormal():
    """Gauss–Hermite weights integrate <n|n> = 1."""
    _, W = level_quadrature(10, 30)
    np.testing.assert_allclose(W.sum(axis=1), 1.0, atol=1e-12)


def test_wavefunction_normalised():
    value, _ = quad(lambda u: oscillator_wavefunction(3, 0.7, u) ** 2, -np.inf, np.inf)
    assert value == pytest.approx(1.0, abs=1e-10)


def test_thermal_single_mode():
    """At T = ν and ε = 0.05 three levels carry enough mass."""
    modes = mode_decomposition(TrapSpec(1, 1.0, 1.0))
    truncation = thermal_truncation(modes, T=1.0, epsilon=0.05)
    assert [s[0] for s in truncation.states] == [(0,), (1,), (2,)]
    assert truncation.retained_mass >= 0.95
    assert truncation.probabilities.sum() == pytest.approx(1.0, abs=1e-15)
    cold = thermal_truncation(modes, T=1e-6, epsilon=0.05)
    assert len(cold) == 1


def test_partition_function_single_mode():
    levels = np.arange(200)
    assert partition_function([1.5], 0.8) == pytest.approx(np.sum(np.exp(-(levels + 0.5) * 1.5 / 0.8)), rel=1e-12)


def test_thermal_truncation_cap():
    modes = mode_decomposition(TrapSpec(4, 1.0, 4.78))
    truncation = thermal_truncation(modes, T=1.3, epsilon=0.07)
    assert truncation.retained_mass >= 0.93
    assert np.all(np.diff(truncation.energies) >= 0)
    with pytest.raises(SizeError):
        thermal_truncation(modes, T=1.3, epsilon=0.07, cap=5)


def test_trap_pair_config():
    """A split trap gives ⌈K/2⌉ ions to A and the rest to B."""
    config = TrapPairConfig.single_trap(5, 1.0, 3.0)
    assert (config.n_a, config.n_b) == (3, 2)
    posA, posB = config.ion_positions(np.zeros(5))
    assert posA.shape == (1, 3, 2) and posB.shape == (1, 2, 2)
    with pytest.raises(ConfigError):
        TrapPairConfig.single_trap(1, 1.0, 3.0)
    with pytest.raises(ConfigError):
        TrapPairConfig("twin_traps", TrapSpec(1, 1.0, 1.0), TrapSpec(1, 1.0, 2.0), dy=1.0)


def test_stiff_trap_limit():
    """Ground-state coupling tends to the classical value for very stiff traps."""
    config = TrapPairConfig.twin_traps(1, 1, 1e6, 1e6, 1.0, 2.0)
    assert diagonal_mode_coupling(config, None, [0, 0]) == pytest.approx(1 / 8, abs=1e-6)
    assert diagonal_mode_coupling(config.with_encoding([0.0], [1.0]), None, [0, 0]) == 0.0


def test_diagonal_coupling_against_direct_integration():
    """Quadrature over both modes agrees with adaptive integration."""
    config = _twin()
    value = diagonal_mode_coupling(config, None, [1, 2])
    density = lambda y, x: (  # noqa: E731
        oscillator_wavefunction(1, 1.0, x) ** 2
        * oscillator_wavefunction(2, 0.73, y) ** 2
        / ((x - y) ** 2 + 25.0) ** 1.5
    )
    expected, _ = dblquad(density, -12, 12, -12, 12, epsabs=1e-13, epsrel=1e-11)
    assert value == pytest.approx(expected, abs=1e-9)
    assert diagonal_mode_coupling(config, None, [1, 2], order=40) == pytest.approx(value, abs=1e-7)


def test_zero_temperature_limit():
    """Only the ground state survives, so the fidelity is that of its coupling."""
    config = _twin()
    ground = diagonal_mode_coupling(config, None, [0, 0])
    expected = zz_damping_fidelity(CouplingDistribution.delta(ground), 3.0)
    assert nondegenerate_fidelity(config, 1e-3, 0.01, 3.0) == pytest.approx(expected, abs=1e-12)
    assert nondegenerate_fidelity(config, 0.5, 0.01, 0.0) == pytest.approx(0.5, abs=1e-14)


def test_self_interaction_phases_cancel():
    """Self-interaction terms do not change the fidelity."""
    config = TrapPairConfig.twin_traps(2, 2, 1.0, 1 / 3, 8.31, 2.0)
    without = nondegenerate_fidelity(config, 0.2, 0.05, 5.0)
    with_self = nondegenerate_fidelity(config, 0.2, 0.05, 5.0, include_self_interaction=True)
    assert with_self == pytest.approx(without, abs=1e-12)


def test_exact_evolution_agrees_with_rotating_wave():
    """A weakly coupled pair of single ions matches the nondegenerate result."""
    config = _twin(J=0.05)
    for t in (500.0, 2000.0, 8000.0):
        exact = exact_mode_fidelity(config, 0.3, 1e-6, t, levels=5)
        approx = nondegenerate_fidelity(config, 0.3, 1e-6, t)
        assert exact == pytest.approx(approx, abs=1e-3)


def test_ensemble_nodes_match_single_states():
    """Every node of the thermal ensemble is the diagonal coupling of its state."""
    config = _twin()
    truncation = thermal_truncation(config.modes(), T=0.8, epsilon=0.05)
    dist = mode_coupling_ensemble(config, truncation).distribution(config.a, config.b)
    np.testing.assert_allclose(dist.weights, truncation.probabilities)
    for occupation, mu in zip(truncation.occupations, dist.mu_bar):
        assert mu == pytest.approx(diagonal_mode_coupling(config, None, occupation), abs=1e-8)
    mu_a, mu_b = self_mode_couplings(config, truncation)
    np.testing.assert_array_equal(mu_a, np.zeros(len(truncation)))
    np.testing.assert_array_equal(mu_b, np.zeros(len(truncation)))


@pytest.mark.parametrize("name", sorted(FIG6_PRESETS))
def test_mode_quadrature_order_doubling(name):
    """Doubling the extra nodes per mode moves every thermal coupling by less than 1e-7."""
    config, T, epsilon, _ = FIG6_PRESETS[name]
    truncation = thermal_truncation(config.modes(), T=T, epsilon=epsilon)
    coarse = mode_coupling_ensemble(config, truncation, order=20)
    fine = mode_coupling_ensemble(config, truncation, order=40, grid_cap=5 * 10**6)
    np.testing.assert_allclose(
        fine.distribution(config.a, config.b).mu_bar,
        coarse.distribution(config.a, config.b).mu_bar,
        rtol=0,
        atol=1e-7,
    )


@pytest.mark.parametrize("name", sorted(FIG6_PRESETS))
def test_self_interaction_is_irrelevant_on_trap_settings(name):
    """Carrying the self-interaction phases changes no fidelity of the thermal Paul trap settings."""
    config, T, epsilon, late = FIG6_PRESETS[name]
    for t in (0.1 * late, late):
        without = nondegenerate_fidelity(config, T, epsilon, t)
        with_self = nondegenerate_fidelity(config, T, epsilon, t, include_self_interaction=True)
        assert with_self == pytest.approx(without, abs=1e-12)


def test_cold_mediator_trap_infidelity_falls_with_chain_length():
    """With one cold mediator ion, the late optimised infidelity drops as N_A grows from 1 to 3."""
    config = OptimizationConfig(dt_grid=log_grid(10.0, 1e5, 16))
    late = []
    for n_a in (1, 2, 3):
        trap = TrapPairConfig.cold_mediator(n_a, 1.0, 0.01, 15.97, 20.0, law=CouplingLaw(J=1.0, gamma=3))
        truncation = thermal_truncation(trap.modes(), T=0.1, epsilon=0.05)
        curve = infidelity_curve(mode_coupling_ensemble(trap, truncation), config, progress=False)
        late.append(1.0 - curve.fidelity[-1])
    assert late[0] > late[1] > late[2]
