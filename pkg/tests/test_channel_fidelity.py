import numpy as np
import pytest

from hotgate.channel_fidelity import (
    EchoSpec,
    TwoQubitChannel,
    choi_fidelity,
    echo_residual,
    flip_schedule_propagator,
    fractional_flip_schedule,
    identity_channel,
    mediated_fidelity,
    mediated_kraus,
    mediated_sequence_channel,
    unitary_channel,
    zz_damping_channel,
    zz_damping_fidelity,
    zz_rotation,
)
from hotgate.channel_fidelity.echo import spins
from hotgate.classical_noise import CouplingDistribution
from hotgate.errors import ChannelValidationError, ConfigError, SizeError
from hotgate.utils_for_testing import random_distribution, random_symmetric


def test_identity_and_target_fidelity():
    """Doing nothing scores 1/2; the target rotation scores 1."""
    assert choi_fidelity(identity_channel()) == pytest.approx(0.5, abs=1e-14)
    assert choi_fidelity(unitary_channel(zz_rotation(np.pi / 4))) == pytest.approx(1.0, abs=1e-14)


def test_closed_form_limits():
    """A single node at μ̄Δt = π/4 is perfect and Δt = 0 gives 1/2."""
    dist = CouplingDistribution.delta(0.5)
    assert zz_damping_fidelity(dist, np.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert zz_damping_fidelity(dist, 0.0) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ConfigError):
        zz_damping_fidelity(dist, -1.0)


def test_choi_matches_closed_form(rng):
    """The Choi fidelity of the damping channel equals the weighted cos² sum."""
    for _ in range(50):
        dist = random_distribution(rng)
        t = float(rng.uniform(0.0, 3.0))
        channel = zz_damping_channel(dist, t)
        assert choi_fidelity(channel) == pytest.approx(zz_damping_fidelity(dist, t), abs=1e-12)


def test_damping_channel_is_valid(rng):
    """Trace preserving with a positive Choi matrix."""
    channel = zz_damping_channel(random_distribution(rng, n_nodes=5), 1.3)
    np.testing.assert_allclose(channel.partial_trace_output(), np.eye(4), atol=1e-12)
    assert channel.min_eigenvalue(channel.choi) > -1e-12
    rho = np.eye(4) / 4
    np.testing.assert_allclose(channel.apply(rho), rho, atol=1e-14)


def test_identity_channel_acts_trivially(rng):
    raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = raw @ raw.conj().T
    rho /= np.trace(rho)
    np.testing.assert_allclose(identity_channel().apply(rho), rho, atol=1e-14)


def test_invalid_choi_rejected():
    with pytest.raises(ChannelValidationError):
        TwoQubitChannel(np.eye(16))
    with pytest.raises(ChannelValidationError):
        TwoQubitChannel(np.eye(8))


def test_mediated_kraus_complete(rng):
    """The two outcomes form a trace-preserving pair."""
    alpha, beta = rng.uniform(-2, 2, size=2)
    total = sum(k.conj().T @ k for k in mediated_kraus(alpha, beta))
    np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


def test_mediated_product_rule(rng):
    """The simulated mediated sequence has fidelity F₂·F₃."""
    for _ in range(20):
        dist1 = random_distribution(rng, n_nodes=int(rng.integers(1, 4)))
        dist2 = random_distribution(rng, n_nodes=int(rng.integers(1, 4)))
        t = float(rng.uniform(0.0, 2.0))
        channel = mediated_sequence_channel(dist1, dist2, t)
        assert choi_fidelity(channel) == pytest.approx(mediated_fidelity(dist1, dist2, t), abs=1e-12)


def test_echo_cancels_background(rng):
    """A collective flip at τ/2 and τ removes the fields and keeps the couplings."""
    for _ in range(20):
        K = int(rng.integers(2, 7))
        hzz = random_symmetric(rng, K)
        fields = rng.normal(size=K)
        for tau in (0.1, 1.0, np.pi):
            assert echo_residual(EchoSpec(fields, tau), hzz, K) < 1e-10


def test_echo_limits():
    with pytest.raises(SizeError):
        echo_residual(EchoSpec(np.zeros(7), 1.0), np.zeros((7, 7)), 7)
    with pytest.raises(ConfigError):
        echo_residual(EchoSpec(np.zeros(3), 1.0), np.zeros((2, 2)), 2)
    with pytest.raises(ConfigError):
        EchoSpec((1.0,), 0.0)


def test_fractional_flips_scale_fields(rng):
    """Flipping qubit i at τ(1 + v_i)/2 scales its field by v_i."""
    K, tau = 3, 0.7
    fields = rng.normal(size=K)
    v = rng.uniform(-1, 1, size=K)
    schedule = fractional_flip_schedule(v, tau)
    assert len(schedule) == 2 * K
    propagator = flip_schedule_propagator(schedule, np.zeros((K, K)), fields, tau)
    expected = np.diag(np.exp(-1j * tau * (spins(K) @ (v * fields))))
    np.testing.assert_allclose(propagator, expected, atol=1e-12)
