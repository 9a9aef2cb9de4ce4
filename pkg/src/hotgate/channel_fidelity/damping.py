"""Fidelity of the ZZ-damping channel and of the mediated gate."""
import numpy as np

from hotgate.classical_noise.models import CouplingDistribution
from hotgate.errors import ConfigError

TARGET_ANGLE = np.pi / 4


def as_gate_time(t: float) -> float:
    """Validate an interaction time Δt (finite, non-negative)."""
    t = float(t)
    if not np.isfinite(t) or t < 0:
        raise ConfigError(f"gate time must be finite and non-negative, got {t}", key="delta_t")
    return t


def zz_damping_fidelity(dist: CouplingDistribution, t: float) -> float:
    """F = sum_k w_k cos²(π/4 - μ̄_k Δt).

    Args:
        dist (CouplingDistribution): Distribution of the logical coupling.
        t (float): Interaction time Δt.

    Returns:
        float: Choi fidelity with e^(-iπ/4 ZZ), in [0, 1].
    """
    t = as_gate_time(t)
    fidelity = dist.expectation(lambda mu: np.cos(TARGET_ANGLE - mu * t) ** 2)
    return float(np.clip(fidelity, 0.0, 1.0))


def mediated_fidelity(
    dist1: CouplingDistribution,
    dist2: CouplingDistribution,
    t: float,
) -> float:
    """Fidelity of a gate mediated by a cold qubit: F = F₂·F₃."""
    return zz_damping_fidelity(dist1, t) * zz_damping_fidelity(dist2, t)
