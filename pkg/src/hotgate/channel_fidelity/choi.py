"""Two-qubit channels in Choi form and their fidelity with a ZZ rotation.

Convention: C = sum_xy |x><y| ⊗ E(|x><y|), reference system first. The
identity channel has trace 4, and F(E, U) = <Ω_U|C|Ω_U>/16 with
|Ω_U> = sum_x |x> ⊗ U|x>, which equals the overlap of the normalised Choi
states.
"""
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hotgate.channel_fidelity.damping import TARGET_ANGLE, as_gate_time
from hotgate.classical_noise.models import CouplingDistribution
from hotgate.errors import ChannelValidationError

DIM = 4
ZZ_DIAGONAL = np.array([1.0, -1.0, -1.0, 1.0])


def zz_rotation(theta: float) -> np.ndarray:
    """U = e^(-iθ ZZ) on two qubits."""
    return np.diag(np.exp(-1j * theta * ZZ_DIAGONAL))


def _omega(unitary: np.ndarray) -> np.ndarray:
    """|Ω_U> = sum_x |x> ⊗ U|x>, indexed as (x, a)."""
    return np.asarray(unitary, dtype=complex).T.reshape(DIM * DIM)


@dataclass(frozen=True)
class TwoQubitChannel:
    """A validated Choi matrix on two qubits (16 x 16, trace 4)."""

    choi: np.ndarray
    atol: float = 1e-10

    def __post_init__(self):
        choi = np.asarray(self.choi, dtype=complex)
        if choi.shape != (DIM * DIM, DIM * DIM):
            raise ChannelValidationError(f"Choi matrix must be 16x16, got {choi.shape}")
        if np.max(np.abs(choi - choi.conj().T)) > self.atol:
            raise ChannelValidationError("Choi matrix is not Hermitian")
        trace = np.trace(choi).real
        if abs(trace - DIM) > self.atol:
            raise ChannelValidationError(f"Choi matrix has trace {trace:.12f}, expected 4")
        if self.min_eigenvalue(choi) < -self.atol:
            raise ChannelValidationError("channel is not completely positive")
        object.__setattr__(self, "choi", choi)

    @staticmethod
    def min_eigenvalue(choi: np.ndarray) -> float:
        return float(np.min(np.linalg.eigvalsh((choi + choi.conj().T) / 2)))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """E(ρ) = sum_xy ρ_xy E(|x><y|)."""
        blocks = self.choi.reshape(DIM, DIM, DIM, DIM)
        return np.einsum("xy,xayb->ab", np.asarray(rho, dtype=complex), blocks)

    def partial_trace_output(self) -> np.ndarray:
        """tr_out C; the identity for trace-preserving channels."""
        return np.einsum("xaya->xy", self.choi.reshape(DIM, DIM, DIM, DIM))


def choi_fidelity(channel: TwoQubitChannel, target_angle: float = TARGET_ANGLE) -> float:
    """Choi fidelity of a channel with U = e^(-i target_angle ZZ).

    Args:
        channel (TwoQubitChannel): The implemented channel.
        target_angle (float): Rotation angle of the target gate. Defaults to π/4.

    Returns:
        float: <Φ_U|Φ_E|Φ_U> in [0, 1].
    """
    omega = _omega(zz_rotation(target_angle))
    return float(np.real(omega.conj() @ channel.choi @ omega) / DIM**2)


def channel_from_map(
    func: Callable[[np.ndarray], np.ndarray],
    atol: float = 1e-10,
) -> TwoQubitChannel:
    """Choi matrix of a linear map given by its action on 4 x 4 matrices."""
    choi = np.zeros((DIM, DIM, DIM, DIM), dtype=complex)
    for x in range(DIM):
        for y in range(DIM):
            dyad = np.zeros((DIM, DIM), dtype=complex)
            dyad[x, y] = 1.0
            choi[x, :, y, :] = func(dyad)
    return TwoQubitChannel(choi.reshape(DIM * DIM, DIM * DIM), atol=atol)


def kraus_channel(
    operators: Sequence[np.ndarray],
    weights: Optional[Sequence[float]] = None,
) -> TwoQubitChannel:
    """Channel ρ ↦ sum_k w_k K_k ρ K_k†."""
    weights = np.ones(len(operators)) if weights is None else np.asarray(weights, dtype=float)
    vectors = np.array([_omega(op) for op in operators])
    choi = np.einsum("k,ki,kj->ij", weights, vectors, vectors.conj())
    return TwoQubitChannel(choi)


def unitary_channel(unitary: np.ndarray) -> TwoQubitChannel:
    """Conjugation by a two-qubit unitary."""
    return kraus_channel([unitary])


def identity_channel() -> TwoQubitChannel:
    return unitary_channel(np.eye(DIM))


def zz_damping_channel(dist: CouplingDistribution, t: float) -> TwoQubitChannel:
    """Mixture of ZZ rotations by θ_k = μ̄_k Δt with weights w_k."""
    t = as_gate_time(t)
    return kraus_channel([zz_rotation(mu * t) for mu in dist.mu_bar], dist.weights)
