"""Brute-force simulation of the gate mediated by a cold auxiliary qubit.

Qubit 0 is the mediator, qubits 1 and 2 carry the data. The mediator starts
in |+>, interacts with each data qubit through a noisy ZZ rotation, is
rotated back and measured; the outcome decides a Z₁Z₂ correction. Averaging
over both coupling distributions gives the effective two-qubit channel.
"""
from functools import reduce

import numpy as np
from scipy.linalg import expm

from hotgate.channel_fidelity.choi import TwoQubitChannel, kraus_channel
from hotgate.channel_fidelity.damping import as_gate_time
from hotgate.classical_noise.models import CouplingDistribution

I2 = np.eye(2)
X = np.array([[0.0, 1.0], [1.0, 0.0]])
Z = np.diag([1.0, -1.0])
PLUS = np.array([1.0, 1.0]) / np.sqrt(2)


def _on(op: np.ndarray, qubit: int, n_qubits: int = 3) -> np.ndarray:
    return reduce(np.kron, [op if k == qubit else I2 for k in range(n_qubits)])


def mediated_kraus(alpha: float, beta: float) -> list[np.ndarray]:
    """Kraus operators on the data qubits for fixed interaction angles.

    Args:
        alpha (float): Angle of e^(-iα Z₀Z₁).
        beta (float): Angle of e^(-iβ Z₀Z₂).

    Returns:
        list[np.ndarray]: One 4 x 4 operator per measurement outcome, correction included.
    """
    Z0, Z1, Z2 = (_on(Z, k) for k in range(3))
    X0 = _on(X, 0)
    sequence = [
        expm(-1j * alpha * Z0 @ Z1),
        expm(-1j * beta * Z0 @ Z2),
        expm(1j * np.pi / 4 * (2 * Z0 + Z1 + Z2)),
        expm(-1j * np.pi / 4 * X0),
    ]
    unitary = reduce(lambda acc, step: step @ acc, sequence)
    prepare = np.kron(PLUS[:, None], np.eye(4))
    correction = np.kron(Z, Z)

    operators = []
    for outcome in (0, 1):
        project = np.kron(np.eye(2)[outcome][None, :], np.eye(4))
        kraus = project @ unitary @ prepare
        operators.append(correction @ kraus if outcome else kraus)
    return operators


def mediated_sequence_channel(
    dist1: CouplingDistribution,
    dist2: CouplingDistribution,
    t: float,
) -> TwoQubitChannel:
    """Two-qubit channel of the full mediated sequence.

    Args:
        dist1 (CouplingDistribution): Coupling between mediator and data qubit 1.
        dist2 (CouplingDistribution): Coupling between mediator and data qubit 2.
        t (float): Interaction time Δt of both rotations.

    Returns:
        TwoQubitChannel: The averaged channel on qubits 1 and 2.
    """
    t = as_gate_time(t)
    operators, weights = [], []
    for mu1, w1 in dist1.nodes:
        for mu2, w2 in dist2.nodes:
            for kraus in mediated_kraus(mu1 * t, mu2 * t):
                operators.append(kraus)
                weights.append(w1 * w2)
    return kraus_channel(operators, weights)
