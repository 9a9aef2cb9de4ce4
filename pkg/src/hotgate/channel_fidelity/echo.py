"""Echo cancellation of a static background field and flip schedules.

All Hamiltonians here are diagonal in the computational basis, so their
exponentials are elementwise; a collective X flip is the bit-reversal
permutation of that basis.
"""
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np

from hotgate.errors import ConfigError, SizeError
from hotgate.geometry.layouts import ArrayLike, as_logical_vector

MAX_ECHO_QUBITS = 6

X = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class EchoSpec:
    """Background field strengths h_k and total evolution time τ."""

    fields: tuple[float, ...]
    tau: float

    def __post_init__(self):
        fields = tuple(float(h) for h in self.fields)
        if not all(np.isfinite(fields)):
            raise ConfigError("background fields must be finite", key="fields")
        if not np.isfinite(self.tau) or self.tau <= 0:
            raise ConfigError(f"tau must be positive, got {self.tau}", key="tau")
        object.__setattr__(self, "fields", fields)


def spins(n_qubits: int) -> np.ndarray:
    """z_i = ±1 of qubit i in every basis state, shape (2^K, K); qubit 0 is the leading bit."""
    index = np.arange(2**n_qubits)[:, None]
    bits = (index >> (n_qubits - 1 - np.arange(n_qubits))[None, :]) & 1
    return 1 - 2 * bits


def _check_couplings(hzz: ArrayLike, n_qubits: int) -> np.ndarray:
    hzz = np.asarray(hzz, dtype=float)
    if hzz.shape != (n_qubits, n_qubits):
        raise ConfigError(f"coupling table must be {n_qubits}x{n_qubits}, got {hzz.shape}", key="hzz")
    if not np.allclose(hzz, hzz.T, atol=1e-12):
        raise ConfigError("coupling table must be symmetric", key="hzz")
    return hzz


def zz_energies(hzz: ArrayLike, n_qubits: int) -> np.ndarray:
    """Diagonal of H_zz = sum_{i<j} h_ij Z_i Z_j."""
    hzz = _check_couplings(hzz, n_qubits)
    z = spins(n_qubits)
    iu = np.triu_indices(n_qubits, k=1)
    return np.sum(hzz[iu][None, :] * z[:, iu[0]] * z[:, iu[1]], axis=1)


def field_energies(fields: Sequence[float]) -> np.ndarray:
    """Diagonal of H_ext = sum_k h_k Z_k."""
    fields = np.asarray(fields, dtype=float)
    return spins(len(fields)) @ fields


def flip_operator(qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Product of X on the given qubits."""
    flipped = set(qubits)
    return reduce(np.kron, [X if k in flipped else np.eye(2) for k in range(n_qubits)])


def _check_size(n_qubits: int):
    if n_qubits > MAX_ECHO_QUBITS:
        raise SizeError(
            f"echo checks build 2^K matrices and are limited to K <= {MAX_ECHO_QUBITS}, got {n_qubits}",
        )


def echo_residual(spec: EchoSpec, hzz: ArrayLike, K: int) -> float:
    """‖X^⊗K U(τ/2) X^⊗K U(τ/2) - e^(-i H_zz τ)‖₂ with U = e^(-i(H_zz + H_ext)t).

    Args:
        spec (EchoSpec): Background fields and total time.
        hzz (ArrayLike): Symmetric K x K table of ZZ strengths.
        K (int): Number of qubits, at most 6.

    Raises:
        SizeError: If K exceeds 6.

    Returns:
        float: Operator 2-norm of the difference, zero up to rounding.
    """
    _check_size(K)
    if len(spec.fields) != K:
        raise ConfigError(f"expected {K} field strengths, got {len(spec.fields)}", key="fields")
    zz = zz_energies(hzz, K)
    half = np.diag(np.exp(-0.5j * spec.tau * (zz + field_energies(spec.fields))))
    flip = flip_operator(range(K), K)
    echoed = flip @ half @ flip @ half
    target = np.diag(np.exp(-1j * spec.tau * zz))
    return float(np.linalg.norm(echoed - target, ord=2))


def fractional_flip_schedule(v: ArrayLike, tau: float) -> list[tuple[int, float]]:
    """Flip times realising effective signs v_i over a window of length τ.

    Qubit i is flipped at τ(1 + v_i)/2 and flipped back at τ, so its time
    averaged sign is v_i.

    Args:
        v (ArrayLike): Target signs in [-1, 1].
        tau (float): Window length.

    Returns:
        list[tuple[int, float]]: (qubit, time) events sorted by time, then qubit.
    """
    v = as_logical_vector(v)
    if not np.isfinite(tau) or tau <= 0:
        raise ConfigError(f"tau must be positive, got {tau}", key="tau")
    events = [(i, tau * (1 + vi) / 2) for i, vi in enumerate(v)]
    events += [(i, float(tau)) for i in range(len(v))]
    return sorted(events, key=lambda event: (event[1], event[0]))


def flip_schedule_propagator(
    schedule: Sequence[tuple[int, float]],
    hzz: ArrayLike,
    fields: Sequence[float],
    tau: float,
) -> np.ndarray:
    """Propagator of H_zz + H_ext interleaved with instantaneous X flips.

    Args:
        schedule (Sequence[tuple[int, float]]): (qubit, time) flip events within [0, τ].
        hzz (ArrayLike): Symmetric K x K table of ZZ strengths.
        fields (Sequence[float]): Background field per qubit.
        tau (float): Total time.

    Returns:
        np.ndarray: The 2^K x 2^K propagator.
    """
    n_qubits = len(fields)
    _check_size(n_qubits)
    energies = zz_energies(hzz, n_qubits) + field_energies(fields)
    events = sorted(schedule, key=lambda event: (event[1], event[0]))
    if any(not 0 <= time <= tau for _, time in events):
        raise ConfigError("flip times must lie within [0, tau]", key="schedule")

    propagator = np.eye(2**n_qubits, dtype=complex)
    now = 0.0
    for qubit, time in events:
        propagator = np.diag(np.exp(-1j * (time - now) * energies)) @ propagator
        propagator = flip_operator([qubit], n_qubits) @ propagator
        now = time
    return np.diag(np.exp(-1j * (tau - now) * energies)) @ propagator
