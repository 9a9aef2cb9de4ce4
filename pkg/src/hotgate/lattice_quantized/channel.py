"""Logical channel of the joint qubit-mechanics evolution.

The Hamiltonian is block diagonal in the logical basis |s>, s in
{++, +-, -+, --}, so E(|s><s'|) = tr[U_s ρ_m U_s'†] |s><s'| with
U_s = e^(-iΔt H_s). Equal blocks are diagonalised once and reused for every Δt.
"""
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.linalg import eigh

from hotgate.channel_fidelity.choi import DIM, TwoQubitChannel, choi_fidelity
from hotgate.channel_fidelity.damping import as_gate_time
from hotgate.errors import ConfigError
from hotgate.lattice_quantized.operators import LOGICAL_SIGNS, LatticeConfig, build_hamiltonian
from hotgate.utils import ordered_map

STATE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MechanicalState:
    """Density matrix of the mechanical degrees of freedom."""

    density: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.density, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ConfigError(f"density matrix must be square, got shape {rho.shape}", key="rho_m")
        if np.max(np.abs(rho - rho.conj().T)) > STATE_TOLERANCE:
            raise ConfigError("density matrix is not Hermitian", key="rho_m")
        if abs(np.trace(rho).real - 1.0) > STATE_TOLERANCE:
            raise ConfigError("density matrix must have unit trace", key="rho_m")
        if np.min(np.linalg.eigvalsh(rho)) < -STATE_TOLERANCE:
            raise ConfigError("density matrix has negative eigenvalues", key="rho_m")
        object.__setattr__(self, "density", rho)

    @property
    def dim(self) -> int:
        return self.density.shape[0]


def maximally_mixed_state(config: Union[LatticeConfig, int]) -> MechanicalState:
    """ρ_m = 𝟙 / 3^(2N), or 𝟙 / d for an integer dimension."""
    dim = config.dimension if isinstance(config, LatticeConfig) else int(config)
    return MechanicalState(np.eye(dim) / dim)


def _as_density(rho_m: Union[MechanicalState, np.ndarray]) -> np.ndarray:
    if isinstance(rho_m, MechanicalState):
        return rho_m.density
    return MechanicalState(rho_m).density


class LatticeEvolution:
    """Block propagators of one Hamiltonian for a fixed mechanical state.

    Equal blocks share one diagonalisation. With H_s = V_s E_s V_s†,
    tr[U_s ρ_m U_s'†] = sum_kl e^(-iE_sk Δt) W_kl e^(iE_s'l Δt) where
    W = (V_s† ρ_m V_s') ∘ (V_s'† V_s)ᵀ does not depend on Δt, so every
    point of a curve costs O(d²) once W is known.

    Args:
        blocks (Mapping[str, np.ndarray]): H_s per logical label.
        rho_m (MechanicalState | np.ndarray): Initial mechanical state.
        threads (int, optional): Threads for the block diagonalisations.
    """

    def __init__(
        self,
        blocks: Mapping[str, np.ndarray],
        rho_m: Union[MechanicalState, np.ndarray],
        threads: Optional[int] = None,
    ):
        if set(blocks) != set(LOGICAL_SIGNS):
            raise ConfigError(f"blocks must be labelled {sorted(LOGICAL_SIGNS)}, got {sorted(blocks)}")
        self.labels = list(LOGICAL_SIGNS)
        self.rho = _as_density(rho_m)
        self.blocks = [np.asarray(blocks[label]) for label in self.labels]
        if any(h.shape != self.rho.shape for h in self.blocks):
            raise ConfigError("block Hamiltonians and the mechanical state differ in dimension")
        # index of the first block equal to each block
        self.system = [
            next(k for k in range(i + 1) if np.array_equal(self.blocks[k], h)) for i, h in enumerate(self.blocks)
        ]
        distinct = sorted(set(self.system))
        spectra = dict(zip(distinct, ordered_map(eigh, [self.blocks[k] for k in distinct], threads=threads)))
        self.eigen = [spectra[k] for k in self.system]
        self.weights = {
            (k, m): self._overlap_weights(spectra[k][1], spectra[m][1]) for k in distinct for m in distinct if k <= m
        }

    def _overlap_weights(self, vs: np.ndarray, vr: np.ndarray) -> np.ndarray:
        return (vs.conj().T @ self.rho @ vr) * (vr.conj().T @ vs).T

    def propagator(self, label: str, t: float) -> np.ndarray:
        energies, vectors = self.eigen[self.labels.index(label)]
        return (vectors * np.exp(-1j * energies * t)) @ vectors.conj().T

    def overlaps(self, t: float) -> np.ndarray:
        """M[s, s'] = tr[U_s ρ_m U_s'†]."""
        t = as_gate_time(t)
        phases = [np.exp(-1j * energies * t) for energies, _ in self.eigen]
        n = len(self.labels)
        overlaps = np.empty((n, n), dtype=complex)
        # equal blocks share their phases, so each pair of systems is evaluated once
        values: dict[tuple[int, int], complex] = {}
        for s in range(n):
            for r in range(s, n):
                k, m = self.system[s], self.system[r]
                if (k, m) not in values:
                    if k <= m:
                        values[k, m] = phases[s] @ self.weights[k, m] @ phases[r].conj()
                    else:
                        values[k, m] = np.conj(phases[r] @ self.weights[m, k] @ phases[s].conj())
                overlaps[s, r] = values[k, m]
                overlaps[r, s] = np.conj(values[k, m])
        return overlaps

    def channel(self, t: float) -> TwoQubitChannel:
        overlaps = self.overlaps(t)
        choi = np.zeros((DIM, DIM, DIM, DIM), dtype=complex)
        for s in range(DIM):
            for r in range(DIM):
                choi[s, s, r, r] = overlaps[s, r]
        return TwoQubitChannel(choi.reshape(DIM * DIM, DIM * DIM))

    def fidelity(self, t: float) -> float:
        return choi_fidelity(self.channel(t))

    def energy(self, label: str, t: float) -> float:
        """tr[H_s U_s ρ_m U_s†]; constant in t."""
        h = self.blocks[self.labels.index(label)]
        u = self.propagator(label, t)
        return float(np.trace(h @ u @ self.rho @ u.conj().T).real)


def block_channel(
    blocks: Mapping[str, np.ndarray],
    rho_m: Union[MechanicalState, np.ndarray],
    t: float,
) -> TwoQubitChannel:
    """Logical channel of block Hamiltonians H_s acting on ρ_m ⊗ ρ̄ for time t."""
    return LatticeEvolution(blocks, rho_m).channel(t)


def evolve_channel(
    config: LatticeConfig,
    rho_m: Union[MechanicalState, np.ndarray],
    t: float,
) -> TwoQubitChannel:
    """Channel ρ̄ ↦ tr_m[e^(-iΔtH)(ρ_m ⊗ ρ̄)e^(iΔtH)] of the quantised lattice.

    Args:
        config (LatticeConfig): Lattice, logical vectors and coupling law.
        rho_m (MechanicalState | np.ndarray): Mechanical state.
        t (float): Interaction time Δt.

    Returns:
        TwoQubitChannel: The logical channel.
    """
    return block_channel(build_hamiltonian(config), rho_m, t)


def lattice_fidelity(
    config: LatticeConfig,
    rho_m: Union[MechanicalState, np.ndarray],
    t: float,
) -> float:
    """Choi fidelity of the lattice channel with e^(-iπ/4 ZZ)."""
    return choi_fidelity(evolve_channel(config, rho_m, t))


def lattice_curve(
    config: LatticeConfig,
    rho_m: Union[MechanicalState, np.ndarray],
    dt_grid: Sequence[float],
) -> np.ndarray:
    """Fidelity along a Δt grid from one set of block diagonalisations."""
    evolution = LatticeEvolution(build_hamiltonian(config), rho_m)
    return np.array([evolution.fidelity(t) for t in dt_grid])
