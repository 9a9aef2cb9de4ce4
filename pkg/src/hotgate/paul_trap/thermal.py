"""Thermal occupation of normal modes, truncated to a (1 - ε) mass set."""
import heapq
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np

from hotgate.errors import ConfigError, SizeError
from hotgate.paul_trap.modes import ModeDecomposition

STATE_CAP = 10**5


@dataclass(frozen=True)
class ThermalTruncation:
    """Lowest-energy occupation vectors holding at least (1 - ε) of the Boltzmann mass."""

    temperature: float
    epsilon: float
    frequencies: np.ndarray
    occupations: np.ndarray
    energies: np.ndarray
    probabilities: np.ndarray
    retained_mass: float

    def __len__(self) -> int:
        return self.occupations.shape[0]

    @property
    def states(self) -> list[tuple[tuple[int, ...], float, float]]:
        return [
            (tuple(int(n) for n in occ), float(e), float(p))
            for occ, e, p in zip(self.occupations, self.energies, self.probabilities)
        ]

    @property
    def max_occupation(self) -> np.ndarray:
        return self.occupations.max(axis=0)


def partition_function(frequencies: np.ndarray, T: float) -> float:
    """Z = prod_m e^(-ν_m/2T) / (1 - e^(-ν_m/T))."""
    frequencies = np.asarray(frequencies, dtype=float)
    return float(np.prod(np.exp(-frequencies / (2 * T)) / -np.expm1(-frequencies / T)))


def thermal_truncation(
    modes: Union[ModeDecomposition, Sequence[ModeDecomposition]],
    T: float,
    epsilon: float,
    cap: int = STATE_CAP,
) -> ThermalTruncation:
    """Enumerate occupations best-first by energy until (1 - ε)Z is covered.

    Masses are taken relative to the ground state, e^(-(E - E₀)/T), so that
    neither small T nor many modes underflow.

    Args:
        modes (ModeDecomposition | Sequence[ModeDecomposition]): One or two traps;
            their modes are concatenated in order.
        T (float): Temperature (ħ = k_B = 1).
        epsilon (float): Allowed missing mass, 0 < ε < 1.
        cap (int): Maximum number of retained states. Defaults to 10^5.

    Raises:
        SizeError: If more than cap states are needed.

    Returns:
        ThermalTruncation: States sorted by energy with renormalised probabilities.
    """
    if isinstance(modes, ModeDecomposition):
        modes = [modes]
    if not np.isfinite(T) or T <= 0:
        raise ConfigError(f"temperature must be positive, got {T}", key="T")
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}", key="epsilon")
    frequencies = np.concatenate([m.frequencies for m in modes])
    n_modes = len(frequencies)
    target = (1.0 - epsilon) * float(np.prod(-1.0 / np.expm1(-frequencies / T)))

    ground = (0,) * n_modes
    heap = [(0.0, ground)]
    seen = {ground}
    occupations, excitations, masses = [], [], []
    total = 0.0
    while total < target:
        if len(occupations) >= cap:
            raise SizeError(
                f"more than {cap} thermal states are needed at T = {T}; "
                "increase epsilon or lower the temperature",
            )
        excitation, occupation = heapq.heappop(heap)
        mass = np.exp(-excitation / T)
        occupations.append(occupation)
        excitations.append(excitation)
        masses.append(mass)
        total += mass
        for m in range(n_modes):
            successor = occupation[:m] + (occupation[m] + 1,) + occupation[m + 1 :]
            if successor not in seen:
                seen.add(successor)
                heapq.heappush(heap, (excitation + frequencies[m], successor))

    masses = np.array(masses)
    return ThermalTruncation(
        temperature=float(T),
        epsilon=float(epsilon),
        frequencies=frequencies,
        occupations=np.array(occupations, dtype=int),
        energies=np.array(excitations) + 0.5 * frequencies.sum(),
        probabilities=masses / masses.sum(),
        retained_mass=float(total * (1.0 - epsilon) / target),
    )
