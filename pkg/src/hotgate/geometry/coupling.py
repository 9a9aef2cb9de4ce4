"""Physical and logical coupling strengths."""
from typing import Optional

import numpy as np

from hotgate.errors import ConfigError, DomainError
from hotgate.geometry.layouts import (
    COINCIDENCE_THRESHOLD,
    ArrayLike,
    CouplingLaw,
    ModuleLayout,
    ModulePair,
    as_logical_vector,
)


def coupling_matrix(
    law: CouplingLaw,
    posA: np.ndarray,
    posB: np.ndarray,
    min_distance: float = COINCIDENCE_THRESHOLD,
) -> np.ndarray:
    """Matrix of μ(r_i, q_j) for every A-B pair, batched over leading axes.

    Args:
        law (CouplingLaw): The coupling law.
        posA (np.ndarray): Positions of A, shape (..., N_A, d).
        posB (np.ndarray): Positions of B, shape (..., N_B, d).
        min_distance (float): Separations below this raise. Defaults to 1e-12.

    Raises:
        DomainError: If any A-B separation is below min_distance.

    Returns:
        np.ndarray: Couplings of shape (..., N_A, N_B).
    """
    posA = np.asarray(posA, dtype=float)
    posB = np.asarray(posB, dtype=float)
    diffs = posA[..., :, None, :] - posB[..., None, :, :]
    dist = np.sqrt(np.sum(diffs * diffs, axis=-1))
    closest = np.min(dist) if dist.size else np.inf
    if closest < min_distance:
        raise DomainError(
            f"coupling evaluated at separation {closest:.3e} < {min_distance:.0e}",
        )
    return law(dist)


def pairwise_coupling(law: CouplingLaw, r: ArrayLike, q: ArrayLike) -> float:
    """μ(r, q) = J |r - q|^(-gamma) for a single pair of positions."""
    r = np.asarray(r, dtype=float)
    q = np.asarray(q, dtype=float)
    if r.shape != q.shape:
        raise ConfigError("both spatial vectors need the same number of coordinates")
    distance = float(np.linalg.norm(r - q))
    if distance < COINCIDENCE_THRESHOLD:
        raise DomainError("coincident positions give a singular coupling")
    return float(law(distance))


def logical_coupling(
    pair: ModulePair,
    posA: Optional[ArrayLike] = None,
    posB: Optional[ArrayLike] = None,
) -> float:
    """Logical coupling strength μ̄^{ab} = sum_ij a_i b_j μ(r_i, q_j).

    Args:
        pair (ModulePair): Modules, logical vectors and law.
        posA (ArrayLike, optional): Actual positions of A. Defaults to the layout.
        posB (ArrayLike, optional): Actual positions of B. Defaults to the layout.

    Returns:
        float: μ̄^{ab} at the given configuration.
    """
    posA = pair.moduleA.positions if posA is None else np.asarray(posA, dtype=float)
    posB = pair.moduleB.positions if posB is None else np.asarray(posB, dtype=float)
    if posA.shape != pair.moduleA.positions.shape or posB.shape != pair.moduleB.positions.shape:
        raise ConfigError("position lists must match the module sizes")
    mu = coupling_matrix(pair.law, posA, posB)
    return float(pair.a @ mu @ pair.b)


def self_phase(module: ModuleLayout, v: ArrayLike, law: CouplingLaw) -> float:
    """Intra-module term f(v) = sum_{i<j} v_i v_j μ(r_i, r_j).

    A global phase on the logical subspace; only relevant once positions are
    quantised.
    """
    v = as_logical_vector(v, size=len(module))
    if len(module) == 1:
        return 0.0
    i, j = np.triu_indices(len(module), k=1)
    dist = np.linalg.norm(module.positions[i] - module.positions[j], axis=-1)
    if np.min(dist) < COINCIDENCE_THRESHOLD:
        raise DomainError("coincident positions give a singular coupling")
    return float(np.sum(v[i] * v[j] * law(dist)))
