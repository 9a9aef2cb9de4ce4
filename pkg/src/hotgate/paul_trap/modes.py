"""Equilibrium and normal modes of a linear ion chain in a harmonic trap.

Lengths are measured in units of L with L³ = χ/ω², which leaves the chain
count K as the only parameter of the dimensionless potential
V̄ = ½ sum_i x_i² + sum_{i<j} 1/|x_i - x_j|.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from hotgate.errors import ConfigError, ConvergenceError, NumericError

MAX_IONS = 12
RESIDUAL_TOLERANCE = 1e-12
DEGENERACY_TOLERANCE = 1e-10
MAX_NEWTON_STEPS = 200


@dataclass(frozen=True)
class TrapSpec:
    """K ions in a trap of frequency ω and length scale L."""

    n_ions: int
    omega: float
    length_scale: float

    def __post_init__(self):
        if int(self.n_ions) != self.n_ions or not 1 <= self.n_ions <= MAX_IONS:
            raise ConfigError(f"n_ions must be an integer in [1, {MAX_IONS}], got {self.n_ions}", key="n_ions")
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise ConfigError(f"omega must be positive, got {self.omega}", key="omega")
        if not np.isfinite(self.length_scale) or self.length_scale <= 0:
            raise ConfigError(f"length scale must be positive, got {self.length_scale}", key="L")

    @property
    def chi(self) -> float:
        """Coulomb constant that gives this length scale, χ = ω² L³."""
        return self.omega**2 * self.length_scale**3


def _separations(x: np.ndarray) -> np.ndarray:
    diffs = x[:, None] - x[None, :]
    np.fill_diagonal(diffs, np.inf)
    return diffs


def potential(x: np.ndarray) -> float:
    iu = np.triu_indices(len(x), k=1)
    return float(0.5 * np.sum(x**2) + np.sum(1.0 / np.abs(x[iu[0]] - x[iu[1]])))


def gradient(x: np.ndarray) -> np.ndarray:
    diffs = _separations(x)
    return x - np.sum(np.sign(diffs) / diffs**2, axis=1)


def hessian(x: np.ndarray) -> np.ndarray:
    """Dimensionless V'' = (1/ω²) ∂²V/∂x_i∂x_j."""
    inv_cube = 2.0 / np.abs(_separations(x)) ** 3
    matrix = -inv_cube
    np.fill_diagonal(matrix, 1.0 + np.sum(inv_cube, axis=1))
    return matrix


def equilibrium_positions(K: int) -> np.ndarray:
    """Dimensionless equilibrium of K ions, ascending and antisymmetric about 0.

    Damped Newton iteration from evenly spaced ions; the Hessian is
    diagonally dominant, so every Newton step is a descent direction.

    Args:
        K (int): Number of ions, 1 <= K <= 12.

    Raises:
        ConvergenceError: If the gradient norm stays above 1e-12.

    Returns:
        np.ndarray: x̄⁰ in ascending order.
    """
    if int(K) != K or not 1 <= K <= MAX_IONS:
        raise ConfigError(f"K must be an integer in [1, {MAX_IONS}], got {K}", key="K")
    x = np.arange(1, K + 1) - (K + 1) / 2
    if K == 1:
        return x.astype(float)

    for _ in range(MAX_NEWTON_STEPS):
        grad = gradient(x)
        if np.linalg.norm(grad) < RESIDUAL_TOLERANCE / 10:
            break
        step = np.linalg.solve(hessian(x), -grad)
        value = potential(x)
        t = 1.0
        while t > 1e-12:
            trial = x + t * step
            if np.all(np.diff(trial) > 0) and potential(trial) <= value + 1e-4 * t * grad @ step:
                break
            t /= 2
        x = x + t * step

    x = (x - x[::-1]) / 2
    residual = float(np.linalg.norm(gradient(x)))
    if residual >= RESIDUAL_TOLERANCE:
        raise ConvergenceError(f"equilibrium of {K} ions did not converge", residual)
    return x


@dataclass(frozen=True)
class ModeDecomposition:
    """Equilibrium, Hessian eigenpairs and mode frequencies of one trap.

    ``mode_vectors[:, m]`` is v^(m), oriented so that its first non-zero
    component is positive. Displacements are δx = V u in mode coordinates u.
    """

    spec: TrapSpec
    dimensionless_equilibrium: np.ndarray
    hessian: np.ndarray
    lambdas: np.ndarray
    mode_vectors: np.ndarray

    @property
    def equilibrium(self) -> np.ndarray:
        return self.spec.length_scale * self.dimensionless_equilibrium

    @property
    def frequencies(self) -> np.ndarray:
        return np.sqrt(self.lambdas) * self.spec.omega

    def __len__(self) -> int:
        return self.spec.n_ions

    def positions(self, u: np.ndarray) -> np.ndarray:
        """Ion positions x⁰ + V u for mode coordinates u of shape (..., K)."""
        return self.equilibrium + np.asarray(u) @ self.mode_vectors.T


def mode_decomposition(spec: TrapSpec) -> ModeDecomposition:
    """Normal modes of the chain described by spec.

    Raises:
        NumericError: If two eigenvalues coincide within 1e-10.
    """
    x = equilibrium_positions(spec.n_ions)
    matrix = hessian(x) if spec.n_ions > 1 else np.ones((1, 1))
    lambdas, vectors = eigh(matrix)
    if np.any(np.diff(lambdas) < DEGENERACY_TOLERANCE):
        raise NumericError(f"degenerate normal modes for K = {spec.n_ions}")
    for m in range(vectors.shape[1]):
        lead = vectors[np.flatnonzero(np.abs(vectors[:, m]) > 1e-12)[0], m]
        if lead < 0:
            vectors[:, m] *= -1
    return ModeDecomposition(spec, x, matrix, lambdas, vectors)
