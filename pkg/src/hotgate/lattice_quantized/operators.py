"""Coupling operators and block Hamiltonians of a quantised 2D lattice.

Every particle sits in its own isotropic trap of frequency ω and keeps the
three lowest states |00>, |01>, |10> (x and y excitation numbers). Module A
occupies the column r_i = (0, iΔy), module B the column q_i = (Δx, iΔy), so Δx
separates the modules and Δy spaces the particles within one.
The mechanical space orders particles A_1 ... A_N, B_1 ... B_N.
"""
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from hotgate.classical_noise.distributions import SINGULAR_GUARD
from hotgate.errors import ConfigError, DomainError, SizeError
from hotgate.geometry.layouts import CouplingLaw, as_logical_vector
from hotgate.paul_trap.hermite import normalized_hermite

LEVELS = ((0, 0), (0, 1), (1, 0))
PAIR_ORDER = 24
DIMENSION_CAP = 3**6
LOGICAL_SIGNS = {"++": 1, "+-": -1, "-+": -1, "--": 1}


@dataclass(frozen=True)
class LatticeConfig:
    """N particles per module on a rectangular lattice."""

    n_per_module: int
    omega: float
    dx: float
    dy: float
    a: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None
    law: CouplingLaw = field(default_factory=lambda: CouplingLaw(J=1.0, gamma=3))
    order: int = PAIR_ORDER
    dimension_cap: int = DIMENSION_CAP

    def __post_init__(self):
        if int(self.n_per_module) != self.n_per_module or self.n_per_module < 1:
            raise ConfigError(f"N must be a positive integer, got {self.n_per_module}", key="N")
        for key in ("omega", "dx", "dy"):
            value = getattr(self, key)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"{key} must be positive, got {value}", key=key)
        if self.order < 1:
            raise ConfigError(f"quadrature order must be positive, got {self.order}", key="order")
        n = self.n_per_module
        object.__setattr__(self, "a", as_logical_vector(np.ones(n) if self.a is None else self.a, size=n))
        object.__setattr__(self, "b", as_logical_vector(np.ones(n) if self.b is None else self.b, size=n))

    @property
    def n_particles(self) -> int:
        return 2 * self.n_per_module

    @property
    def dimension(self) -> int:
        return len(LEVELS) ** self.n_particles

    @property
    def positions_a(self) -> np.ndarray:
        return self._column(0.0)

    @property
    def positions_b(self) -> np.ndarray:
        return self._column(self.dx)

    def _column(self, x: float) -> np.ndarray:
        y = self.dy * np.arange(1, self.n_per_module + 1)
        return np.column_stack([np.full(self.n_per_module, x), y])

    def check_dimension(self):
        if self.dimension > self.dimension_cap:
            raise SizeError(
                f"mechanical dimension 3^{self.n_particles} = {self.dimension} "
                f"exceeds the cap {self.dimension_cap}",
            )


def _level_overlaps(omega: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Displacements δ_k and P[L, L', kx, ky] for one particle's 3-level basis."""
    xi, w = np.polynomial.hermite.hermgauss(order)
    p = normalized_hermite(1, xi)
    G = w[None, None, :] * p[:, None, :] * p[None, :, :]
    P = np.empty((len(LEVELS), len(LEVELS), order, order))
    for i, (mx, ny) in enumerate(LEVELS):
        for j, (mx2, ny2) in enumerate(LEVELS):
            P[i, j] = np.outer(G[mx, mx2], G[ny, ny2])
    return xi / np.sqrt(omega), P


def pair_operator(
    law: CouplingLaw,
    r0: np.ndarray,
    q0: np.ndarray,
    omega: float,
    order: int = PAIR_ORDER,
) -> np.ndarray:
    """<L_r L_q| μ(r, q) |L_r' L_q'> for two trapped particles, as a 9 x 9 matrix.

    Four-dimensional Gauss–Hermite quadrature over the x and y displacements
    of both particles.

    Args:
        law (CouplingLaw): Coupling law μ.
        r0 (np.ndarray): Equilibrium position of the first particle.
        q0 (np.ndarray): Equilibrium position of the second particle.
        omega (float): Trap frequency of both particles.
        order (int): Nodes per coordinate. Defaults to 24.

    Raises:
        DomainError: If a node brings the particles within 1e-9 of each other.

    Returns:
        np.ndarray: Real symmetric matrix, rows ordered (L_r, L_q).
    """
    delta, P = _level_overlaps(omega, order)
    rx = r0[0] + delta[:, None, None, None]
    ry = r0[1] + delta[None, :, None, None]
    qx = q0[0] + delta[None, None, :, None]
    qy = q0[1] + delta[None, None, None, :]
    dist = np.sqrt((rx - qx) ** 2 + (ry - qy) ** 2)
    if np.min(dist) < SINGULAR_GUARD:
        raise DomainError(f"quadrature nodes bring particles within {SINGULAR_GUARD} of each other")
    values = law(dist)
    operator = np.einsum("abcd,ikab,jlcd->ijkl", values, P, P, optimize=True)
    size = len(LEVELS) ** 2
    return operator.reshape(size, size)


def coupling_operator(config: LatticeConfig, i: int, j: int) -> np.ndarray:
    """μ̂(i, j) between particle i of A and particle j of B, a 9 x 9 matrix."""
    n = config.n_per_module
    if not (0 <= i < n and 0 <= j < n):
        raise ConfigError(f"particle indices must lie in [0, {n}), got ({i}, {j})")
    return pair_operator(config.law, config.positions_a[i], config.positions_b[j], config.omega, config.order)


def embed_pair(operator: np.ndarray, p: int, q: int, n_particles: int) -> np.ndarray:
    """Lift a two-particle operator on particles (p, q) to the full mechanical space."""
    levels = len(LEVELS)
    rest = [r for r in range(n_particles) if r not in (p, q)]
    full = np.kron(operator, np.eye(levels ** len(rest)))
    tensor = full.reshape((levels,) * (2 * n_particles))
    inverse = list(np.argsort([p, q] + rest))
    tensor = tensor.transpose(inverse + [n_particles + k for k in inverse])
    dim = levels**n_particles
    return tensor.reshape(dim, dim)


def mechanical_hamiltonian(config: LatticeConfig) -> np.ndarray:
    """Diagonal H_m with per-particle energies ω(m + n + 1)."""
    single = config.omega * np.array([m + n + 1.0 for m, n in LEVELS])
    energies = reduce(np.add.outer, [single] * config.n_particles).ravel()
    return np.diag(energies)


def interaction_operators(config: LatticeConfig) -> tuple[np.ndarray, np.ndarray]:
    """Cross term sum_ij a_i b_j μ̂(i, j) and the self-interaction sum on the full space."""
    config.check_dimension()
    n = config.n_per_module
    dim = config.dimension
    cross = np.zeros((dim, dim))
    self_terms = np.zeros((dim, dim))
    if config.law.J == 0:
        return cross, self_terms

    a, b = config.a, config.b
    pa, pb = config.positions_a, config.positions_b
    for i in range(n):
        for j in range(n):
            if a[i] * b[j] != 0:
                cross += a[i] * b[j] * embed_pair(coupling_operator(config, i, j), i, n + j, 2 * n)
    for i in range(n):
        for k in range(i + 1, n):
            if a[i] * a[k] != 0:
                op = pair_operator(config.law, pa[i], pa[k], config.omega, config.order)
                self_terms += a[i] * a[k] * embed_pair(op, i, k, 2 * n)
            if b[i] * b[k] != 0:
                op = pair_operator(config.law, pb[i], pb[k], config.omega, config.order)
                self_terms += b[i] * b[k] * embed_pair(op, n + i, n + k, 2 * n)
    return cross, self_terms


def build_hamiltonian(config: LatticeConfig) -> dict[str, np.ndarray]:
    """Block Hamiltonians H_s = H_m + s·(cross term) + self terms, one per logical label.

    Raises:
        SizeError: If 3^(2N) exceeds the dimension cap.
    """
    cross, self_terms = interaction_operators(config)
    h_m = mechanical_hamiltonian(config)
    return {label: h_m + sign * cross + self_terms for label, sign in LOGICAL_SIGNS.items()}
