"""Logical couplings between ion modules whose positions are quantised.

Each thermal state |E_k> of the normal modes gives a diagonal coupling
μ̄_k = sum_ij a_i b_j <E_k| μ(r_i, q_j) |E_k>, evaluated by Gauss–Hermite
quadrature in mode coordinates. When the level spacings dominate μ̄, the
mode-changing elements average out and the gate becomes a ZZ-damping
channel over the thermal distribution of μ̄_k.
"""
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from functools import lru_cache, reduce
from itertools import product
from typing import Optional

import numpy as np
from wasabi import msg

from hotgate.channel_fidelity.choi import choi_fidelity, kraus_channel, zz_rotation
from hotgate.channel_fidelity.damping import as_gate_time, zz_damping_fidelity
from hotgate.classical_noise.models import CouplingEnsemble
from hotgate.errors import ConfigError, DomainError, SizeError
from hotgate.geometry.layouts import ArrayLike, CouplingLaw, as_logical_vector
from hotgate.paul_trap.hermite import level_quadrature, normalized_hermite
from hotgate.paul_trap.modes import ModeDecomposition, TrapSpec, mode_decomposition
from hotgate.paul_trap.thermal import STATE_CAP, ThermalTruncation, thermal_truncation
from hotgate.utils import chunker, ordered_map

VARIANTS = ("single_trap_split", "cold_mediator", "twin_traps")

DEFAULT_ORDER = 20
GRID_CAP = 10**6
PRUNE_TOLERANCE = 1e-15
GUARD_FRACTION = 0.1
MAX_CUT_WEIGHT = 1e-4
SENSITIVITY_TOLERANCE = 1e-10
SCALE_SEPARATION = 10.0
NODE_CHUNK = 2**14
EXACT_DIMENSION_CAP = 3**6


@lru_cache(maxsize=64)
def _modes(spec: TrapSpec) -> ModeDecomposition:
    return mode_decomposition(spec)


@dataclass(frozen=True)
class TrapPairConfig:
    """Two modules of ions held in one or two linear Paul traps.

    ``single_trap_split`` puts the first ⌈K/2⌉ ions of one chain in A and the
    rest in B. ``cold_mediator`` and ``twin_traps`` use a second trap at
    y = dy; both traps share the length scale L, so the equilibria line up
    (the Coulomb constant of B is χ_B = ω_B² L³).
    """

    variant: str
    trapA: TrapSpec
    trapB: Optional[TrapSpec] = None
    dy: float = 0.0
    a: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None
    law: CouplingLaw = field(default_factory=lambda: CouplingLaw(J=1.0, gamma=3))

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown trap variant {self.variant!r}, expected one of {VARIANTS}", key="variant")
        if self.variant == "single_trap_split":
            if self.trapB is not None or self.dy != 0:
                raise ConfigError("a single trap takes neither a second trap nor dy", key="dy")
            if self.trapA.n_ions < 2:
                raise ConfigError("a split trap needs at least two ions", key="n_ions")
        else:
            if self.trapB is None:
                raise ConfigError(f"variant {self.variant} needs a second trap", key="trapB")
            if not np.isfinite(self.dy) or self.dy <= 0:
                raise ConfigError(f"dy must be positive for separate traps, got {self.dy}", key="dy")
            if self.variant == "cold_mediator" and self.trapB.n_ions != 1:
                raise ConfigError("the cold mediator trap holds exactly one ion", key="N_B")
            if not math.isclose(self.trapA.length_scale, self.trapB.length_scale, rel_tol=1e-12):
                raise ConfigError("both traps must share the length scale L", key="L")
        a = np.ones(self.n_a) if self.a is None else self.a
        b = np.ones(self.n_b) if self.b is None else self.b
        object.__setattr__(self, "a", as_logical_vector(a, size=self.n_a))
        object.__setattr__(self, "b", as_logical_vector(b, size=self.n_b))

    @classmethod
    def single_trap(cls, n_ions: int, omega: float, length_scale: float, **kwargs) -> "TrapPairConfig":
        return cls("single_trap_split", TrapSpec(n_ions, omega, length_scale), **kwargs)

    @classmethod
    def cold_mediator(
        cls,
        n_a: int,
        omega_a: float,
        omega_b: float,
        length_scale: float,
        dy: float,
        **kwargs,
    ) -> "TrapPairConfig":
        return cls(
            "cold_mediator",
            TrapSpec(n_a, omega_a, length_scale),
            TrapSpec(1, omega_b, length_scale),
            dy=dy,
            **kwargs,
        )

    @classmethod
    def twin_traps(
        cls,
        n_a: int,
        n_b: int,
        omega_a: float,
        omega_b: float,
        length_scale: float,
        dy: float,
        **kwargs,
    ) -> "TrapPairConfig":
        return cls(
            "twin_traps",
            TrapSpec(n_a, omega_a, length_scale),
            TrapSpec(n_b, omega_b, length_scale),
            dy=dy,
            **kwargs,
        )

    def with_encoding(self, a: ArrayLike, b: ArrayLike) -> "TrapPairConfig":
        return replace(self, a=np.asarray(a, dtype=float), b=np.asarray(b, dtype=float))

    @property
    def n_a(self) -> int:
        if self.variant == "single_trap_split":
            return -(-self.trapA.n_ions // 2)
        return self.trapA.n_ions

    @property
    def n_b(self) -> int:
        if self.variant == "single_trap_split":
            return self.trapA.n_ions // 2
        return self.trapB.n_ions

    def modes(self) -> list[ModeDecomposition]:
        traps = [self.trapA] if self.trapB is None else [self.trapA, self.trapB]
        return [_modes(spec) for spec in traps]

    @property
    def frequencies(self) -> np.ndarray:
        return np.concatenate([m.frequencies for m in self.modes()])

    def ion_positions(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Positions of A and B ions, shapes (n, N_A, 2) and (n, N_B, 2), at mode coordinates u."""
        u = np.atleast_2d(u)
        modes = self.modes()
        if self.variant == "single_trap_split":
            x = modes[0].positions(u)
            xa, xb = x[:, : self.n_a], x[:, self.n_a :]
        else:
            xa = modes[0].positions(u[:, : self.n_a])
            xb = modes[1].positions(u[:, self.n_a :])
        posA = np.stack([xa, np.zeros_like(xa)], axis=-1)
        posB = np.stack([xb, np.full_like(xb, self.dy)], axis=-1)
        return posA, posB

    def guard_distance(self) -> float:
        """10% of the smallest ion separation at equilibrium."""
        posA, posB = self.ion_positions(np.zeros((1, len(self.frequencies))))
        ions = np.concatenate([posA[0], posB[0]])
        iu = np.triu_indices(len(ions), k=1)
        return GUARD_FRACTION * float(np.min(np.linalg.norm(ions[iu[0]] - ions[iu[1]], axis=-1)))


@dataclass(frozen=True)
class ModeQuadrature:
    """Pruned tensor Gauss–Hermite grid in mode coordinates.

    ``level_weights[m][n, k]`` integrates <n| f |n> along mode m; modes that
    do not influence any coupling carry a single node with unit weight.
    """

    frequencies: np.ndarray
    orders: tuple[int, ...]
    level_weights: tuple[np.ndarray, ...]
    node_index: np.ndarray
    u: np.ndarray

    def __len__(self) -> int:
        return self.u.shape[0]

    def state_weights(self, occupations: np.ndarray, nodes=slice(None)) -> np.ndarray:
        """Weights of the selected nodes for each occupation vector, shape (S, n)."""
        occupations = np.atleast_2d(occupations)
        index = self.node_index[nodes]
        weights = np.ones((occupations.shape[0], index.shape[0]))
        for m, W in enumerate(self.level_weights):
            weights *= W[occupations[:, m]][:, index[:, m]]
        return weights


def _all_pair_couplings(config: TrapPairConfig, u: np.ndarray) -> np.ndarray:
    posA, posB = config.ion_positions(u)
    ions = np.concatenate([posA, posB], axis=1)
    iu = np.triu_indices(ions.shape[1], k=1)
    dist = np.linalg.norm(ions[:, iu[0]] - ions[:, iu[1]], axis=-1)
    with np.errstate(divide="ignore"):
        return config.law(dist)


def _is_sensitive(config: TrapPairConfig, mode: int, spread: float) -> bool:
    probe = np.zeros((3, len(config.frequencies)))
    probe[1, mode], probe[2, mode] = 3 * spread, -3 * spread
    mu = _all_pair_couplings(config, probe)
    if mu.shape[1] == 0:
        return False
    change = np.max(np.abs(mu[1:] - mu[0]))
    return not change <= SENSITIVITY_TOLERANCE * np.max(np.abs(mu[0]))


def mode_quadrature(
    config: TrapPairConfig,
    max_occupation: Sequence[int],
    order: int = DEFAULT_ORDER,
    grid_cap: int = GRID_CAP,
    prune_tolerance: float = PRUNE_TOLERANCE,
) -> ModeQuadrature:
    """Quadrature rule for all occupations up to max_occupation.

    Mode m gets max_occupation[m] + order nodes. If the tensor grid exceeds
    grid_cap, ``order`` is lowered until it fits. Nodes whose weight is
    below prune_tolerance for every state are dropped.

    Args:
        config (TrapPairConfig): The trap setting.
        max_occupation (Sequence[int]): Highest occupation per mode.
        order (int): Extra nodes per active mode. Defaults to 20.
        grid_cap (int): Maximum tensor grid size. Defaults to 10^6.
        prune_tolerance (float): Weight below which nodes are dropped.

    Raises:
        SizeError: If even one extra node per mode exceeds grid_cap.

    Returns:
        ModeQuadrature: The pruned grid.
    """
    frequencies = config.frequencies
    max_occupation = [int(n) for n in max_occupation]
    if len(max_occupation) != len(frequencies):
        raise ConfigError(f"expected {len(frequencies)} occupations, got {len(max_occupation)}")
    if order < 1:
        raise ConfigError(f"quadrature order must be positive, got {order}", key="order")
    sensitive = [
        _is_sensitive(config, m, np.sqrt((n + 0.5) / nu))
        for m, (n, nu) in enumerate(zip(max_occupation, frequencies))
    ]

    extra = int(order)
    while True:
        orders = tuple(n + extra if s else 1 for n, s in zip(max_occupation, sensitive))
        if math.prod(orders) <= grid_cap:
            break
        if extra == 1:
            raise SizeError(
                f"a mode grid of {math.prod(orders)} nodes exceeds the cap {grid_cap}; "
                "raise epsilon or lower the temperature",
            )
        extra -= 1
    if extra < order:
        msg.warn(f"mode quadrature reduced to {extra} extra nodes per mode to stay below {grid_cap}")

    nodes, level_weights = [], []
    for n_max, s, count in zip(max_occupation, sensitive, orders):
        if s:
            xi, W = level_quadrature(n_max, count)
        else:
            xi, W = np.zeros(1), np.ones((n_max + 1, 1))
        nodes.append(xi)
        level_weights.append(W)

    bound = reduce(np.multiply.outer, [W.max(axis=0) for W in level_weights]).ravel()
    kept = np.flatnonzero(bound >= prune_tolerance)
    node_index = np.stack(np.unravel_index(kept, orders), axis=1)
    u = np.stack(
        [xi[node_index[:, m]] / np.sqrt(nu) for m, (xi, nu) in enumerate(zip(nodes, frequencies))],
        axis=1,
    )
    return ModeQuadrature(frequencies, orders, tuple(level_weights), node_index, u)


def _pair_distances(config: TrapPairConfig, u: np.ndarray, pairs: str) -> np.ndarray:
    posA, posB = config.ion_positions(u)
    X, Y = {"AB": (posA, posB), "AA": (posA, posA), "BB": (posB, posB)}[pairs]
    dist = np.linalg.norm(X[:, :, None, :] - Y[:, None, :, :], axis=-1)
    if pairs != "AB":
        lower = np.tril(np.ones(dist.shape[1:], dtype=bool))
        dist[:, lower] = np.inf
    return dist


def state_coupling_matrices(
    config: TrapPairConfig,
    quadrature: ModeQuadrature,
    occupations: np.ndarray,
    pairs: str = "AB",
    threads: Optional[int] = None,
) -> np.ndarray:
    """<E_k| μ(x_i, y_j) |E_k> for every state, shape (S, N_X, N_Y).

    ``pairs`` selects A-B couplings or the upper triangle of the A-A / B-B
    couplings. Nodes where an evaluated pair comes closer than the guard
    distance are cut from the rule and the remaining weights renormalised.

    Raises:
        DomainError: If a state puts more than 1e-4 of its weight on cut nodes.
    """
    occupations = np.atleast_2d(occupations)
    guard = config.guard_distance()

    def integrate(nodes: np.ndarray):
        dist = _pair_distances(config, quadrature.u[nodes], pairs)
        bad = np.any(dist < guard, axis=(1, 2))
        weights = quadrature.state_weights(occupations, nodes)
        mu = config.law(dist[~bad]).reshape(-1, dist.shape[1] * dist.shape[2])
        return weights.sum(axis=1), weights[:, bad].sum(axis=1), weights[:, ~bad] @ mu

    parts = ordered_map(integrate, chunker(np.arange(len(quadrature)), NODE_CHUNK), threads=threads)
    total = sum(p[0] for p in parts)
    cut = sum(p[1] for p in parts)
    accumulated = sum(p[2] for p in parts)
    if np.any(cut > MAX_CUT_WEIGHT * total):
        raise DomainError(
            f"thermal excursions bring ions closer than {guard:.3g}, where the harmonic "
            "model breaks down; lower the temperature or increase the separation",
        )
    n_x = config.n_a if pairs[0] == "A" else config.n_b
    n_y = config.n_a if pairs[1] == "A" else config.n_b
    return (accumulated / (total - cut)[:, None]).reshape(-1, n_x, n_y)


def _n_modes(config: TrapPairConfig, modes: Optional[Sequence[ModeDecomposition]]) -> int:
    if modes is None:
        return len(config.frequencies)
    if isinstance(modes, ModeDecomposition):
        modes = [modes]
    if [m.spec for m in modes] != [m.spec for m in config.modes()]:
        raise ConfigError("mode decompositions do not belong to this trap setting")
    return sum(len(m) for m in modes)


def diagonal_mode_coupling(
    config: TrapPairConfig,
    modes: Optional[Sequence[ModeDecomposition]],
    state: Sequence[int],
    order: int = DEFAULT_ORDER,
) -> float:
    """μ̄^{ab}_k = sum_ij a_i b_j <E_k| μ(r_i, q_j) |E_k> for one occupation vector.

    Args:
        config (TrapPairConfig): Trap setting and logical vectors.
        modes (Sequence[ModeDecomposition], optional): Modes of the traps, checked
            against config. Defaults to None (taken from config).
        state (Sequence[int]): Occupation of every mode, trap A first.
        order (int): Extra quadrature nodes per mode. Defaults to 20.

    Returns:
        float: The diagonal logical coupling.
    """
    state = np.asarray(state, dtype=int)
    if state.shape != (_n_modes(config, modes),) or np.any(state < 0):
        raise ConfigError("state must hold one non-negative occupation per mode", key="state")
    quadrature = mode_quadrature(config, state, order)
    matrix = state_coupling_matrices(config, quadrature, state[None, :])[0]
    return float(config.a @ matrix @ config.b)


def mode_coupling_ensemble(
    config: TrapPairConfig,
    truncation: ThermalTruncation,
    order: int = DEFAULT_ORDER,
    grid_cap: int = GRID_CAP,
) -> CouplingEnsemble:
    """Thermal ensemble of diagonal coupling matrices, one node per retained state."""
    quadrature = mode_quadrature(config, truncation.max_occupation, order, grid_cap)
    matrices = state_coupling_matrices(config, quadrature, truncation.occupations)
    return CouplingEnsemble(truncation.probabilities, matrices)


def self_mode_couplings(
    config: TrapPairConfig,
    truncation: ThermalTruncation,
    order: int = DEFAULT_ORDER,
    grid_cap: int = GRID_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal self-interactions μ̄ᵃ_k and μ̄ᵇ_k for every retained state."""
    quadrature = mode_quadrature(config, truncation.max_occupation, order, grid_cap)
    terms = []
    for pairs, v in (("AA", config.a), ("BB", config.b)):
        if len(v) < 2:
            terms.append(np.zeros(len(truncation)))
            continue
        matrices = state_coupling_matrices(config, quadrature, truncation.occupations, pairs)
        terms.append(np.einsum("i,kij,j->k", v, matrices, v))
    return terms[0], terms[1]


def check_scale_separation(truncation: ThermalTruncation, mu_bar: np.ndarray) -> bool:
    """Warn when level spacings are not at least 10x the logical coupling."""
    levels = np.unique(np.round(truncation.energies, 12))
    if len(levels) < 2:
        return True
    gap = float(np.min(np.diff(levels)))
    strength = float(np.max(np.abs(mu_bar)))
    if gap < SCALE_SEPARATION * strength:
        msg.warn(
            f"level spacing {gap:.3g} is less than {SCALE_SEPARATION:g}x the coupling "
            f"{strength:.3g}; the rotating wave approximation may not hold",
        )
        return False
    return True


def nondegenerate_fidelity(
    config: TrapPairConfig,
    T: float,
    epsilon: float,
    t: float,
    order: int = DEFAULT_ORDER,
    include_self_interaction: bool = False,
    state_cap: int = STATE_CAP,
) -> float:
    """Gate fidelity under the rotating wave approximation.

    F = sum_k p_k cos²(π/4 - μ̄_k Δt) over the ε-truncated thermal states.
    With ``include_self_interaction`` the per-state self terms are added as
    phases of each branch and the fidelity is taken from the Choi matrix;
    the phases cancel, which makes the result identical.

    Args:
        config (TrapPairConfig): Trap setting and logical vectors.
        T (float): Temperature.
        epsilon (float): Thermal truncation tolerance.
        t (float): Interaction time Δt.
        order (int): Extra quadrature nodes per mode. Defaults to 20.
        include_self_interaction (bool): Carry the self-interaction phases. Defaults to False.
        state_cap (int): Maximum number of thermal states.

    Returns:
        float: Choi fidelity with e^(-iπ/4 ZZ).
    """
    t = as_gate_time(t)
    truncation = thermal_truncation(config.modes(), T, epsilon, cap=state_cap)
    ensemble = mode_coupling_ensemble(config, truncation, order)
    dist = ensemble.distribution(config.a, config.b)
    check_scale_separation(truncation, dist.mu_bar)
    if not include_self_interaction:
        return zz_damping_fidelity(dist, t)

    mu_a, mu_b = self_mode_couplings(config, truncation, order)
    operators = [
        np.exp(-1j * (fa + fb) * t) * zz_rotation(mu * t)
        for mu, fa, fb in zip(dist.mu_bar, mu_a, mu_b)
    ]
    return choi_fidelity(kraus_channel(operators, dist.weights))


def _operator_from_grid(values: np.ndarray, overlaps: Sequence[np.ndarray]) -> np.ndarray:
    """sum_k f(k) prod_m G_m[n_m, n'_m, k_m] as a (D, D) matrix."""
    tensor = values
    for G in overlaps:
        tensor = np.tensordot(tensor, G, axes=([0], [2]))
    n_modes = len(overlaps)
    tensor = tensor.transpose(list(range(0, 2 * n_modes, 2)) + list(range(1, 2 * n_modes, 2)))
    dim = int(np.prod([G.shape[0] for G in overlaps]))
    return tensor.reshape(dim, dim)


def fock_operators(
    config: TrapPairConfig,
    levels: int,
    order: int = DEFAULT_ORDER,
) -> tuple[np.ndarray, np.ndarray]:
    """Cross and self interaction operators on the truncated Fock space of all modes.

    Returns sum_ij a_i b_j μ̂(r_i, q_j) and the self-interaction sum, both
    including mode-changing elements.
    """
    frequencies = config.frequencies
    n_modes = len(frequencies)
    count = levels + order
    if count**n_modes > GRID_CAP:
        raise SizeError(f"a grid of {count}^{n_modes} nodes exceeds the cap {GRID_CAP}")
    xi, w = np.polynomial.hermite.hermgauss(count)
    p = normalized_hermite(levels - 1, xi)
    G = w[None, None, :] * p[:, None, :] * p[None, :, :]

    grid = np.array(list(product(xi, repeat=n_modes))) / np.sqrt(frequencies)[None, :]
    bound = reduce(np.multiply.outer, [np.abs(G).max(axis=(0, 1))] * n_modes).ravel()
    live = bound >= PRUNE_TOLERANCE
    guard = config.guard_distance()

    values = []
    for pairs, u, v in (("AB", config.a, config.b), ("AA", config.a, config.a), ("BB", config.b, config.b)):
        dist = _pair_distances(config, grid, pairs)
        if np.any(np.any(dist < guard, axis=(1, 2)) & live):
            raise DomainError(f"quadrature nodes bring ions closer than {guard:.3g}")
        mu = np.where(live[:, None, None], config.law(np.maximum(dist, guard)), 0.0)
        values.append(np.einsum("i,kij,j->k", u, mu, v).reshape((count,) * n_modes))
    overlaps = [G] * n_modes
    return _operator_from_grid(values[0], overlaps), _operator_from_grid(values[1] + values[2], overlaps)


def exact_mode_fidelity(
    config: TrapPairConfig,
    T: float,
    epsilon: float,
    t: float,
    levels: int = 3,
    order: int = DEFAULT_ORDER,
) -> float:
    """Fidelity from exact evolution in a Fock box of `levels` states per mode.

    No rotating wave approximation: mode-changing couplings are kept. The
    thermal state is restricted to the box; a warning is printed when the
    mass outside it exceeds epsilon.
    """
    from hotgate.lattice_quantized.channel import block_channel

    t = as_gate_time(t)
    frequencies = config.frequencies
    dimension = levels ** len(frequencies)
    if dimension > EXACT_DIMENSION_CAP:
        raise SizeError(f"Fock space of dimension {dimension} exceeds the cap {EXACT_DIMENSION_CAP}")
    if not np.isfinite(T) or T <= 0:
        raise ConfigError(f"temperature must be positive, got {T}", key="T")

    occupations = np.array(list(product(range(levels), repeat=len(frequencies))))
    energies = occupations @ frequencies + 0.5 * frequencies.sum()
    populations = np.exp(-(energies - energies.min()) / T)
    outside = 1.0 - float(np.prod(-np.expm1(-levels * frequencies / T)))
    if outside > epsilon:
        msg.warn(f"the Fock box misses {outside:.2e} of the thermal mass (epsilon = {epsilon})")
    rho_m = np.diag(populations / populations.sum())

    cross, self_terms = fock_operators(config, levels, order)
    h_m = np.diag(energies)
    blocks = {
        label: h_m + sign * cross + self_terms
        for label, sign in (("++", 1), ("+-", -1), ("-+", -1), ("--", 1))
    }
    return choi_fidelity(block_channel(blocks, rho_m, t))
