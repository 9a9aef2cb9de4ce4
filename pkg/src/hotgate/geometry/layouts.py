"""Module layouts, logical vectors and the physical coupling law.

Positions are dimensionless (spacing conventions follow the figure captions,
e.g. Δx = Δy = 1 with J = 1). A position list is a ``(N, d)`` float array with
d in {1, 2, 3}; there are no separate 1D/2D/3D types.
"""
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from hotgate.errors import ConfigError, DomainError

COINCIDENCE_THRESHOLD = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


def as_positions(positions: ArrayLike) -> np.ndarray:
    """Convert a list of spatial vectors to a finite ``(N, d)`` array.

    Args:
        positions (ArrayLike): N spatial vectors of length 1, 2 or 3.

    Returns:
        np.ndarray: Float array of shape (N, d).
    """
    arr = np.atleast_2d(np.asarray(positions, dtype=float))
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ConfigError("positions must be a non-empty list of spatial vectors")
    if arr.shape[1] not in (1, 2, 3):
        raise ConfigError(f"spatial vectors must have 1-3 coordinates, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError("positions must be finite")
    return arr


def as_logical_vector(entries: ArrayLike, size: Optional[int] = None) -> np.ndarray:
    """Validate a logical vector: real entries in [-1, 1].

    Args:
        entries (ArrayLike): The weights a_i.
        size (int, optional): Required length. Defaults to None (any length).

    Returns:
        np.ndarray: 1D float array.
    """
    vec = np.atleast_1d(np.asarray(entries, dtype=float))
    if vec.ndim != 1:
        raise ConfigError("a logical vector must be one-dimensional")
    if size is not None and vec.shape[0] != size:
        raise ConfigError(f"logical vector has length {vec.shape[0]}, module has {size} qubits")
    if not np.all(np.isfinite(vec)) or np.any(np.abs(vec) > 1.0):
        raise ConfigError("logical vector entries must lie in [-1, 1]")
    return vec


@dataclass(frozen=True)
class CouplingLaw:
    """Distance-dependent Ising coupling μ(r, q) = J |r - q|^(-gamma).

    ``J = 0`` is accepted so that interaction-free limits can be simulated.
    """

    J: float = 1.0
    gamma: int = 1

    def __post_init__(self):
        if not np.isfinite(self.J) or self.J < 0:
            raise ConfigError(f"J must be a finite non-negative number, got {self.J}", key="J")
        if int(self.gamma) != self.gamma or self.gamma < 1:
            raise ConfigError(f"gamma must be a positive integer, got {self.gamma}", key="gamma")

    def __call__(self, distance: np.ndarray) -> np.ndarray:
        return self.J * np.power(distance, -float(self.gamma))


@dataclass(frozen=True)
class ModuleLayout:
    """Reference (equilibrium) positions of the N qubits of one module."""

    positions: np.ndarray

    def __post_init__(self):
        positions = as_positions(self.positions)
        object.__setattr__(self, "positions", positions)
        if len(positions) > 1:
            diffs = positions[:, None, :] - positions[None, :, :]
            dist = np.linalg.norm(diffs, axis=-1)
            iu = np.triu_indices(len(positions), k=1)
            if np.min(dist[iu]) <= COINCIDENCE_THRESHOLD:
                raise DomainError("module layout contains coincident positions")

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def translated(self, shift: ArrayLike) -> "ModuleLayout":
        return ModuleLayout(self.positions + np.asarray(shift, dtype=float))


@dataclass(frozen=True)
class ModulePair:
    """Two modules, their logical vectors and the coupling law between them."""

    moduleA: ModuleLayout
    moduleB: ModuleLayout
    a: np.ndarray
    b: np.ndarray
    law: CouplingLaw

    def __post_init__(self):
        object.__setattr__(self, "a", as_logical_vector(self.a, size=len(self.moduleA)))
        object.__setattr__(self, "b", as_logical_vector(self.b, size=len(self.moduleB)))
        if self.moduleA.dim != self.moduleB.dim:
            raise ConfigError("both modules must use the same spatial dimension")

    def swapped(self) -> "ModulePair":
        return ModulePair(self.moduleB, self.moduleA, self.b, self.a, self.law)


def linear_chain(
    n: int,
    spacing: float = 1.0,
    offset: ArrayLike = (0.0, 0.0),
) -> ModuleLayout:
    """A chain of n qubits along x: r_i = ((i - 1) * spacing, 0, ...) + offset.

    Args:
        n (int): Number of qubits.
        spacing (float): Δx. Defaults to 1.
        offset (ArrayLike): Added to every site; its length fixes the dimension.

    Returns:
        ModuleLayout: The chain.
    """
    if n < 1:
        raise ConfigError(f"a chain needs at least one qubit, got {n}")
    offset = np.asarray(offset, dtype=float)
    positions = np.zeros((n, offset.shape[0]))
    positions[:, 0] = np.arange(n) * spacing
    return ModuleLayout(positions + offset)


def grid_layout_appendix_c(n: int, dx: float = 1.0, dy: float = 1.0) -> ModuleLayout:
    """Fixed 3x3 mediator grid, filled centre first, then edges, then corners.

    The first n entries of the table are used (1 <= n <= 9).
    """
    table = np.array(
        [
            (dx, dy, 0.0),
            (2 * dx, dy, 0.0),
            (dx, 2 * dy, 0.0),
            (0.0, dy, 0.0),
            (dx, 0.0, 0.0),
            (2 * dx, 2 * dy, 0.0),
            (0.0, 0.0, 0.0),
            (0.0, 2 * dy, 0.0),
            (2 * dx, 0.0, 0.0),
        ],
    )
    if not 1 <= n <= len(table):
        raise ConfigError(f"the 2D mediator table holds 1-9 qubits, got {n}", key="N_A")
    return ModuleLayout(table[:n])


def grid_layout_appendix_d(
    n: int,
    dx: float = 1.0,
    dy: float = 1.0,
    z: float = 0.0,
) -> ModuleLayout:
    """Row-major 3-wide grid at height z used by the 2D collective setting (1 <= n <= 8)."""
    table = np.array(
        [
            (0.0, 0.0),
            (dx, 0.0),
            (2 * dx, 0.0),
            (0.0, dy),
            (dx, dy),
            (2 * dx, dy),
            (0.0, 2 * dy),
            (dx, 2 * dy),
        ],
    )
    if not 1 <= n <= len(table):
        raise ConfigError(f"the 2D collective table holds 1-8 qubits, got {n}")
    positions = np.column_stack([table[:n], np.full(n, z)])
    return ModuleLayout(positions)
