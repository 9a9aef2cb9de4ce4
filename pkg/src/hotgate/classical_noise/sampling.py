"""Monte Carlo draws of μ̄, used as an independent check on the quadrature.

Draws are generated in fixed-size blocks. Block k always uses the k-th child
of ``SeedSequence(seed)`` with a Philox generator, so results depend only on
the seed and never on how many threads produced them.
"""
from typing import Optional

import numpy as np
from tqdm import tqdm

from hotgate.classical_noise.models import (
    ColdMediatorModel,
    CollectiveGaussianModel,
    IndependentDiscreteModel,
    NoiseModel,
)
from hotgate.errors import ConfigError
from hotgate.geometry.coupling import coupling_matrix
from hotgate.geometry.layouts import ArrayLike, CouplingLaw, as_logical_vector
from hotgate.utils import ordered_map

BLOCK_SIZE = 2**15


def _draw_cold_mediator(model: ColdMediatorModel, a, b, law, rng, size) -> np.ndarray:
    positions = np.tile(model.center, (size, 1))
    axes = list(model.noisy_axes)
    positions[:, axes] += model.sigma * rng.standard_normal((size, len(axes)))
    mu = coupling_matrix(law, model.chain.positions, positions[:, None, :])
    return np.einsum("i,kij,j->k", a, mu, b)


def _draw_collective(model: CollectiveGaussianModel, a, b, law, rng, size) -> np.ndarray:
    axes = list(model.noisy_axes)
    shiftA = np.zeros((size, model.layoutA.dim))
    shiftB = np.zeros((size, model.layoutB.dim))
    shiftA[:, axes] = model.sigma * rng.standard_normal((size, len(axes)))
    shiftB[:, axes] = model.sigma * rng.standard_normal((size, len(axes)))
    mu = coupling_matrix(
        law,
        model.layoutA.positions[None] + shiftA[:, None, :],
        model.layoutB.positions[None] + shiftB[:, None, :],
    )
    return np.einsum("i,kij,j->k", a, mu, b)


def _draw_independent(model: IndependentDiscreteModel, a, b, law, rng, size) -> np.ndarray:
    n_a = len(model.layoutA)
    choice = rng.choice(
        model.kappa,
        size=(size, n_a + len(model.layoutB)),
        p=model.probabilities,
    )
    posA = model.layoutA.positions[None] + model.offsets[choice[:, :n_a]]
    posB = model.layoutB.positions[None] + model.offsets[choice[:, n_a:]]
    mu = coupling_matrix(law, posA, posB)
    return np.einsum("i,kij,j->k", a, mu, b)


def _sizes(model: NoiseModel) -> tuple[int, int]:
    if isinstance(model, ColdMediatorModel):
        return len(model.chain), 1
    return len(model.layoutA), len(model.layoutB)


def sample_coupling(
    model: NoiseModel,
    a: ArrayLike,
    b: ArrayLike,
    law: CouplingLaw,
    rng_seed: int,
    n: int,
    threads: Optional[int] = None,
    progress: bool = False,
) -> np.ndarray:
    """Draw n i.i.d. values of μ̄ under the model.

    Args:
        model (NoiseModel): Any classical noise model.
        a (ArrayLike): Logical vector of A.
        b (ArrayLike): Logical vector of B (length 1 for the cold mediator).
        law (CouplingLaw): Coupling law.
        rng_seed (int): Seed of the whole stream.
        n (int): Number of draws.
        threads (int, optional): Worker threads. Defaults to ``HOTGATE_THREADS``.
        progress (bool): Show a progress bar over the draws. Defaults to False.

    Returns:
        np.ndarray: n draws, identical for identical seeds.
    """
    if int(n) != n or n < 1:
        raise ConfigError(f"number of samples must be a positive integer, got {n}", key="n")
    n_a, n_b = _sizes(model)
    a = as_logical_vector(a, size=n_a)
    b = as_logical_vector(b, size=n_b)

    if isinstance(model, ColdMediatorModel):
        draw = _draw_cold_mediator
    elif isinstance(model, CollectiveGaussianModel):
        draw = _draw_collective
    elif isinstance(model, IndependentDiscreteModel):
        draw = _draw_independent
    else:
        raise ConfigError(f"unknown noise model {type(model).__name__}")

    n_blocks = -(-int(n) // BLOCK_SIZE)
    children = np.random.SeedSequence(rng_seed).spawn(n_blocks)
    sizes = [min(BLOCK_SIZE, int(n) - k * BLOCK_SIZE) for k in range(n_blocks)]

    with tqdm(total=int(n), disable=not progress, unit="draw") as pbar:

        def run_block(block: tuple[np.random.SeedSequence, int]) -> np.ndarray:
            seed, size = block
            rng = np.random.Generator(np.random.Philox(seed))
            values = draw(model, a, b, law, rng, size)
            pbar.update(size)
            return values

        return np.concatenate(ordered_map(run_block, zip(children, sizes), threads=threads))


def monte_carlo_estimate(samples: np.ndarray, func=None) -> tuple[float, float]:
    """Sample mean of func(samples) and its standard error.

    Raises:
        ConfigError: With fewer than two samples the standard error is undefined.
    """
    if len(samples) < 2:
        raise ConfigError(f"need at least 2 samples for a standard error, got {len(samples)}", key="n")
    values = samples if func is None else func(samples)
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(len(values)))
