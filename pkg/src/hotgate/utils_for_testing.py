"""Utilities for testing."""
from io import StringIO
from typing import Optional

import numpy as np
import pandas as pd
from pandas import DataFrame

from hotgate.classical_noise.models import CouplingDistribution, CollectiveGaussianModel
from hotgate.geometry.layouts import linear_chain


def seeded_rng(seed: int = 0) -> np.random.Generator:
    """Counter-based generator used by every randomised test."""
    return np.random.Generator(np.random.Philox(seed))


def random_distribution(
    rng: np.random.Generator,
    n_nodes: Optional[int] = None,
    scale: float = 2.0,
) -> CouplingDistribution:
    """Random discrete distribution of μ̄ with positive normalised weights."""
    n_nodes = int(rng.integers(1, 8)) if n_nodes is None else n_nodes
    weights = rng.uniform(0.1, 1.0, size=n_nodes)
    return CouplingDistribution(rng.uniform(-scale, scale, size=n_nodes), weights / weights.sum())


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Symmetric n x n coupling table with zero diagonal."""
    upper = np.triu(rng.normal(size=(n, n)), k=1)
    return upper + upper.T


def random_logical_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=n)


def random_collective_model(rng: np.random.Generator) -> CollectiveGaussianModel:
    """Two short chains a random distance apart with collective x noise."""
    n_a, n_b = (int(n) for n in rng.integers(1, 4, size=2))
    dx = float(rng.uniform(0.5, 2.0))
    dy = float(rng.uniform(1.0, 3.0))
    return CollectiveGaussianModel(
        layoutA=linear_chain(n_a, spacing=dx),
        layoutB=linear_chain(n_b, spacing=dx, offset=(0.0, dy)),
        sigma=float(rng.uniform(0.1, 2.0)),
        noisy_axes=(0,),
    )


def str_to_df(string: str) -> DataFrame:
    """Convert a string representation of a dataframe to a dataframe.

    Args:
        string (str): Comma separated rows, header first.

    Returns:
        DataFrame: A dataframe without "Unnamed" columns.
    """
    df = pd.read_table(StringIO(string), sep=",", index_col=False)
    return df.loc[:, ~df.columns.str.contains("^Unnamed")]


def read_curve_csv(path) -> DataFrame:
    """Read a curve CSV written by the command line."""
    with open(path, encoding="utf-8") as f:
        return str_to_df(f.read())
