"""Gauss–Hermite rules for expectations under Gaussian position noise."""
from functools import reduce
from itertools import product
from typing import Union

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import roots_hermitenorm

from hotgate.errors import ConfigError

DEFAULT_ORDER_1D = 64
DEFAULT_ORDER_2D = 32
MAX_ORDER_1D = 2**17
MAX_ORDER_2D = 2**8
HERMGAUSS_LIMIT = 150


def default_order(n_axes: int) -> int:
    return DEFAULT_ORDER_1D if n_axes == 1 else DEFAULT_ORDER_2D


def max_order(n_axes: int) -> int:
    return MAX_ORDER_1D if n_axes == 1 else MAX_ORDER_2D


def gauss_hermite_normal(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for E[f(Z)], Z ~ N(0, 1).

    Args:
        order (int): Number of nodes.

    Returns:
        tuple[np.ndarray, np.ndarray]: Standard-normal nodes and weights summing to 1.
    """
    if int(order) != order or order < 1:
        raise ConfigError(f"quadrature order must be a positive integer, got {order}", key="order")
    if order > HERMGAUSS_LIMIT:
        # asymptotic roots, linear in the order
        t, w = roots_hermitenorm(int(order))
        return t, w / w.sum()
    t, w = hermgauss(int(order))
    return np.sqrt(2.0) * t, w / np.sqrt(np.pi)


def gaussian_grid(
    orders: Union[int, list[int]],
    means: np.ndarray,
    stds: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product rule for independent Gaussians along each axis.

    Axes with zero standard deviation collapse to their mean with a single
    node.

    Args:
        orders (int | list[int]): Nodes per axis.
        means (np.ndarray): Mean of each axis.
        stds (np.ndarray): Standard deviation of each axis.

    Returns:
        tuple[np.ndarray, np.ndarray]: Nodes of shape (n, d) and weights of shape (n,).
    """
    means = np.atleast_1d(np.asarray(means, dtype=float))
    stds = np.atleast_1d(np.asarray(stds, dtype=float))
    if isinstance(orders, (int, np.integer)):
        orders = [int(orders)] * means.shape[0]
    if not len(orders) == means.shape[0] == stds.shape[0]:
        raise ConfigError("orders, means and stds must have one entry per axis")

    rules = [gauss_hermite_normal(order if std > 0 else 1) for order, std in zip(orders, stds)]
    points = [mean + std * t for (t, _), mean, std in zip(rules, means, stds)]
    weights = reduce(np.kron, [w for _, w in rules])
    nodes = np.array(list(product(*points)), dtype=float).reshape(len(weights), len(points))
    return nodes, weights
