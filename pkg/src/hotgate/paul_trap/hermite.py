"""Harmonic-oscillator eigenfunctions by three-term recurrence.

With ħ = m = 1 the n-th eigenfunction of frequency ν is
Ψ_n(u) = ν^(1/4) h_n(√ν u), where h_n(ξ) = p_n(ξ) e^(-ξ²/2) and p_n are the
Hermite polynomials normalised so that the h_n are orthonormal. The
recurrence avoids factorials, which overflow beyond n ≈ 170 and lose
precision much earlier.
"""
import numpy as np
from numpy.polynomial.hermite import hermgauss

from hotgate.errors import ConfigError


def normalized_hermite(n_max: int, xi: np.ndarray) -> np.ndarray:
    """p_0 ... p_{n_max} at xi, shape (n_max + 1, len(xi))."""
    if n_max < 0:
        raise ConfigError(f"n_max must be non-negative, got {n_max}")
    xi = np.asarray(xi, dtype=float)
    values = np.empty((n_max + 1,) + xi.shape)
    values[0] = np.pi**-0.25
    if n_max >= 1:
        values[1] = np.sqrt(2.0) * xi * values[0]
    for n in range(1, n_max):
        values[n + 1] = (
            np.sqrt(2.0 / (n + 1)) * xi * values[n] - np.sqrt(n / (n + 1)) * values[n - 1]
        )
    return values


def hermite_functions(n_max: int, xi: np.ndarray) -> np.ndarray:
    """h_n(ξ) = p_n(ξ) e^(-ξ²/2) for n = 0 ... n_max."""
    xi = np.asarray(xi, dtype=float)
    return normalized_hermite(n_max, xi) * np.exp(-0.5 * xi**2)


def oscillator_wavefunction(n: int, nu: float, u: np.ndarray) -> np.ndarray:
    """Ψ^ν_n(u) for a unit-mass oscillator of frequency ν."""
    u = np.asarray(u, dtype=float)
    return nu**0.25 * hermite_functions(n, np.sqrt(nu) * u)[n]


def level_quadrature(n_max: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Hermite rule for <n| f(ξ) |n>, n = 0 ... n_max.

    Returns the nodes ξ_k and W[n, k] = w_k p_n(ξ_k)², so that
    <n| f |n> ≈ sum_k W[n, k] f(ξ_k); exact for polynomial f of degree
    below 2·order - 2·n.
    """
    if order < 1:
        raise ConfigError(f"quadrature order must be positive, got {order}", key="order")
    xi, w = hermgauss(order)
    return xi, w[None, :] * normalized_hermite(n_max, xi) ** 2
