from itertools import product

import numpy as np
import pytest

from hotgate.errors import ConfigError, DomainError
from hotgate.geometry import (
    CouplingLaw,
    ModuleLayout,
    ModulePair,
    as_logical_vector,
    coupling_matrix,
    grid_layout_appendix_c,
    grid_layout_appendix_d,
    linear_chain,
    logical_coupling,
    pairwise_coupling,
    self_phase,
)


def test_pairwise_coupling_power_law(unit_law):
    """μ = J|r - q|^(-γ) for γ = 1 and γ = 3."""
    assert pairwise_coupling(unit_law, (0, 0), (3, 4)) == pytest.approx(0.2, abs=1e-15)
    assert pairwise_coupling(CouplingLaw(J=2.0, gamma=3), (0, 0), (0, 2)) == pytest.approx(0.25, abs=1e-15)


def test_coincident_positions_raise(unit_law):
    """Coupling at zero separation is a domain error."""
    with pytest.raises(DomainError):
        pairwise_coupling(unit_law, (1.0, 2.0), (1.0, 2.0))
    with pytest.raises(DomainError):
        ModuleLayout(np.array([[0.0, 0.0], [0.0, 0.0]]))


def test_invalid_law_and_vectors():
    """Negative J, γ = 0 and entries outside [-1, 1] are rejected."""
    with pytest.raises(ConfigError):
        CouplingLaw(J=-1.0)
    with pytest.raises(ConfigError):
        CouplingLaw(gamma=0)
    with pytest.raises(ConfigError):
        as_logical_vector([0.5, 1.5])
    with pytest.raises(ConfigError):
        as_logical_vector([1.0, 1.0], size=3)


def test_logical_coupling_bilinear(unit_law, rng):
    """μ̄ is bilinear in (a, b) and symmetric under swapping the modules."""
    A = linear_chain(3, spacing=1.0)
    B = linear_chain(2, spacing=1.0, offset=(0.5, 2.0))
    a = rng.uniform(-1, 1, size=3)
    b = rng.uniform(-1, 1, size=2)
    pair = ModulePair(A, B, a, b, unit_law)
    expected = sum(
        a[i] * b[j] * pairwise_coupling(unit_law, A.positions[i], B.positions[j])
        for i in range(3)
        for j in range(2)
    )
    assert logical_coupling(pair) == pytest.approx(expected, abs=1e-14)
    assert logical_coupling(pair.swapped()) == pytest.approx(expected, abs=1e-14)
    assert logical_coupling(ModulePair(A, B, np.zeros(3), b, unit_law)) == 0.0


def test_logical_coupling_at_displaced_positions(unit_law):
    """Actual positions override the layout."""
    pair = ModulePair(linear_chain(1), linear_chain(1, offset=(0.0, 1.0)), [1.0], [-1.0], unit_law)
    assert logical_coupling(pair) == pytest.approx(-1.0)
    assert logical_coupling(pair, posB=[[0.0, 2.0]]) == pytest.approx(-0.5)


def test_coupling_matrix_batched(unit_law, rng):
    """Leading batch axes are carried through."""
    posA = rng.normal(size=(5, 2, 2))
    posB = rng.normal(size=(5, 3, 2)) + 10.0
    mu = coupling_matrix(unit_law, posA, posB)
    assert mu.shape == (5, 2, 3)
    assert mu[2, 1, 0] == pytest.approx(pairwise_coupling(unit_law, posA[2, 1], posB[2, 0]))


def test_self_phase(unit_law):
    """Sum over pairs i < j of v_i v_j μ(r_i, r_j)."""
    chain = linear_chain(3, spacing=1.0)
    assert self_phase(chain, np.ones(3), unit_law) == pytest.approx(2.5)
    assert self_phase(chain, [1.0, -1.0, 1.0], unit_law) == pytest.approx(-1.5)
    assert self_phase(linear_chain(1), [1.0], unit_law) == 0.0


def test_layout_tables():
    """Grid tables fill in their documented order and enforce their sizes."""
    c = grid_layout_appendix_c(2, dx=1.0, dy=2.0)
    np.testing.assert_allclose(c.positions, [[1.0, 2.0, 0.0], [2.0, 2.0, 0.0]])
    d = grid_layout_appendix_d(4, dx=1.0, dy=1.0, z=3.0)
    np.testing.assert_allclose(d.positions[3], [0.0, 1.0, 3.0])
    with pytest.raises(ConfigError):
        grid_layout_appendix_c(10)
    with pytest.raises(ConfigError):
        grid_layout_appendix_d(9)
    np.testing.assert_allclose(linear_chain(3, 2.0, offset=(0.0, 1.0)).positions[:, 0], [0.0, 2.0, 4.0])


def test_trivial_encoding_maximises_coupling(unit_law, rng):
    """With every pair coupling positive, no vector in the box beats a = b = 1 in |μ̄|."""
    A = linear_chain(4, spacing=1.0)
    B = linear_chain(3, spacing=1.5, offset=(0.3, 2.0))
    trivial = logical_coupling(ModulePair(A, B, np.ones(4), np.ones(3), unit_law))
    for signs_a in product((-1.0, 1.0), repeat=4):
        for signs_b in product((-1.0, 1.0), repeat=3):
            assert abs(logical_coupling(ModulePair(A, B, signs_a, signs_b, unit_law))) <= trivial + 1e-15
    for _ in range(100):
        a, b = rng.uniform(-1, 1, size=4), rng.uniform(-1, 1, size=3)
        assert abs(logical_coupling(ModulePair(A, B, a, b, unit_law))) <= trivial


def test_coupling_is_translation_invariant(unit_law, rng):
    """Shifting both modules by the same vector leaves every coupling unchanged."""
    posA = rng.normal(size=(3, 2))
    posB = rng.normal(size=(2, 2)) + np.array([0.0, 5.0])
    shift = 10.0 * rng.normal(size=2)
    np.testing.assert_allclose(
        coupling_matrix(unit_law, posA + shift, posB + shift),
        coupling_matrix(unit_law, posA, posB),
        rtol=1e-12,
    )
    pair = ModulePair(ModuleLayout(posA), ModuleLayout(posB), np.ones(3), [1.0, -0.5], CouplingLaw(J=2.0, gamma=3))
    shifted = logical_coupling(pair, posA=posA + shift, posB=posB + shift)
    assert shifted == pytest.approx(logical_coupling(pair), rel=1e-12)
