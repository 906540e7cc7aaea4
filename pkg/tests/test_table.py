import math

import numpy as np
import pytest

from symchar.errors import BudgetExceeded, DimensionMismatch
from symchar.orbits import canonicalize, enumerate_orbits
from symchar.table import (
    build_table,
    build_unitary,
    negation_permutation,
    second_orthogonality_residual,
    superclass_transform,
)


def test_n2_d1_table():
    tab = build_table(2, 1)
    assert tab.count == 2
    S = np.array(tab.values)
    assert np.allclose(S, [[1, 1], [1, -1]])
    uni = build_unitary(tab)
    assert np.allclose(uni.matrix, S / math.sqrt(2))


def test_zero_orbit_row_and_column():
    # first row: sigma_0 = 1 everywhere; first column: sigma_X(0) = |X|
    tab = build_table(4, 3)
    S = np.array(tab.values)
    assert np.allclose(S[0], 1)
    assert np.allclose(S[:, 0], tab.sizes)


def test_unitary_residuals_small():
    for n, d in [(2, 2), (3, 2), (4, 2), (3, 3)]:
        uni = build_unitary(build_table(n, d))
        assert uni.residual_symmetry <= 1e-9
        assert uni.residual_unitary <= 1e-8


def test_unitary_squared_is_negation():
    tab = build_table(5, 2)
    uni = build_unitary(tab)
    perm = negation_permutation(tab)
    N = tab.count
    P = np.zeros((N, N))
    P[np.arange(N), perm] = 1
    assert np.abs(uni.matrix @ uni.matrix - P).max() < 1e-8


def test_negation_permutation_is_involution():
    tab = build_table(7, 2)
    perm = negation_permutation(tab)
    for i, j in enumerate(perm):
        assert perm[j] == i


def test_second_orthogonality():
    for n, d in [(3, 2), (4, 2), (5, 2)]:
        assert second_orthogonality_residual(build_table(n, d)) < 1e-8


def test_superclass_transform_constant():
    # transform of the all-ones class function: only the trivial line survives
    tab = build_table(2, 1)
    uni = build_unitary(tab)
    out = superclass_transform(uni, np.ones(2))
    assert np.allclose(out, [math.sqrt(2), 0])


def test_transform_accepts_raw_table():
    tab = build_table(3, 2)
    f = np.arange(tab.count, dtype=complex)
    assert np.allclose(superclass_transform(tab, f), superclass_transform(build_unitary(tab), f))


def test_transform_twice_is_negation_permutation():
    tab = build_table(5, 2)
    perm = negation_permutation(tab)
    rng = np.random.default_rng(7)
    f = rng.standard_normal(tab.count) + 1j * rng.standard_normal(tab.count)
    twice = superclass_transform(tab, superclass_transform(tab, f))
    assert np.abs(twice - f[perm]).max() < 1e-9


def test_transform_preserves_norm():
    tab = build_table(4, 3)
    rng = np.random.default_rng(11)
    for _ in range(5):
        f = rng.standard_normal(tab.count) + 1j * rng.standard_normal(tab.count)
        out = superclass_transform(tab, f)
        assert abs(np.linalg.norm(out) - np.linalg.norm(f)) < 1e-9


def test_transform_of_zero_indicator_is_size_column():
    tab = build_table(3, 2)
    f = np.zeros(tab.count)
    f[0] = 1.0  # the zero orbit is enumerated first
    out = superclass_transform(tab, f)
    expect = np.sqrt(tab.sizes.astype(float)) / 3.0  # sqrt(|X_i|) / sqrt(n^d)
    assert np.allclose(out, expect)


def test_superclass_transform_shape_check():
    tab = build_table(3, 2)
    uni = build_unitary(tab)
    with pytest.raises(DimensionMismatch):
        superclass_transform(uni, np.ones(5))


def test_orbit_budget():
    with pytest.raises(BudgetExceeded):
        build_table(50, 4, max_orbits=100)


def test_workers_match_serial():
    a = build_table(5, 3, workers=1)
    b = build_table(5, 3, workers=6)
    assert np.array_equal(a.values, b.values)
    assert a.orbits == b.orbits
