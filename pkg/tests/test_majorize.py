import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import scipy.optimize

from chansim import majorize
from chansim.errors import BadRange, LengthMismatch, NotDoublyStochastic, NotMajorized


def random_doubly_stochastic(rng, n, terms=6):
    w = rng.dirichlet(np.ones(terms))
    d = np.zeros((n, n))
    for t in range(terms):
        perm = rng.permutation(n)
        d[np.arange(n), perm] += w[t]
    return d


def lp_birkhoff_oracle(d):
    """Brute-force oracle: decompose via an LP over all permutation matrices."""
    n = d.shape[0]
    perms = list(permutations(range(n)))
    a = np.zeros((n * n + 1, len(perms)))
    for t, perm in enumerate(perms):
        p = np.zeros((n, n))
        p[np.arange(n), perm] = 1.0
        a[: n * n, t] = p.ravel()
    a[-1, :] = 1.0
    b = np.concatenate([d.ravel(), [1.0]])
    res = scipy.optimize.linprog(
        c=np.zeros(len(perms)), A_eq=a, b_eq=b, bounds=[(0, None)] * len(perms)
    )
    if not res.success:
        return None
    recon = np.zeros((n, n))
    for t, perm in enumerate(perms):
        recon[np.arange(n), perm] += res.x[t]
    return recon


def test_majorized_trivials():
    x = np.array([0.2, 0.3, 0.5])
    assert majorize.majorized_by_permutohedron(x, x)
    uniform = np.ones(3) / 3
    assert majorize.majorized_by_permutohedron(uniform, x)
    assert not majorize.majorized_by_permutohedron(
        np.array([1.0, 0.0, 0.0]), uniform
    )


def test_majorized_length_mismatch():
    with pytest.raises(LengthMismatch):
        majorize.majorized_by_permutohedron(np.ones(2) / 2, np.ones(3) / 3)


def test_hlp_identity_single_term():
    mu = np.array([0.1, 0.6, 0.3])
    mix = majorize.hlp_decompose(mu, mu)
    assert len(mix.terms) == 1
    w, perm = mix.terms[0]
    assert w == pytest.approx(1.0)
    assert perm == (0, 1, 2)


def test_hlp_uniform_from_skewed():
    mu = np.ones(3) / 3
    nu = np.array([0.0, 1.0 / 3.0, 2.0 / 3.0])
    mix = majorize.hlp_decompose(mu, nu)
    assert np.max(np.abs(mix.apply(nu) - mu)) < 1e-10
    assert abs(mix.total_weight() - 1.0) < 1e-9


def test_hlp_random_interior_points(rng):
    for _ in range(100):
        n = int(rng.integers(2, 6))
        nu = rng.dirichlet(np.ones(n))
        terms = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(terms))
        mu = np.zeros(n)
        for t in range(terms):
            mu += w[t] * rng.permutation(nu)
        mix = majorize.hlp_decompose(mu, nu)
        assert np.max(np.abs(mix.apply(nu) - mu)) < 1e-8
        assert len(mix.terms) <= (n - 1) ** 2 + 1
        assert all(wt >= 0 for wt, _ in mix.terms)
        assert abs(mix.total_weight() - 1.0) < 1e-9


def test_hlp_not_majorized():
    with pytest.raises(NotMajorized):
        majorize.hlp_decompose(np.array([1.0, 0.0]), np.array([0.5, 0.5]))


def test_birkhoff_permutation_is_fixed_point():
    p = np.zeros((3, 3))
    p[[0, 1, 2], [2, 0, 1]] = 1.0
    mix = majorize.birkhoff(p)
    assert len(mix.terms) == 1
    assert mix.terms[0][0] == pytest.approx(1.0)
    assert np.allclose(mix.matrix(3), p)


def test_birkhoff_half_half():
    d = np.ones((2, 2)) / 2
    mix = majorize.birkhoff(d)
    assert len(mix.terms) == 2
    assert sorted(w for w, _ in mix.terms) == pytest.approx([0.5, 0.5])


def test_birkhoff_random_reconstruction(rng):
    for _ in range(50):
        n = int(rng.integers(2, 6))
        d = random_doubly_stochastic(rng, n, terms=int(rng.integers(2, 8)))
        mix = majorize.birkhoff(d)
        assert np.max(np.abs(mix.matrix(n) - d)) < 1e-8
        assert len(mix.terms) <= (n - 1) ** 2 + 1


def test_birkhoff_not_doubly_stochastic():
    with pytest.raises(NotDoublyStochastic):
        majorize.birkhoff(np.array([[0.9, 0.0], [0.1, 1.0]]))


def test_birkhoff_agrees_with_lp_oracle(rng):
    for _ in range(20):
        d = random_doubly_stochastic(rng, 3, terms=4)
        mix = majorize.birkhoff(d)
        oracle = lp_birkhoff_oracle(d)
        assert oracle is not None
        assert np.max(np.abs(mix.matrix(3) - d)) < 1e-8
        assert np.max(np.abs(oracle - d)) < 1e-6


def test_max_subset_distribution_values():
    assert np.allclose(
        majorize.max_subset_distribution(3, 2), [0.0, 1.0 / 3.0, 2.0 / 3.0]
    )
    assert np.allclose(majorize.max_subset_distribution(4, 4), [0, 0, 0, 1])
    assert np.allclose(majorize.max_subset_distribution(5, 1), np.ones(5) / 5)


def test_max_subset_distribution_prefix_sums_exact():
    for n in range(1, 7):
        for d in range(1, n + 1):
            nu = majorize.max_subset_distribution(n, d)
            prefix = np.cumsum(nu)
            for r in range(1, n + 1):
                want = Fraction(math.comb(r, d), math.comb(n, d))
                assert prefix[r - 1] == pytest.approx(float(want), abs=1e-15)


def test_max_subset_distribution_bad_range():
    with pytest.raises(BadRange):
        majorize.max_subset_distribution(3, 0)
    with pytest.raises(BadRange):
        majorize.max_subset_distribution(3, 4)
