import numpy as np
import pytest

from chansim import simulate
from chansim.channels import (
    BallEffect,
    BallState,
    ClassicalProtocol,
    Delta,
    Noiseless,
    PerColumn,
    Permutohedron,
    ball_born_matrix,
    mixture_matrix,
    satisfies_noise,
    validate_mixture,
)
from chansim.certify import BinomialWitness
from chansim.errors import NotMajorized, PreconditionViolated
from chansim.linalg import born_matrix
from chansim.simulate import (
    SimulationResult,
    reduce_rows,
    simulate_ball,
    simulate_noisy_by_noiseless,
    simulate_quantum_noiseless,
    simulate_quantum_noisy,
)
from conftest import (
    random_ball_effects,
    random_ball_states,
    random_density,
    random_density_floor,
    random_density_in_permutohedron,
    random_povm,
    random_stochastic,
)

OCTAHEDRON = 0.5 * np.array(
    [
        [1, 0, 1, 0, 1, 0],
        [1, 0, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1],
        [0, 1, 0, 1, 1, 0],
    ],
    dtype=float,
)


def trine_povm():
    outcomes = []
    for t in range(3):
        angle = 2 * np.pi * t / 3
        vec = np.array([np.cos(angle / 2), np.sin(angle / 2)])
        outcomes.append((2.0 / 3.0) * np.outer(vec, vec).astype(complex))
    return outcomes


def check_simulation(result, noise=None, max_states=None):
    assert isinstance(result, SimulationResult)
    assert result.residual <= 1e-8
    recon = mixture_matrix(result.mixture).matrix
    assert np.max(np.abs(recon - result.target.matrix)) <= 1e-8
    weights = result.mixture.weights()
    assert abs(weights.sum() - 1.0) < 1e-9
    assert np.all(weights >= 0)
    validate_mixture(result.mixture)
    if max_states is not None:
        for _, prot in result.mixture.terms:
            assert prot.num_states <= max_states


def test_noiseless_projective_commuting_exact():
    povm = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    states = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    result = simulate_quantum_noiseless(povm, states)
    assert result.residual <= 1e-12
    check_simulation(result)


def test_noiseless_trine(rng):
    states = [random_density(rng, 2) for _ in range(2)]
    result = simulate_quantum_noiseless(trine_povm(), states)
    check_simulation(result, max_states=2)
    for _, prot in result.mixture.terms:
        assert prot.num_states == 2


def test_noiseless_random_instances(rng):
    for _ in range(5):
        povm = random_povm(rng, 3, 4)
        states = [random_density(rng, 3) for _ in range(3)]
        result = simulate_quantum_noiseless(povm, states)
        check_simulation(result, max_states=3)


def test_noiseless_matches_diagonal_reading(rng):
    # commuting case: diagonal POVM + diagonal states read off classically
    probs = random_stochastic(rng, 3, 3)
    povm = [np.diag(row) for row in random_stochastic(rng, 3, 3)]
    states = [np.diag(col) for col in probs.T]
    result = simulate_quantum_noiseless(povm, states)
    direct = np.array([[float(np.diag(e) @ np.diag(s)) for s in states] for e in povm])
    recon = mixture_matrix(result.mixture).matrix
    assert np.max(np.abs(recon - direct)) <= 1e-10
    assert np.max(np.abs(born_matrix(povm, states) - direct)) <= 1e-12


def test_noisy_delta_qubit(rng):
    delta = 0.5
    povm = random_povm(rng, 2, 3)
    states = [random_density_floor(rng, 2, delta) for _ in range(2)]
    result = simulate_quantum_noisy(povm, states, Delta(delta))
    check_simulation(result)
    for _, prot in result.mixture.terms:
        assert np.min(prot.states) >= delta / 2 - 1e-9


def test_noisy_degenerate_spec_matches_noiseless(rng):
    povm = random_povm(rng, 2, 3)
    states = [random_density(rng, 2) for _ in range(2)]
    spec = Permutohedron(base=(0.0, 1.0))
    noisy = simulate_quantum_noisy(povm, states, spec)
    noiseless = simulate_quantum_noiseless(povm, states)
    assert np.max(np.abs(
        mixture_matrix(noisy.mixture).matrix - mixture_matrix(noiseless.mixture).matrix
    )) <= 1e-8
    check_simulation(noisy)


def test_noisy_maximally_mixed_states_give_uniform_columns(rng):
    n = 3
    povm = random_povm(rng, n, 3)
    states = [np.eye(n) / n, np.eye(n) / n]
    result = simulate_quantum_noisy(povm, states, Delta(1.0))
    check_simulation(result)
    for _, prot in result.mixture.terms:
        assert np.max(np.abs(prot.states - 1.0 / n)) <= 1e-8


def test_noisy_spectrum_precondition_enforced(rng):
    povm = random_povm(rng, 2, 2)
    states = [random_density(rng, 2)]
    while np.min(np.linalg.eigvalsh(states[0])) > 0.2:
        states = [random_density(rng, 2)]
    with pytest.raises(NotMajorized):
        simulate_quantum_noisy(povm, states, Delta(0.9))


def test_noisy_per_column_specs(rng):
    povm = random_povm(rng, 2, 3)
    states = [random_density_floor(rng, 2, 0.6), random_density_floor(rng, 2, 0.2)]
    spec = PerColumn(specs=(Delta(0.6), Delta(0.2)))
    result = simulate_quantum_noisy(povm, states, spec)
    check_simulation(result)


def test_noisy_true_permutohedron_spec(rng):
    # a noise set that is not of the uniform-leak form: columns must land
    # in the permutation hull of the declared base
    from chansim.majorize import majorized_by_permutohedron
    from conftest import random_density_in_permutohedron

    base = np.array([0.1, 0.2, 0.7])
    spec = Permutohedron(base=tuple(base))
    povm = random_povm(rng, 3, 3)
    states = [random_density_in_permutohedron(rng, base) for _ in range(2)]
    result = simulate_quantum_noisy(povm, states, spec)
    check_simulation(result)
    for j, rho in enumerate(states):
        spectrum = np.sort(np.linalg.eigvalsh(rho))
        for _, prot in result.mixture.terms:
            col = prot.states[:, j]
            assert majorized_by_permutohedron(col, spectrum, 1e-8)
            assert majorized_by_permutohedron(col, base, 1e-8)


def test_noisy_dimension_four(rng):
    delta = 0.5
    povm = random_povm(rng, 4, 3)
    states = [random_density_floor(rng, 4, delta) for _ in range(2)]
    result = simulate_quantum_noisy(povm, states, Delta(delta))
    check_simulation(result)
    for _, prot in result.mixture.terms:
        assert prot.num_states == 4
        assert np.min(prot.states) >= delta / 4 - 1e-9


def test_noisy_columns_satisfy_full_subset_system(rng):
    # the returned per-tuple columns satisfy every subset-sum constraint of
    # the original (unaggregated) feasibility system
    from itertools import combinations as subsets

    delta = 0.25
    povm = random_povm(rng, 3, 3)
    states = [random_density_floor(rng, 3, delta) for _ in range(2)]
    result = simulate_quantum_noisy(povm, states, Delta(delta))
    check_simulation(result)
    for j, rho in enumerate(states):
        mu = np.sort(np.linalg.eigvalsh(rho))
        prefix = np.cumsum(mu)
        for _, prot in result.mixture.terms:
            col = prot.states[:, j]
            n = len(col)
            for h in range(1, n + 1):
                for sub in subsets(range(n), h):
                    assert sum(col[list(sub)]) >= prefix[h - 1] - 1e-8


def test_ball_disk_antipodal_noiseless():
    v = np.array([0.6, 0.8])
    effects = [
        BallEffect(c=0.5, v=0.5 * v, norm_index=2),
        BallEffect(c=0.5, v=-0.5 * v, norm_index=2),
    ]
    states = [BallState(x=v, norm_index=2), BallState(x=-v, norm_index=2)]
    result = simulate_ball(effects, states, delta=0.0)
    assert result.residual <= 1e-10
    check_simulation(result, max_states=2)
    assert result.mixture.num_states == 2


def test_ball_delta_one_identical_columns(rng):
    effects = [
        BallEffect(c=c, v=v, norm_index=2) for c, v in random_ball_effects(rng, 3, 2, 2)
    ]
    states = [BallState(x=x, norm_index=2) for x in random_ball_states(rng, 3, 2, 2)]
    result = simulate_ball(effects, states, delta=1.0)
    check_simulation(result)
    mat = mixture_matrix(result.mixture).matrix
    for j in range(1, mat.shape[1]):
        assert np.allclose(mat[:, j], mat[:, 0], atol=1e-10)


def test_ball_ellipsoid_quarter_noise(rng):
    effects = [
        BallEffect(c=c, v=v, norm_index=2) for c, v in random_ball_effects(rng, 3, 3, 2)
    ]
    states = [BallState(x=x, norm_index=2) for x in random_ball_states(rng, 2, 3, 2)]
    result = simulate_ball(effects, states, delta=0.25)
    check_simulation(result, max_states=2)
    for _, prot in result.mixture.terms:
        assert np.min(prot.states) >= 0.25 / 2 - 1e-9


def test_ball_norm_four(rng):
    effects = [
        BallEffect(c=c, v=v, norm_index=4) for c, v in random_ball_effects(rng, 3, 2, 4)
    ]
    states = [BallState(x=x, norm_index=4) for x in random_ball_states(rng, 2, 2, 4)]
    result = simulate_ball(effects, states, delta=0.5)
    check_simulation(result, max_states=4)


def test_noisy_by_noiseless_delta_at_threshold():
    n, delta = 4, 0.5
    d = 3  # ceil((1 - 0.5) * 4 + 0.5)
    x = np.column_stack(
        [np.full(n, delta / n) + (1 - delta) * np.eye(n)[:, j] for j in range(n)]
    )
    result = simulate_noisy_by_noiseless(Delta(delta), x, d)
    check_simulation(result, max_states=d)
    for _, prot in result.mixture.terms:
        assert prot.num_states == d


def test_noisy_by_noiseless_below_threshold_witness():
    n, delta = 4, 0.5
    x = np.column_stack(
        [np.full(n, delta / n) + (1 - delta) * np.eye(n)[:, j] for j in range(n)]
    )
    result = simulate_noisy_by_noiseless(Delta(delta), x, 2)
    assert isinstance(result, BinomialWitness)
    assert result.r == n - 1


def test_noisy_by_noiseless_full_d_always_feasible(rng):
    n = 3
    x = random_stochastic(rng, n, 2)
    result = simulate_noisy_by_noiseless(Noiseless(), x, n)
    check_simulation(result, max_states=n)


def test_noisy_by_noiseless_protocol_target(rng):
    n, d, delta = 4, 3, 0.5
    cols = []
    for _ in range(3):
        w = rng.dirichlet(np.ones(4))
        base = np.sort(np.full(n, delta / n) + (1 - delta) * np.eye(n)[:, 0])
        cols.append(sum(wi * rng.permutation(base) for wi in w))
    states = np.column_stack(cols)
    protocol = ClassicalProtocol(
        decoder=rng.integers(0, 3, size=n), states=states, num_outputs=3
    )
    result = simulate_noisy_by_noiseless(Delta(delta), protocol, d)
    check_simulation(result, max_states=d)


def test_noisy_by_noiseless_column_violation_raises():
    n, delta = 3, 0.6
    bad = np.array([[1.0], [0.0], [0.0]])
    with pytest.raises(NotMajorized):
        simulate_noisy_by_noiseless(Delta(delta), bad, 3)


def test_reduce_rows_half_matrix():
    a = np.full((2, 2), 0.5)
    result = reduce_rows(a, np.array([0.5, 0.5]))
    assert result.residual <= 1e-10
    for (w, b), i in zip(result.terms, range(2)):
        assert np.allclose(b.matrix[i, :], 0.0)
        assert np.max(np.abs(b.matrix.sum(axis=0) - 1.0)) < 1e-9


def test_reduce_rows_octahedron_uniform():
    result = reduce_rows(OCTAHEDRON, np.full(4, 0.25))
    assert result.residual <= 1e-8
    recon = sum(w * b.matrix for w, b in result.terms)
    assert np.max(np.abs(recon - OCTAHEDRON)) <= 1e-8
    for (w, b), i in zip(result.terms, range(4)):
        assert np.allclose(b.matrix[i, :], 0.0)


def test_reduce_rows_default_weights(rng):
    a = random_stochastic(rng, 4, 3) * 0.5 + 0.125
    result = reduce_rows(a)
    assert result.residual <= 1e-8


def test_reduce_rows_identity_rejected():
    with pytest.raises(PreconditionViolated):
        reduce_rows(np.eye(3))


def test_single_outcome_povm(rng):
    povm = [np.eye(2).astype(complex)]
    states = [random_density(rng, 2)]
    result = simulate_quantum_noiseless(povm, states)
    check_simulation(result)
    noisy = simulate_quantum_noisy(povm, states, Delta(0.0))
    check_simulation(noisy)


def test_one_dimensional_system():
    povm = [np.array([[0.3]]), np.array([[0.7]])]
    states = [np.array([[1.0]])]
    result = simulate_quantum_noiseless(povm, states)
    check_simulation(result)
    assert np.allclose(result.target.matrix, [[0.3], [0.7]])
