import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qenv.channel import choi, identity_channel, is_trace_preserving, kraus_rank
from qenv.depolarizing import GeneralizedDepolarizing, channel_from_epsilon, two_pauli_channel
from qenv.dilation import DilationModel, induced_channel
from qenv.errors import DimensionError
from qenv.linalg import generator_from_hermitian, haar_random_unitary
from qenv.optimize import SearchConfig, multistart, restart_rng
from qenv.search import (
    TWO_PAULI_POLY_FLOOR,
    dilation_from_params,
    dilation_objective,
    minimal_env_dimension,
    num_params,
    qubit_fraction_experiment,
    reference_objective,
    sample_random_channel,
    sample_seed,
    search_environment,
    spectrum_from_params,
    two_pauli_infeasibility,
    two_pauli_poly_residual,
)

seeds = st.integers(0, 2**32 - 1)
SWAP = np.eye(4)[[0, 2, 1, 3]]
COMPLETE = channel_from_epsilon(GeneralizedDepolarizing([0.25] * 4))
QUICK = SearchConfig(restarts=3, max_evals_per_restart=2000)


@st.composite
def shapes(draw):
    n = draw(st.integers(1, 3))
    d = draw(st.integers(1, 3))
    m = draw(st.sampled_from([k for k in range(1, n * d + 1) if (n * d) % k == 0]))
    return n, m, d


# simplex map

@given(st.lists(st.floats(-30, 30), min_size=0, max_size=5))
def test_spectrum_is_sorted_distribution(z):
    lam = spectrum_from_params(z, len(z) + 1)
    assert abs(lam.sum() - 1) < 1e-12
    assert np.all(lam >= 0) and np.all(np.diff(lam) <= 0)


def test_spectrum_of_zeros_is_uniform():
    assert np.allclose(spectrum_from_params(np.zeros(2), 3), 1 / 3)


# dilation objective

def test_objective_examples():
    assert dilation_objective(choi(identity_channel(2)), 1, np.zeros(4)) == 0.0
    # SWAP = exp(i pi/2 (1 - SWAP)); equal weights come from z = 0
    params = np.concatenate([generator_from_hermitian(np.pi / 2 * (np.eye(4) - SWAP)), [0.0]])
    assert dilation_objective(choi(COMPLETE), 2, params) < 1e-20
    target = choi(two_pauli_channel(0.5))
    rng = np.random.default_rng(0)
    values = [dilation_objective(target, 2, rng.uniform(-np.pi, np.pi, 17)) for _ in range(1000)]
    assert min(values) > 1e-4


def test_objective_rejects_bad_dims():
    with pytest.raises(DimensionError):
        dilation_objective(choi(identity_channel(2)), 1, np.zeros(5))
    with pytest.raises(DimensionError):
        dilation_objective(choi(sample_random_channel(2, 3, 0)), 2, np.zeros(num_params(2, 2)))
    with pytest.raises(DimensionError):
        search_environment(sample_random_channel(2, 3, 0), 2, QUICK)


@settings(max_examples=60)
@given(shapes(), seeds)
def test_kernel_matches_library_path(shape, seed):
    n, m, d = shape
    rng = np.random.default_rng(seed)
    target = choi(sample_random_channel(n, m, rng.integers(2**32)))
    params = rng.uniform(-np.pi, np.pi, num_params(n, d))
    fast = dilation_objective(target, d, params)
    slow = reference_objective(target, d, params)
    assert abs(fast - slow) <= 1e-12 * max(1.0, slow)


@settings(max_examples=30)
@given(shapes(), seeds)
def test_objective_blind_to_post_interaction_rotation(shape, seed):
    n, m, d = shape
    rng = np.random.default_rng(seed)
    target = choi(sample_random_channel(n, m, rng.integers(2**32)))
    params = rng.uniform(-np.pi, np.pi, num_params(n, d))
    dm = dilation_from_params(n, m, d, params)
    v = haar_random_unitary(dm.traced_dim, rng)
    rotated = DilationModel(n, m, dm.env, np.kron(np.eye(m), v) @ dm.unitary)
    diff = choi(induced_channel(rotated).flatten(drop_empty=False)).matrix - target.matrix
    assert abs(np.sum(np.abs(diff) ** 2) - dilation_objective(target, d, params)) < 1e-10


# search driver

def test_multistart_contracts():
    def init(rng):
        return rng.uniform(-1, 1, 3)

    from qenv import _kernels

    target = np.array([0.4, 0.3, 0.2, 0.1])
    cfg = SearchConfig(restarts=6, stop_on_success=False)
    a = multistart(_kernels.angles_residual, (target,), init, cfg, keep_histories=True)
    b = multistart(_kernels.angles_residual, (target,), init, cfg)
    assert a.values == b.values and np.array_equal(a.best_x, b.best_x)
    assert a.best_value == min(a.values)
    assert a.best_value == a.values[int(np.argmin(a.values))]
    for h in a.histories:
        assert np.all(np.diff(h) <= 0)
    early = multistart(_kernels.angles_residual, (target,), init, cfg, stop_below=np.inf)
    assert len(early.values) == 1


def test_restart_streams_are_distinct():
    draws = {restart_rng(5, i).random() for i in range(50)}
    assert len(draws) == 50
    assert restart_rng(5, 3).random() == restart_rng(5, 3).random()


def test_search_finds_swap():
    res = search_environment(COMPLETE, 2, SearchConfig(success_tol=1e-10))
    assert res.success and res.verdict == "certificate"
    assert res.best_residual < 1e-10
    assert res.best_residual == min(res.per_restart_residuals)
    # certificate: rebuild from the returned parameters
    again = reference_objective(choi(COMPLETE), 2, res.best_params)
    assert abs(again - res.best_residual) < 1e-12
    dm = dilation_from_params(2, 2, 2, res.best_params)
    assert np.allclose(dm.env.spectrum, res.best_spectrum)


def test_search_is_deterministic():
    ch = sample_random_channel(2, 2, 4)
    a = search_environment(ch, 2, QUICK)
    b = search_environment(ch, 2, QUICK)
    assert a.per_restart_residuals == b.per_restart_residuals
    assert np.array_equal(a.best_params, b.best_params)
    assert a.success == (a.best_residual <= QUICK.success_tol)
    assert a.to_dict()["verdict"] == a.verdict


def test_search_two_pauli_fails_at_qubit():
    res = search_environment(two_pauli_channel(0.5), 2)
    assert not res.success and res.verdict == "evidence"
    assert res.best_residual > 1e-4
    assert len(res.per_restart_residuals) == 200


@pytest.mark.slow
def test_search_qutrit_for_random_depolarizing():
    rng = np.random.default_rng(17)
    for _ in range(2):
        e = GeneralizedDepolarizing(rng.dirichlet(np.ones(4)))
        res = search_environment(channel_from_epsilon(e), 3)
        assert res.success and res.best_residual < 1e-8


# minimal dimension

def test_minimal_dimension_examples():
    d, results = minimal_env_dimension(identity_channel(2), 3)
    assert d == 1 and len(results) == 1
    d, results = minimal_env_dimension(COMPLETE, 4)
    assert d == 2 and [r.d for r in results] == [1, 2]
    d, results = minimal_env_dimension(two_pauli_channel(0.5), 1, QUICK)
    assert d == 2 and not results[0].success
    with pytest.raises(ValueError):
        minimal_env_dimension(COMPLETE, 0)


@pytest.mark.slow
def test_minimal_dimension_two_pauli():
    d, results = minimal_env_dimension(two_pauli_channel(0.5), 3)
    assert d == 3
    assert [r.success for r in results] == [False, False, True]


# random channels

@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(1, 3), seeds)
def test_random_channel_contracts(n, m, seed):
    ch = sample_random_channel(n, m, seed)
    assert is_trace_preserving(ch, 1e-12)
    assert kraus_rank(ch) <= n * m
    again = sample_random_channel(n, m, seed)
    assert all(np.array_equal(a, b) for a, b in zip(ch.kraus, again.kraus))


def test_fraction_experiment_contracts():
    cfg = SearchConfig(restarts=2, max_evals_per_restart=500, seed=3)
    a = qubit_fraction_experiment(3, cfg)
    b = qubit_fraction_experiment(3, cfg)
    assert a.to_dict() == b.to_dict()
    assert a.count == 3 and a.fraction == a.successes / 3
    assert a.sample_seeds == [sample_seed(3, i) for i in range(3)]
    with pytest.raises(ValueError):
        qubit_fraction_experiment(0, cfg)


# two-Pauli polynomial system

def poly_oracle(x):
    # straight from the definitions of u, w, v and g1..g11
    z = np.asarray(x[0::2]) + 1j * np.asarray(x[1::2])
    a, b, c = z[0:4], z[4:8], z[8:12]
    u0, u1 = (a[:2] + c[:2]) / np.sqrt(2), (a[2:] + c[2:]) / np.sqrt(2)
    w0, w1 = (c[:2] - a[:2]) / np.sqrt(2), (c[2:] - a[2:]) / np.sqrt(2)
    v0, v1 = b[:2], b[2:]
    br = np.vdot
    g = [
        br(v0, w0) + br(u0, v0),
        br(v1, w1) + br(u1, v1),
        br(v0, w1) + br(u0, v1),
        br(w0, v1) + br(v0, u1),
        br(u0, u0) - br(w0, w0),
        br(u1, u1) - br(w1, w1),
        br(u0, u0) + br(u1, u1) - 1,
        br(v0, v0) + br(v1, v1) - 1,
        br(u0, v0) + br(u1, v1),
        br(u0, w0) + br(u1, w1),
        br(u0, u1) - br(w0, w1),
    ]
    return float(sum(abs(x) ** 2 for x in g))


def test_poly_anchor_values():
    x = np.zeros(24)
    assert two_pauli_poly_residual(x) == 2.0
    x[8] = 1.0  # b0 = 1
    assert two_pauli_poly_residual(x) == 1.0
    x = np.zeros(24)
    x[0] = x[16] = 1 / np.sqrt(2)  # a0 = c0 = 1/sqrt(2) gives u0 = (1, 0), w0 = 0
    assert abs(two_pauli_poly_residual(x) - 2.0) < 1e-15


def test_poly_rejects_bad_input():
    with pytest.raises(DimensionError):
        two_pauli_poly_residual(np.zeros(23))
    bad = np.zeros(24)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        two_pauli_poly_residual(bad)


@settings(max_examples=200)
@given(st.lists(st.floats(-3, 3), min_size=24, max_size=24))
def test_poly_matches_oracle(x):
    got = two_pauli_poly_residual(x)
    assert abs(got - poly_oracle(x)) <= 1e-12 * max(1.0, got)


@given(seeds, st.floats(0, 2 * np.pi))
def test_poly_global_phase_invariance(seed, alpha):
    x = np.random.default_rng(seed).uniform(-1, 1, 24)
    z = (x[0::2] + 1j * x[1::2]) * np.exp(1j * alpha)
    y = np.empty(24)
    y[0::2], y[1::2] = z.real, z.imag
    assert abs(two_pauli_poly_residual(x) - two_pauli_poly_residual(y)) < 1e-12


def test_infeasibility_driver():
    cfg = SearchConfig(restarts=4, seed=11)
    a = two_pauli_infeasibility(cfg, keep_histories=True)
    b = two_pauli_infeasibility(cfg)
    assert a.best_residual == b.best_residual
    assert a.per_restart_residuals == b.per_restart_residuals
    assert len(a.histories) == 4
    for h in a.histories:
        assert np.all(np.diff(h) <= 0)
    assert a.success and a.best_residual > TWO_PAULI_POLY_FLOOR / 2
    assert abs(two_pauli_poly_residual(a.best_unitary_params) - a.best_residual) < 1e-15
