"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Runtime limits are part of every criterion and are measured here.
"""

import time

import numpy as np
import pytest

from _support import boundary_cases, dirichlet_eps
from qenv.channel import channel_distance, choi, kraus_from_choi, mix_kraus
from qenv.depolarizing import (
    GeneralizedDepolarizing,
    QubitEnvAngles,
    channel_from_epsilon,
    epsilon_from_angles,
    epsilon_from_tetra,
    qubit_membership,
    qutrit_construction,
    root_swap_epsilon,
    tetra_from_epsilon,
    two_pauli_channel,
    two_pauli_epsilon,
    unitary_from_angles,
)
from qenv.dilation import (
    DilationModel,
    EnvironmentSpec,
    induced_channel,
    param_count_pure,
    param_count_tcp,
    stinespring_from_kraus,
    verify_env_constraint,
)
from qenv.linalg import haar_random_unitary
from qenv.optimize import SearchConfig
from qenv.search import (
    TWO_PAULI_DILATION_FLOOR,
    TWO_PAULI_POLY_FLOOR,
    qubit_fraction_experiment,
    sample_random_channel,
    search_environment,
    two_pauli_infeasibility,
    two_pauli_poly_residual,
)

COMPLETE = channel_from_epsilon(GeneralizedDepolarizing([0.25] * 4))


def test_criterion_1_angle_family(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    env = EnvironmentSpec.maximally_mixed(2)
    worst = 0.0
    for angles in rng.uniform(0, 2 * np.pi, (1000, 3)):
        a = QubitEnvAngles(*angles)
        induced = induced_channel(DilationModel(2, 2, env, unitary_from_angles(a))).flatten()
        worst = max(worst, channel_distance(induced, channel_from_epsilon(epsilon_from_angles(a))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-10 and dt < 30
    acceptance(1, ok, f"angle family vs dilation, worst Choi distance {worst:.2e} (< 1e-10), {dt:.1f} s (< 30 s)")
    assert ok


def test_criterion_2_qutrit(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    cases = [dirichlet_eps(rng) for _ in range(1000)] + boundary_cases(rng)
    worst_c = worst_d = 0.0
    for e in cases:
        gk = qutrit_construction(e)
        worst_c = max(worst_c, verify_env_constraint(gk))
        worst_d = max(worst_d, channel_distance(gk.flatten(drop_empty=False), channel_from_epsilon(e)))
    dt = time.perf_counter() - t0
    ok = worst_c < 1e-12 and worst_d < 1e-12 and dt < 30
    acceptance(
        2,
        ok,
        f"qutrit construction on {len(cases)} points, constraint {worst_c:.1e}, "
        f"Choi distance {worst_d:.1e} (< 1e-12), {dt:.1f} s (< 30 s)",
    )
    assert ok


def test_criterion_3_parameter_counts(acceptance):
    pairs = [(n, m) for n in range(1, 5) for m in range(1, 5)]
    mismatches = [(n, m) for n, m in pairs if param_count_tcp(n, m) != param_count_pure(n, m, m * m)]
    ok = param_count_pure(2, 2, 4) == 12 and not mismatches
    acceptance(3, ok, f"pure(2,2,4) = {param_count_pure(2, 2, 4)}, tcp = pure at m^2 for all 16 (n, m): {not mismatches}")
    assert ok


@pytest.mark.slow
def test_criterion_4_two_pauli_exclusion(acceptance):
    t0 = time.perf_counter()
    parts, ok = [], True
    for x in (0.1, 0.5, 0.9):
        ch = two_pauli_channel(x)
        qubit = search_environment(ch, 2, SearchConfig(restarts=200))
        qutrit = search_environment(ch, 3, SearchConfig(restarts=200))
        floor = TWO_PAULI_DILATION_FLOOR[x]
        gk = qutrit_construction(two_pauli_epsilon(x))
        explicit = max(verify_env_constraint(gk), channel_distance(gk.flatten(), ch))
        ok &= not qubit.success and qubit.best_residual > floor / 2
        ok &= qutrit.success and qutrit.best_residual < 1e-8 and explicit < 1e-12
        parts.append(
            f"x={x}: d=2 best {qubit.best_residual:.3e} > {floor / 2:.3e}, "
            f"d=3 best {qutrit.best_residual:.1e} after {len(qutrit.per_restart_residuals)} restarts"
        )
    dt = time.perf_counter() - t0
    ok &= dt < 600
    acceptance(4, ok, "; ".join(parts) + f"; {dt:.0f} s (< 600 s)")
    assert ok


@pytest.mark.slow
def test_criterion_5_polynomial_system(acceptance):
    t0 = time.perf_counter()
    res = two_pauli_infeasibility(SearchConfig(restarts=200, stop_on_success=False))
    anchor = two_pauli_poly_residual(np.zeros(24))
    dt = time.perf_counter() - t0
    ok = res.best_residual > TWO_PAULI_POLY_FLOOR / 2 and anchor == 2.0 and dt < 300
    acceptance(
        5,
        ok,
        f"polynomial residual best {res.best_residual:.6f} > {TWO_PAULI_POLY_FLOOR / 2:.6f}, "
        f"zero-point anchor {anchor}, {dt:.0f} s (< 300 s)",
    )
    assert ok


def test_criterion_6_swap_family(acceptance):
    t0 = time.perf_counter()
    res = search_environment(COMPLETE, 2, SearchConfig(success_tol=1e-10))
    members = [qubit_membership(root_swap_epsilon(m), tol=1e-8) for m in range(1, 7)]
    dt = time.perf_counter() - t0
    worst = max(r for _, _, r in members)
    ok = res.success and res.best_residual < 1e-10 and all(f for f, _, _ in members) and dt < 120
    acceptance(
        6,
        ok,
        f"SWAP search residual {res.best_residual:.1e} (< 1e-10), root-of-SWAP m=1..6 "
        f"accepted with worst residual {worst:.1e} (<= 1e-8), {dt:.0f} s (< 120 s)",
    )
    assert ok


@pytest.mark.slow
def test_criterion_7_random_sampling(acceptance):
    t0 = time.perf_counter()
    rep = qubit_fraction_experiment(200, SearchConfig())
    dt = time.perf_counter() - t0
    ok = 0 < rep.fraction < 1 and dt < 1800
    acceptance(
        7,
        ok,
        f"qubit-simulable fraction {rep.successes}/{rep.count} = {rep.fraction:.3f} "
        f"(strictly inside (0, 1)), {dt:.0f} s (< 1800 s)",
    )
    assert ok


def test_criterion_8_round_trips(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    channels = [sample_random_channel(n, m, rng.integers(2**32)) for n, m in [(2, 2), (2, 3), (3, 2)] * 17][:50]
    stine = max(channel_distance(ch, induced_channel(stinespring_from_kraus(ch)).flatten()) for ch in channels)
    ck = max(np.linalg.norm(choi(kraus_from_choi(choi(ch))).matrix - choi(ch).matrix) for ch in channels)
    tetra = 0.0
    for _ in range(1000):
        e = dirichlet_eps(rng)
        p = tetra_from_epsilon(e)
        tetra = max(tetra, np.max(np.abs(epsilon_from_tetra(p).eps - e.eps)))
        tetra = max(tetra, np.max(np.abs(np.subtract(tetra_from_epsilon(epsilon_from_tetra(p)), p))))
    mix = 0.0
    for ch in channels[:20]:
        u = haar_random_unitary(ch.num_kraus + 2, rng)
        mix = max(mix, channel_distance(ch, mix_kraus(ch, u)))
        mix = max(mix, channel_distance(COMPLETE, mix_kraus(COMPLETE, haar_random_unitary(4, rng))))
    dt = time.perf_counter() - t0
    ok = stine < 1e-9 and ck < 1e-9 and tetra <= 1e-15 and mix < 1e-11 and dt < 60
    acceptance(
        8,
        ok,
        f"Stinespring {stine:.1e}, Choi/Kraus {ck:.1e} (< 1e-9), tetrahedron {tetra:.1e} (<= 1e-15), "
        f"mixing {mix:.1e} (< 1e-11), {dt:.1f} s (< 60 s)",
    )
    assert ok


def test_criterion_9_geometry_anchors(acceptance):
    vertices = {(1, -1, -1), (-1, 1, -1), (1, 1, 1), (-1, -1, 1)}
    images = {tetra_from_epsilon(GeneralizedDepolarizing(np.eye(4)[i])) for i in range(4)}
    # dyadic x keeps every sum exact in binary floating point
    xs = [k / 1024 for k in range(1025)]
    line = all(tetra_from_epsilon(two_pauli_epsilon(x)) == (x, x, 2 * x - 1) for x in xs)
    ok = images == vertices and line
    acceptance(9, ok, f"unit weights map to the cube vertices: {images == vertices}; two-Pauli line exact at {len(xs)} points: {line}")
    assert ok
