"""Generalized depolarizing (Pauli) channels on a qubit.

``chi(rho) = e1 rho + e2 X rho X + e3 Y rho Y + e4 Z rho Z``. The weights
live on a tetrahedron inside the cube [-1, 1]^3 via

    x = e1 + e2 - e3 - e4,  y = e1 - e2 + e3 - e4,  z = e1 - e2 - e3 + e4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .channel import QuantumChannel
from .dilation import GroupedKraus
from .errors import OutsideTetrahedronError
from .linalg import I2, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z
from .optimize import SearchConfig, multistart

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class GeneralizedDepolarizing:
    eps: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float).copy()
        if e.shape != (4,):
            raise ValueError(f"need four weights, got shape {e.shape}")
        if np.any(e < -1e-12):
            raise ValueError(f"weights must be nonnegative, got {e}")
        if abs(e.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {e.sum():.15g}, not 1")
        e[e < 0] = 0.0
        object.__setattr__(self, "eps", e)

    def __iter__(self):
        return iter(self.eps)

    def __repr__(self):
        return f"GeneralizedDepolarizing({self.eps.tolist()})"


class TetraPoint(NamedTuple):
    x: float
    y: float
    z: float


class QubitEnvAngles(NamedTuple):
    theta: float
    phi1: float
    phi2: float


def channel_from_epsilon(e: GeneralizedDepolarizing) -> QuantumChannel:
    ops = tuple(np.sqrt(w) * p for w, p in zip(e.eps, PAULIS) if w > 0)
    return QuantumChannel(2, 2, ops)


def tetra_from_epsilon(e: GeneralizedDepolarizing) -> TetraPoint:
    e1, e2, e3, e4 = e.eps
    return TetraPoint(e1 + e2 - e3 - e4, e1 - e2 + e3 - e4, e1 - e2 - e3 + e4)


def barycentric(p: TetraPoint) -> np.ndarray:
    x, y, z = p
    return np.array([1 + x + y + z, 1 + x - y - z, 1 - x + y - z, 1 - x - y + z]) / 4.0


def epsilon_from_tetra(p: TetraPoint, tol: float = 1e-12) -> GeneralizedDepolarizing:
    eps = barycentric(p)
    for i, w in enumerate(eps):
        if w < -tol:
            raise OutsideTetrahedronError(
                f"point {tuple(p)} lies outside the tetrahedron: eps{i + 1} = {w:.3g} < 0"
            )
    return GeneralizedDepolarizing(np.clip(eps, 0.0, None))


def unitary_from_angles(a: QubitEnvAngles) -> np.ndarray:
    """Generalized m-th root of SWAP on qubit ⊗ environment qubit."""
    theta, phi1, phi2 = a
    ph = np.exp(1j * theta)
    c1, s1, c2, s2 = np.cos(phi1), np.sin(phi1), np.cos(phi2), np.sin(phi2)
    return np.array(
        [
            [ph * c1, 0, 0, 1j * ph * s1],
            [0, c2, 1j * s2, 0],
            [0, 1j * s2, c2, 0],
            [1j * ph * s1, 0, 0, ph * c1],
        ],
        dtype=complex,
    )


def epsilon_from_angles(a: QubitEnvAngles) -> GeneralizedDepolarizing:
    """Pauli weights of the channel made by :func:`unitary_from_angles` on a
    maximally mixed environment qubit. No relabeling is needed with the
    system-first tensor order used throughout the package."""
    return GeneralizedDepolarizing(_kernels.epsilon_from_angles(*map(float, a)))


def root_swap_epsilon(m: int) -> GeneralizedDepolarizing:
    """Depolarizing-line point reached by the m-th root of SWAP."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    w = np.sin(np.pi / (2 * m)) ** 2 / 4.0
    return GeneralizedDepolarizing([1.0 - 3.0 * w, w, w, w])


def qubit_membership(
    e: GeneralizedDepolarizing,
    tol: float = 1e-8,
    budget: SearchConfig | None = None,
) -> tuple[bool, QubitEnvAngles, float]:
    """Search the angle family for a point matching ``e``.

    Returns ``(found, angles, residual)`` with residual the Euclidean
    distance in weight space. ``found=True`` is a certificate (re-evaluate
    :func:`epsilon_from_angles`); ``found=False`` is only evidence.
    """
    cfg = budget or SearchConfig()
    target = np.ascontiguousarray(e.eps, dtype=float)
    out = multistart(
        _kernels.angles_residual,
        (target,),
        lambda rng: rng.uniform(0.0, TWO_PI, 3),
        cfg,
        stop_below=tol if cfg.stop_on_success else None,
    )
    angles = QubitEnvAngles(*np.mod(out.best_x, TWO_PI))
    residual = float(_kernels.angles_residual(np.array(angles), target))
    return residual <= tol, angles, residual


def two_pauli_channel(x: float) -> QuantumChannel:
    """Kraus operators sqrt(x) 1, sqrt((1-x)/2) X, i sqrt((1-x)/2) Y."""
    _check_unit(x)
    w = np.sqrt((1.0 - x) / 2.0)
    return QuantumChannel(2, 2, (np.sqrt(x) * I2, w * SIGMA_X, 1j * w * SIGMA_Y))


def two_pauli_epsilon(x: float) -> GeneralizedDepolarizing:
    _check_unit(x)
    return GeneralizedDepolarizing([x, (1.0 - x) / 2.0, (1.0 - x) / 2.0, 0.0])


def _check_unit(x: float):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"two-Pauli parameter must lie in [0, 1], got {x}")


def _ratio(num: float, den: float) -> float:
    if num == 0.0:
        return 0.0
    return num / den


# Convention fixed by checking all label/sign variants against both the
# environment constraint and the target channel (see tests): the weights
# e3 and e4 attach to Y and Z respectively, and the cross-term operator
# A_23 carries -i on the first branch and +i on the second.
_E3_OP = SIGMA_Y
_E4_OP = SIGMA_Z
_BRANCH1_PHASE = -1j
_BRANCH2_PHASE = 1j


def _qutrit_blocks(e, e3_op, e4_op, phase1, phase2) -> GroupedKraus:
    e1, e2, e3, e4 = (float(w) for w in e.eps)
    zero = np.zeros((2, 2), dtype=complex)
    if e1 * e2 >= e3 * e4:
        r = _ratio(e3 * e4, e1)
        a11, a12, a13 = zero, np.sqrt(e3) * e3_op, np.sqrt(e1) * I2
        a21 = np.sqrt(max(e2 - r, 0.0)) * SIGMA_X
        a22 = np.sqrt(e4) * e4_op
        a23 = phase1 * np.sqrt(r) * SIGMA_X
    else:
        r = _ratio(e1 * e2, e3)
        a11, a12, a13 = zero, np.sqrt(e1) * I2, np.sqrt(e3) * e3_op
        a21 = np.sqrt(max(e4 - r, 0.0)) * e4_op
        a22 = np.sqrt(e2) * SIGMA_X
        a23 = phase2 * np.sqrt(r) * e4_op
    spectrum = [e1 + e3, e2 + e4, 0.0]
    blocks = ((a11, a12, a13), (a21, a22, a23), (zero, zero, zero))
    return GroupedKraus(2, 2, spectrum, blocks)


def qutrit_construction(e: GeneralizedDepolarizing) -> GroupedKraus:
    """Explicit mixed-qutrit environment (one zero eigenvalue) for ``e``."""
    return _qutrit_blocks(e, _E3_OP, _E4_OP, _BRANCH1_PHASE, _BRANCH2_PHASE)


def epsilon_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles on a uniform grid over [0, 2pi]^3 and their Pauli weights, as arrays."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    axis = np.linspace(0.0, TWO_PI, resolution)
    th, p1, p2 = (g.ravel() for g in np.meshgrid(axis, axis, axis, indexing="ij"))
    c1, c2, s1, s2, ct = np.cos(p1), np.cos(p2), np.sin(p1), np.sin(p2), np.cos(th)
    eps = 0.25 * np.column_stack(
        [
            c1**2 + c2**2 + 2 * c1 * c2 * ct,
            s1**2 + s2**2 + 2 * s1 * s2 * ct,
            s1**2 + s2**2 - 2 * s1 * s2 * ct,
            c1**2 + c2**2 - 2 * c1 * c2 * ct,
        ]
    )
    return np.column_stack([th, p1, p2]), eps


def solution_set_sweep(resolution: int) -> list[tuple[QubitEnvAngles, GeneralizedDepolarizing, TetraPoint]]:
    angles, eps = epsilon_grid(resolution)
    out = []
    for a, w in zip(angles, eps):
        e = GeneralizedDepolarizing(w)
        out.append((QubitEnvAngles(*a), e, tetra_from_epsilon(e)))
    return out


def sweep_table(resolution: int) -> np.ndarray:
    """Rows of (theta, phi1, phi2, e1..e4, x, y, z) for the angle grid."""
    angles, eps = epsilon_grid(resolution)
    e1, e2, e3, e4 = eps.T
    xyz = np.column_stack([e1 + e2 - e3 - e4, e1 - e2 + e3 - e4, e1 - e2 - e3 + e4])
    return np.hstack([angles, eps, xyz])
