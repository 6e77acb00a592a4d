"""Quantum channels in Kraus form and their Choi matrices.

Choi convention: ``J = sum_ij E_ij ⊗ chi(E_ij)`` with the input index in
the first tensor factor and no normalization, so ``tr J = n`` for a
trace-preserving map and ``J >= 0`` exactly when the map is completely
positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    DimensionError,
    NotCompletelyPositiveError,
    NotTracePreservingError,
    NotUnitaryError,
)
from .linalg import as_matrix, dagger, hermitian_eig, is_unitary

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """A linear map ``rho -> sum_i A_i rho A_i^dagger`` from n x n to m x m.

    Construction only checks shapes. Use :meth:`from_kraus` (or
    :func:`is_trace_preserving`) when trace preservation must hold.
    """

    in_dim: int
    out_dim: int
    kraus: tuple

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise DimensionError("channel dimensions must be positive")
        ops = tuple(as_matrix(a, "Kraus operator") for a in self.kraus)
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        for a in ops:
            if a.shape != (self.out_dim, self.in_dim):
                raise DimensionError(
                    f"Kraus operator has shape {a.shape}, expected {(self.out_dim, self.in_dim)}"
                )
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_kraus(cls, kraus: Sequence, tol: float = DEFAULT_TOL, validate: bool = True):
        ops = [as_matrix(a, "Kraus operator") for a in kraus]
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        m, n = ops[0].shape
        ch = cls(n, m, tuple(ops))
        if validate:
            res = tp_residual(ch)
            if res > tol:
                raise NotTracePreservingError(
                    f"sum_i A_i^dagger A_i deviates from identity by {res:.3e} (tol {tol:g})"
                )
        return ch

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    n: int
    m: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.matrix, "Choi matrix")
        side = self.n * self.m
        if mat.shape != (side, side):
            raise DimensionError(f"Choi matrix for ({self.n}, {self.m}) must be {side}x{side}")
        object.__setattr__(self, "matrix", mat)


def identity_channel(n: int) -> QuantumChannel:
    return QuantumChannel(n, n, (np.eye(n, dtype=complex),))


def unitary_channel(u) -> QuantumChannel:
    u = as_matrix(u)
    if not is_unitary(u):
        raise NotUnitaryError("unitary_channel needs a unitary matrix")
    return QuantumChannel(u.shape[1], u.shape[0], (u,))


def von_neumann_channel(n: int) -> QuantumChannel:
    """Measurement in the computational basis: Kraus operators |i><i|."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    projectors = []
    for i in range(n):
        p = np.zeros((n, n), dtype=complex)
        p[i, i] = 1.0
        projectors.append(p)
    return QuantumChannel(n, n, tuple(projectors))


def apply(ch: QuantumChannel, rho) -> np.ndarray:
    rho = as_matrix(rho, "rho")
    if rho.shape != (ch.in_dim, ch.in_dim):
        raise DimensionError(f"state has shape {rho.shape}, channel expects {ch.in_dim}x{ch.in_dim}")
    out = np.zeros((ch.out_dim, ch.out_dim), dtype=complex)
    for a in ch.kraus:
        out += a @ rho @ dagger(a)
    return out


def _kraus_vectors(kraus) -> np.ndarray:
    # column k is vec(A_k) indexed by (input i, output a) -> i*m + a
    return np.column_stack([np.transpose(a).ravel() for a in kraus])


def choi(ch: QuantumChannel) -> ChoiMatrix:
    vecs = _kraus_vectors(ch.kraus)
    return ChoiMatrix(ch.in_dim, ch.out_dim, vecs @ dagger(vecs))


def tp_residual(ch: QuantumChannel) -> float:
    """Frobenius norm of ``sum_i A_i^dagger A_i - 1_n``."""
    total = sum(dagger(a) @ a for a in ch.kraus)
    return float(np.linalg.norm(total - np.eye(ch.in_dim)))


def is_trace_preserving(ch: QuantumChannel, tol: float = DEFAULT_TOL) -> bool:
    return tp_residual(ch) <= tol


def _as_choi(ch_or_choi: Union[QuantumChannel, ChoiMatrix]) -> ChoiMatrix:
    if isinstance(ch_or_choi, ChoiMatrix):
        return ch_or_choi
    return choi(ch_or_choi)


def min_choi_eigenvalue(ch_or_choi) -> float:
    return float(hermitian_eig(_as_choi(ch_or_choi).matrix).eigenvalues[-1])


def is_completely_positive(ch_or_choi, tol: float = DEFAULT_TOL) -> bool:
    return min_choi_eigenvalue(ch_or_choi) >= -tol


def kraus_from_choi(j: ChoiMatrix, tol: float = DEFAULT_TOL) -> QuantumChannel:
    """Canonical Kraus operators from the eigendecomposition of ``j``.

    Eigenvalues below ``tol`` are discarded; one below ``-tol`` means the
    map is not completely positive.
    """
    eig = hermitian_eig(j.matrix)
    if eig.eigenvalues[-1] < -tol:
        raise NotCompletelyPositiveError(
            f"Choi matrix has eigenvalue {eig.eigenvalues[-1]:.3e} < -{tol:g}"
        )
    ops = []
    for lam, vec in zip(eig.eigenvalues, eig.eigenvectors.T):
        if lam < tol:
            continue
        ops.append(np.sqrt(lam) * vec.reshape(j.n, j.m).T)
    if not ops:
        ops.append(np.zeros((j.m, j.n), dtype=complex))
    return QuantumChannel(j.n, j.m, tuple(ops))


def canonicalize(ch: QuantumChannel, tol: float = DEFAULT_TOL) -> QuantumChannel:
    return kraus_from_choi(choi(ch), tol)


def kraus_rank(ch: QuantumChannel, tol: float = DEFAULT_TOL) -> int:
    """Number of Choi eigenvalues above ``tol``."""
    return int(np.sum(hermitian_eig(choi(ch).matrix).eigenvalues > tol))


def is_extremal_rank_condition(ch: QuantumChannel, tol: float = DEFAULT_TOL) -> bool:
    """Sufficient test for extremality: Kraus rank at most the output dimension.

    A False result does not mean the channel is not extremal.
    """
    return kraus_rank(ch, tol) <= ch.out_dim


def mix_kraus(ch: QuantumChannel, u) -> QuantumChannel:
    """Return ``B_i = sum_j u_ij A_j``, padding the operator list with zeros."""
    u = as_matrix(u, "u")
    k = ch.num_kraus
    if u.shape[0] != u.shape[1] or u.shape[0] < k:
        raise DimensionError(f"mixing matrix must be square with side >= {k}, got {u.shape}")
    if not is_unitary(u, 1e-10):
        raise NotUnitaryError("mixing matrix is not unitary")
    stack = np.zeros((u.shape[0], ch.out_dim, ch.in_dim), dtype=complex)
    stack[:k] = np.array(ch.kraus)
    mixed = np.tensordot(u, stack, axes=(1, 0))
    return QuantumChannel(ch.in_dim, ch.out_dim, tuple(mixed))


def channel_distance(a: QuantumChannel, b: QuantumChannel) -> float:
    """``||J(a) - J(b)||_F / n``; zero exactly when the maps coincide."""
    if (a.in_dim, a.out_dim) != (b.in_dim, b.out_dim):
        raise DimensionError("channels act between different spaces")
    diff = choi(a).matrix - choi(b).matrix
    return float(np.linalg.norm(diff)) / a.in_dim
