"""Channels implemented by a unitary acting on system plus environment.

The environment starts in ``sum_j lam_j |j><j|`` (computational basis).
After the joint unitary ``U`` on H_n ⊗ H_d, the output space is regrouped
as H_m ⊗ H_{nd/m} by splitting the row index lexicographically, and the
second factor is traced out. This yields grouped Kraus operators

    A_jk[a, p] = sqrt(lam_j) * U[a * (nd/m) + k, p * d + j].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import DEFAULT_TOL, QuantumChannel, tp_residual
from .errors import DimensionError, NotTracePreservingError, NotUnitaryError
from .linalg import as_matrix, complete_isometry, dagger, is_unitary


@dataclass(frozen=True, eq=False)
class EnvironmentSpec:
    dim: int
    spectrum: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.spectrum, dtype=float)
        if lam.shape != (self.dim,):
            raise DimensionError(f"spectrum needs {self.dim} entries, got {lam.size}")
        if np.any(lam < 0):
            raise ValueError("environment spectrum has a negative entry")
        if abs(lam.sum() - 1.0) > 1e-12:
            raise ValueError(f"environment spectrum sums to {lam.sum():.15g}, not 1")
        if np.any(np.diff(lam) > 0):
            raise ValueError("environment spectrum must be sorted in descending order")
        object.__setattr__(self, "spectrum", lam)

    @classmethod
    def pure(cls, dim: int) -> "EnvironmentSpec":
        lam = np.zeros(dim)
        lam[0] = 1.0
        return cls(dim, lam)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "EnvironmentSpec":
        return cls(dim, np.full(dim, 1.0 / dim))


@dataclass(frozen=True, eq=False)
class DilationModel:
    n: int
    m: int
    env: EnvironmentSpec
    unitary: np.ndarray

    def __post_init__(self):
        u = as_matrix(self.unitary, "unitary")
        side = self.n * self.env.dim
        if u.shape != (side, side):
            raise DimensionError(f"unitary must be {side}x{side} for n={self.n}, d={self.env.dim}")
        if side % self.m:
            raise DimensionError(f"output dimension {self.m} does not divide n*d = {side}")
        if not is_unitary(u, 1e-10):
            raise NotUnitaryError("dilation unitary is not unitary within 1e-10")
        object.__setattr__(self, "unitary", u)

    @property
    def d(self) -> int:
        return self.env.dim

    @property
    def traced_dim(self) -> int:
        return self.n * self.env.dim // self.m


@dataclass(frozen=True, eq=False)
class GroupedKraus:
    """Kraus operators grouped by environment eigenvector: ``blocks[j][k] = A_jk``."""

    n: int
    m: int
    spectrum: np.ndarray
    blocks: tuple

    def __post_init__(self):
        lam = np.asarray(self.spectrum, dtype=float)
        if len(self.blocks) != lam.size:
            raise DimensionError(f"{len(self.blocks)} blocks for a spectrum of length {lam.size}")
        sizes = {len(b) for b in self.blocks}
        if len(sizes) != 1 or 0 in sizes:
            raise DimensionError("blocks must all hold the same (nonzero) number of operators")
        blocks = tuple(tuple(as_matrix(a, "A_jk") for a in block) for block in self.blocks)
        for block in blocks:
            for a in block:
                if a.shape != (self.m, self.n):
                    raise DimensionError(f"operator shape {a.shape}, expected {(self.m, self.n)}")
        object.__setattr__(self, "spectrum", lam)
        object.__setattr__(self, "blocks", blocks)

    def flatten(self, drop_empty: bool = True) -> QuantumChannel:
        """All operators as one channel, skipping blocks with zero weight."""
        ops = [
            a
            for lam, block in zip(self.spectrum, self.blocks)
            if not (drop_empty and lam == 0.0)
            for a in block
        ]
        if not ops:
            ops = [np.zeros((self.m, self.n), dtype=complex)]
        return QuantumChannel(self.n, self.m, tuple(ops))


def induced_channel(dm: DilationModel) -> GroupedKraus:
    n, m, d, r = dm.n, dm.m, dm.d, dm.traced_dim
    # u5[a, k, p, j] = U[a r + k, p d + j]
    u5 = dm.unitary.reshape(m, r, n, d)
    blocks = []
    for j, lam in enumerate(dm.env.spectrum):
        blocks.append(tuple(np.sqrt(lam) * u5[:, k, :, j] for k in range(r)))
    return GroupedKraus(n, m, dm.env.spectrum, tuple(blocks))


def physical_map(dm: DilationModel, rho) -> np.ndarray:
    """``sum_j lam_j tr_env[U (rho ⊗ |j><j|) U^dagger]`` computed directly."""
    rho = as_matrix(rho, "rho")
    n, m, d, r = dm.n, dm.m, dm.d, dm.traced_dim
    out = np.zeros((m, m), dtype=complex)
    for j, lam in enumerate(dm.env.spectrum):
        if lam == 0.0:
            continue
        proj = np.zeros((d, d), dtype=complex)
        proj[j, j] = 1.0
        joint = dm.unitary @ np.kron(rho, proj) @ dagger(dm.unitary)
        out += lam * np.einsum("akbk->ab", joint.reshape(m, r, m, r))
    return out


def env_constraint_residual(gk: GroupedKraus) -> float:
    """max over (i, j) of ``||sum_k A_ik^dagger A_jk - delta_ij lam_i 1_n||_F``."""
    eye = np.eye(gk.n)
    worst = 0.0
    for i, bi in enumerate(gk.blocks):
        for j, bj in enumerate(gk.blocks):
            acc = sum(dagger(a) @ b for a, b in zip(bi, bj))
            if i == j:
                acc = acc - gk.spectrum[i] * eye
            worst = max(worst, float(np.linalg.norm(acc)))
    return worst


verify_env_constraint = env_constraint_residual


def mix_blocks(gk: GroupedKraus, u) -> GroupedKraus:
    """Post-interaction freedom: ``B_jk = sum_k' u[k, k'] A_jk'`` with one u for every j."""
    u = as_matrix(u, "u")
    r = len(gk.blocks[0])
    if u.shape != (r, r) or not is_unitary(u):
        raise NotUnitaryError(f"expected a {r}x{r} unitary")
    blocks = []
    for block in gk.blocks:
        stack = np.array(block)
        blocks.append(tuple(np.tensordot(u, stack, axes=(1, 0))))
    return GroupedKraus(gk.n, gk.m, gk.spectrum, tuple(blocks))


def _least_env_dim(n: int, m: int, k: int) -> int:
    d = max(k, 1)
    while (n * d) % m or n * d // m < k:
        d += 1
    return d


def stinespring_from_kraus(ch: QuantumChannel, tol: float = DEFAULT_TOL) -> DilationModel:
    """Pure-environment dilation with one environment level per Kraus operator.

    The isometry ``|psi> -> sum_k A_k|psi> ⊗ |e_k>`` is completed to a
    unitary; its columns sit at the input positions ``p * d + 0``.
    """
    res = tp_residual(ch)
    if res > tol:
        raise NotTracePreservingError(f"channel is not trace preserving (residual {res:.3e})")
    n, m = ch.in_dim, ch.out_dim
    d = _least_env_dim(n, m, ch.num_kraus)
    r = n * d // m
    ops = list(ch.kraus) + [np.zeros((m, n), dtype=complex)] * (r - ch.num_kraus)
    iso = np.zeros((m * r, n), dtype=complex)
    for k, a in enumerate(ops):
        iso[k::r, :] = a
    w = complete_isometry(iso, tol=max(tol, 1e-10) * 10)
    input_cols = [p * d for p in range(n)]
    rest = [c for c in range(n * d) if c % d]
    u = np.empty_like(w)
    u[:, input_cols] = w[:, :n]
    u[:, rest] = w[:, n:]
    return DilationModel(n, m, EnvironmentSpec.pure(d), u)


def _check_divides(n: int, m: int, d: int):
    if (n * d) % m:
        raise DimensionError(f"m={m} does not divide n*d={n * d}; parameter count undefined")


def param_count_pure(n: int, m: int, d: int) -> int:
    """Real parameters of channels from a d-dimensional pure environment: 2n²d - (nd/m)² - n²."""
    _check_divides(n, m, d)
    return 2 * n * n * d - (n * d // m) ** 2 - n * n


def param_count_tcp(n: int, m: int) -> int:
    """Dimension of the full set of n -> m channels, n²(m² - 1)."""
    if n < 1 or m < 1:
        raise DimensionError("dimensions must be positive")
    return n * n * (m * m - 1)


def _saturated_pure(n: int, m: int, d: int) -> int:
    # the pure count peaks at d = m² where it equals the full channel-set
    # dimension; larger environments cannot reach more channels
    if d >= m * m:
        return param_count_tcp(n, m)
    return param_count_pure(n, m, d)


def mix_param_bounds(n: int, m: int, d: int) -> tuple[int, int]:
    """Lower/upper bounds on the parameter count for a d-dimensional mixed environment.

    Lower bound: pure environment of dimension d. Upper bound: pure
    environment of dimension d². Both saturate at n²(m² - 1) once the
    environment dimension reaches m².
    """
    _check_divides(n, m, d)
    return _saturated_pure(n, m, d), _saturated_pure(n, m, d * d)

