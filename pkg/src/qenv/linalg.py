"""Dense complex linear algebra for channel calculations.

Matrices are plain ``numpy`` complex128 arrays. Tensor products always put
the system factor first and the environment factor second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError, NotHermitianError, NotIsometryError

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array (vectors become single columns)."""
    arr = np.array(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` indexes the outer blocks."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def partial_trace(m, dim_keep: int, dim_trace: int, trace_second: bool = True) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    With ``trace_second`` the operator is read as keep ⊗ trace, otherwise
    as trace ⊗ keep.
    """
    m = as_matrix(m)
    side = dim_keep * dim_trace
    if m.shape != (side, side):
        raise DimensionError(
            f"cannot factor a {m.shape[0]}x{m.shape[1]} matrix as "
            f"{dim_keep}x{dim_trace} on both sides"
        )
    if trace_second:
        t = m.reshape(dim_keep, dim_trace, dim_keep, dim_trace)
        return np.einsum("ajbj->ab", t)
    t = m.reshape(dim_trace, dim_keep, dim_trace, dim_keep)
    return np.einsum("jajb->ab", t)


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def hermitian_eig(m, herm_tol: float = 1e-10) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized first; asymmetry larger than ``herm_tol``
    (relative to ``max(1, ||m||_F)``) is rejected.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    scale = max(1.0, float(np.linalg.norm(m)))
    asym = float(np.linalg.norm(m - dagger(m)))
    if asym > herm_tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (||M - M^dagger||_F = {asym:.3e})")
    h = 0.5 * (m + dagger(m))
    hr = np.ascontiguousarray(h.real)
    hi = np.ascontiguousarray(h.imag)
    n = h.shape[0]
    vr = np.empty((n, n))
    vi = np.empty((n, n))
    sweeps = _kernels.jacobi_eigh(hr, hi, vr, vi, _kernels.JACOBI_TOL, _kernels.JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ArithmeticError("Jacobi iteration did not converge")
    w = np.diag(hr).copy()
    order = np.argsort(-w, kind="stable")
    return HermitianEigen(w[order], (vr + 1j * vi)[:, order])


def generator_size(dim: int) -> int:
    return dim * dim


def hermitian_from_generator(v, dim: int) -> np.ndarray:
    """Unpack ``dim**2`` reals into a Hermitian matrix.

    The first ``dim`` entries are the diagonal; the rest are (re, im)
    pairs for the strict upper triangle in row-major order.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (dim * dim,):
        raise DimensionError(f"generator for dim={dim} needs {dim * dim} reals, got {v.size}")
    h = np.diag(v[:dim]).astype(complex)
    iu, ju = np.triu_indices(dim, 1)
    pairs = v[dim:].reshape(-1, 2)
    h[iu, ju] = pairs[:, 0] + 1j * pairs[:, 1]
    h[ju, iu] = pairs[:, 0] - 1j * pairs[:, 1]
    return h


def generator_from_hermitian(h) -> np.ndarray:
    """Inverse of :func:`hermitian_from_generator`."""
    h = as_matrix(h)
    dim = h.shape[0]
    iu, ju = np.triu_indices(dim, 1)
    upper = h[iu, ju]
    pairs = np.column_stack([upper.real, upper.imag]).ravel()
    return np.concatenate([np.real(np.diag(h)), pairs])


def unitary_from_generator(v, dim: int) -> np.ndarray:
    """exp(iH) for the Hermitian H packed in ``v``, via :func:`hermitian_eig`."""
    eig = hermitian_eig(hermitian_from_generator(v, dim))
    vecs = eig.eigenvectors
    return (vecs * np.exp(1j * eig.eigenvalues)) @ dagger(vecs)


def haar_random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0]))) <= tol


def complete_isometry(v, tol: float = 1e-10) -> np.ndarray:
    """Extend a matrix with orthonormal columns to a square unitary.

    The first columns of the result are exactly ``v``; the remaining ones
    come from Gram-Schmidt on the computational basis, always taking the
    candidate with the largest residual norm.
    """
    v = as_matrix(v, "v")
    rows, cols = v.shape
    if rows < cols:
        raise DimensionError(f"isometry needs rows >= cols, got {v.shape}")
    defect = float(np.linalg.norm(dagger(v) @ v - np.eye(cols)))
    if defect > tol:
        raise NotIsometryError(f"columns are not orthonormal (||V^dagger V - 1||_F = {defect:.3e})")
    basis = [v[:, k] for k in range(cols)]
    while len(basis) < rows:
        q = np.column_stack(basis)
        cand = np.eye(rows, dtype=complex)
        cand -= q @ (dagger(q) @ cand)
        cand -= q @ (dagger(q) @ cand)
        norms = np.linalg.norm(cand, axis=0)
        k = int(np.argmax(norms))
        w = cand[:, k] / norms[k]
        w -= q @ (dagger(q) @ w)
        basis.append(w / np.linalg.norm(w))
    u = np.column_stack(basis)
    u[:, :cols] = v
    return u
