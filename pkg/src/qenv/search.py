"""How small can the environment be?

Numerical search over mixed-environment dilations of a fixed dimension,
random-channel sampling, and a residual form of the polynomial system that
rules out a qubit environment for the two-Pauli channel.

Vocabulary: a successful search is a *certificate* (the returned
parameters rebuild a dilation that reproduces the target). A failed
search is *evidence* only, relative to the budget spent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .channel import ChoiMatrix, QuantumChannel, choi
from .dilation import DilationModel, EnvironmentSpec, induced_channel
from .errors import DimensionError
from .linalg import haar_random_unitary, unitary_from_generator
from .optimize import SearchConfig, multistart

# Reference floors: smallest residuals seen over 2000 restarts, seed 777
# (scripts/calibrate_floors.py). Exclusion checks compare against half.
TWO_PAULI_DILATION_FLOOR = {
    0.1: 0.019754317810863814,
    0.5: 0.04387138840747509,
    0.9: 3.825818809168604e-05,
}
TWO_PAULI_POLY_FLOOR = 0.2706412082277729


@dataclass
class SearchResult:
    best_residual: float
    best_unitary_params: np.ndarray
    best_spectrum: np.ndarray
    success: bool
    evals_used: int
    per_restart_residuals: list = field(default_factory=list)
    d: int | None = None
    best_params: np.ndarray | None = None
    histories: list | None = None

    @property
    def verdict(self) -> str:
        return "certificate" if self.success else "evidence"

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "best_residual": self.best_residual,
            "success": self.success,
            "verdict": self.verdict,
            "evals_used": self.evals_used,
            "best_unitary_params": np.asarray(self.best_unitary_params).tolist(),
            "best_spectrum": np.asarray(self.best_spectrum).tolist(),
            "per_restart": list(self.per_restart_residuals),
        }


def num_params(n: int, d: int) -> int:
    return (n * d) ** 2 + d - 1


def _check_dims(n: int, m: int, d: int):
    if d < 1:
        raise DimensionError("environment dimension must be >= 1")
    if (n * d) % m:
        raise DimensionError(f"output dimension {m} does not divide n*d = {n * d}")


def spectrum_from_params(z, d: int) -> np.ndarray:
    return _kernels.simplex_spectrum(np.asarray(z, dtype=float), d)


def dilation_from_params(n: int, m: int, d: int, params) -> DilationModel:
    """Rebuild the dilation encoded by a parameter vector (library path)."""
    _check_dims(n, m, d)
    params = np.asarray(params, dtype=float)
    size = (n * d) ** 2
    if params.shape != (num_params(n, d),):
        raise DimensionError(f"expected {num_params(n, d)} parameters, got {params.size}")
    u = unitary_from_generator(params[:size], n * d)
    lam = spectrum_from_params(params[size:], d)
    lam = lam / lam.sum()
    return DilationModel(n, m, EnvironmentSpec(d, lam), u)


def _target_parts(target: ChoiMatrix):
    return (
        np.ascontiguousarray(target.matrix.real),
        np.ascontiguousarray(target.matrix.imag),
    )


def dilation_objective(target: ChoiMatrix, d: int, params) -> float:
    """Squared Choi-matrix Frobenius distance between the dilation and the target."""
    _check_dims(target.n, target.m, d)
    params = np.ascontiguousarray(params, dtype=float)
    if params.shape != (num_params(target.n, d),):
        raise DimensionError(f"expected {num_params(target.n, d)} parameters, got {params.size}")
    tr, ti = _target_parts(target)
    return float(_kernels.dilation_objective(params, tr, ti, target.n, target.m, d))


def reference_objective(target: ChoiMatrix, d: int, params) -> float:
    """Same quantity as :func:`dilation_objective`, via the dilation module."""
    dm = dilation_from_params(target.n, target.m, d, params)
    diff = choi(induced_channel(dm).flatten(drop_empty=False)).matrix - target.matrix
    return float(np.sum(np.abs(diff) ** 2))


def search_environment(target: QuantumChannel, d: int, cfg: SearchConfig | None = None) -> SearchResult:
    """Multistart search for a d-dimensional mixed environment implementing ``target``."""
    cfg = cfg or SearchConfig()
    n, m = target.in_dim, target.out_dim
    _check_dims(n, m, d)
    tr, ti = _target_parts(choi(target))
    size = (n * d) ** 2
    dim = num_params(n, d)
    out = multistart(
        _kernels.dilation_objective,
        (tr, ti, n, m, d),
        lambda rng: rng.uniform(-np.pi, np.pi, dim),
        cfg,
        stop_below=cfg.success_tol if cfg.stop_on_success else None,
    )
    best = out.best_x
    return SearchResult(
        best_residual=out.best_value,
        best_unitary_params=best[:size].copy(),
        best_spectrum=spectrum_from_params(best[size:], d),
        success=out.best_value <= cfg.success_tol,
        evals_used=out.evals,
        per_restart_residuals=out.values,
        d=d,
        best_params=best.copy(),
    )


def minimal_env_dimension(
    target: QuantumChannel, d_max: int, cfg: SearchConfig | None = None
) -> tuple[int, list[SearchResult]]:
    """Smallest d <= d_max whose search succeeds, or ``d_max + 1`` if none does.

    Dimensions that are incompatible with the output dimension are skipped.
    """
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    results = []
    for d in range(1, d_max + 1):
        if (target.in_dim * d) % target.out_dim:
            continue
        res = search_environment(target, d, cfg)
        results.append(res)
        if res.success:
            return d, results
    return d_max + 1, results


def sample_random_channel(n: int, m: int, seed) -> QuantumChannel:
    """Haar-random unitary on n*m^2 dimensions acting on a pure environment."""
    if n < 1 or m < 1:
        raise DimensionError("dimensions must be positive")
    d = m * m
    u = haar_random_unitary(n * d, seed)
    dm = DilationModel(n, m, EnvironmentSpec.pure(d), u)
    return induced_channel(dm).flatten()


def sample_seed(base: int, index: int) -> int:
    return int(np.random.SeedSequence([int(base), int(index)]).generate_state(1, np.uint32)[0])


@dataclass
class SamplingReport:
    fraction: float
    successes: int
    count: int
    d: int
    sample_seeds: list
    results: list

    def to_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "successes": self.successes,
            "count": self.count,
            "d": self.d,
            "samples": [
                {
                    "seed": s,
                    "success": r.success,
                    "best_residual": r.best_residual,
                    "restarts_used": len(r.per_restart_residuals),
                }
                for s, r in zip(self.sample_seeds, self.results)
            ],
        }


def qubit_fraction_experiment(count: int, cfg: SearchConfig | None = None, d: int = 2, n: int = 2, m: int = 2) -> SamplingReport:
    """Fraction of Haar-sampled n -> m channels that a d-dimensional environment implements."""
    if count < 1:
        raise ValueError("count must be >= 1")
    cfg = cfg or SearchConfig()
    seeds, results = [], []
    for i in range(count):
        s = sample_seed(cfg.seed, i)
        ch = sample_random_channel(n, m, s)
        sub = SearchConfig(cfg.restarts, cfg.max_evals_per_restart, cfg.success_tol, s, cfg.stop_on_success)
        seeds.append(s)
        results.append(search_environment(ch, d, sub))
    hits = sum(r.success for r in results)
    return SamplingReport(hits / count, hits, count, d, seeds, results)


def two_pauli_poly_residual(coords) -> float:
    """Sum of squared moduli of the eleven two-Pauli constraint polynomials.

    ``coords`` packs a_0..a_3, b_0..b_3, c_0..c_3 as consecutive (re, im).
    """
    x = np.ascontiguousarray(coords, dtype=float)
    if x.shape != (24,):
        raise DimensionError(f"expected 24 coordinates, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("coordinates must be finite")
    return float(_kernels.two_pauli_poly_residual(x))


def two_pauli_infeasibility(cfg: SearchConfig | None = None, keep_histories: bool = False) -> SearchResult:
    """Minimize the polynomial residual over R^24 from many starting points.

    Here ``success`` means every restart stayed above ``cfg.success_tol``,
    i.e. no approximate common root was found. That is evidence, not proof.
    """
    cfg = cfg or SearchConfig()
    out = multistart(
        _kernels.two_pauli_poly_residual,
        (),
        lambda rng: rng.uniform(-1.0, 1.0, 24),
        cfg,
        keep_histories=keep_histories,
    )
    return SearchResult(
        best_residual=out.best_value,
        best_unitary_params=out.best_x.copy(),
        best_spectrum=np.empty(0),
        success=out.best_value > cfg.success_tol,
        evals_used=out.evals,
        per_restart_residuals=out.values,
        histories=out.histories if keep_histories else None,
    )
