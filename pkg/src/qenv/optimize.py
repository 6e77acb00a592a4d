"""Multistart Nelder-Mead driver shared by every search in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels

DEFAULT_SEED = 20010131
INITIAL_SIMPLEX_SCALE = 0.5
SIMPLEX_DIAMETER_TOL = 1e-12
# relative spread of vertex values at which a restart counts as stalled
VALUE_SPREAD_RTOL = 1e-5


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 200
    max_evals_per_restart: int = 20000
    success_tol: float = 1e-8
    seed: int = DEFAULT_SEED
    stop_on_success: bool = True

    def __post_init__(self):
        if self.restarts < 1 or self.max_evals_per_restart < 1:
            raise ValueError("restarts and max_evals_per_restart must be positive")
        if not self.success_tol > 0:
            raise ValueError("success_tol must be positive")

    def to_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "max_evals_per_restart": self.max_evals_per_restart,
            "success_tol": self.success_tol,
            "seed": self.seed,
            "stop_on_success": self.stop_on_success,
        }


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, reproducible stream for one restart."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])


@dataclass
class MultistartOutcome:
    best_x: np.ndarray
    best_value: float
    values: list = field(default_factory=list)
    evals: int = 0
    histories: list = field(default_factory=list)


def multistart(
    objective,
    args: tuple,
    init: Callable[[np.random.Generator], np.ndarray],
    cfg: SearchConfig,
    stop_below: float | None = None,
    keep_histories: bool = False,
) -> MultistartOutcome:
    """Run ``cfg.restarts`` independent Nelder-Mead descents.

    ``objective`` must be a compiled kernel taking ``(x, *args)``. Restart
    ``i`` starts from ``init(restart_rng(cfg.seed, i))``. If ``stop_below``
    is given, the loop ends after the first restart reaching it. Ties in
    the minimum go to the lowest restart index.
    """
    best_x = None
    best_value = np.inf
    values = []
    histories = []
    evals = 0
    for i in range(cfg.restarts):
        x0 = np.asarray(init(restart_rng(cfg.seed, i)), dtype=float)
        x, fx, used, hist = _kernels.nelder_mead(
            objective,
            x0,
            args,
            INITIAL_SIMPLEX_SCALE,
            cfg.max_evals_per_restart,
            SIMPLEX_DIAMETER_TOL,
            VALUE_SPREAD_RTOL,
        )
        fx = float(fx)
        values.append(fx)
        evals += int(used)
        if keep_histories:
            histories.append(hist)
        if fx < best_value:
            best_value = fx
            best_x = x
        if stop_below is not None and best_value <= stop_below:
            break
    return MultistartOutcome(best_x, best_value, values, evals, histories)
