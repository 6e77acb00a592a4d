"""File formats: channel JSON, dilation JSON, search reports and sweep CSV.

Complex numbers are written as two-element arrays ``[re, im]``; matrices
as lists of rows.
"""

from __future__ import annotations

import csv
import io
import json
from typing import IO

import numpy as np

from .channel import DEFAULT_TOL, QuantumChannel, tp_residual
from .depolarizing import sweep_table
from .dilation import DilationModel, EnvironmentSpec
from .errors import NotTracePreservingError, SchemaError
from .optimize import SearchConfig

SWEEP_HEADER = ["theta", "phi1", "phi2", "eps1", "eps2", "eps3", "eps4", "x", "y", "z"]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{name}: entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise SchemaError(f"{name}: expected a non-empty list of rows of [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{name}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(data, key, kind):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"missing field {key!r}")
    value = data[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"field {key!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise SchemaError(f"field {key!r} must be a list")
    return value


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {
        "in_dim": ch.in_dim,
        "out_dim": ch.out_dim,
        "kraus": [matrix_to_json(a) for a in ch.kraus],
    }


def channel_from_dict(data, tol: float = DEFAULT_TOL, validate: bool = True) -> QuantumChannel:
    n = _require(data, "in_dim", int)
    m = _require(data, "out_dim", int)
    ops = _require(data, "kraus", list)
    if n < 1 or m < 1 or not ops:
        raise SchemaError("dimensions must be positive and 'kraus' non-empty")
    mats = [matrix_from_json(a, f"kraus[{i}]") for i, a in enumerate(ops)]
    for i, a in enumerate(mats):
        if a.shape != (m, n):
            raise SchemaError(f"kraus[{i}] has shape {a.shape}, expected {(m, n)}")
    ch = QuantumChannel(n, m, tuple(mats))
    if validate:
        res = tp_residual(ch)
        if res > tol:
            raise NotTracePreservingError(
                f"sum_i A_i^dagger A_i deviates from identity by {res:.3e} (tol {tol:g})"
            )
    return ch


def dilation_to_dict(dm: DilationModel) -> dict:
    return {
        "n": dm.n,
        "m": dm.m,
        "spectrum": [float(x) for x in dm.env.spectrum],
        "unitary": matrix_to_json(dm.unitary),
    }


def dilation_from_dict(data) -> DilationModel:
    n = _require(data, "n", int)
    m = _require(data, "m", int)
    lam = _require(data, "spectrum", list)
    u = matrix_from_json(_require(data, "unitary", list), "unitary")
    try:
        spectrum = np.array(lam, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError("spectrum must be a list of reals") from exc
    return DilationModel(n, m, EnvironmentSpec(spectrum.size, spectrum), u)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def read_json(path) -> object:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def load_channel(path, tol: float = DEFAULT_TOL, validate: bool = True) -> QuantumChannel:
    return channel_from_dict(read_json(path), tol, validate)


def save_channel(ch: QuantumChannel, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_dict(ch), fh)


def load_dilation(path) -> DilationModel:
    return dilation_from_dict(read_json(path))


def search_report(target: QuantumChannel, d: int, cfg: SearchConfig, result) -> dict:
    return {
        "target": channel_to_dict(target),
        "d": d,
        "config": cfg.to_dict(),
        "best_residual": result.best_residual,
        "success": result.success,
        "verdict": result.verdict,
        "evals_used": result.evals_used,
        "best_unitary_params": np.asarray(result.best_unitary_params).tolist(),
        "best_spectrum": np.asarray(result.best_spectrum).tolist(),
        "per_restart": list(result.per_restart_residuals),
    }


def dumps(obj, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=False)


def write_sweep_csv(resolution: int, stream: IO[str]):
    """Point cloud of the angle-family solution set, one row per grid point."""
    table = sweep_table(resolution)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in table:
        writer.writerow([f"{v:.17g}" for v in row])


def sweep_csv_text(resolution: int) -> str:
    buf = io.StringIO()
    write_sweep_csv(resolution, buf)
    return buf.getvalue()
