"""Command-line interface.

Exit codes: 0 success, 1 domain failure (invalid channel, search found no
certificate), 2 usage error (bad flags, unreadable or malformed input,
impossible dimensions). Reports go to stdout as JSON unless ``--pretty``.
"""

from __future__ import annotations

import sys

import click

from . import io as qio
from .channel import (
    DEFAULT_TOL,
    choi,
    is_extremal_rank_condition,
    kraus_rank,
    min_choi_eigenvalue,
    tp_residual,
)
from .errors import QEnvError, SchemaError
from .linalg import hermitian_eig
from .optimize import DEFAULT_SEED, SearchConfig
from .search import (
    TWO_PAULI_POLY_FLOOR,
    qubit_fraction_experiment,
    search_environment,
    two_pauli_infeasibility,
)

EXIT_DOMAIN = 1
EXIT_USAGE = 2

seed_option = click.option(
    "--seed",
    type=int,
    default=DEFAULT_SEED,
    show_default=True,
    envvar="QENV_SEED",
    help="Base seed (QENV_SEED overrides the default).",
)
restarts_option = click.option("--restarts", type=click.IntRange(min=1), default=200, show_default=True)
max_evals_option = click.option(
    "--max-evals", type=click.IntRange(min=1), default=20000, show_default=True,
    help="Objective evaluations per restart.",
)
pretty_option = click.option("--pretty", is_flag=True, help="Human-readable summary instead of JSON.")


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_channel(path, tol, validate=True):
    try:
        return qio.load_channel(path, tol=tol, validate=validate)
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror}", EXIT_USAGE)
    except SchemaError as exc:
        _fail(str(exc), EXIT_USAGE)
    except QEnvError as exc:
        _fail(str(exc), EXIT_DOMAIN)


def _emit(report: dict, pretty: bool, lines):
    if pretty:
        for line in lines:
            click.echo(line)
    else:
        click.echo(qio.dumps(report))


def _channel_summary(ch, tol):
    tp = tp_residual(ch)
    cp = min_choi_eigenvalue(ch)
    return {
        "in_dim": ch.in_dim,
        "out_dim": ch.out_dim,
        "num_kraus": ch.num_kraus,
        "tp_residual": tp,
        "trace_preserving": tp <= tol,
        "cp_min_eigenvalue": cp,
        "completely_positive": cp >= -tol,
        "kraus_rank": kraus_rank(ch, tol),
        "extremal_rank_condition": is_extremal_rank_condition(ch, tol),
        "tolerance": tol,
    }


@click.group()
def main():
    """Quantum channels and the environments that implement them."""


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@pretty_option
def validate(path, tol, pretty):
    """Check trace preservation and complete positivity of a channel file."""
    ch = _load_channel(path, tol, validate=False)
    summary = _channel_summary(ch, tol)
    _emit(
        summary,
        pretty,
        [
            f"TP residual        {summary['tp_residual']:.3e}  ({'ok' if summary['trace_preserving'] else 'FAIL'})",
            f"min Choi eigenvalue {summary['cp_min_eigenvalue']:.3e}  ({'ok' if summary['completely_positive'] else 'FAIL'})",
            f"Kraus rank         {summary['kraus_rank']}",
            f"rank <= m (extremal) {summary['extremal_rank_condition']}",
        ],
    )
    if not (summary["trace_preserving"] and summary["completely_positive"]):
        sys.exit(EXIT_DOMAIN)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@pretty_option
def report(path, tol, pretty):
    """Choi matrix, its spectrum, Kraus rank and extremality test."""
    ch = _load_channel(path, tol)
    j = choi(ch)
    summary = _channel_summary(ch, tol)
    summary["choi_eigenvalues"] = [float(x) for x in hermitian_eig(j.matrix).eigenvalues]
    summary["choi"] = qio.matrix_to_json(j.matrix)
    _emit(
        summary,
        pretty,
        [
            f"channel {ch.in_dim} -> {ch.out_dim}, {ch.num_kraus} Kraus operators",
            "Choi eigenvalues   " + " ".join(f"{x:.6g}" for x in summary["choi_eigenvalues"]),
            f"Kraus rank         {summary['kraus_rank']}",
            f"rank <= m (extremal) {summary['extremal_rank_condition']}",
        ],
    )


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--dim", "d", type=click.IntRange(min=1), required=True, help="Environment dimension.")
@restarts_option
@max_evals_option
@click.option("--tol", type=float, default=1e-8, show_default=True, help="Success threshold on the residual.")
@seed_option
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here.")
@pretty_option
def search(path, d, restarts, max_evals, tol, seed, out, pretty):
    """Look for a d-dimensional mixed environment implementing a channel."""
    ch = _load_channel(path, DEFAULT_TOL)
    if (ch.in_dim * d) % ch.out_dim:
        _fail(f"output dimension {ch.out_dim} does not divide n*d = {ch.in_dim * d}", EXIT_USAGE)
    if not tol > 0:
        _fail("--tol must be positive", EXIT_USAGE)
    cfg = SearchConfig(restarts, max_evals, tol, seed)
    result = search_environment(ch, d, cfg)
    rep = qio.search_report(ch, d, cfg, result)
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(qio.dumps(rep) + "\n")
        except OSError as exc:
            _fail(f"cannot write {out}: {exc.strerror}", EXIT_USAGE)
    _emit(
        rep,
        pretty,
        [
            f"d={d}: best residual {result.best_residual:.3e} after "
            f"{len(result.per_restart_residuals)} restarts",
            f"{result.verdict}: "
            + ("dilation found" if result.success else "no dilation found at this budget"),
        ],
    )
    if not result.success:
        sys.exit(EXIT_DOMAIN)


@main.command()
@click.option("--resolution", type=click.IntRange(min=2), required=True, help="Grid points per angle.")
@click.option("--out", type=click.Path(dir_okay=False, allow_dash=True), default="-", show_default=True)
def sweep(resolution, out):
    """Write the angle-family point cloud as CSV."""
    if out == "-":
        qio.write_sweep_csv(resolution, sys.stdout)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            qio.write_sweep_csv(resolution, fh)
    except OSError as exc:
        _fail(f"cannot write {out}: {exc.strerror}", EXIT_USAGE)


@main.command("two-pauli")
@restarts_option
@max_evals_option
@seed_option
@pretty_option
def two_pauli(restarts, max_evals, seed, pretty):
    """Minimize the two-Pauli polynomial residual; exit 0 if it stays above half the reference floor."""
    cfg = SearchConfig(restarts, max_evals, 1e-8, seed, stop_on_success=False)
    result = two_pauli_infeasibility(cfg)
    threshold = TWO_PAULI_POLY_FLOOR / 2
    above = result.best_residual > threshold
    rep = {
        "config": cfg.to_dict(),
        "best_residual": result.best_residual,
        "reference_floor": TWO_PAULI_POLY_FLOOR,
        "threshold": threshold,
        "above_threshold": above,
        "verdict": "evidence",
        "evals_used": result.evals_used,
        "best_point": [float(v) for v in result.best_unitary_params],
        "per_restart": result.per_restart_residuals,
    }
    _emit(
        rep,
        pretty,
        [
            f"best residual {result.best_residual:.6g} over {restarts} restarts",
            f"reference floor {TWO_PAULI_POLY_FLOOR:.6g} (threshold {threshold:.6g}): "
            + ("no common root found" if above else "residual fell below threshold"),
        ],
    )
    if not above:
        sys.exit(EXIT_DOMAIN)


@main.command()
@click.option("--count", type=click.IntRange(min=1), required=True, help="Number of random channels.")
@click.option("--dim", "d", type=click.IntRange(min=1), default=2, show_default=True)
@restarts_option
@max_evals_option
@click.option("--tol", type=float, default=1e-8, show_default=True)
@seed_option
@pretty_option
def sample(count, d, restarts, max_evals, tol, seed, pretty):
    """Fraction of Haar-random qubit channels a d-dimensional environment implements."""
    if not tol > 0:
        _fail("--tol must be positive", EXIT_USAGE)
    cfg = SearchConfig(restarts, max_evals, tol, seed)
    rep = qubit_fraction_experiment(count, cfg, d=d)
    data = rep.to_dict()
    data["config"] = cfg.to_dict()
    lines = [f"{rep.successes}/{rep.count} channels implemented with d={d} (fraction {rep.fraction:.4f})"]
    lines += [
        f"  seed {s['seed']}: {'certificate' if s['success'] else 'evidence'} "
        f"residual {s['best_residual']:.3e}"
        for s in data["samples"]
    ]
    _emit(data, pretty, lines)


if __name__ == "__main__":
    main()
