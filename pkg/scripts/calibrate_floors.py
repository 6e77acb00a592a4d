"""Measure the reference floors used by the two-Pauli exclusion checks.

Runs long multistart searches (2000 restarts by default) and prints the
smallest residual found for

* the qubit-environment dilation search, two-Pauli x in {0.1, 0.5, 0.9};
* the two-Pauli polynomial system.

The printed values are the constants recorded in ``qenv.search``.

    python scripts/calibrate_floors.py [--restarts 2000] [--seed 777]
"""

import argparse
import json
import time

from qenv.depolarizing import two_pauli_channel
from qenv.optimize import SearchConfig
from qenv.search import search_environment, two_pauli_infeasibility


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--restarts", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=777)
    args = parser.parse_args()

    cfg = SearchConfig(restarts=args.restarts, seed=args.seed, stop_on_success=False)
    report = {"restarts": args.restarts, "seed": args.seed, "dilation": {}}
    for x in (0.1, 0.5, 0.9):
        t0 = time.time()
        res = search_environment(two_pauli_channel(x), 2, cfg)
        report["dilation"][str(x)] = res.best_residual
        print(f"x={x}: floor {res.best_residual!r} ({time.time() - t0:.0f} s)", flush=True)
    t0 = time.time()
    res = two_pauli_infeasibility(cfg)
    report["poly"] = res.best_residual
    print(f"poly: floor {res.best_residual!r} ({time.time() - t0:.0f} s)", flush=True)
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()
