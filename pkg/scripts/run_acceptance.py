"""
Acceptance Runs

Counts, fits and compares the fitted leading constant with the predicted one on the
calibration and semi-integral cases, then repeats the counts with 1, 4 and 16 workers
and twice with one seed.

Usage:
    python3 scripts/run_acceptance.py           # full bounds (minutes)
    python3 scripts/run_acceptance.py --quick   # bounds divided by 100

Author: Mohammed Ismail AbdElmageid
"""
import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

# Add project root to Python path
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(script_dir)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from cli.console import print_error, print_header, print_success, print_warning
from core.config import ToolkitConfig, load_config
from core.fan import OrbifoldWeights
from core.library import library_fan
from core.points import Variant
from counting.count_manager import count
from counting.fitting import count_and_fit
from series.constants import coprime_pair_oracle, predicted_constant, squarefull_pair_oracle


@dataclass
class Case:
    """One acceptance case: fitted c against c_pred (and an optional oracle)"""
    name: str
    fan: str
    m: tuple
    variant: Variant
    bound: int
    tolerance: float
    correction: bool = False
    oracle: Optional[Callable[[], float]] = None


CASES = [
    Case("Calibration P1, m=1", "P1", (1, 1), Variant.CAMPANA, 10 ** 7, 0.02, oracle=coprime_pair_oracle),
    Case("Calibration P2, m=1", "P2", (1, 1, 1), Variant.CAMPANA, 10 ** 5, 0.10),
    Case("P1, m=(2,2), Campana", "P1", (2, 2), Variant.CAMPANA, 10 ** 7, 0.10, oracle=squarefull_pair_oracle),
    Case("P1, m=(2,2), Darmon", "P1", (2, 2), Variant.DARMON, 10 ** 7, 0.10, oracle=coprime_pair_oracle),
    Case("P1xP1, m=2, Campana", "P1xP1", (2, 2, 2, 2), Variant.CAMPANA, 10 ** 6, 0.15, correction=True),
]


def run_case(case: Case, config: ToolkitConfig, scale: int) -> bool:
    print_header(case.name)
    fan = library_fan(case.fan)
    weights = OrbifoldWeights(case.m)
    bound = max(case.bound // scale, 100)
    prediction = predicted_constant(fan, weights, case.variant, primes_cutoff=config.primes_cutoff,
                                    workers=config.workers, chunk_size=config.euler_chunk_size)
    case_config = config.with_overrides(fit_correction=case.correction)
    started = time.perf_counter()
    run, comparison = count_and_fit(fan, weights, case.variant, bound, prediction.c_pred, case_config)
    elapsed = time.perf_counter() - started

    print(f"B = {bound}, N(B) = {run.final_count} via {run.method} in {elapsed:.1f} s")
    print(f"c_fit = {comparison.fit.c:.8g} +- {comparison.fit.c_err:.2g}")
    print(f"c_pred = {prediction.c_pred:.8g}")
    ok = abs(comparison.ratio - 1) <= case.tolerance
    if ok:
        print_success(f"ratio {comparison.ratio:.5f} within {case.tolerance:.0%}")
    else:
        print_error(f"ratio {comparison.ratio:.5f} outside {case.tolerance:.0%}")

    if case.oracle is not None:
        oracle = float(case.oracle())
        agree = abs(prediction.c_pred / oracle - 1) <= case.tolerance
        (print_success if agree else print_error)(f"independent oracle {oracle:.8g}")
        ok = ok and agree
    return ok


def check_determinism(config: ToolkitConfig, scale: int) -> bool:
    """Identical counts for 1, 4 and 16 workers and for two runs with one seed"""
    print_header("Determinism")
    all_ok = True
    for case in CASES:
        fan = library_fan(case.fan)
        weights = OrbifoldWeights(case.m)
        bound = max(case.bound // scale // 10, 100)
        runs: List[List[int]] = []
        for workers in (1, 4, 16):
            runs.append(count(fan, weights, case.variant, bound, config.with_overrides(workers=workers)).counts)
        runs.append(count(fan, weights, case.variant, bound, config.with_overrides(workers=4)).counts)
        if all(r == runs[0] for r in runs):
            print_success(f"{case.name}: B = {bound}, counts identical ({runs[0][-1]})")
        else:
            print_error(f"{case.name}: counts differ across runs: {[r[-1] for r in runs]}")
            all_ok = False
    return all_ok


def main():
    parser = argparse.ArgumentParser(description='Acceptance runs for counts against predicted constants')
    parser.add_argument('--quick', action='store_true', help='Divide every bound by 100')
    parser.add_argument('--config', help='Path to config.json')
    parser.add_argument('--verbose', action='store_true')
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    config = load_config(args.config)
    scale = 100 if args.quick else 1
    if args.quick:
        print_warning("quick mode: bounds divided by 100, tolerances unchanged")

    results = [(case.name, run_case(case, config, scale)) for case in CASES]
    results.append(("Determinism", check_determinism(config, scale)))

    print_header("Acceptance Summary")
    all_passed = True
    for name, result in results:
        if result:
            print_success(f"{name}: PASSED")
        else:
            print_error(f"{name}: FAILED")
            all_passed = False

    print("\n" + "=" * 60)
    if all_passed:
        print("[OK] ALL ACCEPTANCE RUNS PASSED")
    else:
        print("✗ SOME ACCEPTANCE RUNS FAILED")
        sys.exit(1)
    print("=" * 60 + "\n")


if __name__ == "__main__":
    main()
