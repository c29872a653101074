"""
Count Manager

Runs a count over a geometric checkpoint grid B_k = B * 2^-k, audits a sample of the
emitted points and writes the CSV rows B,count,variant,fan,weights,elapsed_ms.

Author: Mohammed Ismail AbdElmageid
"""
import csv
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

from core.config import ToolkitConfig
from core.exceptions import ConfigurationError, InternalConsistencyError
from core.fan import Fan, OrbifoldWeights, PLFunction
from core.heights import global_height, height_at_most
from core.picard import picard
from core.points import TorusPoint, Variant, classify_global
from counting.enumerators import (
    FactorLevels,
    assemble_point,
    enumerate_points,
    factor_levels,
    factor_limit,
    joint_count,
    recognise_projective_factors,
)

logger = logging.getLogger(__name__)

CSV_FIELDS = ["B", "count", "variant", "fan", "weights", "elapsed_ms"]


@dataclass
class CountRun:
    """Counts of one (fan, weights, variant) at every checkpoint, ascending in B"""
    fan: str
    weights: str
    variant: str
    bound: Fraction
    checkpoints: List[Fraction]
    counts: List[int]
    elapsed_ms: float
    method: str = "projective"
    picard_rank: int = 1
    audited: int = 0
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if any(a > b for a, b in zip(self.counts, self.counts[1:])):
            raise InternalConsistencyError(f"counts are not monotone in B: {self.counts}")

    @property
    def final_count(self) -> int:
        return self.counts[-1] if self.counts else 0

    def rows(self) -> List[dict]:
        return [{"B": _format_bound(b), "count": n, "variant": self.variant, "fan": self.fan,
                 "weights": self.weights, "elapsed_ms": f"{self.elapsed_ms:.1f}"}
                for b, n in zip(self.checkpoints, self.counts)]


def _format_bound(bound: Fraction) -> str:
    return str(bound.numerator) if bound.denominator == 1 else f"{float(bound):.12g}"


def checkpoint_grid(bound, count: int) -> List[Fraction]:
    """B * 2^-k for k = count-1, ..., 0 (ascending)"""
    bound = Fraction(bound)
    if count < 1 or bound <= 0:
        raise ConfigurationError(f"empty checkpoint grid (bound={bound}, checkpoints={count})")
    return [bound / 2 ** k for k in reversed(range(count))]


def checkpoint_count(config: ToolkitConfig, picard_rank: int) -> int:
    if picard_rank >= 2:
        return max(config.checkpoints, config.min_checkpoints_log_power)
    return config.checkpoints


def audit_points(fan: Fan, weights: OrbifoldWeights, variant: Variant, points: Sequence[TorusPoint], bound,
                 tolerance: float = 1e-9) -> int:
    """Re-verify the point condition and the height bound; raises on the first failure"""
    phi = PLFunction.log_anticanonical(fan, weights)
    for point in points:
        verdict = classify_global(fan, weights, point, (), variant)
        if not verdict:
            raise InternalConsistencyError(f"audit: {point} fails {variant.value} at p={verdict.witness_prime}")
        height = global_height(fan, phi, point)
        if not height_at_most(height, bound, tolerance):
            raise InternalConsistencyError(f"audit: {point} has height above {bound}")
    return len(points)


def _audit_sample(fan: Fan, levels: Sequence[FactorLevels], cap: int) -> List[TorusPoint]:
    """Sampled tuples of each factor, completed by [1 : ... : 1] on the other factors"""
    points = []
    factors = [lv.factor for lv in levels]
    for index, lv in enumerate(levels):
        for xs in sorted(lv.samples):
            tuples = [(1,) * (f.n + 1) for f in factors]
            tuples[index] = xs
            points.append(assemble_point(fan, factors, tuples))
    return points[:cap]


def count(fan: Fan, weights: OrbifoldWeights, variant: Variant, bound, config: Optional[ToolkitConfig] = None,
          checkpoints: Optional[int] = None, audit: bool = True) -> CountRun:
    """Count points of height <= B_k at every checkpoint"""
    config = config or ToolkitConfig()
    weights.check_against(fan)
    bound = Fraction(bound)
    rank = picard(fan).rank
    grid = checkpoint_grid(bound, checkpoints if checkpoints is not None else checkpoint_count(config, rank))
    started = time.perf_counter()
    factors = recognise_projective_factors(fan)
    audited = 0

    if factors is not None:
        levels = []
        for index, factor in enumerate(factors):
            limit = factor_limit(factor.exponent(fan, weights), bound)
            levels.append(factor_levels(fan, weights, variant, factor, limit, workers=config.workers,
                                        chunk_size=config.chunk_size,
                                        sample_fraction=config.audit_fraction if audit else 0.0,
                                        seed=config.seed, factor_index=index))
        counts = [joint_count(levels, b) for b in grid]
        method = "projective"
        if audit:
            sample = _audit_sample(fan, levels, config.audit_max)
            audited = audit_points(fan, weights, variant, sample, bound, config.near_cutoff_tolerance)
    else:
        logger.warning("%s: no projective-factor structure, counting with the generic enumerator", fan.describe())
        points = enumerate_points(fan, weights, variant, bound, budget=config.generic_budget,
                                  workers=config.workers, chunk_size=config.chunk_size,
                                  tolerance=config.near_cutoff_tolerance, force_generic=True)
        counts = [sum(1 for _, h in points if h.at_most(b)) for b in grid]
        method = "generic"
        if audit and points:
            step = max(1, int(round(1 / config.audit_fraction))) if config.audit_fraction > 0 else len(points) + 1
            sample = [p for p, _ in points[::step]][:config.audit_max]
            audited = audit_points(fan, weights, variant, sample, bound, config.near_cutoff_tolerance)

    elapsed = (time.perf_counter() - started) * 1000.0
    run = CountRun(fan=fan.describe(), weights=weights.label(), variant=variant.value, bound=bound,
                   checkpoints=grid, counts=counts, elapsed_ms=elapsed, method=method, picard_rank=rank,
                   audited=audited)
    logger.info("%s m=(%s) %s: N(%s) = %d via %s in %.0f ms (%d audited)", run.fan, run.weights, run.variant,
                _format_bound(bound), run.final_count, method, elapsed, audited)
    return run


def write_count_csv(run: CountRun, path: Union[str, Path, None] = None, stream=None):
    """Write the checkpoint rows to a file or an open text stream"""
    if path is not None:
        with open(path, "w", newline="", encoding="utf-8") as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=CSV_FIELDS)
            writer.writeheader()
            writer.writerows(run.rows())
    elif stream is not None:
        writer = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(run.rows())


def read_count_csv(path: Union[str, Path]) -> List[dict]:
    with open(path, "r", newline="", encoding="utf-8") as csvfile:
        return list(csv.DictReader(csvfile))
