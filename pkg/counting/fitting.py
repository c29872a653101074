"""
Asymptotic Fitting

Fits N(B) ~ c B (log B)^(b-1), optionally with a secondary term, to the checkpoint
counts of a run and compares the fitted c with the predicted constant.

Author: Mohammed Ismail AbdElmageid
"""
import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from core.config import ToolkitConfig
from core.exceptions import ConfigurationError
from core.fan import Fan, OrbifoldWeights
from core.points import Variant
from counting.count_manager import CountRun, count

logger = logging.getLogger(__name__)

REPORT_FIELDS = ["c_fit", "c_fit_err", "c_pred", "ratio"]


@dataclass
class FitResult:
    """Fitted leading constant with standard error and residuals"""
    c: float
    c_err: float
    b: int
    c2: Optional[float] = None
    c2_err: Optional[float] = None
    correction: str = "none"
    condition_number: float = 1.0
    bounds: List[float] = field(default_factory=list)
    counts: List[float] = field(default_factory=list)
    fitted: List[float] = field(default_factory=list)

    @property
    def residuals(self) -> List[float]:
        """Relative residuals (N - fit) / N"""
        return [(n - f) / n for n, f in zip(self.counts, self.fitted)]

    def ill_conditioned(self, limit: float) -> bool:
        return not math.isfinite(self.condition_number) or self.condition_number > limit


@dataclass
class FitComparison:
    fit: FitResult
    c_pred: float

    @property
    def ratio(self) -> float:
        return self.fit.c / self.c_pred

    def row(self) -> dict:
        return {"c_fit": f"{self.fit.c:.10g}", "c_fit_err": f"{self.fit.c_err:.3g}",
                "c_pred": f"{self.c_pred:.10g}", "ratio": f"{self.ratio:.6f}"}


def correction_exponent(weights: OrbifoldWeights) -> Fraction:
    """theta = 1 - min_i (1/m_i - 1/(m_i + 1)) over finite weights"""
    finite = [m for m in weights.m if m != math.inf]
    if not finite:
        return Fraction(1, 2)
    return 1 - min(Fraction(1, m) - Fraction(1, m + 1) for m in finite)


def _columns(bounds: np.ndarray, b: int, theta: float) -> Tuple[np.ndarray, np.ndarray, str]:
    logs = np.log(bounds)
    main = bounds * logs ** (b - 1)
    if b >= 2:
        return main, bounds * logs ** (b - 2), f"B(log B)^{b - 2}"
    return main, bounds ** theta, f"B^{theta:.4g}"


def fit_counts(bounds: Sequence, counts: Sequence, b: int, min_bound: float = 0.0, correction: bool = False,
               theta: float = 0.5) -> FitResult:
    """Weighted least squares of counts against c B (log B)^(b-1) [+ c2 * secondary]

    Points are weighted by 1/N so the fit minimises relative residuals. The lstsq
    solution seeds scipy's curve_fit.
    """
    x = np.array([float(B) for B in bounds], dtype=np.float64)
    y = np.array(counts, dtype=np.float64)
    keep = (x >= max(min_bound, 1.0 + 1e-12)) & (y > 0)
    if b >= 2:
        keep &= x > math.e
    x, y = x[keep], y[keep]
    parameters = 2 if correction else 1
    if len(x) < parameters + 1:
        raise ConfigurationError(f"{len(x)} usable checkpoints, need at least {parameters + 1} for the fit")
    if len(x) < 5:
        logger.warning("fitting on only %d checkpoints", len(x))

    main, secondary, label = _columns(x, b, theta)
    if correction:
        design = np.column_stack([main, secondary])

        def model(_, c, c2):
            return c * main + c2 * secondary
    else:
        design = main[:, None]

        def model(_, c):
            return c * main

    scaled = design / y[:, None]
    condition = float(np.linalg.cond(scaled))
    p0, *_ = np.linalg.lstsq(scaled, np.ones_like(y), rcond=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, pcov = curve_fit(model, x, y, p0=p0, sigma=y, absolute_sigma=False)
    errors = np.sqrt(np.abs(np.diag(pcov))) if np.all(np.isfinite(pcov)) else np.full(len(popt), np.inf)
    fitted = model(x, *popt)
    result = FitResult(c=float(popt[0]), c_err=float(errors[0]), b=b, condition_number=condition,
                       bounds=x.tolist(), counts=y.tolist(), fitted=[float(v) for v in fitted])
    if correction:
        result.c2, result.c2_err, result.correction = float(popt[1]), float(errors[1]), label
    logger.debug("fit b=%d: c=%.8g +- %.2g, cond=%.3g", b, result.c, result.c_err, condition)
    return result


def fit_run(run: CountRun, weights: OrbifoldWeights, config: Optional[ToolkitConfig] = None) -> FitResult:
    config = config or ToolkitConfig()
    return fit_counts(run.checkpoints, run.counts, run.picard_rank, min_bound=config.fit_min_bound,
                      correction=config.fit_correction, theta=float(correction_exponent(weights)))


def fit_and_report(run: CountRun, c_pred: float, weights: OrbifoldWeights,
                   config: Optional[ToolkitConfig] = None) -> FitComparison:
    comparison = FitComparison(fit_run(run, weights, config), float(c_pred))
    logger.info("%s: c_fit=%.8g c_pred=%.8g ratio=%.4f", run.fan, comparison.fit.c, comparison.c_pred,
                comparison.ratio)
    return comparison


def count_and_fit(fan: Fan, weights: OrbifoldWeights, variant: Variant, bound, c_pred: float,
                  config: Optional[ToolkitConfig] = None) -> Tuple[CountRun, FitComparison]:
    """Count, fit and compare; an ill-conditioned fit doubles the checkpoint grid once"""
    config = config or ToolkitConfig()
    run = count(fan, weights, variant, bound, config)
    comparison = fit_and_report(run, c_pred, weights, config)
    if comparison.fit.ill_conditioned(config.condition_limit):
        logger.warning("fit condition number %.3g exceeds %.3g; doubling the checkpoint grid",
                       comparison.fit.condition_number, config.condition_limit)
        run = count(fan, weights, variant, bound, config, checkpoints=2 * len(run.checkpoints))
        run.notes.append("checkpoint grid doubled")
        comparison = fit_and_report(run, c_pred, weights, config)
    return run, comparison


@dataclass
class DoublingRatio:
    bound: float
    observed: float
    expected: float

    @property
    def deviation(self) -> float:
        return self.observed / self.expected - 1


def doubling_ratios(run: CountRun, b: Optional[int] = None) -> List[DoublingRatio]:
    """N(B_k) / N(B_k / 2) against 2 (log B_k / log(B_k / 2))^(b-1)"""
    b = run.picard_rank if b is None else b
    ratios = []
    for (low, n_low), (high, n_high) in zip(zip(run.checkpoints, run.counts), zip(run.checkpoints[1:], run.counts[1:])):
        if n_low == 0 or float(low) <= 1.0:
            continue
        expected = 2 * (math.log(high) / math.log(low)) ** (b - 1)
        ratios.append(DoublingRatio(float(high), n_high / n_low, expected))
    return ratios


def write_report_csv(comparison: FitComparison, path=None, stream=None):
    if path is not None:
        with open(path, "w", newline="", encoding="utf-8") as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=REPORT_FIELDS)
            writer.writeheader()
            writer.writerow(comparison.row())
    elif stream is not None:
        writer = csv.DictWriter(stream, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerow(comparison.row())
