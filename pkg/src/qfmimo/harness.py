"""Run orchestration: single points, antenna-count sweeps, fits, CSV output.

A sweep row is a pure function of (configuration, seed): per-point seeds are
derived by hashing (master seed, m), destination substreams hang off the
point seed, and the CSV serialization is fixed.  Two runs of the same config
therefore produce byte-identical CSV files regardless of worker count.  Wall
clock per point is measured and kept on the in-memory result (and logged by
the CLI), but the CSV runtime_s column always carries the placeholder 0.0 --
the one field a real clock would otherwise leak into the reproducible
artifact.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from time import perf_counter
from typing import IO, Iterable

import numpy as np

from .bounds import UpperBoundReport, cutset_upper_bound
from .linkrate import LinkCapacityModel
from .netgeom import (
    NetworkParams,
    min_source_distance,
    place_nodes,
)
from .qmimo import RateReport, sum_rate
from .seeding import derive_rng, derive_seed

CSV_HEADER = "m,n,n1,n2_mean,mode,R_sum,R_sum_stderr,R_upper,N_max,C_link_min,runtime_s,seed"

FIT_MODELS = ("power_law", "m_log_m_ratio")

# Guard exponent for the minimum source distance check in exclusion-free runs:
# the distance should exceed n**-(1 + MIN_DISTANCE_SLACK) in all but a
# vanishing fraction of realizations.
MIN_DISTANCE_SLACK = 0.1


class ConfigError(ValueError):
    """Invalid configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical failure while running or fitting (CLI exit code 3)."""


class SweepFailure(NumericalError):
    """A sweep point failed; completed rows are kept on .partial."""

    def __init__(self, message: str, partial: "ScalingSeries"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SweepRow:
    """One CSV row of a sweep; runtime_seconds is measured, not serialized."""

    m: int
    n: int
    n1: int
    n2_mean: float
    mode: str
    r_sum: float
    r_sum_stderr: float
    r_upper: float
    n_max: float
    c_link_min: float
    runtime_seconds: float
    seed: int

    def to_csv(self) -> str:
        # repr() of a float is its shortest round-trip form, so rows are
        # byte-stable; runtime_s is pinned to 0.0 to keep output reproducible.
        return ",".join(
            [
                str(self.m),
                str(self.n),
                str(self.n1),
                repr(float(self.n2_mean)),
                self.mode,
                repr(float(self.r_sum)),
                repr(float(self.r_sum_stderr)),
                repr(float(self.r_upper)),
                repr(float(self.n_max)),
                repr(float(self.c_link_min)),
                repr(0.0),
                str(self.seed),
            ]
        )


@dataclass
class PointResult:
    """Full outcome of one (params, seed) evaluation."""

    params: NetworkParams
    report: RateReport
    upper: UpperBoundReport
    n: int
    n1: int
    n2_mean: float
    runtime_seconds: float

    def row(self) -> SweepRow:
        return SweepRow(
            m=self.params.m,
            n=self.n,
            n1=self.n1,
            n2_mean=self.n2_mean,
            mode=self.params.mode,
            r_sum=self.report.r_sum,
            r_sum_stderr=self.report.r_sum_stderr,
            r_upper=self.upper.value,
            n_max=self.report.n_max,
            c_link_min=self.report.c_link_min,
            runtime_seconds=self.runtime_seconds,
            seed=self.params.seed,
        )


@dataclass
class ScalingSeries:
    """Rows of an m-sweep, ascending in m."""

    rows: list[SweepRow]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    residual: float  # rms residual of log2 R around the fit


@dataclass(frozen=True)
class RatioFit:
    ratios: tuple[float, ...]  # R / (m * log2 m) per row
    max_min_ratio: float


def run_point(params: NetworkParams) -> PointResult:
    """One realization, one sum-rate estimate, one upper bound.

    Every random stream derives from params.seed, so repeated calls are
    bit-identical.  The realization depends on geometry knobs only, never on
    the relay mode.
    """
    t0 = perf_counter()
    realization = place_nodes(params, derive_rng(params.seed, 0))
    if params.exclusion_radius == 0.0:
        guard = realization.n ** -(1.0 + MIN_DISTANCE_SLACK)
        if min_source_distance(realization) <= guard:
            warnings.warn(
                f"minimum source distance fell below the n**-(1+{MIN_DISTANCE_SLACK}) "
                "guard; near-source destinations will dominate the upper bound",
                stacklevel=2,
            )
    model = LinkCapacityModel.from_params(params)
    report = sum_rate(
        realization, model, params, derive_rng(params.seed, 1), params.sample_size
    )
    upper = cutset_upper_bound(realization, params)
    return PointResult(
        params=params,
        report=report,
        upper=upper,
        n=realization.n,
        n1=realization.n1,
        n2_mean=realization.n2_mean,
        runtime_seconds=perf_counter() - t0,
    )


def point_params(params: NetworkParams, m: int) -> NetworkParams:
    """Per-point configuration: seed hashed from (master seed, m).

    Adding values to a sweep never perturbs existing rows, and rerunning a
    single point with the row's seed reproduces the row exactly.
    """
    return replace(params, m=m, seed=derive_seed(params.seed, m))


def _run_point_row(args: tuple[NetworkParams, int]) -> PointResult:
    params, m = args
    return run_point(point_params(params, m))


def run_sweep(
    params: NetworkParams, m_list: Iterable[int], workers: int = 1
) -> ScalingSeries:
    """Run one point per m and assemble rows in ascending m order.

    Points are independent, so any worker count yields identical rows.  If a
    point fails, the completed rows are flushed into SweepFailure.partial.
    """
    m_list = [int(m) for m in m_list]
    if not m_list:
        raise ConfigError("sweep needs at least one m value")
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise ConfigError(f"sweep m values must be strictly ascending, got {m_list}")
    if any(m < 1 for m in m_list):
        raise ConfigError("sweep m values must be positive")

    results: dict[int, PointResult] = {}
    failure: tuple[int, BaseException] | None = None
    if workers > 1 and len(m_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {m: pool.submit(_run_point_row, (params, m)) for m in m_list}
            for m in m_list:
                try:
                    results[m] = futures[m].result()
                except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                    failure = (m, exc)
                    break
    else:
        for m in m_list:
            try:
                results[m] = _run_point_row((params, m))
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                failure = (m, exc)
                break

    rows = [results[m].row() for m in m_list if m in results]
    series = ScalingSeries(rows=rows)
    if failure is not None:
        m_bad, exc = failure
        raise SweepFailure(f"sweep point m={m_bad} failed: {exc}", partial=series)
    return series


def fit_scaling(series: ScalingSeries, model: str) -> PowerLawFit | RatioFit:
    """Fit the sweep's R_sum column against m.

    power_law fits the log-log slope; m_log_m_ratio reports R/(m log2 m) and
    its max/min spread, the constancy surrogate for an m log m scaling shape
    (a log factor biases plain slope fits at small m).
    """
    if model not in FIT_MODELS:
        raise ConfigError(f"fit model must be one of {FIT_MODELS}, got {model!r}")
    if len(series.rows) < 3:
        raise ConfigError(f"fit needs >= 3 sweep points, got {len(series.rows)}")
    m = series.column("m").astype(float)
    r = series.column("r_sum").astype(float)
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise NumericalError("fit requires strictly positive finite R_sum values")

    if model == "power_law":
        x = np.log2(m)
        y = np.log2(r)
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (slope * x + intercept)
        return PowerLawFit(
            slope=float(slope),
            intercept=float(intercept),
            residual=float(np.sqrt(np.mean(resid**2))),
        )

    if np.any(m < 2):
        raise NumericalError("m_log_m_ratio needs every m >= 2 (log2 m must be > 0)")
    ratios = r / (m * np.log2(m))
    return RatioFit(
        ratios=tuple(float(x) for x in ratios),
        max_min_ratio=float(ratios.max() / ratios.min()),
    )


def write_csv(series: ScalingSeries, stream: IO[str]) -> None:
    stream.write(CSV_HEADER + "\n")
    for row in series.rows:
        stream.write(row.to_csv() + "\n")
