"""Experiment engine: datasets, stream ordering, trials, JSON/CSV reports.

A trial streams one ordered dataset through a fresh clusterer, then scores
the final centers against the whole dataset and against an optimal-cost
oracle (exact brute force, or Lloyd labeled as heuristic). Experiments run
many seeded trials and aggregate.

Everything is deterministic given the trial/master seed. Report files
deliberately exclude wall-clock timings so identical seeds reproduce
byte-identical output; timings stay on the in-memory reports.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .cluster import ClusterConfig, Decision, OnlineClusterer
from .geometry import Point, as_point, kmeans_cost
from .lower_bound import (
    EXACT_SEARCH_LIMIT,
    adversarial_order,
    gen_alpha_k_sequence,
    lower_exact,
    lower_greedy,
)
from .oracle import lloyd_kmeans, optimal_kmeans

RATIO_ZERO_COST = "zero-cost"  # oracle and achieved cost both zero
RATIO_INFINITE = "infinite"  # oracle zero, achieved positive

ORDERINGS = ("given", "shuffled", "adversarial")
ORACLES = ("exact", "lloyd")
GENERATORS = ("gaussian_mixture", "uniform_box", "alpha_k_sequence")

# Sub-seed domains, mixed with the trial seed to derive independent streams.
_SEED_DATASET = 0
_SEED_ORDER = 1
_SEED_ALGORITHM = 2
_SEED_LLOYD = 3


class ParseError(ValueError):
    pass


def load_points(path: str | Path) -> list[Point]:
    """Read a headerless CSV of one point per row, constant dimension."""
    points: list[Point] = []
    dim: int | None = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                coords = [float(cell) for cell in row]
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
            if not all(math.isfinite(c) for c in coords):
                raise ParseError(f"{path}: line {lineno}: non-finite value")
            if dim is None:
                dim = len(coords)
            elif len(coords) != dim:
                raise ParseError(
                    f"{path}: line {lineno}: expected {dim} values, got {len(coords)}"
                )
            points.append(tuple(coords))
    if not points:
        raise ParseError(f"{path}: no data rows")
    return points


def save_points(points: Sequence[Point], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for p in points:
            writer.writerow([repr(float(c)) for c in p])


def gen_dataset(kind: str, params: dict, seed: int) -> list[Point]:
    """Deterministic synthetic dataset of the given kind."""
    if kind == "gaussian_mixture":
        return _gen_gaussian_mixture(seed=seed, **params)
    if kind == "uniform_box":
        return _gen_uniform_box(seed=seed, **params)
    if kind == "alpha_k_sequence":
        return _gen_sequence(seed=seed, **params)
    raise ValueError(f"unknown generator {kind!r}; choose from {GENERATORS}")


def _gen_gaussian_mixture(
    n: int,
    k: int,
    d: int = 2,
    spread: float = 1.0,
    separation: float = 20.0,
    seed: int = 0,
) -> list[Point]:
    if n < 1 or k < 1 or d < 1:
        raise ValueError("n, k, and d must be positive")
    if spread < 0 or separation <= 0:
        raise ValueError("spread must be >= 0 and separation > 0")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, separation, size=(k, d))
    comps = rng.integers(0, k, size=n)
    pts = centers[comps] + rng.normal(0.0, spread, size=(n, d))
    return [as_point(row) for row in pts]


def _gen_uniform_box(n: int, d: int = 2, side: float = 1.0, seed: int = 0) -> list[Point]:
    if n < 1 or d < 1 or side <= 0:
        raise ValueError("n and d must be positive, side > 0")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, side, size=(n, d))
    return [as_point(row) for row in pts]


def _gen_sequence(
    k: int, length: int, alpha: float = 9.0, margin: float = 1.05, seed: int = 0
) -> list[Point]:
    return gen_alpha_k_sequence(k, alpha, length, margin=margin, seed=seed)


@dataclass(frozen=True)
class TrialSpec:
    k: int
    input_path: str | None = None
    generator: str | None = None
    gen_params: dict = field(default_factory=dict)
    ordering: str = "given"
    alpha: float = 9.0
    mode: str = "full"
    seed: int = 0
    oracle: str = "exact"
    lloyd_restarts: int = 20
    bootstrap: int | None = None

    def __post_init__(self):
        if (self.input_path is None) == (self.generator is None):
            raise ValueError("provide exactly one of input_path or generator")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}")
        if self.oracle not in ORACLES:
            raise ValueError(f"oracle must be one of {ORACLES}")
        if self.ordering == "adversarial" and self.alpha <= 1:
            raise ValueError("adversarial ordering requires alpha > 1")
        if self.lloyd_restarts < 1:
            raise ValueError("lloyd_restarts must be >= 1")


@dataclass
class RunReport:
    n: int
    k: int
    centers_selected: int
    bootstrap_selections: int
    type1_selections: int
    type2_selections: int
    peak_aux_points: int
    achieved_cost: float
    oracle_cost: float
    oracle_exact: bool
    ratio: float | str
    within_nine: bool
    lower_estimate: int
    lower_exact: bool
    final_threshold: float
    threshold_raises: int
    threshold_doublings: int
    seed: int
    wall_time_s: float

    def to_record(self) -> dict:
        """Flat mapping for report files; timing is excluded on purpose so
        identical seeds produce byte-identical files."""
        record = {
            "n": self.n,
            "k": self.k,
            "centers_selected": self.centers_selected,
            "bootstrap_selections": self.bootstrap_selections,
            "type1_selections": self.type1_selections,
            "type2_selections": self.type2_selections,
            "peak_aux_points": self.peak_aux_points,
            "achieved_cost": self.achieved_cost,
            "oracle_cost": self.oracle_cost,
            "oracle_exact": self.oracle_exact,
            "ratio": self.ratio,
            "within_nine": self.within_nine,
            "lower_estimate": self.lower_estimate,
            "lower_exact": self.lower_exact,
            "final_threshold": self.final_threshold,
            "threshold_raises": self.threshold_raises,
            "threshold_doublings": self.threshold_doublings,
            "seed": self.seed,
        }
        return record


def _bulk_kmeans_cost(points: Sequence[Point], centers: Sequence[Point]) -> float:
    """kmeans_cost vectorized in chunks; needed once |S| reaches the hundreds."""
    if len(points) * len(centers) < 10_000:
        return kmeans_cost(points, centers)
    pts = np.asarray(points)
    ctrs = np.asarray(centers)
    total = 0.0
    for start in range(0, len(pts), 4096):
        chunk = pts[start : start + 4096]
        d2 = ((chunk[:, None, :] - ctrs[None, :, :]) ** 2).sum(axis=2)
        total += float(d2.min(axis=1).sum())
    return total


def _sub_seed(seed: int, domain: int) -> int:
    return int(np.random.SeedSequence([seed, domain]).generate_state(1, np.uint64)[0])


def materialize_stream(spec: TrialSpec) -> list[Point]:
    """Load or generate the dataset, then apply the ordering policy."""
    if spec.input_path is not None:
        points = load_points(spec.input_path)
    else:
        points = gen_dataset(spec.generator, spec.gen_params, _sub_seed(spec.seed, _SEED_DATASET))

    if spec.ordering == "given":
        return points
    if spec.ordering == "shuffled":
        rng = np.random.default_rng([spec.seed, _SEED_ORDER])
        return [points[i] for i in rng.permutation(len(points))]
    order = adversarial_order(points, spec.alpha, spec.k)
    return [points[i] for i in order]


def run_trial(spec: TrialSpec) -> tuple[RunReport, list[Decision]]:
    """Stream one dataset through a fresh clusterer and score the result."""
    started = time.perf_counter()
    stream = materialize_stream(spec)
    n = len(stream)

    config = ClusterConfig(
        k=spec.k,
        bootstrap=spec.bootstrap,
        mode=spec.mode,
        seed=_sub_seed(spec.seed, _SEED_ALGORITHM),
    )
    clusterer = OnlineClusterer(config)
    decisions = [clusterer.process(x) for x in stream]
    centers = clusterer.finalize()

    achieved = _bulk_kmeans_cost(stream, centers)
    if spec.oracle == "exact":
        oracle_cost = optimal_kmeans(stream, spec.k).cost
        oracle_exact = True
    else:
        oracle_cost = lloyd_kmeans(
            stream, spec.k, restarts=spec.lloyd_restarts, seed=_sub_seed(spec.seed, _SEED_LLOYD)
        ).cost
        oracle_exact = False

    ratio: float | str
    if oracle_cost > 0.0:
        ratio = achieved / oracle_cost
        within = achieved <= 9.0 * oracle_cost
    else:
        ratio = RATIO_ZERO_COST if achieved == 0.0 else RATIO_INFINITE
        within = achieved == 0.0

    if n <= EXACT_SEARCH_LIMIT:
        seq = lower_exact(stream, spec.alpha, spec.k)
        lower_is_exact = True
    else:
        seq = lower_greedy(stream, spec.alpha, spec.k)
        lower_is_exact = False

    by_type = {"bootstrap": 0, "type1": 0, "type2": 0}
    for d in decisions:
        if d.selected:
            by_type[d.processing] += 1

    report = RunReport(
        n=n,
        k=spec.k,
        centers_selected=len(centers),
        bootstrap_selections=by_type["bootstrap"],
        type1_selections=by_type["type1"],
        type2_selections=by_type["type2"],
        peak_aux_points=max((d.aux_points for d in decisions), default=0),
        achieved_cost=achieved,
        oracle_cost=oracle_cost,
        oracle_exact=oracle_exact,
        ratio=ratio,
        within_nine=within,
        lower_estimate=len(seq),
        lower_exact=lower_is_exact,
        final_threshold=clusterer.threshold,
        threshold_raises=clusterer.counters.raises,
        threshold_doublings=clusterer.counters.doublings,
        seed=spec.seed,
        wall_time_s=time.perf_counter() - started,
    )
    return report, decisions


def trial_seeds(master_seed: int, trials: int) -> list[int]:
    state = np.random.SeedSequence(master_seed).generate_state(trials, np.uint64)
    return [int(s) for s in state]


def run_experiment(
    spec: TrialSpec,
    trials: int,
    out_path: str | Path | None = None,
    out_format: str = "json",
) -> dict:
    """Run seeded trials, optionally write a report file, return the summary.

    JSON output holds the trial records plus an aggregate block; CSV holds
    the trial table only (the aggregate is returned, and printed by the CLI).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if out_format not in ("json", "csv"):
        raise ValueError("out_format must be json or csv")

    reports: list[RunReport] = []
    for trial_seed in trial_seeds(spec.seed, trials):
        trial = _respecced(spec, trial_seed)
        report, _ = run_trial(trial)
        reports.append(report)

    aggregate = summarize(reports)
    result = {
        "master_seed": spec.seed,
        "trials": [r.to_record() for r in reports],
        "aggregate": aggregate,
    }
    if out_path is not None:
        write_report(result, out_path, out_format)
    return result


def _respecced(spec: TrialSpec, seed: int) -> TrialSpec:
    return TrialSpec(
        k=spec.k,
        input_path=spec.input_path,
        generator=spec.generator,
        gen_params=spec.gen_params,
        ordering=spec.ordering,
        alpha=spec.alpha,
        mode=spec.mode,
        seed=seed,
        oracle=spec.oracle,
        lloyd_restarts=spec.lloyd_restarts,
        bootstrap=spec.bootstrap,
    )


def summarize(reports: Sequence[RunReport]) -> dict:
    ratios = sorted(r.ratio for r in reports if isinstance(r.ratio, float))
    lowers = [r.lower_estimate for r in reports]
    centers = [r.centers_selected for r in reports]
    return {
        "trials": len(reports),
        "mean_ratio": _mean(ratios),
        "median_ratio": _quantile(ratios, 0.5),
        "p90_ratio": _quantile(ratios, 0.9),
        "fraction_within_nine": sum(r.within_nine for r in reports) / len(reports),
        "mean_centers_selected": _mean([float(c) for c in centers]),
        "max_peak_aux_points": max(r.peak_aux_points for r in reports),
        "mean_centers_over_lower": _mean(
            [c / l for c, l in zip(centers, lowers) if l > 0]
        ),
    }


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _quantile(sorted_values: Sequence[float], q: float) -> float | None:
    if not sorted_values:
        return None
    pos = q * (len(sorted_values) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac


def write_report(result: dict, out_path: str | Path, out_format: str) -> None:
    path = Path(out_path)
    if out_format == "json":
        path.write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
        return
    records = result["trials"]
    fields = list(records[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for rec in records:
            writer.writerow(rec)
