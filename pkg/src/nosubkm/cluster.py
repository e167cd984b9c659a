"""Streaming no-substitution center selection.

Each arrival is irrevocably accepted as a center or rejected. The first
`bootstrap` arrivals are always taken. After that, a deterministic k-center
sketch of the stream decides between two randomized selection rules:

* distance processing ("type1"): take the point with probability
  d(x, S)^2 / R, where R is a threshold raised from the sketch radius and
  doubled whenever too many recent selections accumulate;
* population processing ("type2"), used when the sketch centers are spread
  far apart relative to the radius: take the point with probability
  inversely proportional to the estimated population of its nearest sketch
  cluster.

Selection randomness is counter-based: the draw at arrival t depends only
on (seed, t), so runs are reproducible and the branch taken at each step is
a deterministic function of the input prefix alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point, sq_dist
from .kcenter import KCenterSketch

_U64 = (1 << 64) - 1


def step_uniform(seed: int, t: int) -> float:
    """The uniform [0,1) draw for arrival t under this seed."""
    key = (seed & _U64) | (t << 64)
    return float(np.random.Generator(np.random.Philox(key=key)).random())


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    bootstrap: int | None = None  # defaults to k; raise to >= 36 for small-t safety
    c_raise: float = 24.0  # divisor coefficient when raising R from the radius
    c_double: float = 289.0  # selection-count factor before R doubles
    c_type2: float = 12.0  # numerator coefficient of the population rule
    log_base: float = 2.0
    mode: str = "full"  # "full" or "type1_only"
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.bootstrap is not None and self.bootstrap < self.k:
            raise ValueError(
                f"bootstrap ({self.bootstrap}) must be >= k ({self.k})"
            )
        for name in ("c_raise", "c_double", "c_type2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.log_base <= 1:
            raise ValueError("log_base must be > 1")
        if self.mode not in ("full", "type1_only"):
            raise ValueError(f"unknown mode: {self.mode!r}")

    @property
    def bootstrap_size(self) -> int:
        return self.bootstrap if self.bootstrap is not None else self.k


@dataclass(frozen=True)
class Decision:
    """Record of one arrival: which rule ran, with what probability."""

    index: int  # arrival index t, 1-based
    processing: str  # "bootstrap" | "type1" | "type2"
    selected: bool
    probability: float
    threshold_after: float
    aux_points: int


@dataclass
class _RunCounters:
    raises: int = 0
    doublings: int = 0


class OnlineClusterer:
    """Single-owner state machine; feed arrivals one at a time."""

    def __init__(self, config: ClusterConfig):
        self.config = config
        self.selected_points: list[Point] = []
        self.selected_indices: list[int] = []
        self.threshold = 0.0  # R
        self.selections_since_reset = 0  # F
        self.sketch: KCenterSketch | None = None
        self.t = 0
        self.counters = _RunCounters()
        self._dim: int | None = None
        self._ln_k10 = math.log(config.k + 10)
        # mirror of selected_points as a growing array, so the per-arrival
        # nearest-selected-center distance stays fast as |S| grows
        self._selected_buf: np.ndarray | None = None

    def aux_memory(self) -> int:
        """Points retained outside the selected set (the sketch centers)."""
        return len(self.sketch) if self.sketch is not None else 0

    def finalize(self) -> list[Point]:
        """Selected centers in arrival order. Idempotent."""
        return list(self.selected_points)

    def process(self, x: Point) -> Decision:
        if self._dim is None:
            self._dim = len(x)
        elif len(x) != self._dim:
            raise ValueError(
                f"dimension mismatch: expected {self._dim}, got {len(x)}"
            )
        self.t += 1
        t = self.t
        cfg = self.config

        if t <= cfg.bootstrap_size:
            self._take(x)
            if t == cfg.k:
                self.sketch = KCenterSketch(self.selected_points[: cfg.k], cfg.k)
            elif t > cfg.k:
                assert self.sketch is not None
                self.sketch.insert(x)
            return self._decision(t, "bootstrap", True, 1.0)

        assert self.sketch is not None
        self.sketch.insert(x)

        if self._population_rule_applies(t):
            return self._process_type2(t, x)
        return self._process_type1(t, x)

    def _population_rule_applies(self, t: int) -> bool:
        # The population rule needs a full complement of k centers; with
        # fewer, the pairwise gap is vacuous (+inf) and would trigger it
        # spuriously.
        if self.config.mode != "full":
            return False
        sketch = self.sketch
        if len(sketch) != self.config.k:
            return False
        return sketch.min_center_gap() > 4.0 * (t + 2) * sketch.radius

    def _process_type1(self, t: int, x: Point) -> Decision:
        cfg = self.config
        sketch = self.sketch
        raise_to = sketch.radius**2 / (cfg.c_raise * cfg.k * self._ln_k10)
        if raise_to > self.threshold:
            self.threshold = raise_to
            self.selections_since_reset = 0
            self.counters.raises += 1

        d2 = self._min_sq_dist_to_selected(x)
        if self.threshold > 0.0:
            prob = min(1.0, d2 / self.threshold)
        else:
            # R can only still be 0 while the sketch radius is 0, i.e. all
            # arrivals so far coincide; taking any novel point is the only
            # cost-safe action.
            prob = 1.0 if d2 > 0.0 else 0.0

        selected = step_uniform(cfg.seed, t) < prob
        if selected:
            self._take(x)
            self.selections_since_reset += 1

        limit = cfg.c_double * cfg.k * self._ln_k10 * math.log(t, cfg.log_base)
        if self.selections_since_reset > limit:
            self.threshold *= 2.0
            self.selections_since_reset = 0
            self.counters.doublings += 1

        return self._decision(t, "type1", selected, prob)

    def _process_type2(self, t: int, x: Point) -> Decision:
        cfg = self.config
        nearest, _ = self.sketch.nearest_center(x)
        prob = min(1.0, cfg.c_type2 * self._ln_k10 / nearest.count)
        selected = step_uniform(cfg.seed, t) < prob
        if selected:
            self._take(x)
        return self._decision(t, "type2", selected, prob)

    def _min_sq_dist_to_selected(self, x: Point) -> float:
        count = len(self.selected_points)
        if count <= 16:
            return min(sq_dist(x, s) for s in self.selected_points)
        diffs = self._selected_buf[:count] - np.asarray(x)
        return float((diffs * diffs).sum(axis=1).min())

    def _take(self, x: Point) -> None:
        self.selected_points.append(x)
        self.selected_indices.append(self.t)
        count = len(self.selected_points)
        if self._selected_buf is None:
            self._selected_buf = np.empty((64, len(x)))
        elif count > self._selected_buf.shape[0]:
            grown = np.empty((2 * self._selected_buf.shape[0], len(x)))
            grown[: count - 1] = self._selected_buf
            self._selected_buf = grown
        self._selected_buf[count - 1] = x

    def _decision(
        self, t: int, processing: str, selected: bool, prob: float
    ) -> Decision:
        return Decision(
            index=t,
            processing=processing,
            selected=selected,
            probability=prob,
            threshold_after=self.threshold,
            aux_points=self.aux_memory(),
        )
