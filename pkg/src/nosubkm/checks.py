"""Fast self-check suites for the `check` CLI subcommand.

Each check exercises one invariant family on small seeded inputs and
returns (name, ok, detail). These are smoke-level; the pytest suite is the
authoritative verification.
"""

from __future__ import annotations

import numpy as np

from .cluster import ClusterConfig, OnlineClusterer
from .geometry import center_shift_residual, dist, kmeans_cost
from .harness import TrialSpec, run_trial
from .kcenter import KCenterSketch
from .lower_bound import is_alpha_k_sequence, lower_exact, lower_greedy


def check_center_shift() -> tuple[str, bool, str]:
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        pts = [tuple(rng.normal(0, 5, size=3)) for _ in range(10)]
        s = tuple(rng.normal(0, 5, size=3))
        rel = abs(center_shift_residual(pts, s)) / max(kmeans_cost(pts, [s]), 1e-30)
        worst = max(worst, rel)
    ok = worst <= 1e-9
    return "center-shift identity", ok, f"worst relative residual {worst:.2e}"


def check_sketch_invariants() -> tuple[str, bool, str]:
    rng = np.random.default_rng(12)
    for k in (2, 5):
        pts = [tuple(rng.uniform(0, 100, size=2)) for _ in range(200)]
        sketch = KCenterSketch(pts[:k], k)
        prev_radius = sketch.radius
        for t in range(k, 200):
            if t > k:
                sketch.insert(pts[t - 1])
            if len(sketch) > k:
                return "sketch invariants", False, f"|Z|={len(sketch)} > k={k}"
            if sum(c.count for c in sketch.centers) != t:
                return "sketch invariants", False, f"count sum mismatch at t={t}"
            if sketch.radius < prev_radius:
                return "sketch invariants", False, "radius decreased"
            prev_radius = sketch.radius
            cover = max(
                min(dist(p, c.center) for c in sketch.centers) for p in pts[:t]
            )
            if cover > 4.0 * sketch.radius + 1e-12:
                return "sketch invariants", False, f"coverage {cover} > 4P at t={t}"
    return "sketch invariants", True, "|Z|<=k, counts, coverage, monotone radius"


def check_no_substitution() -> tuple[str, bool, str]:
    rng = np.random.default_rng(13)
    pts = [tuple(rng.uniform(0, 10, size=2)) for _ in range(60)]
    config = ClusterConfig(k=3, seed=7)
    clusterer = OnlineClusterer(config)
    decisions = [clusterer.process(p) for p in pts]
    replayed = [pts[d.index - 1] for d in decisions if d.selected]
    ok = replayed == clusterer.finalize()
    # second run, same seed: identical decisions
    clusterer2 = OnlineClusterer(ClusterConfig(k=3, seed=7))
    decisions2 = [clusterer2.process(p) for p in pts]
    ok = ok and decisions == decisions2
    return "no-substitution + determinism", ok, f"{len(replayed)} centers taken"


def check_lower_tooling() -> tuple[str, bool, str]:
    rng = np.random.default_rng(14)
    for trial in range(20):
        pts = [tuple(rng.uniform(0, 30, size=1)) for _ in range(8)]
        exact = lower_exact(pts, 9.0, 2)
        greedy = lower_greedy(pts, 9.0, 2)
        if len(greedy) > len(exact):
            return "lower-bound tooling", False, "greedy exceeded exact"
        for seq in (exact, greedy):
            if not is_alpha_k_sequence(pts, seq.indices, 9.0, 2):
                return "lower-bound tooling", False, "uncertified sequence"
    return "lower-bound tooling", True, "greedy <= exact, all certified"


def check_memory_bound() -> tuple[str, bool, str]:
    spec = TrialSpec(
        k=5,
        generator="uniform_box",
        gen_params={"n": 300, "d": 2},
        ordering="shuffled",
        oracle="lloyd",
        seed=15,
    )
    report, _ = run_trial(spec)
    ok = report.peak_aux_points <= 5
    return "auxiliary memory", ok, f"peak aux points {report.peak_aux_points} (k=5)"


ALL_CHECKS = (
    check_center_shift,
    check_sketch_invariants,
    check_no_substitution,
    check_lower_tooling,
    check_memory_bound,
)


def run_all() -> bool:
    all_ok = True
    for check in ALL_CHECKS:
        name, ok, detail = check()
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name}: {detail}")
        all_ok = all_ok and ok
    return all_ok
