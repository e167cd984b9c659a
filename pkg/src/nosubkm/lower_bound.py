"""Spread-sequence machinery: certification, exact/greedy search, ordering.

A spread sequence (parameterized by alpha > 1 and k) is an ordering of
distinct points where each point's distance to all predecessors strictly
exceeds sqrt(i * alpha) times the (k-1)-fold diameter of the predecessors.
The length of the longest such sequence hiding inside a point set lower
bounds how many centers any alpha-approximate no-substitution selector must
take when the set is streamed worst-case-first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Point, dist, l_fold_diameter

EXACT_SEARCH_LIMIT = 10


class SequenceOverflowError(OverflowError):
    """Raised when 1-D construction overflows float range before `length`."""

    def __init__(self, achievable: int, requested: int):
        self.achievable = achievable
        self.requested = requested
        super().__init__(
            f"coordinates overflow before reaching length {requested}; "
            f"achievable length is {achievable}"
        )


@dataclass(frozen=True)
class AlphaKSequence:
    alpha: float
    k: int
    indices: tuple[int, ...]
    certified: bool

    def __len__(self) -> int:
        return len(self.indices)


def _prefix_threshold(
    prefix: Sequence[Point], position: int, alpha: float, k: int
) -> float:
    """sqrt(position * alpha) times the (k-1)-fold diameter of the prefix.

    Prefixes of fewer than k points have zero (k-1)-fold diameter, so the
    threshold degenerates to requiring a distinct point. Beyond the exact
    partition limit the diameter is a greedy upper bound, which makes
    certification conservative (it can reject, never wrongly accept).
    """
    if k < 2:
        return math.inf if prefix else 0.0
    if len(prefix) < k:
        return 0.0
    return math.sqrt(position * alpha) * l_fold_diameter(prefix, k - 1).value


def is_alpha_k_sequence(
    points: Sequence[Point], order: Sequence[int], alpha: float, k: int
) -> bool:
    """Check the spread condition for every position of `order` (strictly)."""
    if alpha <= 1:
        raise ValueError(f"alpha must be > 1, got {alpha}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(set(order)) != len(order):
        raise ValueError("order contains a repeated index")
    for idx in order:
        if not 0 <= idx < len(points):
            raise ValueError(f"index {idx} out of range")
    for i in range(2, len(order) + 1):
        prefix = [points[j] for j in order[: i - 1]]
        candidate = points[order[i - 1]]
        threshold = _prefix_threshold(prefix, i, alpha, k)
        if min(dist(candidate, p) for p in prefix) <= threshold:
            return False
    return True


def lower_exact(
    points: Sequence[Point],
    alpha: float,
    k: int,
    exact_limit: int = EXACT_SEARCH_LIMIT,
) -> AlphaKSequence:
    """Longest spread sequence, exactly, by dynamic programming over subsets.

    A subset is reachable when some ordering of it certifies; it extends by
    any outside point that passes the condition against the whole subset at
    the next position. Exponential in |points|, hence the size limit.
    """
    _validate_alpha_k(alpha, k)
    n = len(points)
    if n > exact_limit:
        raise ValueError(
            f"instance of size {n} exceeds the exact search limit "
            f"{exact_limit}; use lower_greedy"
        )
    if n == 0:
        return AlphaKSequence(alpha, k, (), certified=True)

    # parent[mask] = (previous mask, appended index); first marking wins so
    # reconstruction is deterministic (small masks and small indices first).
    parent: dict[int, tuple[int, int] | None] = {}
    for i in range(n):
        parent[1 << i] = None
    frontier = sorted(parent)
    best_mask = frontier[0]

    while frontier:
        next_frontier: list[int] = []
        for mask in frontier:
            members = [j for j in range(n) if mask >> j & 1]
            prefix = [points[j] for j in members]
            threshold = _prefix_threshold(prefix, len(members) + 1, alpha, k)
            for j in range(n):
                if mask >> j & 1:
                    continue
                grown = mask | (1 << j)
                if grown in parent:
                    continue
                if min(dist(points[j], p) for p in prefix) > threshold:
                    parent[grown] = (mask, j)
                    next_frontier.append(grown)
        if next_frontier:
            best_mask = next_frontier[0]
        frontier = sorted(next_frontier)

    order: list[int] = []
    mask = best_mask
    while parent[mask] is not None:
        prev, j = parent[mask]
        order.append(j)
        mask = prev
    order.append(mask.bit_length() - 1)
    order.reverse()
    return AlphaKSequence(alpha, k, tuple(order), certified=True)


def lower_greedy(points: Sequence[Point], alpha: float, k: int) -> AlphaKSequence:
    """Certified lower estimate by farthest-first extension.

    At each step, among the points passing the condition against the current
    prefix, take the one farthest from it (ties to the smallest index).
    """
    _validate_alpha_k(alpha, k)
    n = len(points)
    if n == 0:
        return AlphaKSequence(alpha, k, (), certified=True)

    order = [0]
    used = {0}
    min_dist = [dist(p, points[0]) for p in points]
    while True:
        prefix = [points[j] for j in order]
        threshold = _prefix_threshold(prefix, len(order) + 1, alpha, k)
        best_j = -1
        best_d = -math.inf
        for j in range(n):
            if j in used:
                continue
            if min_dist[j] > threshold and min_dist[j] > best_d:
                best_j, best_d = j, min_dist[j]
        if best_j < 0:
            break
        order.append(best_j)
        used.add(best_j)
        for j in range(n):
            d = dist(points[j], points[best_j])
            if d < min_dist[j]:
                min_dist[j] = d
    return AlphaKSequence(alpha, k, tuple(order), certified=True)


def adversarial_order(
    points: Sequence[Point],
    alpha: float,
    k: int,
    exact_limit: int = EXACT_SEARCH_LIMIT,
) -> list[int]:
    """Permutation streaming a longest-known spread sequence first.

    The sequence comes from the exact search when the instance is small
    enough, else from the greedy estimate; remaining points follow in their
    original order. A set already in certified order is returned unchanged.
    """
    n = len(points)
    identity = list(range(n))
    if is_alpha_k_sequence(points, identity, alpha, k):
        return identity
    if n <= exact_limit:
        seq = lower_exact(points, alpha, k, exact_limit=exact_limit)
    else:
        seq = lower_greedy(points, alpha, k)
    chosen = set(seq.indices)
    return list(seq.indices) + [i for i in identity if i not in chosen]


def gen_alpha_k_sequence(
    k: int,
    alpha: float,
    length: int,
    margin: float = 1.05,
    seed: int = 0,
) -> list[Point]:
    """Build a 1-D point list whose given order certifies as a spread sequence.

    The first k points sit at unit spacing; each later point lands beyond the
    current maximum by the condition threshold times a factor drawn from
    [margin, 1.5 * margin], so certification survives floating rounding while
    the seed varies the exact spacing. Coordinates grow super-exponentially;
    overflow raises SequenceOverflowError carrying the achievable length.
    """
    _validate_alpha_k(alpha, k)
    if k < 2:
        raise ValueError("sequence generation needs k >= 2")
    if length < k:
        raise ValueError(f"length ({length}) must be >= k ({k})")
    if margin <= 1:
        raise ValueError(f"margin must be > 1, got {margin}")

    rng = np.random.default_rng(seed)
    coords = [float(i) for i in range(k)]
    for i in range(k + 1, length + 1):
        prefix = [(c,) for c in coords]
        gap = _prefix_threshold(prefix, i, alpha, k)
        factor = margin * (1.0 + 0.5 * float(rng.random()))
        nxt = max(coords) + factor * gap
        if not math.isfinite(nxt) or nxt <= max(coords):
            raise SequenceOverflowError(achievable=len(coords), requested=length)
        coords.append(nxt)
    return [(c,) for c in coords]


def _validate_alpha_k(alpha: float, k: int) -> None:
    if alpha <= 1:
        raise ValueError(f"alpha must be > 1, got {alpha}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
