import math

import numpy as np
import pytest

from nosubkm.lower_bound import (
    SequenceOverflowError,
    adversarial_order,
    gen_alpha_k_sequence,
    is_alpha_k_sequence,
    lower_exact,
    lower_greedy,
)

POINTS_0_1_7_50 = [(0.0,), (1.0,), (7.0,), (50.0,)]


class TestCertification:
    def test_up_to_k_distinct_points_always_qualify(self):
        pts = [(3.0,), (8.0,)]
        assert is_alpha_k_sequence(pts, [0, 1], 100.0, 2)
        assert is_alpha_k_sequence(pts, [1, 0], 2.0, 3)

    def test_hand_checked_accept(self):
        # step 3 needs d > sqrt(27) * 1 ~ 5.196 (7 qualifies at 6);
        # step 4 needs d > 6 * 7 = 42 (50 qualifies at 43)
        assert is_alpha_k_sequence(POINTS_0_1_7_50, [0, 1, 2, 3], 9.0, 2)

    def test_hand_checked_reject(self):
        pts = [(0.0,), (1.0,), (7.0,), (43.0,)]
        # step 4: min distance 36 <= 42
        assert not is_alpha_k_sequence(pts, [0, 1, 2, 3], 9.0, 2)
        assert is_alpha_k_sequence(pts, [0, 1, 2], 9.0, 2)

    def test_duplicate_value_rejected(self):
        pts = [(2.0,), (2.0,)]
        assert not is_alpha_k_sequence(pts, [0, 1], 9.0, 2)

    def test_repeated_index_is_error(self):
        with pytest.raises(ValueError):
            is_alpha_k_sequence(POINTS_0_1_7_50, [0, 0, 1], 9.0, 2)

    def test_alpha_must_exceed_one(self):
        with pytest.raises(ValueError):
            is_alpha_k_sequence(POINTS_0_1_7_50, [0, 1], 1.0, 2)

    def test_strictness_at_equality(self):
        # distance exactly equal to the threshold must fail
        pts = [(0.0,), (1.0,), (1.0 + math.sqrt(27),)]
        assert not is_alpha_k_sequence(pts, [0, 1, 2], 9.0, 2)


class TestLowerExact:
    def test_k_distinct_points(self):
        assert len(lower_exact([(0.0,), (4.0,)], 9.0, 2)) == 2

    def test_hand_built_instance(self):
        seq = lower_exact(POINTS_0_1_7_50, 9.0, 2)
        assert len(seq) == 4
        assert is_alpha_k_sequence(POINTS_0_1_7_50, seq.indices, 9.0, 2)

    def test_all_duplicates(self):
        pts = [(5.0,)] * 6
        assert len(lower_exact(pts, 9.0, 2)) == 1

    def test_over_limit_refuses(self):
        pts = [(float(i),) for i in range(11)]
        with pytest.raises(ValueError, match="lower_greedy"):
            lower_exact(pts, 9.0, 2)

    def test_certified_output(self):
        rng = np.random.default_rng(61)
        for _ in range(20):
            pts = [tuple(rng.uniform(0, 100, size=1)) for _ in range(7)]
            seq = lower_exact(pts, 9.0, 2)
            assert seq.certified
            assert is_alpha_k_sequence(pts, seq.indices, 9.0, 2)

    def test_brute_force_cross_check(self):
        # independent oracle: try every ordered arrangement of every subset
        import itertools

        def brute(points, alpha, k):
            best = 0
            n = len(points)
            for size in range(1, n + 1):
                for subset in itertools.combinations(range(n), size):
                    for order in itertools.permutations(subset):
                        try:
                            ok = is_alpha_k_sequence(points, list(order), alpha, k)
                        except ValueError:
                            ok = False
                        if ok:
                            best = max(best, size)
                            break
                    if best == size:
                        break
            return best

        rng = np.random.default_rng(62)
        for _ in range(8):
            pts = [tuple(rng.uniform(0, 40, size=1)) for _ in range(6)]
            assert len(lower_exact(pts, 9.0, 2)) == brute(pts, 9.0, 2)
        for _ in range(4):
            pts = [tuple(rng.uniform(0, 40, size=2)) for _ in range(5)]
            assert len(lower_exact(pts, 4.0, 3)) == brute(pts, 4.0, 3)


class TestLowerGreedy:
    def test_always_certified(self):
        rng = np.random.default_rng(63)
        for _ in range(30):
            n = int(rng.integers(1, 15))
            pts = [tuple(rng.uniform(0, 1000, size=2)) for _ in range(n)]
            seq = lower_greedy(pts, 9.0, 2)
            assert is_alpha_k_sequence(pts, seq.indices, 9.0, 2)

    def test_never_exceeds_exact(self):
        rng = np.random.default_rng(64)
        for _ in range(40):
            n = int(rng.integers(2, 10))
            pts = [tuple(rng.uniform(0, 100, size=1)) for _ in range(n)]
            assert len(lower_greedy(pts, 9.0, 2)) <= len(lower_exact(pts, 9.0, 2))

    def test_recovers_generated_sequence(self):
        pts = gen_alpha_k_sequence(2, 9.0, 8, seed=3)
        shuffled = [pts[i] for i in np.random.default_rng(0).permutation(len(pts))]
        assert len(lower_greedy(shuffled, 9.0, 2)) >= 2


class TestAdversarialOrder:
    def test_identity_when_already_certified(self):
        assert adversarial_order(POINTS_0_1_7_50, 9.0, 2) == [0, 1, 2, 3]

    def test_shuffled_instance_restored_as_prefix(self):
        rng = np.random.default_rng(65)
        for _ in range(10):
            perm = rng.permutation(4)
            shuffled = [POINTS_0_1_7_50[i] for i in perm]
            order = adversarial_order(shuffled, 9.0, 2)
            assert sorted(order) == [0, 1, 2, 3]
            assert is_alpha_k_sequence(shuffled, order[:4], 9.0, 2)

    def test_prefix_certifies_in_general(self):
        rng = np.random.default_rng(66)
        for _ in range(15):
            n = int(rng.integers(3, 9))
            pts = [tuple(rng.uniform(0, 500, size=1)) for _ in range(n)]
            order = adversarial_order(pts, 9.0, 2)
            assert sorted(order) == list(range(n))
            length = len(lower_exact(pts, 9.0, 2))
            assert is_alpha_k_sequence(pts, order[:length], 9.0, 2)

    def test_large_instance_uses_greedy(self):
        rng = np.random.default_rng(67)
        pts = [tuple(rng.uniform(0, 100, size=2)) for _ in range(60)]
        order = adversarial_order(pts, 9.0, 2)
        assert sorted(order) == list(range(60))


class TestGenerator:
    def test_output_certified(self):
        for seed in range(5):
            pts = gen_alpha_k_sequence(2, 9.0, 9, seed=seed)
            assert is_alpha_k_sequence(pts, list(range(len(pts))), 9.0, 2)

    def test_k3_output_certified(self):
        pts = gen_alpha_k_sequence(3, 4.0, 8, seed=1)
        assert is_alpha_k_sequence(pts, list(range(len(pts))), 4.0, 3)

    def test_length_equals_k(self):
        pts = gen_alpha_k_sequence(3, 9.0, 3, seed=0)
        assert pts == [(0.0,), (1.0,), (2.0,)]

    def test_growth_shape(self):
        pts = gen_alpha_k_sequence(2, 9.0, 4, margin=1.0000001, seed=0)
        coords = [p[0] for p in pts]
        # ~ (0, 1, 1 + sqrt(27), ...): the same growth as the 0,1,7,50 family
        assert coords[2] == pytest.approx(1 + math.sqrt(27), rel=0.5)
        assert coords[3] == pytest.approx(coords[2] * 7, rel=0.5)

    def test_overflow_reports_achievable_length(self):
        with pytest.raises(SequenceOverflowError) as info:
            gen_alpha_k_sequence(2, 9.0, 400, seed=0)
        assert 10 < info.value.achievable < 400

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            gen_alpha_k_sequence(1, 9.0, 5)
        with pytest.raises(ValueError):
            gen_alpha_k_sequence(2, 9.0, 1)
        with pytest.raises(ValueError):
            gen_alpha_k_sequence(2, 9.0, 5, margin=0.9)
