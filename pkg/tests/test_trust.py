import numpy as np
import pytest

from lainsim.trust import (BehaviorProfile, TrustRecord, WeightKind, WeightScheme,
                           classify, compute_weights, detection_time, direct_trust,
                           indirect_trust, network_detection_time, update_credit)

import oracles


def make_record(**kw) -> TrustRecord:
    rec = TrustRecord()
    for key, value in kw.items():
        setattr(rec, key, value)
    return rec


class TestDirectTrust:
    def test_equal_weight_combination(self):
        rec = make_record(rx_total=10, tx_total=8,
                          interactions_total=10, interactions_trusted=8)
        for ack in [1] * 8 + [0] * 2:
            rec.record_probe_round(ack)
        # all three factors sit at 0.8
        assert direct_trust(rec) == pytest.approx(0.8)
        # custom factor weights shift the blend
        assert direct_trust(rec, (1.0, 0.0, 0.0)) == pytest.approx(0.8)
        rec.tx_total = 10
        assert direct_trust(rec, (0.5, 0.25, 0.25)) == pytest.approx(
            0.5 * 1.0 + 0.25 * 0.8 + 0.25 * 0.8)

    def test_fresh_record_keeps_initial_credit(self):
        rec = TrustRecord(credit=1.0)
        assert direct_trust(rec) == 1.0
        rec2 = TrustRecord(credit=0.6)
        assert direct_trust(rec2) == pytest.approx(0.6)

    def test_perfect_node_scores_one(self):
        rec = make_record(rx_total=50, tx_total=50,
                          interactions_total=20, interactions_trusted=20)
        for _ in range(12):
            rec.record_probe_round(1)
        assert direct_trust(rec) == 1.0

    def test_probe_factor_clamped_to_one(self):
        rec = TrustRecord(credit=1.0, probe_period=0.5)
        rec.record_probe_round(5)  # more acks than the 2 expected
        assert direct_trust(rec) == 1.0


class TestIndirectTrust:
    def test_single_trusted_neighbor_ratio(self):
        rec = TrustRecord()
        rec.recommendations[7] = [3, 1]
        assert indirect_trust(rec, {7: 0.9}, 0.8) == pytest.approx(0.75)

    def test_untrusted_neighbors_fall_back_to_neutral(self):
        rec = TrustRecord()
        rec.recommendations[7] = [3, 1]
        assert indirect_trust(rec, {7: 0.5}, 0.8) == 0.5
        assert indirect_trust(TrustRecord(), {}, 0.8) == 0.5

    def test_mean_over_trusted_neighbors(self):
        rec = TrustRecord()
        rec.recommendations[1] = [4, 0]
        rec.recommendations[2] = [2, 2]
        assert indirect_trust(rec, {1: 1.0, 2: 1.0}, 0.8) == pytest.approx(0.75)

    def test_threshold_is_inclusive_for_recommenders(self):
        rec = TrustRecord()
        rec.recommendations[1] = [1, 0]
        assert indirect_trust(rec, {1: 0.8}, 0.8) == 1.0


class TestWeights:
    def test_history_weight_at_threshold(self):
        scheme = WeightScheme(kind=WeightKind.ADAPTIVE, beta=0.5, trust_threshold=0.8)
        w0, w1, w2 = compute_weights(scheme, 0.8, 0.9, 0.9)
        assert w0 == pytest.approx(0.5)
        assert w0 + w1 + w2 == pytest.approx(1.0, abs=1e-15)

    def test_adaptive_normalized_shares(self):
        scheme = WeightScheme(kind=WeightKind.ADAPTIVE, beta=0.5, trust_threshold=0.8)
        w0, w1, w2 = compute_weights(scheme, 1.0, 0.9, 0.8)
        assert w0 == pytest.approx(0.4)
        assert w1 == pytest.approx(0.2)
        assert w2 == pytest.approx(0.4)

    def test_perfect_evidence_splits_evenly(self):
        scheme = WeightScheme(kind=WeightKind.ADAPTIVE, beta=0.5, trust_threshold=0.8)
        w0, w1, w2 = compute_weights(scheme, 1.0, 1.0, 1.0)
        assert w1 == w2 == pytest.approx((1 - w0) / 2)

    def test_average_scheme(self):
        scheme = WeightScheme(kind=WeightKind.AVERAGE, beta=0.5, trust_threshold=0.8)
        w0, w1, w2 = compute_weights(scheme, 1.0, 0.1, 0.9)
        assert w1 == w2 == pytest.approx((1 - 0.4) / 2)

    def test_random_scheme_range_and_sum(self):
        scheme = WeightScheme(kind=WeightKind.RANDOM, beta=0.5, trust_threshold=0.8)
        rng = np.random.default_rng(0)
        for _ in range(200):
            w0, w1, w2 = compute_weights(scheme, 1.0, 0.5, 0.5, rng)
            rest = 1 - w0
            assert 0.2 * rest <= w1 <= 0.8 * rest
            assert w0 + w1 + w2 == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError):
            compute_weights(scheme, 1.0, 0.5, 0.5, None)

    def test_history_weight_capped_for_tiny_credit(self):
        scheme = WeightScheme(kind=WeightKind.ADAPTIVE, beta=1.0, trust_threshold=0.9)
        w0, w1, w2 = compute_weights(scheme, 0.01, 0.5, 0.5)
        assert w0 == pytest.approx(0.9)
        assert w1 >= 0 and w2 >= 0

    def test_weight_sum_property_random_inputs(self):
        rng = np.random.default_rng(12)
        schemes = [WeightScheme(kind=k, beta=rng.uniform(0.1, 1.0),
                                trust_threshold=rng.uniform(0.5, 0.95))
                   for k in WeightKind for _ in range(3)]
        for scheme in schemes:
            for _ in range(500):
                w = compute_weights(scheme, rng.uniform(0.0, 1.0),
                                    rng.uniform(0, 1), rng.uniform(0, 1), rng)
                assert abs(sum(w) - 1.0) < 1e-12
                assert all(x >= 0 for x in w)


class TestCreditUpdate:
    def test_affine_combination_example(self):
        value = update_credit(1.0, (0.4, 0.2, 0.4), 0.9, 0.8)
        assert value == pytest.approx(0.9)
        assert value == pytest.approx(
            oracles.credit_update(1.0, 0.4, 0.2, 0.4, 0.9, 0.8), rel=1e-12)

    def test_fixed_points(self):
        assert update_credit(1.0, (0.3, 0.3, 0.4), 1.0, 1.0) == 1.0
        assert update_credit(0.7, (0.5, 0.25, 0.25), 0.7, 0.7) == pytest.approx(0.7)

    def test_clamping(self):
        assert update_credit(0.0, (1.0, 0.0, 0.0), 0.0, 0.0) == 0.01
        assert update_credit(1.0, (1.0, 0.0, 0.0), 1.0, 1.0) == 1.0

    def test_credit_stays_bounded_over_long_runs(self):
        rng = np.random.default_rng(2)
        scheme = WeightScheme(kind=WeightKind.ADAPTIVE)
        credit = 1.0
        for _ in range(5000):
            t_d, t_i = rng.uniform(0, 1), rng.uniform(0, 1)
            w = compute_weights(scheme, credit, t_d, t_i)
            credit = update_credit(credit, w, t_d, t_i)
            assert 0.01 <= credit <= 1.0


class TestClassifyAndDetection:
    def test_classify_boundary(self):
        assert classify(0.81, 0.8)
        assert not classify(0.8, 0.8)  # boundary counts as malicious
        assert not classify(0.1, 0.8)

    def test_detection_time_examples(self):
        assert detection_time([1.0, 0.9, 0.79], 0.8) == 3
        assert detection_time([1.0, 0.9, 0.85], 0.8) is None
        assert detection_time([], 0.8) is None

    def test_detection_matches_linear_scan(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            series = rng.uniform(0.5, 1.0, size=30).tolist()
            thr = rng.uniform(0.6, 0.95)
            expected = None
            for idx, v in enumerate(series, start=1):
                if v < thr:
                    expected = idx
                    break
            assert detection_time(series, thr) == expected

    def test_network_detection_is_max_over_malicious(self):
        histories = {1: [0.9, 0.7], 2: [0.9, 0.9, 0.6], 3: [0.5]}
        assert network_detection_time(histories, [1, 2], 0.8) == 3
        assert network_detection_time(histories, [1], 0.8) == 2
        assert network_detection_time({1: [0.9]}, [1], 0.8) is None


def test_behavior_profile_validation():
    with pytest.raises(ValueError):
        BehaviorProfile(p_forward=1.2)
    honest = BehaviorProfile()
    assert honest.p_forward == honest.p_trusted_interact == honest.p_probe_ack == 1.0
