import math

import numpy as np
import pytest

from lainsim.channel import (ChannelParams, allocate_bandwidth, hop_delay,
                             los_probability, path_loss, transmission_rate)

import oracles

PARAMS = ChannelParams()


def test_los_at_rho1_degrees_elevation():
    # geometry chosen so the elevation angle is exactly rho1 degrees
    horizontal = 1000.0
    delta_h = math.tan(math.radians(PARAMS.rho1)) * horizontal
    assert los_probability(delta_h, horizontal, PARAMS) == pytest.approx(
        0.16614607562969363, rel=1e-12)


def test_los_overhead_and_ground_level():
    assert los_probability(500.0, 0.0, PARAMS) >= 1 - 1e-9
    assert los_probability(0.0, 1000.0, PARAMS) == pytest.approx(
        0.033076652873946500, rel=1e-12)


def test_los_rejects_degenerate_geometry():
    with pytest.raises(ValueError):
        los_probability(0.0, 0.0, PARAMS)
    with pytest.raises(ValueError):
        los_probability(10.0, -1.0, PARAMS)


def test_los_strictly_increasing_in_elevation():
    values = [los_probability(math.tan(math.radians(a)) * 1000.0, 1000.0, PARAMS)
              for a in np.linspace(0.5, 89.5, 60)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_fspl_matches_oracle():
    assert path_loss(1000.0, 0, 0.0, 1000.0, PARAMS) == pytest.approx(
        100.04599702028080, abs=1e-3)
    assert path_loss(1000.0, 0, 0.0, 1000.0, PARAMS) == pytest.approx(
        oracles.path_loss(1000.0, 0, 0.0, 1000.0, PARAMS.carrier_frequency,
                          PARAMS.light_speed, PARAMS.rho1, PARAMS.rho2,
                          PARAMS.eta_los, PARAMS.eta_nlos), rel=1e-12)


def test_path_loss_limits():
    # straight overhead: Pr -> 1, excess -> eta_los
    overhead = path_loss(500.0, 1, 500.0, 0.0, PARAMS)
    fspl = path_loss(500.0, 0, 500.0, 0.0, PARAMS)
    assert overhead == pytest.approx(fspl + PARAMS.eta_los, abs=1e-6)
    # ground-level geometry: Pr is small but not zero
    level = path_loss(5000.0, 1, 0.0, 5000.0, PARAMS)
    pr = los_probability(0.0, 5000.0, PARAMS)
    expected = path_loss(5000.0, 0, 0.0, 5000.0, PARAMS) + \
        pr * (PARAMS.eta_los - PARAMS.eta_nlos) + PARAMS.eta_nlos
    assert level == pytest.approx(expected, rel=1e-12)


def test_path_loss_rejects_nonpositive_distance():
    with pytest.raises(ValueError):
        path_loss(0.0, 0, 0.0, 1.0, PARAMS)


def test_path_loss_increasing_in_distance():
    losses = [path_loss(d, 1, 300.0, math.sqrt(d * d - 300.0 * 300.0), PARAMS)
              for d in np.linspace(400, 20000, 50)]
    assert all(b > a for a, b in zip(losses, losses[1:]))


def test_bandwidth_split_examples():
    assert allocate_bandwidth([500e3], 2.4e6) == [2.4e6]
    shares = allocate_bandwidth([400e3, 600e3], 2.4e6)
    assert shares == pytest.approx([0.96e6, 1.44e6], rel=1e-12)
    equal = allocate_bandwidth([5e5] * 5, 2.4e6)
    assert equal == pytest.approx([4.8e5] * 5, rel=1e-12)
    assert allocate_bandwidth([], 2.4e6) == []


def test_bandwidth_conservation_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        sizes = rng.uniform(1e3, 1e6, size=rng.integers(1, 12))
        shares = allocate_bandwidth(sizes.tolist(), 2.4e6)
        assert math.fsum(shares) == pytest.approx(2.4e6, rel=1e-12)


def test_rate_example_and_limits():
    rate = transmission_rate(2.4e6, 100.0, PARAMS)
    assert rate == pytest.approx(39863171.763156205, rel=1e-9)
    assert rate == pytest.approx(39.86e6, abs=0.01e6)
    assert transmission_rate(2.4e6, 500.0, PARAMS) == pytest.approx(0.0, abs=1e-3)
    assert transmission_rate(4.8e6, 100.0, PARAMS) == pytest.approx(2 * rate, rel=1e-12)


def test_rate_decreasing_in_loss():
    rates = [transmission_rate(2.4e6, loss, PARAMS) for loss in np.linspace(60, 160, 40)]
    assert all(b < a for a, b in zip(rates, rates[1:]))


def test_hop_delay_examples():
    per, slot = hop_delay([(500e3, 39863171.763156205)])
    assert per[0] == pytest.approx(0.012542905591424, abs=1e-5)
    assert slot == per[0]
    assert hop_delay([]) == ([], 0.0)
    per, slot = hop_delay([(4e5, 1e6), (4e5, 1e6)])
    assert per[0] == per[1] == slot


def test_hop_delay_zero_rate_is_infinite_not_error():
    per, slot = hop_delay([(5e5, 0.0)])
    assert math.isinf(per[0]) and math.isinf(slot)


def test_equal_split_equalizes_delays():
    # proportional split means size/rate is demand-independent per link
    rng = np.random.default_rng(4)
    for _ in range(50):
        sizes = rng.uniform(4e5, 6e5, size=rng.integers(2, 9))
        shares = allocate_bandwidth(sizes.tolist(), 2.4e6)
        loss = rng.uniform(80, 120)
        delays = [s / transmission_rate(b, loss, PARAMS) for s, b in zip(sizes, shares)]
        spread = (max(delays) - min(delays)) / max(delays)
        assert spread < 1e-9
