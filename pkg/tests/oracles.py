"""Independent high-precision oracles used by unit and acceptance tests.

Every function here re-derives a closed-form quantity with mpmath at 40
decimal digits, written directly from the defining formulas and sharing
no code with the implementation under test.
"""

from __future__ import annotations

import math

from mpmath import atan, ceil, exp, log, log10, mp, mpf, pi, sqrt

mp.dps = 40


def _mp(x) -> mpf:
    """Exact conversion of a Python/numpy float into an mpf."""
    return mpf(repr(float(x)))


def distance(a, b) -> float:
    total = mpf(0)
    for x, y in zip(a, b):
        total += (_mp((x)) - _mp((y))) ** 2
    return float(sqrt(total))


def los_probability(delta_h, horizontal, rho1, rho2) -> float:
    rho1, rho2 = _mp((rho1)), _mp((rho2))
    if horizontal == 0:
        angle = mpf(90)
    else:
        angle = atan(_mp((delta_h)) / _mp((horizontal))) * 180 / pi
    return float(1 / (1 + rho1 * exp(-rho2 * (angle - rho1))))


def path_loss(dist, omega, delta_h, horizontal, fc, c, rho1, rho2, eta_los, eta_nlos) -> float:
    fspl = 20 * log10(4 * pi * _mp((fc)) * _mp((dist)) / _mp((c)))
    if omega == 0:
        return float(fspl)
    pr = _mp((los_probability(delta_h, horizontal, rho1, rho2)))
    return float(fspl + pr * (_mp((eta_los)) - _mp((eta_nlos))) + _mp((eta_nlos)))


def bandwidth_shares(sizes, total) -> list[float]:
    sizes = [_mp((s)) for s in sizes]
    s = sum(sizes)
    return [float(x * _mp((total)) / s) for x in sizes]


def shannon_rate(bandwidth, loss_db, p_dbm, noise_dbm) -> float:
    p = 10 ** (_mp((p_dbm)) / 10)
    n = 10 ** (_mp((noise_dbm)) / 10)
    snr = p * 10 ** (-_mp((loss_db)) / 10) / n
    return float(_mp((bandwidth)) * log(1 + snr) / log(2))


def consensus_phases(k, es, ev, em, dp, replicas) -> tuple[float, float, float, float, float]:
    es, ev, em, dp = (_mp((v)) for v in (es, ev, em, dp))
    replicas = [_mp((r)) for r in replicas]
    quorum = 2 * int(ceil((mpf(k) - 1) / 3)) + 1
    t1 = k * (ev + em) / dp
    t2 = (es + (k - 1) * em) / dp + max((k + 1) * (ev + em) / dc for dc in replicas)
    t3p = quorum * (ev + em) / dp
    t3np = max((quorum * (ev + em) + es + (k - 1) * em) / dc for dc in replicas)
    t3 = max(t3p, t3np)
    t4 = (es + (k - 1) * em + quorum * (ev + em)) / min(dp, min(replicas))
    return float(t1), float(t2), float(t3), float(t4), float(t1 + t2 + t3 + t4)


def quorum_bruteforce(k: int) -> int:
    f = (k - 1) / 3
    return 2 * math.ceil(f) + 1


def composite_score(credit, comp, stor, comp_max, stor_max, w1, w2) -> float:
    return float(_mp((credit)) * (_mp((w1)) * _mp((comp)) / _mp((comp_max))
                                      + _mp((w2)) * _mp((stor)) / _mp((stor_max))))


def history_weight(beta, thr, credit) -> float:
    return float(min(mpf("0.9"), _mp((beta)) * _mp((thr)) / _mp((max(credit, 0.01)))))


def adaptive_split(w0, t_direct, t_indirect) -> tuple[float, float]:
    w0 = _mp((w0))
    u1 = 1 - _mp((t_direct))
    u2 = 1 - _mp((t_indirect))
    if u1 + u2 <= 0:
        return float((1 - w0) / 2), float((1 - w0) / 2)
    w1 = (1 - w0) * u1 / (u1 + u2)
    return float(w1), float(1 - w0 - w1)


def credit_update(credit, w0, w1, w2, t_d, t_i) -> float:
    v = (_mp((w0)) * _mp((credit)) + _mp((w1)) * _mp((t_d))
         + _mp((w2)) * _mp((t_i)))
    return float(min(mpf(1), max(mpf("0.01"), v)))


def hop_reward(cu, ck, delay, iota, varsigma) -> float:
    return float(_mp((cu)) * _mp((ck))
                 / (_mp((delay)) * _mp((iota)) + _mp((varsigma))))


def shaped(base, d_uk, d_kb) -> float:
    return float(_mp((base)) * _mp((d_uk)) / (_mp((d_uk)) + _mp((d_kb))))
