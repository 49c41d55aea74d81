import numpy as np
import pytest

from lainsim.learner import (MLP, Adam, Sgd, TrainConfig, load_checkpoint,
                             masked_argmax, masked_max, save_checkpoint,
                             soft_update)
from lainsim.learner.agent import loss_and_gradient, td_targets


def toy_net(sizes, seed=0, dtype=np.float64) -> MLP:
    return MLP(sizes, rng=np.random.default_rng(seed), dtype=dtype)


class TestForward:
    def test_zero_parameters_give_zero_outputs(self):
        net = MLP((5, 8, 8, 3))
        out = net.forward(np.ones((4, 5)))
        assert np.all(out == 0.0)

    def test_hand_computed_1_2_1(self):
        net = MLP((1, 2, 1))
        net.weights[0][:] = [[1.0, -2.0]]
        net.biases[0][:] = [0.5, 1.0]
        net.weights[1][:] = [[2.0], [3.0]]
        net.biases[1][:] = [-0.25]
        # x=1: hidden pre = [1.5, -1.0] -> relu [1.5, 0]; out = 3.0 - 0.25
        assert net.forward(np.array([1.0])) == pytest.approx([2.75])
        # x=-1: hidden pre = [-0.5, 3.0] -> relu [0, 3]; out = 9 - 0.25
        assert net.forward(np.array([-1.0])) == pytest.approx([8.75])

    def test_width_mismatch_rejected(self):
        net = MLP((3, 4, 2))
        with pytest.raises(ValueError):
            net.forward(np.ones((1, 5)))

    def test_masking_never_selects_invalid(self):
        rng = np.random.default_rng(5)
        q = rng.normal(size=(100, 7))
        mask = rng.random((100, 7)) < 0.5
        mask[:, 0] = True  # keep at least one valid slot
        picks = masked_argmax(q, mask)
        assert all(mask[i, picks[i]] for i in range(100))

    def test_argmax_tie_breaks_low_index(self):
        q = np.array([[1.0, 1.0, 1.0]])
        mask = np.array([[True, True, True]])
        assert masked_argmax(q, mask)[0] == 0


class TestTargets:
    def test_terminal_uses_reward_only(self):
        net = toy_net((3, 4, 2))
        y = td_targets(np.array([1.5]), np.array([True]), np.ones((1, 3)),
                       np.ones((1, 2), dtype=bool), net, net, 0.9, double=True)
        assert y[0] == pytest.approx(1.5)

    def test_zero_gamma(self):
        net = toy_net((3, 4, 2))
        y = td_targets(np.array([2.0]), np.array([False]), np.ones((1, 3)),
                       np.ones((1, 2), dtype=bool), net, net, 0.0, double=True)
        assert y[0] == pytest.approx(2.0)

    def test_double_vs_plain_hand_case(self):
        # online net prefers action 0; target net values action 1 higher
        online = MLP((1, 2))
        online.weights[0][:] = [[0.0, 0.0]]
        online.biases[0][:] = [2.0, 1.0]
        target = MLP((1, 2))
        target.weights[0][:] = [[0.0, 0.0]]
        target.biases[0][:] = [0.3, 0.7]
        obs = np.zeros((1, 1))
        mask = np.ones((1, 2), dtype=bool)
        y_double = td_targets(np.array([0.0]), np.array([False]), obs, mask,
                              online, target, 1.0, double=True)
        y_plain = td_targets(np.array([0.0]), np.array([False]), obs, mask,
                             online, target, 1.0, double=False)
        # double evaluates the online argmax (action 0) under the target: 0.3
        assert y_double[0] == pytest.approx(0.3)
        # plain takes the target's own max: 0.7
        assert y_plain[0] == pytest.approx(0.7)

    def test_double_never_exceeds_plain(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            online = toy_net((4, 8, 3), seed=rng.integers(1 << 30))
            target = toy_net((4, 8, 3), seed=rng.integers(1 << 30))
            obs = rng.normal(size=(8, 4))
            mask = rng.random((8, 3)) < 0.7
            mask[:, 0] = True
            r = rng.normal(size=8)
            f = np.zeros(8, dtype=bool)
            yd = td_targets(r, f, obs, mask, online, target, 0.95, double=True)
            yp = td_targets(r, f, obs, mask, online, target, 0.95, double=False)
            assert np.all(yd <= yp + 1e-12)


class TestGradients:
    def test_perfect_predictions_zero_loss(self):
        net = toy_net((3, 5, 2))
        obs = np.ones((4, 3))
        q = net.forward(obs)
        actions = np.array([0, 1, 0, 1])
        targets = q[np.arange(4), actions]
        loss, grad, td = loss_and_gradient(net, obs, actions, targets, np.ones(4))
        assert loss == 0.0
        assert np.all(grad == 0.0)
        assert np.all(td == 0.0)

    def test_single_linear_parameter_gradient(self):
        # one weight, no bias active: Q = w*x, dL/dw = 2(Q - y)*x
        net = MLP((1, 1))
        net.weights[0][:] = [[2.0]]
        obs = np.array([[3.0]])
        loss, grad, _ = loss_and_gradient(net, obs, np.array([0]),
                                          np.array([1.0]), np.ones(1))
        assert loss == pytest.approx(25.0)
        assert grad[0] == pytest.approx(2 * (6.0 - 1.0) * 3.0)
        assert grad[1] == pytest.approx(2 * (6.0 - 1.0))  # bias gradient

    @pytest.mark.parametrize("sizes", [(4, 6, 3), (5, 16, 16, 4), (2, 3, 2)])
    def test_gradient_matches_central_differences(self, sizes):
        rng = np.random.default_rng(7)
        net = toy_net(sizes, seed=13)
        batch = 6
        obs = rng.normal(size=(batch, sizes[0]))
        actions = rng.integers(0, sizes[-1], size=batch)
        targets = rng.normal(size=batch)
        weights = rng.uniform(0.5, 1.0, size=batch)
        _, grad, _ = loss_and_gradient(net, obs, actions, targets, weights)

        eps = 1e-6
        for idx in range(0, net.n_params, max(1, net.n_params // 60)):
            saved = net.params[idx]
            net.params[idx] = saved + eps
            lp, _, _ = loss_and_gradient(net, obs, actions, targets, weights)
            net.params[idx] = saved - eps
            lm, _, _ = loss_and_gradient(net, obs, actions, targets, weights)
            net.params[idx] = saved
            fd = (lp - lm) / (2 * eps)
            denom = max(abs(fd), abs(grad[idx]), 1e-8)
            assert abs(fd - grad[idx]) / denom < 1e-4


class TestOptimizers:
    def test_zero_gradient_no_change(self):
        net = toy_net((3, 4, 2))
        before = net.params.copy()
        Adam(0.01, net.n_params).step(net.params, np.zeros(net.n_params))
        assert np.array_equal(net.params, before)

    def test_sgd_single_step(self):
        params = np.zeros(1)
        Sgd(0.1).step(params, np.array([1.0]))
        assert params[0] == pytest.approx(-0.1)

    def test_adam_first_step_closed_form(self):
        # from zero state: m_hat = g, v_hat = g^2, step = -lr*g/(|g|+eps)
        params = np.zeros(3)
        g = np.array([0.5, -2.0, 1e-3])
        opt = Adam(0.01, 3)
        opt.step(params, g)
        expected = -0.01 * g / (np.abs(g) + 1e-8)
        np.testing.assert_allclose(params, expected, rtol=1e-9)

    def test_soft_update(self):
        online = MLP((2, 2))
        online.params[:] = 1.0
        target = MLP((2, 2))
        soft_update(target, online, 0.01)
        assert np.all(target.params == pytest.approx(0.01))
        soft_update(target, online, 1.0)
        assert np.all(target.params == 1.0)
        before = target.params.copy()
        soft_update(target, online, 0.0)
        assert np.array_equal(target.params, before)


class TestSchedules:
    def test_epsilon_endpoints_and_linearity(self):
        cfg = TrainConfig(episodes=100, eps_start=1.0, eps_end=0.01,
                          eps_decay_fraction=0.8)
        assert cfg.epsilon_at(0) == pytest.approx(1.0)
        assert cfg.epsilon_at(80) == pytest.approx(0.01)
        assert cfg.epsilon_at(99) == pytest.approx(0.01)
        assert cfg.epsilon_at(40) == pytest.approx((1.0 + 0.01) / 2)
        quarter = cfg.epsilon_at(20)
        assert quarter == pytest.approx(1.0 + 0.25 * (0.01 - 1.0))

    def test_is_beta_anneals_to_one(self):
        cfg = TrainConfig(episodes=50)
        assert cfg.is_beta_at(0) == pytest.approx(0.4)
        assert cfg.is_beta_at(49) == pytest.approx(1.0)


class TestCheckpoint:
    def test_roundtrip(self, tmp_path):
        net = toy_net((6, 32, 4), seed=3)
        opt = Adam(0.005, net.n_params)
        opt.step(net.params, np.random.default_rng(0).normal(size=net.n_params))
        path = tmp_path / "agent.net"
        save_checkpoint(path, net, opt)
        loaded, opt2 = load_checkpoint(path, lr=0.005)
        assert loaded.layer_sizes == net.layer_sizes
        np.testing.assert_array_equal(loaded.params, net.params)
        np.testing.assert_array_equal(opt2.m, opt.m)
        np.testing.assert_array_equal(opt2.v, opt.v)
        assert opt2.t == opt.t

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bogus.net"
        path.write_bytes(b"NOTANETX" + b"\0" * 64)
        with pytest.raises(ValueError):
            load_checkpoint(path)


def test_masked_max_empty_mask_gives_zero():
    q = np.array([[5.0, 3.0]])
    mask = np.array([[False, False]])
    assert masked_max(q, mask)[0] == 0.0
