import numpy as np
import pytest

from netequil import ConfigurationError, Network

from conftest import random_network


def single_arc_net():
    return Network(["a", "b", "c"], [("a", "b")], 1)


class TestConstruction:
    def test_self_loop_rejected_with_arc_named(self):
        with pytest.raises(ConfigurationError, match="arc 1.*self-loop"):
            Network(["a", "b"], [("a", "b"), ("b", "b")], 1)

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ConfigurationError, match="duplicate node"):
            Network(["a", "a"], [("a", "a")], 1)

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(ConfigurationError, match="not a declared node"):
            Network(["a", "b"], [("a", "z")], 1)

    def test_parallel_arcs_allowed(self):
        net = Network(["a", "b"], [("a", "b"), ("a", "b")], 2)
        assert net.n_arcs == 2
        assert net.arcs[0] == net.arcs[1] == ("a", "b")

    def test_commodity_count_shorthand(self):
        assert Network(["a", "b"], [("a", "b")], 3).commodities == (0, 1, 2)


class TestIncidence:
    def test_tail_head_and_off_arc(self):
        net = single_arc_net()
        assert net.incidence("a", 0) == 1
        assert net.incidence("b", 0) == -1
        assert net.incidence("c", 0) == 0

    def test_unknown_ids_are_domain_errors(self):
        net = single_arc_net()
        with pytest.raises(ConfigurationError, match="unknown node"):
            net.incidence("z", 0)
        with pytest.raises(ConfigurationError, match="unknown arc"):
            net.incidence("a", 5)

    def test_exactly_one_plus_and_one_minus_per_arc(self):
        rng = np.random.default_rng(3)
        net = random_network(rng)
        for j in range(net.n_arcs):
            values = [net.incidence(i, j) for i in net.nodes]
            assert sorted(v for v in values if v != 0) == [-1, 1]


class TestDivergence:
    def test_single_arc(self):
        net = single_arc_net()
        div = net.divergence(np.array([[5.0]]))
        assert div[0, 0] == 5.0 and div[1, 0] == -5.0 and div[2, 0] == 0.0

    def test_zero_flow(self):
        rng = np.random.default_rng(11)
        net = random_network(rng)
        assert not net.divergence(net.zero_flow()).any()

    def test_conservation(self):
        # each arc contributes +x at its tail and -x at its head
        rng = np.random.default_rng(5)
        for _ in range(20):
            net = random_network(rng)
            x = rng.standard_normal((net.n_arcs, net.n_commodities))
            total = net.divergence(x).sum(axis=0)
            assert np.all(np.abs(total) <= 1e-12 * max(1.0, np.abs(x).sum()))

    def test_matches_incidence_sum(self):
        rng = np.random.default_rng(6)
        net = random_network(rng, max_nodes=6, max_arcs=12)
        x = rng.standard_normal((net.n_arcs, net.n_commodities))
        via_eps = np.array(
            [
                sum(net.incidence(i, j) * x[j] for j in range(net.n_arcs))
                for i in net.nodes
            ]
        )
        np.testing.assert_allclose(net.divergence(x), via_eps, atol=1e-12)

    def test_dimension_mismatch(self):
        net = single_arc_net()
        with pytest.raises(ConfigurationError, match="flow shape"):
            net.divergence(np.zeros((2, 1)))


class TestTension:
    def test_head_minus_tail(self):
        net = Network(["a", "b"], [("a", "b")], 1)
        assert net.tension(np.array([[1.0], [4.0]]))[0, 0] == 3.0

    def test_constant_potential_gives_zero(self):
        rng = np.random.default_rng(8)
        net = random_network(rng)
        v = np.ones((net.n_nodes, net.n_commodities)) * 2.7
        assert not net.tension(v).any()

    def test_dimension_mismatch(self):
        net = single_arc_net()
        with pytest.raises(ConfigurationError, match="potential shape"):
            net.tension(np.zeros((99, 1)))


class TestLinearStructure:
    def test_adjointness(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            net = random_network(rng)
            x = rng.standard_normal((net.n_arcs, net.n_commodities))
            v = rng.standard_normal((net.n_nodes, net.n_commodities))
            lhs = float(np.sum(net.divergence(x) * v))
            rhs = float(np.sum(x * net.tension(v)))
            assert abs(lhs + rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))

    def test_linearity(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            net = random_network(rng)
            x, y = rng.standard_normal((2, net.n_arcs, net.n_commodities))
            v, w = rng.standard_normal((2, net.n_nodes, net.n_commodities))
            alpha = float(rng.standard_normal())
            np.testing.assert_allclose(
                net.divergence(alpha * x + y),
                alpha * net.divergence(x) + net.divergence(y),
                atol=1e-11,
            )
            np.testing.assert_allclose(
                net.tension(alpha * v + w),
                alpha * net.tension(v) + net.tension(w),
                atol=1e-11,
            )

    def test_divergence_reproducible(self):
        rng = np.random.default_rng(29)
        net = random_network(rng)
        x = rng.standard_normal((net.n_arcs, net.n_commodities))
        assert np.array_equal(net.divergence(x), net.divergence(x.copy()))
