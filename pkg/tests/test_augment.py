import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpathgnn.augment import drop_probabilities, edge_importance, make_plan, make_positive_pair, sample_view
from kpathgnn.counting import ALL_KINDS, count_all
from kpathgnn.graph import GraphError, build_graph, gen_random_graph
from kpathgnn.seeding import mix_seed

from conftest import cycle_graph

# star 0-{1,2,3} with a tail 3-4: importances ln3, ln3, ln3.5, ln2.5
STAR_TAIL = build_graph(5, [(0, 1), (0, 2), (0, 3), (3, 4)])


def test_importance_formula():
    g = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    plan = dict(zip(edge_importance(g).edges, edge_importance(g).importance))
    # deg 2 + deg 2
    assert plan[(0, 1)] == pytest.approx(math.log(3), abs=1e-12)
    assert plan[(0, 1)] == pytest.approx(1.0986, abs=1e-4)
    # deg 2 + deg 3
    assert plan[(0, 2)] == pytest.approx(math.log(3.5), abs=1e-12)
    assert plan[(0, 2)] == pytest.approx(1.2528, abs=1e-4)


def test_triangle_equal_importance(k3):
    assert set(edge_importance(k3).importance) == {math.log(3)}


def test_edgeless_rejected():
    with pytest.raises(GraphError):
        edge_importance(build_graph(3, []))


def test_drop_endpoints():
    g = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3)])
    plan = drop_probabilities(edge_importance(g), 0.4)
    p = dict(zip(plan.edges, plan.drop_prob))
    # (0,1): ln3 is the minimum, (1,2)/(0,2): ln3.5, (2,3): ln(3)
    assert p[(0, 2)] == 0.0 and p[(1, 2)] == 0.0
    assert p[(0, 1)] == pytest.approx(0.4)
    assert p[(2, 3)] == pytest.approx(0.4)


def test_two_importance_levels():
    plan = drop_probabilities(edge_importance(STAR_TAIL), 0.4)
    p = dict(zip(plan.edges, plan.drop_prob))
    assert p[(0, 3)] == 0.0
    assert p[(3, 4)] == pytest.approx(0.4)
    lo, mid, hi = math.log(2.5), math.log(3), math.log(3.5)
    assert p[(0, 1)] == pytest.approx(0.4 * (hi - mid) / (hi - lo))


def test_degenerate_uniform(k3):
    assert drop_probabilities(edge_importance(k3), 0.4).drop_prob == (0.2, 0.2, 0.2)


def test_mu_zero():
    assert set(make_plan(STAR_TAIL, 0.0).drop_prob) == {0.0}


def test_mu_out_of_range():
    with pytest.raises(ValueError):
        make_plan(STAR_TAIL, 1.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(0, 1))
def test_plan_invariants(seed, mu):
    g = gen_random_graph((5, 12), 14, seed)
    if g.num_edges == 0:
        return
    plan = make_plan(g, mu)
    imp = np.array(plan.importance)
    p = np.array(plan.drop_prob)
    assert np.all(imp > 0)
    assert np.all((p >= 0) & (p <= mu + 1e-15))
    order = np.argsort(imp)
    assert np.all(np.diff(p[order]) <= 1e-15)
    if imp.max() > imp.min():
        assert p[imp.argmax()] == 0.0
        assert p[imp.argmin()] == pytest.approx(mu)


def test_view_extremes(c4):
    plan = make_plan(c4, 0.4)
    keep_all = plan.__class__(plan.edges, plan.importance, (0.0,) * 4, 0.0)
    drop_all = plan.__class__(plan.edges, plan.importance, (1.0,) * 4, 1.0)
    assert sample_view(c4, keep_all, 3) == c4
    empty = sample_view(c4, drop_all, 3)
    assert empty.num_edges == 0 and empty.num_nodes == 4


def test_view_keeps_nodes_features_targets():
    g = STAR_TAIL.replace(features=[[float(i)] for i in range(5)], targets={"cycle3": 0}, id="st")
    v = sample_view(g, make_plan(g, 1.0), 9)
    assert v.features == g.features and v.targets == g.targets and v.id == "st"
    assert set(v.edges) <= set(g.edges)


def test_pair_determinism():
    g = gen_random_graph((15, 23), 31.34, seed=1)
    a = make_positive_pair(g, 0.4, 77)
    assert a == make_positive_pair(g, 0.4, 77)
    assert make_positive_pair(g, 0.0, 5) == (g, g)


def test_pair_mean_retained_edges():
    c6 = cycle_graph(6)
    kept = [v.num_edges for s in range(10000) for v in make_positive_pair(c6, 1.0, s)]
    # binomial(6, 0.5): mean 3
    assert abs(np.mean(kept) - 3.0) <= 0.1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_views_never_raise_counts(seed):
    g = gen_random_graph((8, 14), 24, seed)
    if g.num_edges == 0:
        return
    base = count_all(g)
    for view in make_positive_pair(g, 0.6, seed):
        after = count_all(view)
        assert all(after[k] <= base[k] for k in ALL_KINDS)


def test_subseeds_differ():
    assert mix_seed(1, 0) != mix_seed(1, 1)
    assert mix_seed(1, 0) == mix_seed(1, 0)
