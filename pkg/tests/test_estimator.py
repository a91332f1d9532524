import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairrank.core import RepresentationRatio, ratio_from_pool, within_group_rank
from fairrank.errors import InfeasibleActivity, InvalidRatio, RatioDomainMismatch
from fairrank.estimator import ActivityModel, SlotDraw, estimated_group_sizes, estimated_ifrr
from fairrank.ideal import ideal_ifrr
from fairrank.ranker import representative_rank

from conftest import intro_ids, make_pool

INTRO_RATIO = RepresentationRatio({"b": 2 / 3, "g": 1 / 3})


def first_g_rank_oracle(universe):
    """Mean rank of the best platform g under ideal IFRR, averaged over all
    2-of-5 choices of which g members joined."""
    urr = representative_rank(universe)
    ranks = []
    for chosen in itertools.combinations(range(1, 6), 2):
        ifrr = ideal_ifrr(urr, universe.subset(intro_ids(chosen)))
        ranks.append(min(ifrr.rank(f"g{i}") for i in chosen))
    return float(np.mean(ranks))


def test_estimated_sizes():
    act = ActivityModel({"b": 1.0, "g": 0.4})
    assert estimated_group_sizes({"b": 10, "g": 2}, act) == {"b": 10, "g": 5}
    assert estimated_group_sizes({"b": 10, "g": 0}, ActivityModel({"b": 1.0, "g": 0.0})) == {"b": 10, "g": 0}
    with pytest.raises(InfeasibleActivity):
        estimated_group_sizes({"g": 3}, ActivityModel({"g": 0.0}))


def test_activity_bounds():
    with pytest.raises(InvalidRatio):
        ActivityModel({"g": 1.5})


def test_full_activity_reduces_to_representative_rank(universe, platform):
    act = ActivityModel({"b": 1.0, "g": 1.0})
    for seed in range(5):
        assert estimated_ifrr(platform, INTRO_RATIO, act, seed) == representative_rank(platform, INTRO_RATIO)


def test_single_group_ignores_activity():
    pool = make_pool({"a": 7})
    out = estimated_ifrr(pool, RepresentationRatio({"a": 1.0}), ActivityModel({"a": 0.3}), 1)
    assert list(out.ordered) == [c.id for c in within_group_rank(pool)]


def test_domain_checks(platform):
    with pytest.raises(RatioDomainMismatch):
        estimated_ifrr(platform, RepresentationRatio({"b": 1.0}), ActivityModel({"b": 1.0, "g": 1.0}))
    with pytest.raises(InfeasibleActivity):
        estimated_ifrr(platform, INTRO_RATIO, ActivityModel({"b": 1.0}))


def test_same_seed_same_ranking(platform):
    act = ActivityModel({"b": 1.0, "g": 0.4})
    for draw in SlotDraw:
        assert estimated_ifrr(platform, INTRO_RATIO, act, 7, draw) == estimated_ifrr(platform, INTRO_RATIO, act, 7, draw)


def test_first_g_rank_matches_subset_oracle(universe, platform):
    expected = first_g_rank_oracle(universe)
    assert expected == pytest.approx(4.0)
    rng = np.random.default_rng(2024)
    act = ActivityModel({"b": 1.0, "g": 0.4})
    ranks = [estimated_ifrr(platform, INTRO_RATIO, act, rng).rank("g1") for _ in range(10_000)]
    assert abs(np.mean(ranks) - expected) <= 0.2


def test_bernoulli_draw_first_g_rank():
    # closed form: first success at reserved slot j lands at rank 2j; no
    # success in five slots appends g1 after all ten b candidates
    p = 0.4
    closed = sum(p * (1 - p) ** (j - 1) * 2 * j for j in range(1, 6)) + (1 - p) ** 5 * 11
    platform = make_pool({"b": 10, "g": 5}).subset(intro_ids([1, 2]))
    rng = np.random.default_rng(99)
    act = ActivityModel({"b": 1.0, "g": p})
    ranks = [estimated_ifrr(platform, INTRO_RATIO, act, rng, SlotDraw.BERNOULLI).rank("g1") for _ in range(10_000)]
    assert abs(np.mean(ranks) - closed) <= 0.1


@settings(max_examples=60, deadline=None)
@given(
    n_b=st.integers(1, 20),
    n_g=st.integers(0, 10),
    f=st.floats(0.05, 1.0),
    seed=st.integers(0, 2**32),
    draw=st.sampled_from(list(SlotDraw)),
)
def test_permutation_and_group_order(n_b, n_g, f, seed, draw):
    pool = make_pool({"b": n_b, "g": n_g})
    out = estimated_ifrr(pool, INTRO_RATIO, ActivityModel({"b": 1.0, "g": f}), seed, draw)
    assert sorted(out.ordered) == sorted(pool.by_id)


def test_more_activity_never_ranks_later():
    pool = make_pool({"b": 20, "g": 4})
    ratio = RepresentationRatio({"b": 0.5, "g": 0.5})
    means = []
    for f in (0.2, 0.4, 0.6, 0.8, 1.0):
        act = ActivityModel({"b": 1.0, "g": f})
        rng = np.random.default_rng(11)
        means.append(np.mean([estimated_ifrr(pool, ratio, act, rng).rank("g2") for _ in range(1000)]))
    # one-sided tolerance for Monte Carlo noise
    assert all(later <= earlier + 0.15 for earlier, later in zip(means, means[1:]))


def test_matches_projection_law_under_random_missingness():
    # with n_a/f_a equal to the true group size, the exact-count draw has the
    # same distribution as the ideal projection, so mean ranks agree
    universe = make_pool({"b": 12, "g": 6})
    urr = representative_rank(universe)
    ratio = ratio_from_pool(universe)
    act = ActivityModel({"b": 1.0, "g": 0.5})
    ideal = []
    for chosen in itertools.combinations(range(1, 7), 3):
        ifrr = ideal_ifrr(urr, universe.subset([f"b{i}" for i in range(1, 13)] + [f"g{i}" for i in chosen]))
        ideal.append([ifrr.rank(cid) for cid in ifrr if cid.startswith("g")])
    platform = universe.subset([f"b{i}" for i in range(1, 13)] + ["g1", "g2", "g3"])
    rng = np.random.default_rng(5)
    est = [[r.rank(g) for g in ("g1", "g2", "g3")] for r in (estimated_ifrr(platform, ratio, act, rng) for _ in range(8000))]
    assert np.allclose(np.mean(est, axis=0), np.mean(ideal, axis=0), atol=0.15)
