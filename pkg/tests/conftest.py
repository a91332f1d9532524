import hypothesis
import pytest

from fairrank.core import Candidate, CandidatePool

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("ci")


def make_pool(spec, domain=None):
    """``spec`` maps attribute -> number of members; member ``i`` of ``a`` is
    ``f"{a}{i}"`` with scores strictly decreasing in ``i``."""
    cands = [Candidate(f"{a}{i}", a, 1.0 - i / 1000) for a, n in spec.items() for i in range(1, n + 1)]
    return CandidatePool(tuple(cands), tuple(domain or spec))


def intro_ids(gs):
    return [f"b{i}" for i in range(1, 11)] + [f"g{i}" for i in gs]


@pytest.fixture
def universe():
    """Ten b candidates and five g candidates, b1 > ... > b10 and g1 > ... > g5."""
    return make_pool({"b": 10, "g": 5})


@pytest.fixture
def platform(universe):
    # only g1 and g2 join
    return universe.subset(intro_ids([1, 2]))


@pytest.fixture
def platform_g2_g4(universe):
    return universe.subset(intro_ids([2, 4]))


def random_scenario(rng, max_groups=5, max_size=50):
    """Universe of 2..max_groups groups with random sizes and scores, a
    random platform subset (possibly empty per group), and a random k <= |L|."""
    import numpy as np

    from fairrank.ranker import representative_rank

    d = int(rng.integers(2, max_groups + 1))
    cands = []
    for g in range(d):
        size = int(rng.integers(1, max_size + 1))
        scores = rng.random(size)
        cands.extend(Candidate(f"a{g}_{i}", f"a{g}", float(s)) for i, s in enumerate(scores))
    universe = CandidatePool(tuple(cands), tuple(f"a{g}" for g in range(d)))
    keep_prob = rng.random(d)
    mask = rng.random(len(cands)) < np.array([keep_prob[int(c.attribute[1:])] for c in cands])
    if not mask.any():
        mask[int(rng.integers(len(cands)))] = True
    platform = universe.subset(c.id for c, m in zip(cands, mask) if m)
    k = int(rng.integers(1, len(platform) + 1))
    urr = representative_rank(universe)
    lrr = representative_rank(platform)
    return universe, platform, urr, lrr, k


# acceptance verdict lines, filled by test_acceptance and printed at the end
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
