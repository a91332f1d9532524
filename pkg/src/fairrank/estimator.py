"""Estimated individually fair ranking when universal membership is unknown.

The platform knows the universal ratio and each group's active fraction
``f_a``, but not which universe members stayed away. Under uniform-at-random
missingness it lays out the universal slot pattern over the estimated
universal group sizes ``ceil(n_a / f_a)`` and lets each slot reserved for
``a`` hold the next platform member of ``a`` with probability about ``f_a``;
a slot that is not filled disappears and the list closes up, just as
projecting URR onto the platform drops the non-joiners.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from fairrank.core import AttributeValue, CandidatePool, Ranking, RepresentationRatio, partition_groups
from fairrank.errors import InfeasibleActivity, InvalidRatio
from fairrank.ranker import EPS, round_target_pattern


class MissingnessKind(enum.Enum):
    UNIFORM_AT_RANDOM = "uniform"
    # score-correlated joining (proportional, inverse, middle-heavy) is not modelled


class SlotDraw(enum.Enum):
    # exactly n_a of the ceil(n_a / f_a) reserved slots are kept, chosen uniformly
    EXACT_COUNT = "exact"
    # every reserved slot kept independently with probability f_a
    BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class ActivityModel:
    active_fraction: Mapping[AttributeValue, float]
    kind: MissingnessKind = MissingnessKind.UNIFORM_AT_RANDOM

    def __post_init__(self) -> None:
        fracs = dict(self.active_fraction)
        for a, f in fracs.items():
            if not math.isfinite(f) or not 0.0 <= f <= 1.0:
                raise InvalidRatio(f"active fraction for {a!r} is {f!r}, expected a value in [0, 1]")
        object.__setattr__(self, "active_fraction", fracs)

    def __getitem__(self, a: AttributeValue) -> float:
        return self.active_fraction[a]


def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def estimated_group_sizes(sizes: Mapping[AttributeValue, int], activity: ActivityModel) -> dict[AttributeValue, int]:
    out = {}
    for a, n in sizes.items():
        f = activity.active_fraction.get(a)
        if f is None:
            raise InfeasibleActivity(f"no active fraction given for {a!r}")
        if n == 0:
            out[a] = 0
        elif f <= 0.0:
            raise InfeasibleActivity(f"{a!r} has {n} platform members but active fraction 0")
        else:
            out[a] = math.ceil(n / f - EPS)
    return out


def estimated_ifrr(
    platform: CandidatePool,
    universal_ratio: RepresentationRatio,
    activity: ActivityModel,
    rng: int | np.random.Generator | None = None,
    draw: SlotDraw = SlotDraw.EXACT_COUNT,
) -> Ranking:
    """Randomised stand-in for the ideal individually fair ranking.

    With every ``f_a == 1`` this is exactly ``representative_rank(platform,
    universal_ratio)``. ``draw`` selects how reserved slots are kept; the
    default keeps exactly ``n_a`` of them, which matches the law of URR
    projected onto a uniformly random subset.
    """
    domain = platform.attribute_domain
    universal_ratio.require_domain(domain)
    rng = as_rng(rng)
    groups = partition_groups(platform)
    sizes = {a: len(groups[a]) for a in domain}
    virtual = estimated_group_sizes(sizes, activity)
    pattern = round_target_pattern(virtual, universal_ratio, domain)

    keep: dict[AttributeValue, np.ndarray] = {}
    for a in domain:
        n, m = sizes[a], virtual[a]
        if m == n:
            keep[a] = np.ones(m, dtype=bool)
        elif draw is SlotDraw.EXACT_COUNT:
            mask = np.zeros(m, dtype=bool)
            mask[rng.choice(m, size=n, replace=False)] = True
            keep[a] = mask
        else:
            keep[a] = rng.random(m) < activity[a]

    slot_index = {a: 0 for a in domain}
    placed = {a: 0 for a in domain}
    out: list[str] = []
    for a in pattern:
        i = slot_index[a]
        slot_index[a] = i + 1
        if keep[a][i] and placed[a] < sizes[a]:
            out.append(groups[a][placed[a]].id)
            placed[a] += 1

    leftover = {a: sizes[a] - placed[a] for a in domain}
    if any(leftover.values()):
        for a in round_target_pattern(leftover, universal_ratio, domain):
            out.append(groups[a][placed[a]].id)
            placed[a] += 1
    return Ranking(tuple(out), platform)
