"""Representative merges of per-group orderings.

Two procedures live here:

* ``RoundTarget`` keeps ``count_a(k)`` at ``round_half_up(p_a * k)`` for every
  prefix ``k``. It reproduces the hand-worked rankings of the intro example
  and is what "representative ranking" (URR, LRR) means elsewhere in the
  package.
* ``DetConstSort`` is the floor/ceil constrained merge that picks the best
  scoring under-represented group first and otherwise the group whose
  ceiling target would be violated soonest.

Both preserve within-group order and run in O(N * |A|).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from fairrank.core import (
    AttributeValue,
    CandidatePool,
    Ranking,
    RepresentationRatio,
    partition_groups,
    ratio_from_pool,
)
from fairrank.errors import ZeroProportionWithCandidates

# k * p is compared against integers; snap products that land within EPS of one
EPS = 1e-9


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5 + EPS)


def floor_snap(x: float) -> int:
    return math.floor(x + EPS)


def ceil_snap(x: float) -> int:
    return math.ceil(x - EPS)


class MergeKind(enum.Enum):
    ROUND_TARGET = "round"
    DET_CONST_SORT = "detconst"


class TieBreak(enum.Enum):
    LARGER_PROPORTION_FIRST = "larger"
    SMALLER_PROPORTION_FIRST = "smaller"


@dataclass(frozen=True)
class MergePolicy:
    kind: MergeKind = MergeKind.ROUND_TARGET
    tie_break: TieBreak | None = None

    @property
    def effective_tie_break(self) -> TieBreak:
        if self.tie_break is not None:
            return self.tie_break
        if self.kind is MergeKind.ROUND_TARGET:
            return TieBreak.LARGER_PROPORTION_FIRST
        return TieBreak.SMALLER_PROPORTION_FIRST


def _preference(
    domain: Sequence[AttributeValue], ratio: RepresentationRatio, tie_break: TieBreak
) -> list[AttributeValue]:
    sign = -1 if tie_break is TieBreak.LARGER_PROPORTION_FIRST else 1
    pos = {a: i for i, a in enumerate(domain)}
    return sorted(domain, key=lambda a: (sign * ratio[a], pos[a]))


def round_target_pattern(
    sizes: Mapping[AttributeValue, int],
    ratio: RepresentationRatio,
    domain: Sequence[AttributeValue],
    tie_break: TieBreak = TieBreak.LARGER_PROPORTION_FIRST,
) -> list[AttributeValue]:
    """Attribute of each slot of a RoundTarget merge over groups of ``sizes``.

    The pattern depends only on group sizes, never on scores, which is why
    the estimator can reuse it over estimated (virtual) group sizes.
    """
    ratio.require_domain(domain)
    order = _preference(domain, ratio, tie_break)
    fallback = _preference(domain, ratio, TieBreak.LARGER_PROPORTION_FIRST)
    props = [ratio[a] for a in order]
    caps = [sizes.get(a, 0) for a in order]
    fb_index = [order.index(a) for a in fallback]
    counts = [0] * len(order)
    total = sum(caps)
    pattern: list[AttributeValue] = []
    for k in range(1, total + 1):
        chosen = -1
        for i, p in enumerate(props):
            if counts[i] < caps[i] and counts[i] < round_half_up(p * k):
                chosen = i
                break
        if chosen < 0:
            # no deficit: rounding left the slot unclaimed or a group ran out
            for i in fb_index:
                if counts[i] < caps[i]:
                    chosen = i
                    break
        counts[chosen] += 1
        pattern.append(order[chosen])
    return pattern


def representative_rank(
    pool: CandidatePool,
    ratio: RepresentationRatio | None = None,
    tie_break: TieBreak = TieBreak.LARGER_PROPORTION_FIRST,
) -> Ranking:
    """RoundTarget representative ranking of the whole pool.

    ``ratio`` defaults to the pool's own observed proportions, which is how a
    platform that knows nothing about the wider population ranks (LRR).
    """
    if ratio is None:
        ratio = ratio_from_pool(pool)
    groups = partition_groups(pool)
    sizes = {a: len(g) for a, g in groups.items()}
    pattern = round_target_pattern(sizes, ratio, pool.attribute_domain, tie_break)
    return Ranking(tuple(_fill(pattern, groups)), pool)


def _fill(pattern, groups) -> list[str]:
    iters = {a: iter(g) for a, g in groups.items()}
    return [next(iters[a]).id for a in pattern]


def generate_gfrr_detconst(
    pool: CandidatePool,
    ratio: RepresentationRatio,
    tie_break: TieBreak = TieBreak.SMALLER_PROPORTION_FIRST,
) -> Ranking:
    """Floor/ceil constrained merge of ``pool`` towards ``ratio``.

    At each prefix ``k``:

    1. groups below ``floor(k * p_a)`` (and not exhausted) are
       under-represented; take the one whose next candidate scores highest;
    2. otherwise among groups in ``[floor, ceil)`` take the one minimising
       ``ceil(k * p_a) / p_a``, ties resolved by ``tie_break`` and then by
       domain order;
    3. if both sets are empty (a group ran out), take the non-exhausted
       group minimising ``count_a / p_a``.

    Raises ``ZeroProportionWithCandidates`` when a group with members has
    ``p_a == 0``; rule 2 is undefined there.
    """
    domain = pool.attribute_domain
    ratio.require_domain(domain)
    groups = partition_groups(pool)
    for a in domain:
        if groups[a] and ratio[a] <= 0.0:
            raise ZeroProportionWithCandidates(f"{a!r} has {len(groups[a])} candidates but p=0")

    active = [a for a in domain if groups[a]]
    pos = {a: i for i, a in enumerate(domain)}
    sign = 1 if tie_break is TieBreak.SMALLER_PROPORTION_FIRST else -1
    counts = {a: 0 for a in active}
    sizes = {a: len(groups[a]) for a in active}
    out: list[str] = []
    for k in range(1, len(pool) + 1):
        under_rep = []
        under_limit = []
        for a in active:
            c = counts[a]
            if c >= sizes[a]:
                continue
            kp = k * ratio[a]
            lo = floor_snap(kp)
            if c < lo:
                under_rep.append(a)
            elif c < ceil_snap(kp):
                under_limit.append(a)
        if under_rep:
            # best next candidate; its id settles exact score ties
            pick = min(under_rep, key=lambda a: (-groups[a][counts[a]].score, groups[a][counts[a]].id))
        elif under_limit:
            pick = _argmin_tol(
                under_limit,
                lambda a: ceil_snap(k * ratio[a]) / ratio[a],
                lambda a: (sign * ratio[a], pos[a]),
            )
        else:
            pick = _argmin_tol(
                [a for a in active if counts[a] < sizes[a]],
                lambda a: counts[a] / ratio[a],
                lambda a: (sign * ratio[a], pos[a]),
            )
        out.append(groups[pick][counts[pick]].id)
        counts[pick] += 1
    return Ranking(tuple(out), pool)


def _argmin_tol(items, value, tie_key):
    # values equal up to float noise count as ties
    best = None
    best_v = math.inf
    for a in items:
        v = value(a)
        if best is None or v < best_v - EPS * max(1.0, abs(best_v)):
            best, best_v = a, v
        elif abs(v - best_v) <= EPS * max(1.0, abs(best_v)) and tie_key(a) < tie_key(best):
            best, best_v = a, min(v, best_v)
    return best


def merge(pool: CandidatePool, ratio: RepresentationRatio | None = None, policy: MergePolicy = MergePolicy()) -> Ranking:
    if ratio is None:
        ratio = ratio_from_pool(pool)
    if policy.kind is MergeKind.ROUND_TARGET:
        return representative_rank(pool, ratio, policy.effective_tie_break)
    return generate_gfrr_detconst(pool, ratio, policy.effective_tie_break)
