"""Fairness predicates and metrics comparing a platform ranking to a reference.

Throughout, ``urr`` is the reference ranking over the universe and ``lrr`` the
ranking the platform actually serves. Candidates that never joined the
platform are not counted as individually unfair by default: nothing the
platform does can place them. ``strict=True`` counts them as well.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from fairrank.core import AttributeValue, CandidatePool, Ranking
from fairrank.errors import MissingFromRanking

DEFAULT_SKEW_CAP = 50.0


def _in_top(ranking: Ranking, cid: str, k: int) -> bool:
    r = ranking.rank_or_none(cid)
    return r is not None and r <= k


def is_benefited(cid: str, platform_ranking: Ranking, k: int) -> bool:
    return _in_top(platform_ranking, cid, k)


def individual_unfairness(
    cid: str, urr: Ranking, lrr: Ranking, platform: CandidatePool, k: int, strict: bool = False
) -> int:
    if not strict and cid not in platform:
        return 0
    return int(_in_top(urr, cid, k) and not _in_top(lrr, cid, k))


def is_favored(cid: str, urr: Ranking, lrr: Ranking, k: int) -> bool:
    return _in_top(lrr, cid, k) and not _in_top(urr, cid, k)


def _count(ranking: Ranking, a: AttributeValue, k: int) -> int:
    return ranking.group_counts(k).get(a, 0)


def group_unfair(a: AttributeValue, urr: Ranking, lrr: Ranking, k: int) -> bool:
    return _count(lrr, a, k) < _count(urr, a, k)


def group_favored(a: AttributeValue, urr: Ranking, lrr: Ranking, k: int) -> bool:
    return _count(lrr, a, k) > _count(urr, a, k)


def rank_difference(cid: str, r1: Ranking, r2: Ranking) -> int:
    """``rank_r1(c) - rank_r2(c)``; positive means ``c`` fares worse in ``r1``."""
    a = r1.rank_or_none(cid)
    b = r2.rank_or_none(cid)
    if a is None or b is None:
        which = "first" if a is None else "second"
        raise MissingFromRanking(f"{cid} is missing from the {which} ranking")
    return a - b


def skew_from_counts(n1: int, n2: int, cap: float = DEFAULT_SKEW_CAP) -> float:
    if n1 == 0 and n2 == 0:
        return 0.0
    if n1 == 0:
        return -cap
    if n2 == 0:
        return cap
    return math.log(n1 / n2)


def skew(a: AttributeValue, r1: Ranking, r2: Ranking, k: int, cap: float = DEFAULT_SKEW_CAP) -> float:
    """Natural log of the top-``k`` count of ``a`` in ``r1`` over that in ``r2``.

    Negative means ``a`` is under-represented in ``r1``. ``log(0)`` is replaced
    by ``-cap`` (or ``+cap`` when the denominator is zero); both zero gives 0.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    return skew_from_counts(_count(r1, a, k), _count(r2, a, k), cap)


@dataclass(frozen=True)
class CandidateVerdict:
    candidate_id: str
    attribute: AttributeValue
    benefited: bool
    individually_unfair: bool
    favored: bool
    rank_difference: int | None


@dataclass(frozen=True)
class GroupVerdict:
    attribute: AttributeValue
    count_reference_topk: int
    count_platform_topk: int
    unfair: bool
    favored: bool
    skew: float


@dataclass(frozen=True)
class FairnessReport:
    k: int
    candidate_verdicts: list[CandidateVerdict] = field(repr=False)
    group_verdicts: list[GroupVerdict]
    n_unfair: int
    n_favored: int
    n_absent: int

    @property
    def totals(self) -> dict[str, int]:
        return {"n_unfair": self.n_unfair, "n_favored": self.n_favored, "n_absent": self.n_absent}

    def verdict(self, cid: str) -> CandidateVerdict:
        for v in self.candidate_verdicts:
            if v.candidate_id == cid:
                return v
        raise KeyError(cid)

    def group(self, a: AttributeValue) -> GroupVerdict:
        for g in self.group_verdicts:
            if g.attribute == a:
                return g
        raise KeyError(a)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "totals": self.totals,
            "groups": [asdict(g) for g in self.group_verdicts],
            "candidates": [asdict(v) for v in self.candidate_verdicts],
        }


def fairness_report(
    urr: Ranking,
    lrr: Ranking,
    platform: CandidatePool,
    k: int,
    cap: float = DEFAULT_SKEW_CAP,
    strict: bool = False,
) -> FairnessReport:
    """Audit ``lrr`` against ``urr`` at prefix ``k``.

    Verdicts cover every candidate ranked by either list, in reference order
    first. ``n_absent`` counts reference top-``k`` members missing from the
    platform; for ``k <= len(lrr)`` it closes the identity
    ``n_favored == n_unfair + n_absent`` (with ``strict=True`` the absentees
    are already inside ``n_unfair``).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ids = list(urr.ordered) + [cid for cid in lrr.ordered if cid not in urr]
    verdicts = []
    n_unfair = n_favored = 0
    for cid in ids:
        src = urr.source_pool if cid in urr else lrr.source_pool
        benefited = _in_top(lrr, cid, k)
        unfair = bool(individual_unfairness(cid, urr, lrr, platform, k, strict))
        favored = benefited and not _in_top(urr, cid, k)
        r_l, r_u = lrr.rank_or_none(cid), urr.rank_or_none(cid)
        diff = r_l - r_u if r_l is not None and r_u is not None else None
        verdicts.append(CandidateVerdict(cid, src.by_id[cid].attribute, benefited, unfair, favored, diff))
        n_unfair += unfair
        n_favored += favored
    n_absent = sum(1 for cid in urr.top(k) if cid not in platform)

    ref_counts = urr.group_counts(k)
    plat_counts = lrr.group_counts(k)
    domain = list(dict.fromkeys(list(urr.source_pool.attribute_domain) + list(lrr.source_pool.attribute_domain)))
    groups = []
    for a in domain:
        nu, nl = ref_counts.get(a, 0), plat_counts.get(a, 0)
        groups.append(GroupVerdict(a, nu, nl, nl < nu, nl > nu, skew_from_counts(nl, nu, cap)))
    return FairnessReport(k, verdicts, groups, n_unfair, n_favored, n_absent)
