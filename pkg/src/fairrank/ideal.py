"""Ideal fair rankings on a platform, computed with full knowledge of the universe.

Both take the universal representative ranking (URR) and the platform pool.
They are baselines: a real platform cannot compute them because it does not
see the candidates that never joined.
"""

from __future__ import annotations

from collections import deque

from fairrank.core import CandidatePool, Ranking
from fairrank.errors import PlatformNotSubset


def _check_subset(urr: Ranking, platform: CandidatePool) -> None:
    foreign = [cid for cid in platform.by_id if cid not in urr]
    if foreign:
        raise PlatformNotSubset(f"{len(foreign)} platform ids are not in the universal ranking, e.g. {foreign[0]}")


def ideal_ifrr(urr: Ranking, platform: CandidatePool) -> Ranking:
    """Individually fair ranking: URR restricted to platform members.

    Nobody on the platform who makes the universal top-k is pushed out of
    the platform top-k, for any k.
    """
    _check_subset(urr, platform)
    members = platform.by_id
    return Ranking(tuple(cid for cid in urr if cid in members), platform)


def ideal_gfrr(urr: Ranking, platform: CandidatePool) -> Ranking:
    """Group fair ranking: walk URR's slots and fill each with the best
    remaining platform member of the slot's group.

    A slot whose group is already exhausted on the platform is skipped, so
    the output is a compressed permutation of the platform. For every prefix
    ``k`` and group ``a`` the top-``k`` count of ``a`` equals
    ``min(count_a in URR top-k, |a on platform|)`` with ``k`` measured in URR
    slots consumed.
    """
    ifrr = ideal_ifrr(urr, platform)
    queues: dict[str, deque[str]] = {a: deque() for a in urr.source_pool.attribute_domain}
    for cid, a in zip(ifrr.ordered, ifrr.attributes()):
        queues.setdefault(a, deque()).append(cid)
    out: list[str] = []
    for a in urr.attributes():
        q = queues.get(a)
        if q:
            out.append(q.popleft())
    return Ranking(tuple(out), platform)
