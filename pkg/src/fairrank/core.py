"""Domain types and the two preparatory steps of representative ranking.

A pool is split into one group per protected-attribute value, each group is
ordered by score, and the groups are later merged by :mod:`fairrank.ranker`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from fairrank.errors import (
    DuplicateId,
    EmptyPool,
    InvalidRanking,
    InvalidRatio,
    MissingFromRanking,
    NonFiniteScore,
    RatioDomainMismatch,
    UnknownAttribute,
)

AttributeValue = str

RATIO_TOL = 1e-9


@dataclass(frozen=True)
class Candidate:
    id: str
    attribute: AttributeValue
    score: float


def sort_key(c: Candidate) -> tuple[float, str]:
    # score descending, ties by ascending id
    return (-c.score, c.id)


@dataclass(frozen=True)
class CandidatePool:
    """An immutable, validated set of candidates eligible for one query.

    ``attribute_domain`` fixes the order in which groups are reported and is
    the last tie-break used by the merge procedures. When omitted it is the
    order of first appearance among ``candidates``.
    """

    candidates: tuple[Candidate, ...]
    attribute_domain: tuple[AttributeValue, ...] = ()
    query_id: str | None = None
    by_id: Mapping[str, Candidate] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if not self.attribute_domain:
            domain = tuple(dict.fromkeys(c.attribute for c in self.candidates))
        else:
            domain = tuple(self.attribute_domain)
        object.__setattr__(self, "attribute_domain", domain)
        object.__setattr__(self, "by_id", _check_pool(self.candidates, domain))

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.candidates)

    def __contains__(self, cid: object) -> bool:
        return cid in self.by_id

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(self.by_id)

    def group_sizes(self) -> dict[AttributeValue, int]:
        counts = Counter(c.attribute for c in self.candidates)
        return {a: counts.get(a, 0) for a in self.attribute_domain}

    def subset(self, ids: Iterable[str]) -> CandidatePool:
        """Sub-pool with the given ids, same domain and query tag."""
        keep = set(ids)
        unknown = keep - self.by_id.keys()
        if unknown:
            raise MissingFromRanking(f"ids not in pool: {sorted(unknown)[:5]}")
        return CandidatePool(
            tuple(c for c in self.candidates if c.id in keep),
            self.attribute_domain,
            self.query_id,
        )


def _check_pool(candidates: Sequence[Candidate], domain: Sequence[AttributeValue]) -> dict[str, Candidate]:
    if len(set(domain)) != len(domain):
        raise UnknownAttribute(f"attribute domain has repeated labels: {list(domain)}")
    allowed = set(domain)
    by_id: dict[str, Candidate] = {}
    for c in candidates:
        if not c.id:
            raise DuplicateId("empty candidate id")
        if c.id in by_id:
            raise DuplicateId(c.id)
        if c.attribute not in allowed:
            raise UnknownAttribute(f"{c.id} has attribute {c.attribute!r}")
        if not isinstance(c.score, (int, float)) or not math.isfinite(c.score):
            raise NonFiniteScore(f"{c.id} has score {c.score!r}")
        by_id[c.id] = c
    return by_id


def validate_pool(pool: CandidatePool) -> CandidatePool:
    """Re-check every pool invariant and return the pool unchanged."""
    _check_pool(pool.candidates, pool.attribute_domain)
    return pool


def within_group_rank(group: Iterable[Candidate]) -> list[Candidate]:
    return sorted(group, key=sort_key)


def partition_groups(pool: CandidatePool) -> dict[AttributeValue, list[Candidate]]:
    groups: dict[AttributeValue, list[Candidate]] = {a: [] for a in pool.attribute_domain}
    for c in pool.candidates:
        groups[c.attribute].append(c)
    return {a: within_group_rank(g) for a, g in groups.items()}


@dataclass(frozen=True)
class RepresentationRatio:
    """Target share ``p_a`` of each attribute value in every prefix."""

    proportions: Mapping[AttributeValue, float]

    def __post_init__(self) -> None:
        props = dict(self.proportions)
        for a, p in props.items():
            if not math.isfinite(p) or p < 0.0 or p > 1.0:
                raise InvalidRatio(f"proportion for {a!r} is {p!r}, expected a value in [0, 1]")
        total = math.fsum(props.values())
        if abs(total - 1.0) > RATIO_TOL:
            raise InvalidRatio(f"proportions sum to {total!r}, expected 1")
        object.__setattr__(self, "proportions", props)

    def __getitem__(self, a: AttributeValue) -> float:
        return self.proportions[a]

    def require_domain(self, domain: Iterable[AttributeValue]) -> None:
        missing = [a for a in domain if a not in self.proportions]
        if missing:
            raise RatioDomainMismatch(f"ratio has no entry for {missing}")

    @classmethod
    def parse(cls, text: str) -> RepresentationRatio:
        """Parse ``"g=0.2,b=0.4,u=0.4"``."""
        return cls(parse_assignments(text))


def parse_assignments(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise InvalidRatio(f"expected label=value, got {part!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise InvalidRatio(f"not a number in {part!r}") from None
    return out


def ratio_from_pool(pool: CandidatePool) -> RepresentationRatio:
    if len(pool) == 0:
        raise EmptyPool("cannot derive a representation ratio from an empty pool")
    n = len(pool)
    sizes = pool.group_sizes()
    return RepresentationRatio({a: sizes[a] / n for a in pool.attribute_domain})


@dataclass(frozen=True)
class Ranking:
    """An ordered, duplicate-free list of ids drawn from ``source_pool``.

    Ranks are 1-indexed. Construction checks that each attribute group
    appears in its within-group order (score descending, id ascending).
    """

    ordered: tuple[str, ...]
    source_pool: CandidatePool = field(repr=False)
    _rank: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(self.ordered)
        object.__setattr__(self, "ordered", ordered)
        rank: dict[str, int] = {}
        by_id = self.source_pool.by_id
        last: dict[AttributeValue, tuple[float, str]] = {}
        for i, cid in enumerate(ordered, start=1):
            if cid in rank:
                raise InvalidRanking(f"duplicate id {cid}")
            c = by_id.get(cid)
            if c is None:
                raise InvalidRanking(f"{cid} is not in the source pool")
            key = sort_key(c)
            prev = last.get(c.attribute)
            if prev is not None and key <= prev:
                raise InvalidRanking(f"{cid} is out of within-group order at rank {i}")
            last[c.attribute] = key
            rank[cid] = i
        object.__setattr__(self, "_rank", rank)

    def __len__(self) -> int:
        return len(self.ordered)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ordered)

    def __contains__(self, cid: object) -> bool:
        return cid in self._rank

    def __getitem__(self, i: int) -> str:
        return self.ordered[i]

    def rank(self, cid: str) -> int:
        try:
            return self._rank[cid]
        except KeyError:
            raise MissingFromRanking(f"{cid} is not ranked") from None

    def rank_or_none(self, cid: str) -> int | None:
        return self._rank.get(cid)

    def top(self, k: int) -> tuple[str, ...]:
        return self.ordered[: max(k, 0)]

    def attribute_of(self, cid: str) -> AttributeValue:
        return self.source_pool.by_id[cid].attribute

    def candidates(self) -> list[Candidate]:
        by_id = self.source_pool.by_id
        return [by_id[cid] for cid in self.ordered]

    def attributes(self) -> list[AttributeValue]:
        by_id = self.source_pool.by_id
        return [by_id[cid].attribute for cid in self.ordered]

    def group_counts(self, k: int) -> dict[AttributeValue, int]:
        """Per-attribute counts within the top-``k`` prefix (clamped to the length)."""
        counts = Counter(self.attributes()[: max(k, 0)])
        return {a: counts.get(a, 0) for a in self.source_pool.attribute_domain}
