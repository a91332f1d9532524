"""Candidate and ranking files.

Candidates: CSV with header ``id,attribute,score`` or a JSON array of
objects with those keys (chosen by the ``.json`` suffix).
Rankings: CSV with header ``rank,id,attribute,score``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from fairrank.core import Candidate, CandidatePool, Ranking
from fairrank.errors import FairRankError

CANDIDATE_FIELDS = ("id", "attribute", "score")
RANKING_FIELDS = ("rank", "id", "attribute", "score")


class ParseError(FairRankError):
    code = "ParseError"


def _candidate(row: dict, where: str) -> Candidate:
    try:
        cid = str(row["id"]).strip()
        attr = str(row["attribute"]).strip()
        score = float(row["score"])
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError):
        raise ParseError(f"{where}: score {row.get('score')!r} is not a number") from None
    return Candidate(cid, attr, score)


def _read_csv(path: Path, required: tuple[str, ...]) -> list[dict]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in required if f not in (reader.fieldnames or [])]
        if missing:
            raise ParseError(f"{path}: header lacks {missing}")
        return list(reader)


def read_candidates(path: str | Path, query_id: str | None = None) -> CandidatePool:
    path = Path(path)
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
        if not isinstance(data, list):
            raise ParseError(f"{path}: expected a JSON array of candidates")
        rows = data
    else:
        rows = _read_csv(path, CANDIDATE_FIELDS)
    cands = tuple(_candidate(r, f"{path}:{i}") for i, r in enumerate(rows, start=1))
    return CandidatePool(cands, query_id=query_id)


def write_candidates(pool: CandidatePool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CANDIDATE_FIELDS)
    for c in pool:
        w.writerow([c.id, c.attribute, repr(c.score)])
    return buf.getvalue()


def ranking_to_csv(ranking: Ranking) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RANKING_FIELDS)
    for i, c in enumerate(ranking.candidates(), start=1):
        w.writerow([i, c.id, c.attribute, repr(c.score)])
    return buf.getvalue()


def read_ranking(path: str | Path) -> Ranking:
    path = Path(path)
    rows = _read_csv(path, RANKING_FIELDS)
    ranked = []
    for i, r in enumerate(rows, start=1):
        try:
            rank = int(r["rank"])
        except ValueError:
            raise ParseError(f"{path}:{i}: rank {r['rank']!r} is not an integer") from None
        ranked.append((rank, _candidate(r, f"{path}:{i}")))
    ranked.sort(key=lambda t: t[0])
    if [r for r, _ in ranked] != list(range(1, len(ranked) + 1)):
        raise ParseError(f"{path}: ranks must be 1..{len(ranked)} without gaps")
    pool = CandidatePool(tuple(c for _, c in ranked))
    return Ranking(tuple(c.id for _, c in ranked), pool)
