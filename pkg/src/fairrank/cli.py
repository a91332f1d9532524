"""``fairrank`` command line: rank, ideal, analyze, simulate.

Exit status is 0 on success, 2 on usage or validation errors and 1 on
anything unexpected. Errors are reported on stderr as ``ERROR <code>: <detail>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from pathlib import Path

from fairrank.core import RepresentationRatio, parse_assignments, ratio_from_pool
from fairrank.errors import FairRankError
from fairrank.estimator import ActivityModel, SlotDraw, estimated_ifrr
from fairrank.formats import ranking_to_csv, read_candidates, read_ranking
from fairrank.ideal import ideal_gfrr, ideal_ifrr
from fairrank.metrics import DEFAULT_SKEW_CAP, fairness_report
from fairrank.ranker import generate_gfrr_detconst, representative_rank
from fairrank.simulation import ScenarioConfig, run_all, write_results

SEED_ENV = "FAIRRANK_SEED"


class UsageError(FairRankError):
    code = "MissingFlag"


class BadSeed(FairRankError):
    code = "InvalidSeed"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _seed(args) -> int:
    raw = args.seed if args.seed is not None else os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise BadSeed(f"seed {raw!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise BadSeed(f"seed {seed} is outside the unsigned 64-bit range")
    return seed


def cmd_rank(args) -> int:
    pool = read_candidates(args.candidates)
    ratio = RepresentationRatio.parse(args.ratio) if args.ratio else ratio_from_pool(pool)
    if args.policy == "round":
        ranking = representative_rank(pool, ratio)
    elif args.policy == "detconst":
        ranking = generate_gfrr_detconst(pool, ratio)
    else:
        if not args.activeness:
            raise UsageError("--policy estimated-ifrr requires --activeness")
        activity = ActivityModel(parse_assignments(args.activeness))
        ranking = estimated_ifrr(pool, ratio, activity, _seed(args), SlotDraw(args.draw))
    _emit(ranking_to_csv(ranking), args.output)
    return 0


def cmd_ideal(args) -> int:
    universe = read_candidates(args.universe)
    platform = read_candidates(args.platform)
    ratio = RepresentationRatio.parse(args.ratio) if args.ratio else ratio_from_pool(universe)
    urr = representative_rank(universe, ratio)
    ranking = ideal_ifrr(urr, platform) if args.mode == "ifrr" else ideal_gfrr(urr, platform)
    _emit(ranking_to_csv(ranking), args.output)
    return 0


def _parse_ks(values: list[str]) -> list[int]:
    ks = []
    for v in values:
        for part in v.split(","):
            if part.strip():
                try:
                    k = int(part)
                except ValueError:
                    raise UsageError(f"--k expects integers, got {part!r}") from None
                if k < 1:
                    raise UsageError(f"--k values must be at least 1, got {k}")
                ks.append(k)
    return ks


def _report_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([
        "k", "kind", "id", "attribute", "benefited", "individually_unfair", "favored", "rank_difference",
        "count_reference_topk", "count_platform_topk", "unfair", "skew",
    ])
    for rep in reports:
        for v in rep.candidate_verdicts:
            diff = "" if v.rank_difference is None else v.rank_difference
            w.writerow([rep.k, "candidate", v.candidate_id, v.attribute, int(v.benefited),
                        int(v.individually_unfair), int(v.favored), diff, "", "", "", ""])
        for g in rep.group_verdicts:
            w.writerow([rep.k, "group", "", g.attribute, "", "", "", "", g.count_reference_topk,
                        g.count_platform_topk, int(g.unfair), repr(g.skew)])
    return buf.getvalue()


def cmd_analyze(args) -> int:
    ranking = read_ranking(args.ranking)
    reference = read_ranking(args.reference)
    platform = read_candidates(args.platform)
    ks = _parse_ks(args.k)
    if not ks:
        raise UsageError("analyze requires --k")
    if args.skew_cap <= 0:
        raise UsageError("--skew-cap must be positive")
    reports = []
    for k in ks:
        if k > len(ranking):
            print(f"WARNING k={k} exceeds the ranking length {len(ranking)}; using the full list", file=sys.stderr)
            k = len(ranking)
        reports.append(fairness_report(reference, ranking, platform, k, args.skew_cap, args.strict))
    doc = json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(doc)
    else:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(doc, encoding="utf-8")
        (out / "report.csv").write_text(_report_csv(reports), encoding="utf-8")
    return 0


def config_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    bundled = resources.files("fairrank") / "configs" / f"{name}.toml"
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"no config file or bundled preset named {name!r}")


def cmd_simulate(args) -> int:
    config = ScenarioConfig.load(config_path(args.config))
    if args.seed is not None or os.environ.get(SEED_ENV) is not None:
        config.master_seed = _seed(args)
        config.validate()
    results, meta = run_all(config, workers=args.workers)
    write_results(args.out, results, meta)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fairrank", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rank", help="representative ranking of a candidate file")
    r.add_argument("candidates")
    r.add_argument("--policy", choices=["round", "detconst", "estimated-ifrr"], default="round")
    r.add_argument("--ratio", help="target proportions, e.g. g=0.33,b=0.67 (default: the pool's own)")
    r.add_argument("--activeness", help="active fractions, e.g. g=0.4,b=1.0")
    r.add_argument("--draw", choices=[d.value for d in SlotDraw], default=SlotDraw.EXACT_COUNT.value)
    r.add_argument("--seed", help=f"random seed (falls back to ${SEED_ENV}, then 0)")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_rank)

    i = sub.add_parser("ideal", help="ideal individual or group fair ranking on a platform")
    i.add_argument("--universe", required=True)
    i.add_argument("--platform", required=True)
    i.add_argument("--mode", choices=["ifrr", "gfrr"], default="ifrr")
    i.add_argument("--ratio", help="universal proportions (default: the universe's own)")
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_ideal)

    a = sub.add_parser("analyze", help="fairness audit of a ranking against a reference ranking")
    a.add_argument("ranking", help="ranking served by the platform (e.g. LRR)")
    a.add_argument("reference", help="reference ranking over the universe (e.g. URR)")
    a.add_argument("--platform", required=True, help="candidate file of platform members")
    a.add_argument("--k", action="append", default=[], help="prefix size; repeat or comma-separate")
    a.add_argument("--skew-cap", type=float, default=DEFAULT_SKEW_CAP)
    a.add_argument("--strict", action="store_true", help="count non-joiners as individually unfair")
    a.add_argument("--out", help="directory for report.json and report.csv (default: JSON on stdout)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="run the three experiments from a scenario config")
    s.add_argument("config", help="JSON/TOML config path, or a bundled preset: desk, full")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", help=f"override master_seed (falls back to ${SEED_ENV})")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FairRankError as exc:
        print(f"ERROR {exc.code}: {exc.detail}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ERROR IoError: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"ERROR Internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
