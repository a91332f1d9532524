"""Ten b candidates and five g candidates; only g1 and g2 join the platform.

Prints URR, LRR, the two ideal re-rankings and the top-6 audit.
"""

import json

from fairrank import Candidate, CandidatePool, fairness_report, ideal_gfrr, ideal_ifrr, representative_rank


def main():
    cands = [Candidate(f"b{i}", "b", 1 - i / 100) for i in range(1, 11)]
    cands += [Candidate(f"g{i}", "g", 1 - i / 100) for i in range(1, 6)]
    universe = CandidatePool(tuple(cands), ("b", "g"))
    platform = universe.subset([c.id for c in cands if c.attribute == "b" or c.id in ("g1", "g2")])

    urr = representative_rank(universe)
    lrr = representative_rank(platform)
    print("URR        ", " ".join(urr.ordered))
    print("LRR        ", " ".join(lrr.ordered))
    print("ideal IFRR ", " ".join(ideal_ifrr(urr, platform).ordered))
    print("ideal GFRR ", " ".join(ideal_gfrr(urr, platform).ordered))
    report = fairness_report(urr, lrr, platform, 6)
    print(json.dumps(report.totals))
    for v in report.candidate_verdicts:
        if v.individually_unfair or v.favored:
            print(v.candidate_id, "unfair" if v.individually_unfair else "favored")


if __name__ == "__main__":
    main()
