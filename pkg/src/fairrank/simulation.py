"""Synthetic scenarios and the three experiments on a sub-active group.

One group (``sub_active``) joins the platform with probability ``f`` swept
over ``activeness_grid``; the others keep their configured activeness
(1.0 by default). Every (experiment, f, trial) cell draws its own universe
from a seed derived as::

    numpy.random.SeedSequence(master_seed,
                              spawn_key=(EXPERIMENT_CODES[experiment],
                                         round(f * 1_000_000), trial))

so cells are independent, reproducible, and can run in any order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform as _platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from fairrank.core import Candidate, CandidatePool, Ranking, ratio_from_pool
from fairrank.errors import InvalidConfig
from fairrank.estimator import ActivityModel, as_rng, estimated_ifrr
from fairrank.ideal import ideal_gfrr, ideal_ifrr
from fairrank.metrics import DEFAULT_SKEW_CAP, skew
from fairrank.ranker import generate_gfrr_detconst, representative_rank

EXPERIMENT_CODES = {"missed_opportunity": 0, "rank_difference": 1, "skew": 2}
CSV_HEADER = ("experiment", "f", "k", "trial", "value")


@dataclass(frozen=True)
class GroupSpec:
    attribute: str
    size: int
    activeness: float = 1.0


@dataclass
class ScenarioConfig:
    group_specs: list[GroupSpec]
    k_grid: list[int] = field(default_factory=list)
    activeness_grid: list[float] = field(default_factory=list)
    trials: int = 20
    master_seed: int = 0
    sub_active: str | None = None
    skew_top: int = 10000
    skew_cap: float = DEFAULT_SKEW_CAP
    score_distribution: str = "uniform"

    def __post_init__(self) -> None:
        self.group_specs = [g if isinstance(g, GroupSpec) else GroupSpec(**g) for g in self.group_specs]
        if self.sub_active is None and self.group_specs:
            self.sub_active = self.group_specs[0].attribute
        self.validate()

    @property
    def total_size(self) -> int:
        return sum(g.size for g in self.group_specs)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(g.attribute for g in self.group_specs)

    def validate(self) -> None:
        if not self.group_specs:
            raise InvalidConfig("at least one group is required")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidConfig(f"repeated group attributes: {list(self.domain)}")
        for g in self.group_specs:
            if not isinstance(g.size, int) or g.size <= 0:
                raise InvalidConfig(f"group {g.attribute!r} size must be a positive integer")
            if not 0.0 <= g.activeness <= 1.0:
                raise InvalidConfig(f"group {g.attribute!r} activeness must be in [0, 1]")
        if self.sub_active not in self.domain:
            raise InvalidConfig(f"sub_active {self.sub_active!r} is not a configured group")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise InvalidConfig("trials must be a positive integer")
        for k in self.k_grid:
            if not isinstance(k, int) or k < 0 or k > self.total_size:
                raise InvalidConfig(f"k={k!r} must be an integer in [0, {self.total_size}]")
        for f in self.activeness_grid:
            if not 0.0 <= f <= 1.0:
                raise InvalidConfig(f"activeness {f!r} must be in [0, 1]")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidConfig("master_seed must be an unsigned 64-bit integer")
        if self.skew_top < 1:
            raise InvalidConfig("skew_top must be positive")
        if self.score_distribution != "uniform":
            raise InvalidConfig("only the uniform (0, 1] score distribution is supported")

    def activity(self, f: float) -> ActivityModel:
        return ActivityModel(
            {g.attribute: (f if g.attribute == self.sub_active else g.activeness) for g in self.group_specs}
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ScenarioConfig:
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> ScenarioConfig:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".toml":
            try:
                data = tomllib.loads(text)
            except tomllib.TOMLDecodeError as exc:
                raise InvalidConfig(f"{path}: {exc}") from None
        else:
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidConfig(f"{path}: {exc}") from None
        return cls.from_dict(data)


def derive_seed(master_seed: int, experiment: str, f: float, trial: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(EXPERIMENT_CODES[experiment], round(f * 1_000_000), trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_universe(config: ScenarioConfig, rng: int | np.random.Generator | None) -> CandidatePool:
    """Candidates ``<attr><i>`` (1-based) with i.i.d. scores on (0, 1]."""
    rng = as_rng(rng)
    cands = []
    for g in config.group_specs:
        scores = 1.0 - rng.random(g.size)
        cands.extend(Candidate(f"{g.attribute}{i}", g.attribute, float(s)) for i, s in enumerate(scores, start=1))
    return CandidatePool(tuple(cands), config.domain)


def sample_platform(
    universe: CandidatePool, activity: ActivityModel, rng: int | np.random.Generator | None
) -> CandidatePool:
    """Each member of group ``a`` joins independently with probability ``f_a``."""
    rng = as_rng(rng)
    draws = rng.random(len(universe))
    keep = [c.id for c, u in zip(universe, draws) if u < activity[c.attribute]]
    return universe.subset(keep)


@dataclass(frozen=True)
class Row:
    experiment: str
    f: float
    k: int | None
    trial: int | str
    value: float


@dataclass
class ExperimentResult:
    name: str
    rows: list[Row] = field(default_factory=list)

    def sorted_rows(self) -> list[Row]:
        def key(r: Row):
            return (r.experiment, r.f, -1 if r.k is None else r.k, 1 if r.trial == "mean" else 0,
                    r.trial if isinstance(r.trial, int) else 0)

        return sorted(self.rows, key=key)

    def mean(self, experiment: str, f: float, k: int | None = None) -> float:
        for r in self.rows:
            if r.experiment == experiment and r.trial == "mean" and math.isclose(r.f, f) and r.k == k:
                return r.value
        raise KeyError((experiment, f, k))

    def series(self, experiment: str) -> list[Row]:
        return [r for r in self.sorted_rows() if r.experiment == experiment and r.trial == "mean"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.sorted_rows():
            w.writerow([r.experiment, repr(float(r.f)), "" if r.k is None else r.k, r.trial, repr(float(r.value))])
        return buf.getvalue()


def _scenario(config: ScenarioConfig, experiment: str, f: float, trial: int):
    rng = np.random.default_rng(derive_seed(config.master_seed, experiment, f, trial))
    universe = generate_universe(config, rng)
    activity = config.activity(f)
    platform = sample_platform(universe, activity, rng)
    return universe, platform, activity, rng


def _rank_array(ranking: Ranking, ids: list[str]) -> np.ndarray:
    return np.array([ranking.rank_or_none(c) or np.inf for c in ids], dtype=float)


def missed_opportunity_trial(config: ScenarioConfig, f: float, trial: int) -> list[Row]:
    """Sub-active group members inside URR's top-k that LRR's top-k leaves out.

    ``missed_opportunity`` counts every such member, joined or not, which is
    how many of the group lose the slot they would get under URR.
    ``missed_opportunity_platform`` counts only those who did join.
    """
    universe, platform, _, _ = _scenario(config, "missed_opportunity", f, trial)
    urr = representative_rank(universe)
    lrr = representative_rank(platform)
    ids = [c.id for c in universe if c.attribute == config.sub_active]
    u_rank = _rank_array(urr, ids)
    l_rank = _rank_array(lrr, ids)
    joined = np.array([c in platform for c in ids], dtype=bool)
    rows = []
    for k in config.k_grid:
        missed = (u_rank <= k) & (l_rank > k)
        rows.append(Row("missed_opportunity", f, k, trial, float(missed.sum())))
        rows.append(Row("missed_opportunity_platform", f, k, trial, float((missed & joined).sum())))
    return rows


def rank_difference_trial(config: ScenarioConfig, f: float, trial: int) -> list[Row]:
    """Mean of ``rank(candidate ranking) - rank(ideal IFRR)`` over the
    sub-active group's platform members, for LRR and the estimator."""
    universe, platform, activity, rng = _scenario(config, "rank_difference", f, trial)
    urr = representative_rank(universe)
    ideal = ideal_ifrr(urr, platform)
    lrr = representative_rank(platform)
    est = estimated_ifrr(platform, ratio_from_pool(universe), activity, rng)
    ids = [c.id for c in platform if c.attribute == config.sub_active]
    rows = []
    for name, ranking in (("rank_difference_lrr", lrr), ("rank_difference_estimated", est)):
        diffs = [ranking.rank(c) - ideal.rank(c) for c in ids]
        # no members on the platform: no rank differences to report
        rows.append(Row(name, f, None, trial, float(np.mean(diffs)) if diffs else 0.0))
    return rows


def skew_trial(config: ScenarioConfig, f: float, trial: int) -> list[Row]:
    """Skew of the sub-active group in LRR and in the known-ratio generated
    GFRR, both against the ideal GFRR, at prefix ``min(skew_top, |U|)``."""
    universe, platform, _, _ = _scenario(config, "skew", f, trial)
    urr = representative_rank(universe)
    ideal = ideal_gfrr(urr, platform)
    lrr = representative_rank(platform)
    generated = generate_gfrr_detconst(platform, ratio_from_pool(universe))
    top = min(config.skew_top, len(universe))
    a = config.sub_active
    return [
        Row("skew_lrr", f, top, trial, skew(a, lrr, ideal, top, config.skew_cap)),
        Row("skew_generated", f, top, trial, skew(a, generated, ideal, top, config.skew_cap)),
    ]


TRIALS = {
    "missed_opportunity": missed_opportunity_trial,
    "rank_difference": rank_difference_trial,
    "skew": skew_trial,
}


def _run_cell(args):
    experiment, config, f, trial = args
    return TRIALS[experiment](config, f, trial)


def _with_means(name: str, rows: Iterable[Row]) -> ExperimentResult:
    rows = list(rows)
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        groups.setdefault((r.experiment, r.f, r.k), []).append(r.value)
    means = [Row(e, f, k, "mean", math.fsum(v) / len(v)) for (e, f, k), v in groups.items()]
    return ExperimentResult(name, rows + means)


def run_experiment(experiment: str, config: ScenarioConfig, workers: int = 1) -> ExperimentResult:
    tasks = [(experiment, config, f, t) for f in config.activeness_grid for t in range(config.trials)]
    if experiment == "missed_opportunity" and not config.k_grid:
        tasks = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    return _with_means(experiment, (r for chunk in chunks for r in chunk))


def exp_missed_opportunity(config: ScenarioConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment("missed_opportunity", config, workers)


def exp_rank_difference(config: ScenarioConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment("rank_difference", config, workers)


def exp_skew(config: ScenarioConfig, workers: int = 1) -> ExperimentResult:
    return run_experiment("skew", config, workers)


def manifest(config: ScenarioConfig, results: dict[str, ExperimentResult]) -> dict[str, Any]:
    from fairrank import __version__

    return {
        "software": {"fairrank": __version__, "numpy": np.__version__, "python": _platform.python_version()},
        "master_seed": config.master_seed,
        "seed_rule": "SeedSequence(master_seed, spawn_key=(experiment_code, round(f*1e6), trial))",
        "experiment_codes": EXPERIMENT_CODES,
        "config": config.to_dict(),
        "outputs": {name: {"file": f"{name}.csv", "rows": len(res.rows)} for name, res in results.items()},
    }


def run_all(config: ScenarioConfig, workers: int = 1) -> tuple[dict[str, ExperimentResult], dict[str, Any]]:
    results = {name: run_experiment(name, config, workers) for name in TRIALS}
    return results, manifest(config, results)


def write_results(out_dir: str | Path, results: dict[str, ExperimentResult], meta: dict[str, Any]) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, res in results.items():
        p = out / f"{name}.csv"
        p.write_text(res.to_csv(), encoding="utf-8")
        written.append(p)
    p = out / "manifest.json"
    p.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(p)
    return written
