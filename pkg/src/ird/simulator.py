"""Monte Carlo outage experiments with closed-form oracles.

Two experiment families are supported:

* layered outage scenarios: each dimension is a set of cause groups, a group
  fires when all of its units fail in the same round, a dimension is down when
  any group fires, and each case reports a system outage when any of its
  enabled dimensions is down. All cases are evaluated on the same draws.
* dimensional weakness scenarios: each IRD profile runs round after round
  until one of its dimensions fails; the number of successful rounds before
  that failure is recorded per trial.

Draws come from :mod:`ird.rng`, so every round is addressable and results do
not depend on how rounds or trials are split across workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import IO, Mapping

import numpy as np

from .core_model import check_fields
from .rng import LANE_JITTER, LANE_OUTAGE, uniform01_array

DEFAULT_MAX_ROUNDS = 10**7
# rounds evaluated per numpy batch in the layered scenario
ROUND_BATCH = 1 << 15
# cap on trials x rounds drawn at once in the weakness scenario
WEAKNESS_BATCH_ELEMENTS = 1 << 22


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class CauseGroup:
    group_id: str
    unit_count: int
    p_unit: float
    rule: str = "all_units"


@dataclass(frozen=True)
class LayerDimension:
    name: str
    cause_groups: tuple[CauseGroup, ...]


@dataclass(frozen=True)
class Case:
    case_id: str
    dimensions: tuple[str, ...]


@dataclass(frozen=True)
class LayeredScenario:
    dimensions: tuple[LayerDimension, ...]
    cases: tuple[Case, ...]
    rounds: int = 100_000
    jitter_width: float = 0.0

    def __post_init__(self):
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise ScenarioError("duplicate dimension name")
        for d in self.dimensions:
            for g in d.cause_groups:
                if g.unit_count < 1:
                    raise ScenarioError(f"{d.name}/{g.group_id}: unit_count must be >= 1")
                if not 0.0 <= g.p_unit <= 1.0:
                    raise ScenarioError(f"{d.name}/{g.group_id}: p_unit out of range")
                if g.rule != "all_units":
                    raise ScenarioError(f"{d.name}/{g.group_id}: unknown rule {g.rule!r}")
        for c in self.cases:
            for name in c.dimensions:
                if name not in names:
                    raise ScenarioError(f"case {c.case_id}: unknown dimension {name!r}")
        if self.rounds < 0:
            raise ScenarioError("rounds must be >= 0")
        if not 0.0 <= self.jitter_width <= 1.0:
            raise ScenarioError("jitter_width out of range")

    def case(self, case_id: str) -> Case:
        for c in self.cases:
            if c.case_id == case_id:
                return c
        raise KeyError(f"unknown case: {case_id!r}")


@dataclass(frozen=True)
class IrdProfile:
    name: str
    outages: Mapping[str, float]


@dataclass(frozen=True)
class WeaknessScenario:
    irds: tuple[IrdProfile, ...]
    trials: int = 10_000
    max_rounds_per_trial: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        for ird in self.irds:
            for dim, p in ird.outages.items():
                if not 0.0 <= p <= 1.0:
                    raise ScenarioError(f"{ird.name}/{dim}: probability out of range")
        if self.trials < 0 or self.max_rounds_per_trial < 1:
            raise ScenarioError("trials must be >= 0 and max_rounds_per_trial >= 1")


@dataclass(frozen=True)
class RngSpec:
    master_seed: int = 0


@dataclass(frozen=True)
class WeaknessSample:
    ird_name: str
    trial: int
    runs_to_failure: int
    censored: bool


@dataclass
class SimReport:
    """Outcome of one experiment.

    ``series`` maps a case id to its cumulative outage count after each round
    (index = round). ``analytic`` holds the closed-form per-round probability
    for each case or IRD, when one exists.
    """

    series: dict[str, np.ndarray] = field(default_factory=dict)
    totals: dict[str, int] = field(default_factory=dict)
    samples: list[WeaknessSample] = field(default_factory=list)
    analytic: dict[str, float] = field(default_factory=dict)

    def mean_runs(self, ird_name: str) -> float:
        runs = [s.runs_to_failure for s in self.samples if s.ird_name == ird_name]
        return sum(runs) / len(runs)


# --- oracles ---------------------------------------------------------------


def group_probability(group: CauseGroup) -> float:
    return group.p_unit**group.unit_count


def dimension_probability(dim: LayerDimension) -> float:
    return 1.0 - math.prod(1.0 - group_probability(g) for g in dim.cause_groups)


def analytic_outage_probability(scenario: LayeredScenario, case_id: str) -> float:
    """Exact per-round outage probability of a case (jitter must be zero)."""
    if scenario.jitter_width != 0:
        raise ScenarioError("closed form is only defined without jitter")
    enabled = set(scenario.case(case_id).dimensions)
    dims = [d for d in scenario.dimensions if d.name in enabled]
    return 1.0 - math.prod(1.0 - dimension_probability(d) for d in dims)


def weakness_failure_probability(profile: IrdProfile) -> float:
    """Probability that at least one dimension fails in a given round."""
    return 1.0 - math.prod(1.0 - p for p in profile.outages.values())


# --- layered outage scenario -----------------------------------------------


def unit_ids(dim: LayerDimension, group: CauseGroup) -> list[str]:
    return [f"{dim.name}/{group.group_id}/{i}" for i in range(group.unit_count)]


def _dimension_down(dim: LayerDimension, rounds: np.ndarray, seed: int, jitter: float) -> np.ndarray:
    down = np.zeros(rounds.shape, dtype=bool)
    for group in dim.cause_groups:
        fired = np.ones(rounds.shape, dtype=bool)
        for uid in unit_ids(dim, group):
            p = group.p_unit
            if jitter:
                u = uniform01_array(seed, rounds, uid, LANE_JITTER)
                p = np.clip(p + (u * jitter - jitter / 2), 0.0, 1.0)
            fired &= uniform01_array(seed, rounds, uid, LANE_OUTAGE) < p
        down |= fired
    return down


def _outage_block(scenario: LayeredScenario, seed: int, start: int, stop: int) -> dict[str, np.ndarray]:
    """Per-round system outage flags for every case over rounds [start, stop)."""
    flags = {c.case_id: [] for c in scenario.cases}
    for lo in range(start, stop, ROUND_BATCH):
        rounds = np.arange(lo, min(lo + ROUND_BATCH, stop), dtype=np.uint64)
        down = {d.name: _dimension_down(d, rounds, seed, scenario.jitter_width) for d in scenario.dimensions}
        for c in scenario.cases:
            out = np.zeros(rounds.shape, dtype=bool)
            for name in c.dimensions:
                out |= down[name]
            flags[c.case_id].append(out)
    return {k: np.concatenate(v) if v else np.zeros(0, dtype=bool) for k, v in flags.items()}


def _split(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n)) if n else 1
    edges = [n * i // parts for i in range(parts + 1)]
    return list(zip(edges[:-1], edges[1:]))


def run_outage_scenario(scenario: LayeredScenario, rng: RngSpec, partitions: int = 1) -> SimReport:
    """Simulate ``scenario.rounds`` rounds; optionally split across threads.

    The result is identical for every value of ``partitions``: blocks are
    computed independently and merged in round order.
    """
    seed = rng.master_seed
    spans = _split(scenario.rounds, partitions)
    if len(spans) == 1:
        blocks = [_outage_block(scenario, seed, *spans[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            blocks = list(pool.map(lambda s: _outage_block(scenario, seed, *s), spans))

    report = SimReport()
    for c in scenario.cases:
        flags = np.concatenate([b[c.case_id] for b in blocks])
        cumulative = np.cumsum(flags, dtype=np.int64)
        report.series[c.case_id] = cumulative
        report.totals[c.case_id] = int(cumulative[-1]) if len(cumulative) else 0
        if scenario.jitter_width == 0:
            report.analytic[c.case_id] = analytic_outage_probability(scenario, c.case_id)
    return report


# --- dimensional weakness scenario -----------------------------------------


def _weakness_trials(
    profile: IrdProfile, trials: np.ndarray, max_rounds: int, seed: int
) -> list[tuple[int, int, bool]]:
    dims = sorted(profile.outages.items())
    out = []
    if not trials.size:
        return out
    if all(p == 0.0 for _, p in dims):
        # uniform01 >= 0, so a zero probability can never fire
        return [(int(t), max_rounds, True) for t in trials]
    active = trials.astype(np.uint64)
    offset = 0
    width = 64
    while active.size and offset < max_rounds:
        width = max(1, min(width, max_rounds - offset, WEAKNESS_BATCH_ELEMENTS // active.size))
        steps = np.arange(offset, offset + width, dtype=np.uint64)
        rounds = active[:, None] * np.uint64(max_rounds) + steps[None, :]
        failed = np.zeros(rounds.shape, dtype=bool)
        for dim, p in dims:
            failed |= uniform01_array(seed, rounds, dim, LANE_OUTAGE) < p
        hit = failed.any(axis=1)
        first = failed.argmax(axis=1)
        for t, r in zip(active[hit], first[hit]):
            out.append((int(t), offset + int(r), False))
        active = active[~hit]
        offset += width
        width *= 2
    out.extend((int(t), max_rounds, True) for t in active)
    return out


def run_weakness_scenario(scenario: WeaknessScenario, rng: RngSpec, partitions: int = 1) -> SimReport:
    """Runs-to-failure for each IRD profile.

    Trial ``t`` uses round indices ``t * max_rounds_per_trial + r``. Draws are
    keyed by dimension name only, so profiles sharing dimension names see the
    same underlying random stream (common random numbers).
    """
    report = SimReport()
    spans = _split(scenario.trials, partitions)
    for profile in scenario.irds:
        chunks = [np.arange(lo, hi) for lo, hi in spans]

        def work(chunk, profile=profile):
            return _weakness_trials(profile, chunk, scenario.max_rounds_per_trial, rng.master_seed)

        if len(chunks) == 1:
            results = [work(chunks[0])]
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                results = list(pool.map(work, chunks))
        rows = sorted(r for part in results for r in part)
        report.samples.extend(WeaknessSample(profile.name, t, runs, cens) for t, runs, cens in rows)
        report.analytic[profile.name] = weakness_failure_probability(profile)
    return report


# --- redundancy-count curve ------------------------------------------------


def redundancy_curve(p_success: float, n_max: int) -> list[float]:
    """Success probability of a dimension with n = 1..n_max independent modules."""
    if not 0.0 <= p_success <= 1.0:
        raise ValueError(f"p_success out of range: {p_success!r}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    q = 1.0 - p_success
    return [1.0 - q**n for n in range(1, n_max + 1)]


# --- scenario files and reports --------------------------------------------

def scenario_from_dict(doc: Mapping) -> LayeredScenario | WeaknessScenario:
    """Decode a scenario document; the presence of ``irds`` selects the kind."""
    if isinstance(doc, dict) and "irds" in doc:
        check_fields(doc, ["irds"], ["trials", "max_rounds_per_trial"], "weakness scenario")
        irds = []
        for entry in doc["irds"]:
            check_fields(entry, ["name", "outages"], where="ird profile")
            irds.append(IrdProfile(entry["name"], {k: float(v) for k, v in entry["outages"].items()}))
        return WeaknessScenario(
            tuple(irds),
            int(doc.get("trials", 10_000)),
            int(doc.get("max_rounds_per_trial", DEFAULT_MAX_ROUNDS)),
        )
    check_fields(doc, ["dimensions", "cases"], ["rounds", "jitter_width"], "layered scenario")
    dims = []
    for d in doc["dimensions"]:
        check_fields(d, ["name", "cause_groups"], where="dimension")
        groups = []
        for g in d["cause_groups"]:
            check_fields(g, ["group_id", "unit_count", "p_unit"], ["rule"], "cause group")
            groups.append(CauseGroup(g["group_id"], int(g["unit_count"]), float(g["p_unit"]), g.get("rule", "all_units")))
        dims.append(LayerDimension(d["name"], tuple(groups)))
    cases = []
    for c in doc["cases"]:
        check_fields(c, ["case_id", "dimensions"], where="case")
        cases.append(Case(c["case_id"], tuple(c["dimensions"])))
    return LayeredScenario(
        tuple(dims), tuple(cases), int(doc.get("rounds", 100_000)), float(doc.get("jitter_width", 0.0))
    )


def bundled_scenario_names() -> list[str]:
    root = resources.files("ird.data")
    return sorted(p.name for p in root.iterdir() if p.name.startswith("paper-"))


def load_bundled_scenario(name: str) -> LayeredScenario | WeaknessScenario:
    text = resources.files("ird.data").joinpath(name).read_text(encoding="utf-8")
    return scenario_from_dict(json.loads(text))


def reference_outage_scenario(**overrides) -> LayeredScenario:
    """The bundled three-dimension hardware/software/communication experiment."""
    return replace(load_bundled_scenario("paper-6.1.json"), **overrides)


def reference_weakness_scenario(**overrides) -> WeaknessScenario:
    return replace(load_bundled_scenario("paper-6.2.json"), **overrides)


def write_outage_csv(report: SimReport, fh: IO[str]) -> None:
    fh.write("case_id,round,cumulative_outages\n")
    for case_id in sorted(report.series):
        series = report.series[case_id]
        fh.write("".join(f"{case_id},{r},{int(v)}\n" for r, v in enumerate(series.tolist())))


def write_weakness_csv(report: SimReport, fh: IO[str]) -> None:
    fh.write("ird_name,trial,runs_to_failure,censored\n")
    for s in sorted(report.samples, key=lambda s: (s.ird_name, s.trial)):
        fh.write(f"{s.ird_name},{s.trial},{s.runs_to_failure},{str(s.censored).lower()}\n")


def write_oracle_csv(report: SimReport, rounds: int | None, fh: IO[str]) -> None:
    """Analytic per-round probability for each case/IRD and, for outage runs,
    the expected outage count over ``rounds``."""
    if rounds is None:
        fh.write("name,probability\n")
        for name in sorted(report.analytic):
            fh.write(f"{name},{report.analytic[name]!r}\n")
        return
    fh.write("case_id,probability,expected_outages\n")
    for name in sorted(report.analytic):
        p = report.analytic[name]
        fh.write(f"{name},{p!r},{p * rounds!r}\n")
