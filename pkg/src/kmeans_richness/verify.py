"""Campaign driver.

Samples configurations per case region, runs the prescribed adversarial
seedings against the Lloyd engine, exhaustively enumerates all seedings as an
independent check, computes exact success probabilities, and emits
machine-checkable certificates and aggregate reports.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import cases, lloyd, model
from .cases import CaseLabel, PlanSemantics
from .lloyd import DEFAULT_CAP, LineEngine, LloydTrace
from .model import DistanceConfig, Seeding

VERDICT_HOLDS = "plan-holds"
VERDICT_VIOLATED = "plan-violated"
VERDICT_SKIPPED = "skipped-tie"

SEMANTICS_ORACLE = "oracle-only"

DEFAULT_MAX_REJECTIONS = 10**6


class RegionExhaustedError(RuntimeError):
    """Rejection sampling found nothing; the region is empty at this bound."""


def _canon(labels: Sequence[int]) -> tuple[int, ...]:
    mapping: dict[int, int] = {}
    out = []
    for label in labels:
        v = mapping.get(label)
        if v is None:
            v = len(mapping)
            mapping[label] = v
        out.append(v)
    return tuple(out)


def _target_labels(k: int) -> tuple[int, ...]:
    return tuple(i // 2 for i in range(2 * k))


# --- exhaustive seeding enumeration -------------------------------------------


@dataclass(frozen=True)
class SeedingSurvey:
    """Outcome counts over all C(2k, k) seedings of one configuration."""

    total: int
    reached_count: int
    failed_count: int
    tie_count: int
    cap_count: int
    first_failing: Seeding | None
    tied: tuple[Seeding, ...]
    empty_rule_used: bool

    @property
    def probability(self) -> Fraction | None:
        """Fraction of seedings reaching the pairing partition.

        Tied seedings are excluded from numerator and denominator alike;
        None when no run settled (or any hit the iteration cap).
        """
        if self.cap_count or self.total == self.tie_count:
            return None
        return Fraction(self.reached_count, self.total - self.tie_count)


def survey_seedings(
    cfg: DistanceConfig, cap: int = DEFAULT_CAP, _engine: LineEngine | None = None
) -> SeedingSurvey:
    """Run every seeding (lexicographic order) and tally where it lands."""
    engine = _engine or LineEngine(model.embed(cfg))
    target = _target_labels(cfg.k)
    n = 2 * cfg.k
    reached = failed = ties = caps = 0
    first_failing: Seeding | None = None
    tied: list[Seeding] = []
    empty_used = False
    run_lean = engine.run_lean
    for indices in combinations(range(1, n + 1), cfg.k):
        kind, final, empty_seen, _steps = run_lean(indices, cap)
        empty_used = empty_used or empty_seen
        if kind == "converged":
            if _canon(final) == target:
                reached += 1
            else:
                failed += 1
                if first_failing is None:
                    first_failing = Seeding(indices)
        elif kind == "tie":
            ties += 1
            tied.append(Seeding(indices))
        else:
            caps += 1
    return SeedingSurvey(
        total=comb(n, cfg.k),
        reached_count=reached,
        failed_count=failed,
        tie_count=ties,
        cap_count=caps,
        first_failing=first_failing,
        tied=tuple(tied),
        empty_rule_used=empty_used,
    )


def success_probability(cfg: DistanceConfig, cap: int = DEFAULT_CAP) -> Fraction:
    """Exact fraction of seedings whose run converges to the pairing partition."""
    _require_valid(cfg)
    probability = survey_seedings(cfg, cap).probability
    if probability is None:
        raise ArithmeticError("no seeding run settled; probability undefined")
    return probability


def richness_violation(cfg: DistanceConfig, epsilon: Fraction, cap: int = DEFAULT_CAP) -> bool:
    """True iff the pairing partition is reached with probability <= 1 - epsilon."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must satisfy 0 < epsilon < 1")
    return success_probability(cfg, cap) <= 1 - epsilon


# --- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class CandidateRecord:
    """One prescribed seeding's run, digested for the certificate."""

    name: str | None
    seeding: Seeding
    outcome_kind: str
    final_labels: tuple[int, ...] | None
    reached_target: bool
    empty_rule_used: bool
    trace_digest: str
    trace: LloydTrace | None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "seeding": list(self.seeding.indices),
            "outcome": self.outcome_kind,
            "final_labels": list(self.final_labels) if self.final_labels is not None else None,
            "reached_target": self.reached_target,
            "empty_rule_used": self.empty_rule_used,
            "trace_digest": self.trace_digest,
        }
        if self.trace is not None:
            out["trace"] = lloyd.trace_to_dict(self.trace)
        return out


@dataclass(frozen=True)
class OracleRecord:
    """Exhaustive-search section of a certificate."""

    failing_seeding: Seeding | None
    reached_count: int
    failed_count: int
    tie_count: int
    cap_count: int
    total: int
    probability: Fraction | None
    empty_rule_used: bool
    witness_trace: LloydTrace | None

    def to_dict(self) -> dict:
        out = {
            "failing_seeding": list(self.failing_seeding.indices) if self.failing_seeding else None,
            "reached_count": self.reached_count,
            "failed_count": self.failed_count,
            "tie_count": self.tie_count,
            "cap_count": self.cap_count,
            "total": self.total,
            "success_probability": str(self.probability) if self.probability is not None else None,
            "empty_rule_used": self.empty_rule_used,
        }
        if self.witness_trace is not None:
            out["witness_trace"] = lloyd.trace_to_dict(self.witness_trace)
        return out


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable record that some seeding avoids the pairing partition."""

    config: DistanceConfig
    label: str | None
    semantics: str
    candidates: tuple[CandidateRecord, ...]
    verdict: str
    skip_reason: str | None
    oracle: OracleRecord | None

    @property
    def holds(self) -> bool:
        return self.verdict == VERDICT_HOLDS

    def to_dict(self) -> dict:
        return {
            "config": model.config_to_dict(self.config),
            "label": self.label,
            "semantics": self.semantics,
            "candidates": [c.to_dict() for c in self.candidates],
            "verdict": self.verdict,
            "skip_reason": self.skip_reason,
            "oracle": self.oracle.to_dict() if self.oracle is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _require_valid(cfg: DistanceConfig) -> None:
    report = model.validate(cfg)
    if not report.valid:
        raise ValueError(f"config not valid: constraint fails at gaps {list(report.violations)}")


def _oracle_record(
    survey: SeedingSurvey, engine: LineEngine, cap: int, include_trace: bool
) -> OracleRecord:
    witness = None
    if include_trace and survey.first_failing is not None:
        witness = engine.run_strict(survey.first_failing, cap)
    return OracleRecord(
        failing_seeding=survey.first_failing,
        reached_count=survey.reached_count,
        failed_count=survey.failed_count,
        tie_count=survey.tie_count,
        cap_count=survey.cap_count,
        total=survey.total,
        probability=survey.probability,
        empty_rule_used=survey.empty_rule_used,
        witness_trace=witness,
    )


def _oracle_verdict(survey: SeedingSurvey) -> str:
    if survey.first_failing is not None:
        return VERDICT_HOLDS
    if survey.reached_count and not survey.cap_count:
        return VERDICT_VIOLATED
    return VERDICT_SKIPPED


def certify_config(
    cfg: DistanceConfig,
    *,
    oracle: bool = True,
    include_traces: bool = False,
    cap: int = DEFAULT_CAP,
) -> Certificate:
    """Classify, run the prescribed seedings, and (optionally) the oracle.

    The verdict follows the plan semantics; configurations without a
    prescribed plan (UNCLASSIFIED, or k < 4) are judged by the oracle alone.
    Any tie during a candidate run skips the certificate.
    """
    _require_valid(cfg)
    engine = LineEngine(model.embed(cfg))
    target = model.target_partition(cfg.k)

    label_text: str | None = None
    plan: cases.AdversarialPlan | None = None
    semantics = SEMANTICS_ORACLE
    if cfg.k >= 4:
        try:
            plan = cases.adversarial_plan(cfg)
            label_text = str(plan.label)
            semantics = plan.semantics.value
        except cases.UnclassifiedConfigError:
            label_text = cases.UNCLASSIFIED
        except cases.ClassificationTieError as exc:
            return Certificate(
                config=cfg,
                label=None,
                semantics=SEMANTICS_ORACLE,
                candidates=(),
                verdict=VERDICT_SKIPPED,
                skip_reason=f"classification tie: {exc.description}",
                oracle=None,
            )

    candidates: list[CandidateRecord] = []
    verdict: str | None = None
    skip_reason: str | None = None
    if plan is not None:
        reached_flags: list[bool] = []
        for name, seeding in zip(plan.names, plan.candidates):
            trace = engine.run_strict(seeding, cap)
            final = trace.final_partition
            reached = final == target if final is not None else False
            candidates.append(
                CandidateRecord(
                    name=name,
                    seeding=seeding,
                    outcome_kind=trace.outcome.kind,
                    final_labels=final.labels if final is not None else None,
                    reached_target=reached,
                    empty_rule_used=trace.used_empty_cluster_rule(),
                    trace_digest=lloyd.trace_digest(trace),
                    trace=trace if include_traces else None,
                )
            )
            if isinstance(trace.outcome, lloyd.TieEncountered):
                if skip_reason is None:
                    skip_reason = (
                        f"tie during candidate {seeding}: point {trace.outcome.point_index}"
                        f" between clusters {list(trace.outcome.clusters)}"
                    )
            elif isinstance(trace.outcome, lloyd.IterationCapExceeded):
                if skip_reason is None:
                    skip_reason = f"candidate {seeding} hit the iteration cap {cap}"
            else:
                reached_flags.append(reached)
        if skip_reason is not None:
            verdict = VERDICT_SKIPPED
        elif plan.semantics is PlanSemantics.ALL_MUST_FAIL:
            verdict = VERDICT_HOLDS if not any(reached_flags) else VERDICT_VIOLATED
        else:
            verdict = VERDICT_HOLDS if not all(reached_flags) else VERDICT_VIOLATED

    oracle_rec: OracleRecord | None = None
    if verdict != VERDICT_SKIPPED and (oracle or plan is None):
        survey = survey_seedings(cfg, cap, _engine=engine)
        oracle_rec = _oracle_record(survey, engine, cap, include_traces)
        if plan is None:
            verdict = _oracle_verdict(survey)
            if verdict == VERDICT_SKIPPED:
                skip_reason = "oracle runs tied or hit the cap on every seeding"

    assert verdict is not None
    return Certificate(
        config=cfg,
        label=label_text,
        semantics=semantics,
        candidates=tuple(candidates),
        verdict=verdict,
        skip_reason=skip_reason,
        oracle=oracle_rec,
    )


def check_plan(cfg: DistanceConfig, cap: int = DEFAULT_CAP) -> Certificate:
    """Run only the case-prescribed seedings (the oracle stays off unless
    the configuration has no plan)."""
    return certify_config(cfg, oracle=False, cap=cap)


def exists_failing_seeding(
    cfg: DistanceConfig, include_witness_trace: bool = False, cap: int = DEFAULT_CAP
) -> Certificate:
    """Exhaustively search the C(2k, k) seedings for one avoiding the pairing.

    The verdict is plan-violated only if every tie-free seeding reached it.
    """
    _require_valid(cfg)
    engine = LineEngine(model.embed(cfg))
    label_text: str | None = None
    if cfg.k >= 4:
        try:
            label_text = str(cases.classify(cfg))
        except cases.ClassificationTieError:
            label_text = None
    survey = survey_seedings(cfg, cap, _engine=engine)
    verdict = _oracle_verdict(survey)
    return Certificate(
        config=cfg,
        label=label_text,
        semantics=SEMANTICS_ORACLE,
        candidates=(),
        verdict=verdict,
        skip_reason=None,
        oracle=_oracle_record(survey, engine, cap, include_witness_trace),
    )


def recheck_certificate(data: dict, cap: int = DEFAULT_CAP) -> list[str]:
    """Independently re-run a certificate's recorded seedings.

    Returns a list of discrepancies (empty means the certificate checks out).
    """
    problems: list[str] = []
    cfg = model.config_from_dict(data["config"])
    engine = LineEngine(model.embed(cfg))
    target = _target_labels(cfg.k)
    reached_flags: list[bool] = []
    for cand in data.get("candidates", []):
        seeding = Seeding(tuple(cand["seeding"]))
        kind, final, _empty, _steps = engine.run_lean(seeding.indices, cap)
        if kind != cand["outcome"]:
            problems.append(f"candidate {seeding}: outcome {kind} != recorded {cand['outcome']}")
            continue
        if kind == "converged":
            recorded = cand.get("final_labels")
            if recorded is None or _canon(recorded) != _canon(final):
                problems.append(f"candidate {seeding}: final partition differs from record")
            reached = _canon(final) == target
            if reached != cand.get("reached_target"):
                problems.append(f"candidate {seeding}: reached_target flag is wrong")
            reached_flags.append(reached)
    oracle = data.get("oracle")
    if oracle and oracle.get("failing_seeding"):
        seeding = Seeding(tuple(oracle["failing_seeding"]))
        kind, final, _empty, _steps = engine.run_lean(seeding.indices, cap)
        if kind != "converged" or _canon(final) == target:
            problems.append(f"oracle witness {seeding} does not avoid the pairing partition")
    semantics = data.get("semantics")
    verdict = data.get("verdict")
    if verdict in (VERDICT_HOLDS, VERDICT_VIOLATED) and reached_flags:
        if semantics == PlanSemantics.ALL_MUST_FAIL.value:
            expected = VERDICT_HOLDS if not any(reached_flags) else VERDICT_VIOLATED
        elif semantics == PlanSemantics.ANY_MUST_FAIL.value:
            expected = VERDICT_HOLDS if not all(reached_flags) else VERDICT_VIOLATED
        else:
            expected = verdict
        if expected != verdict:
            problems.append(f"verdict {verdict} inconsistent with candidate records ({expected})")
    return problems


# --- region sampling ------------------------------------------------------------


@dataclass(frozen=True)
class RegionSpec:
    """What to sample: k, a target case label (or "all-valid"), and the
    integer coefficient bound.  Distances are drawn from {1..bound} and
    divided by ``denominator``."""

    k: int
    target: str = "all-valid"
    bound: int = 50
    denominator: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.bound < 2:
            raise ValueError("bound must be >= 2")
        if self.denominator < 1:
            raise ValueError("denominator must be >= 1")
        if self.target != "all-valid":
            CaseLabel.parse(self.target)  # fail fast on bad label syntax
            if self.k < 4:
                raise ValueError(f"labeled regions need k >= 4, got k={self.k}")

    @property
    def name(self) -> str:
        return f"k={self.k}:{self.target}"


def sample_config(
    spec: RegionSpec,
    rng: random.Random,
    max_rejections: int = DEFAULT_MAX_REJECTIONS,
) -> DistanceConfig:
    """Rejection-sample a valid, predicate-tie-free config in the region."""
    k = spec.k
    den = spec.denominator
    randint = rng.randint
    bound = spec.bound
    for _ in range(max_rejections):
        a = tuple(Fraction(randint(1, bound), den) for _ in range(k))
        p = tuple(Fraction(randint(1, bound), den) for _ in range(k - 1))
        cfg = DistanceConfig(a, p)
        if not model.validate(cfg).valid:
            continue
        if k >= 4:
            try:
                label = cases.classify(cfg)
            except cases.ClassificationTieError:
                continue
            if spec.target != "all-valid" and not label.matches(spec.target):
                continue
        return cfg
    raise RegionExhaustedError(
        f"no config for region {spec.name} in {max_rejections} draws at bound {spec.bound};"
        " raise the bound"
    )


# --- campaign -------------------------------------------------------------------


@dataclass
class RegionResult:
    spec: RegionSpec
    samples: int = 0
    holds: int = 0
    violations: tuple[Certificate, ...] = ()
    ties_skipped: int = 0
    oracle_samples: int = 0
    oracle_failing_found: int = 0
    min_probability: tuple[Fraction, DistanceConfig] | None = None
    max_probability: tuple[Fraction, DistanceConfig] | None = None
    error: str | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        def prob(extreme):
            if extreme is None:
                return None
            value, cfg = extreme
            return {"value": str(value), "config": model.config_to_dict(cfg)}

        return {
            "region": self.spec.name,
            "k": self.spec.k,
            "target": self.spec.target,
            "bound": self.spec.bound,
            "denominator": self.spec.denominator,
            "samples": self.samples,
            "holds": self.holds,
            "violation_count": len(self.violations),
            "violations": [c.to_dict() for c in self.violations],
            "ties_skipped": self.ties_skipped,
            "oracle_samples": self.oracle_samples,
            "oracle_failing_found": self.oracle_failing_found,
            "min_success_probability": prob(self.min_probability),
            "max_success_probability": prob(self.max_probability),
            "error": self.error,
            "note": self.note,
        }


@dataclass
class Report:
    rng_seed: int
    samples_per_region: int
    oracle: bool
    regions: tuple[RegionResult, ...]

    @property
    def violation_count(self) -> int:
        return sum(len(r.violations) for r in self.regions)

    def to_dict(self) -> dict:
        return {
            "rng_seed": self.rng_seed,
            "samples_per_region": self.samples_per_region,
            "oracle": self.oracle,
            "violation_count": self.violation_count,
            "regions": [r.to_dict() for r in self.regions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(
            ["region", "samples", "holds", "violations", "ties", "min_probability", "max_probability"]
        )
        for r in self.regions:
            writer.writerow(
                [
                    r.spec.name,
                    r.samples,
                    r.holds,
                    len(r.violations),
                    r.ties_skipped,
                    str(r.min_probability[0]) if r.min_probability else "",
                    str(r.max_probability[0]) if r.max_probability else "",
                ]
            )
        return buffer.getvalue()


def _derived_rng(root_seed: int, region_index: int, slot: int, attempt: int) -> random.Random:
    material = f"{root_seed}:{region_index}:{slot}:{attempt}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(material).digest()[:16], "big"))


def campaign(
    regions: Sequence[RegionSpec],
    samples_per_region: int,
    rng_seed: int,
    *,
    oracle: bool = True,
    cap: int = DEFAULT_CAP,
    max_rejections: int = DEFAULT_MAX_REJECTIONS,
    tie_retries: int = 50,
    include_violation_traces: bool = True,
) -> Report:
    """Sample and certify ``samples_per_region`` configs per region.

    A skipped (tied) attempt is counted and the slot resampled from its own
    derived stream, so each region contributes its full quota of decided
    certificates.  Region exhaustion is recorded without aborting the rest.
    Deterministic for a fixed (regions, samples, seed): each (region, slot,
    attempt) triple derives an independent RNG stream.
    """
    if samples_per_region < 1:
        raise ValueError("samples_per_region must be >= 1")
    results = []
    for region_index, spec in enumerate(regions):
        result = RegionResult(spec, note="no theorem claim at k<4" if spec.k < 4 else None)
        violations: list[Certificate] = []
        for slot in range(samples_per_region):
            decided = False
            for attempt in range(tie_retries):
                rng = _derived_rng(rng_seed, region_index, slot, attempt)
                try:
                    cfg = sample_config(spec, rng, max_rejections)
                except RegionExhaustedError as exc:
                    result.error = str(exc)
                    break
                cert = certify_config(cfg, oracle=oracle, cap=cap)
                result.samples += 1
                if cert.verdict == VERDICT_SKIPPED:
                    result.ties_skipped += 1
                    continue
                if cert.verdict == VERDICT_HOLDS:
                    result.holds += 1
                else:
                    if include_violation_traces:
                        cert = certify_config(cfg, oracle=oracle, include_traces=True, cap=cap)
                    violations.append(cert)
                if cert.oracle is not None:
                    result.oracle_samples += 1
                    if cert.oracle.failing_seeding is not None:
                        result.oracle_failing_found += 1
                    probability = cert.oracle.probability
                    if probability is not None:
                        if result.min_probability is None or probability < result.min_probability[0]:
                            result.min_probability = (probability, cfg)
                        if result.max_probability is None or probability > result.max_probability[0]:
                            result.max_probability = (probability, cfg)
                decided = True
                break
            if result.error is not None:
                break
            if not decided:
                result.error = f"tie retries exhausted at sample {slot}"
                break
        result.violations = tuple(violations)
        results.append(result)
    return Report(rng_seed, samples_per_region, oracle, tuple(results))


def default_regions(k: int, bound: int = 50) -> tuple[RegionSpec, ...]:
    """Every case region defined at this k (plus mirrored end variants)."""
    if k == 4:
        targets = [
            "AA", "AA~", "AB", "AB~", "ACA", "ACA~", "ACB", "ACB~",
            "ADA", "ADB", "ADCA", "ADCB", "ADD",
        ]
    elif k > 4:
        targets = ["BA", "BB", "BC", "BC~", "BD", "BE", "UNCLASSIFIED"]
    else:
        targets = ["all-valid"]
    return tuple(RegionSpec(k=k, target=t, bound=bound) for t in targets)
