"""Exact Lloyd iteration on the line.

Alternates nearest-centroid assignment and mean updates until the partition
repeats, recording the full history.  Distance ties are never broken
silently: strict mode aborts with the offending point, branch mode explores
every resolution.

Internally the iteration runs on integer coordinates obtained by clearing
denominators (partition sequences are scale-invariant), with centroids kept
as exact ``(sum, count)`` pairs; traces expose them as Fractions.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from .model import Partition, PointSet, Seeding

DEFAULT_CAP = 10_000
DEFAULT_BRANCH_LIMIT = 10_000


class TiePolicy(Enum):
    STRICT = "strict"
    BRANCH = "branch"


class TieError(Exception):
    """A point is exactly equidistant from its nearest centroids."""

    def __init__(self, point_index: int, clusters: Sequence[int], step_index: int | None = None):
        self.point_index = point_index  # 1-based
        self.clusters = tuple(clusters)
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(
            f"point {point_index} equidistant from clusters {list(self.clusters)}{where}"
        )


class BranchLimitError(RuntimeError):
    """Branch exploration exceeded its trace budget."""


@dataclass(frozen=True)
class Centroids:
    """Cluster centers; an empty cluster keeps its previous value, flagged."""

    values: tuple[Fraction, ...]
    empty: tuple[bool, ...] = ()

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        empty = tuple(self.empty) if self.empty else (False,) * len(values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "empty", empty)
        if not values:
            raise ValueError("need at least one centroid")
        if len(empty) != len(values):
            raise ValueError("empty mask length mismatch")

    @property
    def k(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Converged:
    kind = "converged"
    final: Partition


@dataclass(frozen=True)
class TieEncountered:
    kind = "tie"
    step_index: int
    point_index: int  # 1-based
    clusters: tuple[int, ...]


@dataclass(frozen=True)
class IterationCapExceeded:
    kind = "cap-exceeded"
    cap: int


Outcome = Converged | TieEncountered | IterationCapExceeded


@dataclass(frozen=True)
class LloydStep:
    """Centroids entering an assignment and the partition it produced.

    ``partition`` is None only on the step where a strict-mode tie aborted.
    """

    centroids: Centroids
    partition: Partition | None


@dataclass(frozen=True)
class LloydTrace:
    seeding: Seeding
    steps: tuple[LloydStep, ...]
    outcome: Outcome

    @property
    def converged(self) -> bool:
        return isinstance(self.outcome, Converged)

    @property
    def final_partition(self) -> Partition | None:
        return self.outcome.final if isinstance(self.outcome, Converged) else None

    def partition_sequence(self) -> tuple[tuple[int, ...], ...]:
        """Canonical label tuples of the completed steps."""
        return tuple(
            step.partition.canonical_labels() for step in self.steps if step.partition is not None
        )

    def used_empty_cluster_rule(self) -> bool:
        """True if any step carried a frozen empty-cluster centroid."""
        return any(any(step.centroids.empty) for step in self.steps)


# --- scaled integer core ------------------------------------------------------
#
# Positions are integers; a centroid is (s, c) meaning the exact value s/c.
# Adjacent-centroid midpoints are (num, den) pairs; a point x sits left of a
# boundary iff x*den < num, and exactly on it iff equal (a nearest-distance
# tie between the two clusters it separates).


class EngineInvariantError(AssertionError):
    """Centroid ordering broke; indicates a bug, not bad input."""


def _scaled_positions(positions: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    den = lcm(*(x.denominator for x in positions))
    return tuple(int(x * den) for x in positions), den


def _boundaries(cents: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    bounds = []
    for i in range(len(cents) - 1):
        s1, c1 = cents[i]
        s2, c2 = cents[i + 1]
        left = s1 * c2
        right = s2 * c1
        if left >= right:
            raise EngineInvariantError("centroids out of order")
        bounds.append((left + right, 2 * c1 * c2))
    return bounds


def _assign_labels(
    xs: Sequence[int], cents: Sequence[tuple[int, int]]
) -> tuple[list[int], tuple[int, int, int] | None]:
    """Nearest-centroid labels, or (point0, j, j+1) on the first midpoint hit."""
    n = len(xs)
    if len(cents) == 1:
        return [0] * n, None
    bounds = _boundaries(cents)
    last = len(cents) - 1
    labels = [0] * n
    j = 0
    num, den = bounds[0]
    for i in range(n):
        x = xs[i]
        while j < last:
            t = x * den
            if t < num:
                break
            if t == num:
                return labels, (i, j, j + 1)
            j += 1
            if j < last:
                num, den = bounds[j]
        labels[i] = j
    return labels, None


def _choice_sets(xs: Sequence[int], cents: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Per point, every cluster id at minimal distance (branch mode)."""
    out = []
    for x in xs:
        best_n = best_d = 0
        ids: list[int] = []
        for j, (s, c) in enumerate(cents):
            n = abs(x * c - s)
            if not ids:
                best_n, best_d, ids = n, c, [j]
                continue
            lhs = n * best_d
            rhs = best_n * c
            if lhs < rhs:
                best_n, best_d, ids = n, c, [j]
            elif lhs == rhs:
                ids.append(j)
        out.append(ids)
    return out


def _update_cents(
    xs: Sequence[int],
    labels: Sequence[int],
    prev: Sequence[tuple[int, int]],
) -> tuple[list[tuple[int, int]], tuple[bool, ...]]:
    k = len(prev)
    sums = [0] * k
    counts = [0] * k
    for x, label in zip(xs, labels):
        sums[label] += x
        counts[label] += 1
    cents = []
    empty = []
    for j in range(k):
        if counts[j]:
            cents.append((sums[j], counts[j]))
            empty.append(False)
        else:
            cents.append(prev[j])
            empty.append(True)
    return cents, tuple(empty)


_RawStep = tuple[list[tuple[int, int]], tuple[bool, ...], tuple[int, ...] | None]


def _run_strict_raw(
    xs: Sequence[int], seed_indices: Sequence[int], cap: int
) -> tuple[list[_RawStep], Outcome | None, tuple | None]:
    """Full-history strict run; returns (steps, outcome-kind marker, tie info)."""
    cents: list[tuple[int, int]] = [(xs[i - 1], 1) for i in seed_indices]
    empty: tuple[bool, ...] = (False,) * len(seed_indices)
    steps: list[_RawStep] = []
    prev: tuple[int, ...] | None = None
    for step in range(cap):
        labels, tie = _assign_labels(xs, cents)
        if tie is not None:
            steps.append((cents, empty, None))
            return steps, None, (step, tie[0] + 1, (tie[1], tie[2]))
        frozen = tuple(labels)
        steps.append((cents, empty, frozen))
        if frozen == prev:
            return steps, Converged(Partition(frozen)), None
        prev = frozen
        cents, empty = _update_cents(xs, labels, cents)
    return steps, IterationCapExceeded(cap), None


def _run_lean_raw(
    xs: Sequence[int], seed_indices: Sequence[int], cap: int
) -> tuple[str, tuple[int, ...] | None, bool, int]:
    """History-free strict run: (kind, final labels, empty-rule used, steps)."""
    cents: list[tuple[int, int]] = [(xs[i - 1], 1) for i in seed_indices]
    empty_seen = False
    prev: tuple[int, ...] | None = None
    for step in range(cap):
        labels, tie = _assign_labels(xs, cents)
        if tie is not None:
            return "tie", None, empty_seen, step + 1
        frozen = tuple(labels)
        if frozen == prev:
            return "converged", frozen, empty_seen, step + 1
        prev = frozen
        cents, empty = _update_cents(xs, labels, cents)
        if not empty_seen and any(empty):
            empty_seen = True
    return "cap-exceeded", None, empty_seen, cap


class LineEngine:
    """Reusable iteration core for one point set (denominators cleared once)."""

    def __init__(self, points: PointSet):
        self.points = points
        self._xs, self._den = _scaled_positions(points.positions)

    def _check_seeding(self, seeding: Seeding) -> None:
        if seeding.indices[-1] > self.points.n:
            raise ValueError(
                f"seed index {seeding.indices[-1]} out of range 1..{self.points.n}"
            )

    def _centroids(self, cents: Sequence[tuple[int, int]], empty: tuple[bool, ...]) -> Centroids:
        den = self._den
        return Centroids(tuple(Fraction(s, c * den) for s, c in cents), empty)

    def _materialize(self, seeding: Seeding, steps: list[_RawStep], outcome: Outcome) -> LloydTrace:
        out = tuple(
            LloydStep(
                self._centroids(cents, empty),
                Partition(labels) if labels is not None else None,
            )
            for cents, empty, labels in steps
        )
        return LloydTrace(seeding, out, outcome)

    def run_strict(self, seeding: Seeding, cap: int = DEFAULT_CAP) -> LloydTrace:
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self._check_seeding(seeding)
        steps, outcome, tie = _run_strict_raw(self._xs, seeding.indices, cap)
        if tie is not None:
            step_index, point, clusters = tie
            outcome = TieEncountered(step_index, point, clusters)
        assert outcome is not None
        return self._materialize(seeding, steps, outcome)

    def run_lean(
        self, seed_indices: tuple[int, ...], cap: int = DEFAULT_CAP
    ) -> tuple[str, tuple[int, ...] | None, bool, int]:
        return _run_lean_raw(self._xs, seed_indices, cap)

    def run_branch(
        self,
        seeding: Seeding,
        cap: int = DEFAULT_CAP,
        limit: int = DEFAULT_BRANCH_LIMIT,
    ) -> tuple[LloydTrace, ...]:
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self._check_seeding(seeding)
        xs = self._xs
        results: list[LloydTrace] = []

        def explore(
            cents: list[tuple[int, int]],
            empty: tuple[bool, ...],
            steps: list[_RawStep],
            prev: tuple[int, ...] | None,
            depth: int,
        ) -> None:
            if depth == cap:
                results.append(self._materialize(seeding, steps, IterationCapExceeded(cap)))
                return
            choices = _choice_sets(xs, cents)
            seen: set[tuple[int, ...]] = set()
            for combo in product(*choices):
                if combo in seen:
                    continue
                seen.add(combo)
                if len(results) >= limit:
                    raise BranchLimitError(f"more than {limit} branch traces")
                branch_steps = steps + [(cents, empty, combo)]
                if combo == prev:
                    results.append(
                        self._materialize(seeding, branch_steps, Converged(Partition(combo)))
                    )
                    continue
                next_cents, next_empty = _update_cents(xs, combo, cents)
                explore(next_cents, next_empty, branch_steps, combo, depth + 1)

        start = [(xs[i - 1], 1) for i in seeding.indices]
        explore(start, (False,) * seeding.k, [], None, 0)

        # Distinct resolutions that walked the same partition sequence carry
        # the same evidence; keep the first.
        unique: list[LloydTrace] = []
        seen_seq: set[tuple] = set()
        for trace in results:
            key = (trace.partition_sequence(), trace.outcome.kind)
            if key not in seen_seq:
                seen_seq.add(key)
                unique.append(trace)
        return tuple(unique)


# --- public operations --------------------------------------------------------


def seed_centroids(points: PointSet, seeding: Seeding) -> Centroids:
    """Initial centroids: the seed points themselves."""
    if seeding.indices[-1] > points.n:
        raise ValueError(f"seed index {seeding.indices[-1]} out of range 1..{points.n}")
    return Centroids(tuple(points.position(i) for i in seeding.indices))


def assign(
    points: PointSet,
    centroids: Centroids,
    policy: TiePolicy = TiePolicy.STRICT,
) -> Partition | tuple[Partition, ...]:
    """Label every point with its nearest centroid.

    All centroids compete, including flagged-empty ones (they retain their
    positions).  Strict mode raises :class:`TieError` on an exact
    nearest-distance tie; branch mode returns every distinct labeling over
    all tie resolutions, lowest cluster id first.
    """
    sets = _fraction_choice_sets(points.positions, centroids.values)
    if policy is TiePolicy.STRICT:
        labels = []
        for i, ids in enumerate(sets):
            if len(ids) > 1:
                raise TieError(i + 1, ids)
            labels.append(ids[0])
        return Partition(tuple(labels))
    total = 1
    for ids in sets:
        total *= len(ids)
    if total > DEFAULT_BRANCH_LIMIT:
        raise BranchLimitError(f"{total} tie resolutions exceed the branch budget")
    seen: set[tuple[int, ...]] = set()
    out = []
    for combo in product(*sets):
        if combo not in seen:
            seen.add(combo)
            out.append(Partition(combo))
    return tuple(out)


def _fraction_choice_sets(
    xs: Sequence[Fraction], cents: Sequence[Fraction]
) -> list[list[int]]:
    sets = []
    for x in xs:
        best: Fraction | None = None
        ids: list[int] = []
        for j, c in enumerate(cents):
            d = abs(x - c)
            if best is None or d < best:
                best = d
                ids = [j]
            elif d == best:
                ids.append(j)
        sets.append(ids)
    return sets


def update(points: PointSet, partition: Partition, previous: Centroids) -> Centroids:
    """Exact mean per non-empty cluster; empty ones keep their value, flagged."""
    k = previous.k
    labels = partition.labels
    if len(labels) != points.n:
        raise ValueError(f"partition covers {len(labels)} points, point set has {points.n}")
    if any(label >= k for label in labels):
        raise ValueError("partition labels exceed centroid count")
    sums = [Fraction(0)] * k
    counts = [0] * k
    for x, label in zip(points.positions, labels):
        sums[label] += x
        counts[label] += 1
    values = []
    empty = []
    for j in range(k):
        if counts[j]:
            values.append(sums[j] / counts[j])
            empty.append(False)
        else:
            values.append(previous.values[j])
            empty.append(True)
    return Centroids(tuple(values), tuple(empty))


def run(
    points: PointSet,
    seeding: Seeding,
    policy: TiePolicy = TiePolicy.STRICT,
    cap: int = DEFAULT_CAP,
    branch_limit: int = DEFAULT_BRANCH_LIMIT,
) -> LloydTrace | tuple[LloydTrace, ...]:
    """Iterate assignment and update from the seeded centroids to a fixed point.

    Strict mode returns one trace whose outcome is Converged, TieEncountered
    or IterationCapExceeded.  Branch mode returns one trace per distinct
    tie-resolution path, deduplicated by partition sequence.
    """
    engine = LineEngine(points)
    if policy is TiePolicy.STRICT:
        return engine.run_strict(seeding, cap)
    return engine.run_branch(seeding, cap, branch_limit)


def is_fixed_point(points: PointSet, partition: Partition) -> bool:
    """True iff one assign/update round reproduces the partition without ties.

    The partition must have no empty blocks.  A tie at a block boundary
    counts as not fixed.
    """
    labels = partition.labels
    if len(labels) != points.n:
        raise ValueError(f"partition covers {len(labels)} points, point set has {points.n}")
    k = max(labels) + 1
    if len(set(labels)) != k:
        raise ValueError("partition has empty blocks")
    xs, _den = _scaled_positions(points.positions)
    sums = [0] * k
    counts = [0] * k
    for x, label in zip(xs, labels):
        sums[label] += x
        counts[label] += 1
    cents = list(zip(sums, counts))
    sets = _choice_sets(xs, cents)
    out = []
    for ids in sets:
        if len(ids) > 1:
            return False
        out.append(ids[0])
    return Partition(tuple(out)) == partition


def cost(points: PointSet, partition: Partition) -> Fraction:
    """Within-cluster sum of squared deviations from the block means."""
    if len(partition.labels) != points.n:
        raise ValueError(f"partition covers {len(partition.labels)} points, point set has {points.n}")
    total = Fraction(0)
    for block in partition.blocks():
        xs = [points.position(i) for i in block]
        n = len(xs)
        s = sum(xs)
        sq = sum(x * x for x in xs)
        total += sq - s * s / n
    return total


# --- serialization ------------------------------------------------------------


def outcome_to_dict(outcome: Outcome) -> dict:
    if isinstance(outcome, Converged):
        return {"kind": outcome.kind, "final_labels": list(outcome.final.labels)}
    if isinstance(outcome, TieEncountered):
        return {
            "kind": outcome.kind,
            "step": outcome.step_index,
            "point": outcome.point_index,
            "clusters": list(outcome.clusters),
        }
    return {"kind": outcome.kind, "cap": outcome.cap}


def trace_to_dict(trace: LloydTrace) -> dict:
    return {
        "seeding": list(trace.seeding.indices),
        "steps": [
            {
                "centroids": [str(v) for v in step.centroids.values],
                "labels": list(step.partition.labels) if step.partition is not None else None,
            }
            for step in trace.steps
        ],
        "outcome": outcome_to_dict(trace.outcome),
    }


def trace_to_json(trace: LloydTrace) -> str:
    return json.dumps(trace_to_dict(trace), sort_keys=True, separators=(",", ":"))


def trace_digest(trace: LloydTrace) -> str:
    return "sha256:" + hashlib.sha256(trace_to_json(trace).encode()).hexdigest()
