"""Group-fairness verdicts, expected contingency tables, and justice metrics.

Fairness here compares conviction probabilities between groups within each
merit class: two groups are treated fairly when, among the guilty, both face
the same conviction probability, and likewise among the innocent. Groups may
differ in composition, so a merit class can be empty on one side; such a
class is incomparable and imposes no constraint (a vacuously fair class).

Comparisons are exact rational arithmetic whenever the rates are exact.
Empirical (simulated) rates carry sampling noise and should be compared with
a positive tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import SizeLimitError
from .population import (
    GUILTY,
    INNOCENT,
    ExplicitIdSet,
    GroupSpec,
    Individual,
    Population,
    Singleton,
)
from .procedure import (
    ConditionalRates,
    Procedure,
    as_rational,
    conviction_probability,
)

__all__ = [
    "ClassComparison",
    "FairnessVerdict",
    "GroupPairViolation",
    "AbsoluteFairnessReport",
    "ContingencyCell",
    "ContingencyTable",
    "GroupJustice",
    "JusticeMetrics",
    "ConditionalRates",
    "check_pairwise_fairness",
    "check_absolute_fairness",
    "expected_contingency",
    "justice_metrics",
]


@dataclass(frozen=True)
class ClassComparison:
    """Rate comparison between two groups within one merit class."""

    merit: int
    rate_a: Fraction | None
    rate_b: Fraction | None
    difference: Fraction | None  # |rate_a - rate_b| when comparable
    comparable: bool
    violation: bool


@dataclass(frozen=True)
class FairnessVerdict:
    """Outcome of a pairwise group-fairness check.

    ``fair`` is true iff every comparable merit class differs by at most the
    tolerance; it is vacuously true when no class is comparable.
    """

    group_a: GroupSpec | None
    group_b: GroupSpec | None
    comparisons: tuple[ClassComparison, ClassComparison]
    tolerance: Fraction
    fair: bool

    def violated_merit_classes(self) -> tuple[int, ...]:
        return tuple(c.merit for c in self.comparisons if c.violation)


def check_pairwise_fairness(
    rates_a: ConditionalRates,
    rates_b: ConditionalRates,
    tolerance=0,
    group_a: GroupSpec | None = None,
    group_b: GroupSpec | None = None,
) -> FairnessVerdict:
    """Compare two groups' conviction rates class by class.

    A merit class is comparable iff both groups have members in it. With
    tolerance 0 and exact rates the comparison is an exact rational equality
    test; no floating point is involved.
    """
    tol = as_rational(tolerance)
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance!r}")
    comparisons = []
    for merit, a, b in (
        (GUILTY, rates_a.h, rates_b.h),
        (INNOCENT, rates_a.k, rates_b.k),
    ):
        comparable = a is not None and b is not None
        difference = abs(a - b) if comparable else None
        violation = comparable and difference > tol
        comparisons.append(ClassComparison(merit, a, b, difference, comparable, violation))
    fair = not any(c.violation for c in comparisons)
    return FairnessVerdict(group_a, group_b, tuple(comparisons), tol, fair)


# --- absolute fairness ------------------------------------------------------


@dataclass(frozen=True)
class GroupPairViolation:
    """A pair of morally arbitrary groups on which fairness fails."""

    group_a: GroupSpec
    group_b: GroupSpec
    merit_classes: tuple[int, ...]


@dataclass(frozen=True)
class AbsoluteFairnessReport:
    mode: str  # "singletons" or "bipartitions"
    fair: bool
    violations: tuple[GroupPairViolation, ...]
    truncated: bool


def _class_rates(members: Sequence[tuple[Individual, Fraction]]) -> ConditionalRates:
    """Average conviction probability per merit class over explicit members."""
    sums = {GUILTY: Fraction(0), INNOCENT: Fraction(0)}
    counts = {GUILTY: 0, INNOCENT: 0}
    for ind, prob in members:
        sums[ind.merit] += prob
        counts[ind.merit] += 1
    h = sums[GUILTY] / counts[GUILTY] if counts[GUILTY] else None
    k = sums[INNOCENT] / counts[INNOCENT] if counts[INNOCENT] else None
    return ConditionalRates(h, k, (counts[GUILTY], counts[INNOCENT]))


def check_absolute_fairness(
    proc: Procedure,
    pop: Population,
    mode: str = "singletons",
    tolerance=0,
    max_n: int = 15,
    max_violations: int = 100,
) -> AbsoluteFairnessReport:
    """Test fairness against every group of the requested kind.

    ``singletons`` mode checks all one-member groups: the procedure is fair
    iff individuals sharing a merit label share a conviction probability.
    ``bipartitions`` mode exhaustively tests every nontrivial subset against
    its complement; it refuses populations larger than ``max_n`` (suggest
    singletons mode instead, which is linear). Violations are listed in a
    deterministic order and truncated at ``max_violations``.
    """
    tol = as_rational(tolerance)
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance!r}")
    probs = [(ind, conviction_probability(proc, ind)) for ind in pop]

    if mode == "singletons":
        violations: list[GroupPairViolation] = []
        truncated = False
        for merit in (GUILTY, INNOCENT):
            in_class = [(ind, p) for ind, p in probs if ind.merit == merit]
            if not in_class:
                continue
            lo = min(p for _, p in in_class)
            hi = max(p for _, p in in_class)
            if hi - lo <= tol:
                continue  # whole class within tolerance: no pair can violate
            for i, (ind_a, p_a) in enumerate(in_class):
                for ind_b, p_b in in_class[i + 1 :]:
                    if abs(p_a - p_b) > tol:
                        if len(violations) >= max_violations:
                            truncated = True
                            break
                        violations.append(
                            GroupPairViolation(
                                Singleton(ind_a.id), Singleton(ind_b.id), (merit,)
                            )
                        )
                if truncated:
                    break
            if truncated:
                break
        return AbsoluteFairnessReport("singletons", not violations, tuple(violations), truncated)

    if mode != "bipartitions":
        raise ValueError(f"mode must be 'singletons' or 'bipartitions', got {mode!r}")

    n = len(pop)
    if n > max_n:
        raise SizeLimitError(
            f"population of {n} exceeds bipartition limit {max_n}; "
            "use singletons mode for large populations"
        )
    violations = []
    truncated = False
    # Pin the first member to the complement so each unordered bipartition
    # appears exactly once; masks index pop.members.
    for mask in range(1, 1 << (n - 1)) if n > 1 else ():
        subset_mask = mask << 1
        side_a = [probs[i] for i in range(n) if subset_mask >> i & 1]
        side_b = [probs[i] for i in range(n) if not subset_mask >> i & 1]
        verdict = check_pairwise_fairness(_class_rates(side_a), _class_rates(side_b), tol)
        if not verdict.fair:
            if len(violations) >= max_violations:
                truncated = True
                break
            violations.append(
                GroupPairViolation(
                    ExplicitIdSet(ind.id for ind, _ in side_a),
                    ExplicitIdSet(ind.id for ind, _ in side_b),
                    verdict.violated_merit_classes(),
                )
            )
    return AbsoluteFairnessReport("bipartitions", not violations, tuple(violations), truncated)


# --- contingency tables and justice metrics ---------------------------------


@dataclass(frozen=True)
class ContingencyCell:
    """Expected outcome split for one (group value, merit class) cell."""

    count: int
    expected_convictions: Fraction

    @property
    def expected_acquittals(self) -> Fraction:
        return self.count - self.expected_convictions


@dataclass(frozen=True)
class ContingencyTable:
    """Expected convictions per attribute value and merit class, plus totals."""

    attribute: str
    cells: Mapping[str, Mapping[int, ContingencyCell]]

    def values(self) -> tuple[str, ...]:
        return tuple(self.cells)

    def cell(self, value: str, merit: int) -> ContingencyCell:
        return self.cells[value][merit]

    def totals(self) -> Mapping[int, ContingencyCell]:
        out = {}
        for merit in (GUILTY, INNOCENT):
            count = sum(group[merit].count for group in self.cells.values())
            expected = sum(
                (group[merit].expected_convictions for group in self.cells.values()),
                Fraction(0),
            )
            out[merit] = ContingencyCell(count, expected)
        return out


def expected_contingency(pop: Population, proc: Procedure, attribute: str) -> ContingencyTable:
    """Expected conviction counts per (attribute value, merit class).

    Each cell's expectation is the exact rational sum of its members'
    conviction probabilities, so cells always satisfy
    convictions + acquittals = count, and group cells sum to the totals.
    Raises if any member lacks the attribute or an applicable rate.
    """
    cells: dict[str, dict[int, list]] = {}
    for ind in pop:
        value = ind.attributes.get(attribute)
        if value is None:
            raise ValueError(f"individual {ind.id!r} has no value for attribute {attribute!r}")
        bucket = cells.setdefault(value, {GUILTY: [0, Fraction(0)], INNOCENT: [0, Fraction(0)]})
        entry = bucket[ind.merit]
        entry[0] += 1
        entry[1] += conviction_probability(proc, ind)
    return ContingencyTable(
        attribute,
        {
            value: {merit: ContingencyCell(entry[0], entry[1]) for merit, entry in bucket.items()}
            for value, bucket in cells.items()
        },
    )


@dataclass(frozen=True)
class GroupJustice:
    """How just the expected outcomes are for one group."""

    convictions: Fraction  # expected total convictions
    mistaken_convictions: Fraction  # expected innocent convictions
    guilty_share: Fraction | None  # guilty among the convicted; None if no convictions


@dataclass(frozen=True)
class JusticeMetrics:
    per_group: Mapping[str, GroupJustice]
    overall: GroupJustice


def _group_justice(by_merit: Mapping[int, ContingencyCell]) -> GroupJustice:
    convicted_guilty = by_merit[GUILTY].expected_convictions
    convicted_innocent = by_merit[INNOCENT].expected_convictions
    total = convicted_guilty + convicted_innocent
    share = convicted_guilty / total if total else None
    return GroupJustice(total, convicted_innocent, share)


def justice_metrics(table: ContingencyTable) -> JusticeMetrics:
    """Convictions, mistaken convictions, and the guilty share per group."""
    per_group = {value: _group_justice(table.cells[value]) for value in table.values()}
    return JusticeMetrics(per_group, _group_justice(table.totals()))
