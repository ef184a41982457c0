"""Witness construction and exhaustive checks of the impossibility result.

For a deterministic procedure the criterion label X fully determines the
outcome, so the groups {X=0} and {X=1} are defined by features other than
merit and are therefore morally arbitrary. Whenever some merit class has
members on both sides of the split, those equally deserving individuals face
conviction probabilities of exactly 1 (X=0 side) and 0 (X=1 side): the split
witnesses that the procedure is group-unfair. Only a perfect procedure
(X = J everywhere) escapes, and only because no class straddles the split.

``exhaustive_search`` realizes the "every logically possible group"
quantifier at desk scale by enumerating all bipartitions of a small
population, which doubles as an independent check of the constructed
witness. It deliberately avoids the fairness module's comparison code: all
probabilities are reduced to integer numerators over a common denominator
and compared by cross multiplication.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import MissingCriterionError, SizeLimitError
from .population import (
    GUILTY,
    INNOCENT,
    CriterionEquals,
    Individual,
    Population,
)
from .procedure import (
    DeterministicProcedure,
    Procedure,
    conviction_probability,
    exact_rates,
)
from .roc import ProcedureClass, RocPoint, classify

__all__ = [
    "WitnessReport",
    "Bipartition",
    "PropertyReport",
    "construct_witness",
    "exhaustive_search",
    "verify_theorem",
]

DEFAULT_MAX_N = 15


@dataclass(frozen=True)
class WitnessReport:
    """The {X=1}/{X=0} split and the merit classes on which fairness fails.

    For every violated class the conviction probabilities are forced:
    ``class_probabilities[j] == (1, 0)`` for the (X=0, X=1) sides. A report
    with no violated classes means the procedure is either perfect on this
    population or imperfect but unwitnessable here (every merit class lies
    entirely on one side of the split), which ``unwitnessable`` flags.
    """

    group_x1: CriterionEquals
    group_x0: CriterionEquals
    violated_merit_classes: tuple[int, ...]
    class_probabilities: Mapping[int, tuple[Fraction, Fraction]]
    procedure_class: ProcedureClass | None
    perfect: bool
    unwitnessable: bool


def construct_witness(pop: Population) -> WitnessReport:
    """Build the criterion-split witness for a deterministic procedure.

    Requires a non-empty population with criterion labels throughout. Merit
    class j is violated iff both {X=0} and {X=1} contain a member with J=j;
    the probabilities then follow from U = X without any search.
    """
    if not len(pop):
        raise ValueError("cannot construct a witness for an empty population")
    present: dict[tuple[int, int], bool] = {}
    for ind in pop:
        if ind.criterion is None:
            raise MissingCriterionError(
                f"individual {ind.id!r} has no criterion label; "
                "deterministic procedures require X"
            )
        present[(ind.merit, ind.criterion)] = True

    violated = tuple(
        j for j in (GUILTY, INNOCENT) if present.get((j, 0)) and present.get((j, 1))
    )
    class_probabilities = {j: (Fraction(1), Fraction(0)) for j in violated}
    perfect = all(ind.criterion == ind.merit for ind in pop)

    rates = exact_rates(DeterministicProcedure(), pop)
    procedure_class = (
        classify(RocPoint(rates.h, rates.k))
        if rates.h is not None and rates.k is not None
        else None
    )
    return WitnessReport(
        group_x1=CriterionEquals(1),
        group_x0=CriterionEquals(0),
        violated_merit_classes=violated,
        class_probabilities=class_probabilities,
        procedure_class=procedure_class,
        perfect=perfect,
        unwitnessable=not perfect and not violated,
    )


@dataclass(frozen=True)
class Bipartition:
    """An unordered population split that violates fairness.

    ``subset`` is the side not containing the first population member; both
    sides are reported as sorted id lists.
    """

    subset: tuple[str, ...]
    complement: tuple[str, ...]
    violated_merit_classes: tuple[int, ...]


def exhaustive_search(
    pop: Population, max_n: int = DEFAULT_MAX_N, proc: Procedure | None = None
) -> tuple[Bipartition, ...]:
    """All fairness-violating bipartitions of a small population.

    Tests every subset S with 1 <= |S| < n against its complement at
    tolerance 0 on exact conviction probabilities; each unordered
    bipartition is reported once, ordered by the canonical (bitmask over
    population order) encoding of the side that excludes the first member.
    ``proc`` defaults to the deterministic procedure, which requires
    criterion labels on every member.
    """
    n = len(pop)
    if n > max_n:
        raise SizeLimitError(f"population of {n} exceeds exhaustive-search limit {max_n}")
    if n < 2:
        return ()
    if proc is None:
        proc = DeterministicProcedure()

    # Integer-only setup: probability of member i is numer[i] / denom.
    probs = [conviction_probability(proc, ind) for ind in pop]
    denom = math.lcm(*(p.denominator for p in probs))
    numer = [p.numerator * (denom // p.denominator) for p in probs]
    merit = [ind.merit for ind in pop]
    class_total_count = [merit.count(GUILTY), merit.count(INNOCENT)]
    class_total_sum = [
        sum(v for v, m in zip(numer, merit) if m == GUILTY),
        sum(v for v, m in zip(numer, merit) if m == INNOCENT),
    ]
    ids = pop.ids()

    results = []
    for mask in range(1, 1 << (n - 1)):
        subset_mask = mask << 1  # first member always stays in the complement
        count = [0, 0]
        total = [0, 0]
        bits = subset_mask
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            count[merit[i]] += 1
            total[merit[i]] += numer[i]
            bits ^= low
        violated = []
        for j in (GUILTY, INNOCENT):
            count_other = class_total_count[j] - count[j]
            if count[j] and count_other:
                # mean_subset != mean_complement, by cross multiplication
                total_other = class_total_sum[j] - total[j]
                if total[j] * count_other != total_other * count[j]:
                    violated.append(j)
        if violated:
            subset_ids = tuple(sorted(ids[i] for i in range(n) if subset_mask >> i & 1))
            complement_ids = tuple(sorted(ids[i] for i in range(n) if not subset_mask >> i & 1))
            results.append(Bipartition(subset_ids, complement_ids, tuple(violated)))
    return tuple(results)


@dataclass(frozen=True)
class PropertyReport:
    """Result of randomized verification over many small populations."""

    n_individuals: int
    n_trials: int
    seed: int
    perfect_instances: int
    witnessed_instances: int
    unwitnessable_instances: int
    counterexamples: tuple[str, ...]
    passed: bool


def verify_theorem(n_individuals: int, n_trials: int, seed: int) -> PropertyReport:
    """Stress the impossibility claim on random deterministic instances.

    Draws ``n_trials`` populations of ``n_individuals`` with uniformly random
    (merit, criterion) labels. For every imperfect instance with a populated
    comparison, the constructed criterion split must itself appear among the
    exhaustively enumerated violations (with the same violated classes); for
    every perfect instance, and for imperfect ones where the split is
    vacuous, no bipartition may violate. Expected outcome: zero
    counterexamples.
    """
    if n_individuals < 1:
        raise ValueError(f"n_individuals must be >= 1, got {n_individuals}")
    if n_individuals > DEFAULT_MAX_N:
        raise SizeLimitError(
            f"n_individuals {n_individuals} exceeds exhaustive-search limit {DEFAULT_MAX_N}"
        )
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")

    rng = random.Random(seed)
    perfect_instances = witnessed = unwitnessable = 0
    counterexamples: list[str] = []

    for trial in range(n_trials):
        labels = [(rng.getrandbits(1), rng.getrandbits(1)) for _ in range(n_individuals)]
        pop = Population(
            Individual(f"i{idx}", merit=j, criterion=x) for idx, (j, x) in enumerate(labels)
        )
        witness = construct_witness(pop)
        found = exhaustive_search(pop, max_n=n_individuals)

        def fail(reason: str) -> None:
            counterexamples.append(f"trial {trial} labels={labels}: {reason}")

        if witness.perfect:
            perfect_instances += 1
            if witness.violated_merit_classes:
                fail("perfect instance reported violated classes")
            if found:
                fail("perfect instance has violating bipartitions")
        elif witness.violated_merit_classes:
            witnessed += 1
            if not found:
                fail("witnessed instance but exhaustive search found nothing")
            split = frozenset(
                ind.id for ind in pop if ind.criterion != pop.members[0].criterion
            )
            matches = [b for b in found if frozenset(b.subset) == split]
            if not matches:
                fail("criterion split missing from exhaustive search results")
            elif set(matches[0].violated_merit_classes) != set(witness.violated_merit_classes):
                fail("criterion split violates different classes than the witness")
        else:
            unwitnessable += 1
            if found:
                fail("unwitnessable instance still has violating bipartitions")

    return PropertyReport(
        n_individuals=n_individuals,
        n_trials=n_trials,
        seed=seed,
        perfect_instances=perfect_instances,
        witnessed_instances=witnessed,
        unwitnessable_instances=unwitnessable,
        counterexamples=tuple(counterexamples),
        passed=not counterexamples,
    )
