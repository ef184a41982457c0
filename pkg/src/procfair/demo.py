"""Built-in demonstration scenario: a two-stage audit of a 10000-person population.

The dataset is a male/female split with unequal guilt ratios (M: 2000 guilty
/ 4000 innocent; F: 500 / 3500). Stage one applies one global randomized
procedure convicting the guilty with probability 3/4 and the innocent with
probability 1/10; stage two applies the corresponding group-fair procedure
that fixes those same rates per sex. The expected tables come out exact:
1875 guilty and 750 innocent convictions overall, 1500/400 for men and
375/350 for women, so among convicted women barely half are guilty while for
men 400 of 1900 convictions are mistaken. The scenario shows fairness and
imperfect justice coexisting when only a limited set of groups is protected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .fairness import (
    ContingencyTable,
    FairnessVerdict,
    JusticeMetrics,
    check_pairwise_fairness,
    expected_contingency,
    justice_metrics,
)
from .population import GUILTY, INNOCENT, AttributeEquals, Individual, Population
from .procedure import ConditionalRates, RandomizedProcedure, exact_rates, global_procedure, make_group_fair
from .roc import ProcedureClass, RocPoint, classify

SEX = "sex"
GROUP_SIZES: Mapping[str, Mapping[int, int]] = {
    "M": {GUILTY: 2000, INNOCENT: 4000},
    "F": {GUILTY: 500, INNOCENT: 3500},
}
RATE_GUILTY = Fraction(3, 4)  # P(U=0 | J=0)
RATE_INNOCENT = Fraction(1, 10)  # P(U=0 | J=1)

# The scenario's headline population size (12000) does not match its group
# tables, which sum to 10000; the tables are authoritative here.
POPULATION_NOTE = (
    "data note: the scenario is described as 12000 individuals, but its group "
    "tables sum to 10000 (M 6000 + F 4000); this reproduction follows the tables"
)


def demo_population() -> Population:
    """The 10000-member population, grouped by sex with fixed guilt counts."""
    members = []
    for value, by_merit in GROUP_SIZES.items():
        serial = 0
        for merit in (GUILTY, INNOCENT):
            for _ in range(by_merit[merit]):
                serial += 1
                members.append(
                    Individual(f"{value.lower()}{serial:04d}", merit, attributes={SEX: value})
                )
    return Population(members)


def demo_global_procedure() -> RandomizedProcedure:
    return global_procedure(RATE_GUILTY, RATE_INNOCENT)


def demo_group_fair_procedure() -> RandomizedProcedure:
    return make_group_fair(RATE_GUILTY, RATE_INNOCENT, SEX, GROUP_SIZES)


@dataclass(frozen=True)
class DemoStage:
    name: str
    procedure: RandomizedProcedure
    rates_by_group: Mapping[str, ConditionalRates]
    verdict: FairnessVerdict
    contingency: ContingencyTable
    justice: JusticeMetrics
    classification: ProcedureClass


@dataclass(frozen=True)
class DemoReport:
    note: str
    population_size: int
    group_sizes: Mapping[str, Mapping[int, int]]
    stages: tuple[DemoStage, ...]


def demo_report() -> DemoReport:
    """Run both stages of the demonstration and collect their exact numbers."""
    pop = demo_population()
    stages = []
    for name, proc in (
        ("global", demo_global_procedure()),
        ("group-fair", demo_group_fair_procedure()),
    ):
        groups = {value: AttributeEquals(SEX, value) for value in GROUP_SIZES}
        rates = {value: exact_rates(proc, pop, g) for value, g in groups.items()}
        verdict = check_pairwise_fairness(
            rates["M"], rates["F"], 0, group_a=groups["M"], group_b=groups["F"]
        )
        table = expected_contingency(pop, proc, SEX)
        totals = table.totals()
        point = RocPoint(
            totals[GUILTY].expected_convictions / totals[GUILTY].count,
            totals[INNOCENT].expected_convictions / totals[INNOCENT].count,
        )
        stages.append(
            DemoStage(
                name=name,
                procedure=proc,
                rates_by_group=rates,
                verdict=verdict,
                contingency=table,
                justice=justice_metrics(table),
                classification=classify(point),
            )
        )
    return DemoReport(
        note=POPULATION_NOTE,
        population_size=len(pop),
        group_sizes=GROUP_SIZES,
        stages=tuple(stages),
    )
