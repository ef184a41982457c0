"""JSON rendering for reports.

Every exact rational is rendered as an object carrying both the ``"a/b"``
ratio string and a float approximation, e.g. ``{"ratio": "3/4", "approx":
0.75}``, so downstream tools can choose exactness or convenience. All
dictionaries are built in a deterministic order; serializing the same report
twice produces identical text.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .fairness import (
    AbsoluteFairnessReport,
    ContingencyTable,
    FairnessVerdict,
    JusticeMetrics,
)
from .population import (
    AttributeEquals,
    CriterionEquals,
    ExplicitIdSet,
    GroupSpec,
    Singleton,
)
from .procedure import (
    ConditionalRates,
    DeterministicProcedure,
    GlobalRates,
    PerGroupRates,
    Procedure,
)
from .theorem import Bipartition, PropertyReport, WitnessReport


def rational_json(value: Fraction | None) -> dict[str, Any] | None:
    if value is None:
        return None
    return {
        "ratio": f"{value.numerator}/{value.denominator}",
        "approx": float(value),
    }


def group_spec_json(g: GroupSpec | None) -> dict[str, Any] | None:
    if g is None:
        return None
    if isinstance(g, AttributeEquals):
        return {"kind": "attribute", "name": g.name, "value": g.value}
    if isinstance(g, CriterionEquals):
        return {"kind": "criterion", "value": g.value}
    if isinstance(g, ExplicitIdSet):
        return {"kind": "ids", "ids": sorted(g.ids)}
    if isinstance(g, Singleton):
        return {"kind": "singleton", "id": g.id}
    raise TypeError(f"unknown group spec {g!r}")


def procedure_json(proc: Procedure) -> dict[str, Any]:
    if isinstance(proc, DeterministicProcedure):
        return {"type": "deterministic"}
    rates = proc.rates
    if isinstance(rates, GlobalRates):
        return {
            "type": "randomized",
            "rates": {"global": [rational_json(rates.h), rational_json(rates.k)]},
        }
    assert isinstance(rates, PerGroupRates)
    return {
        "type": "randomized",
        "attribute": rates.attribute,
        "rates": {
            value: [rational_json(h), rational_json(k)]
            for value, (h, k) in sorted(rates.table.items())
        },
    }


def rates_json(rates: ConditionalRates) -> dict[str, Any]:
    return {
        "h": rational_json(rates.h),
        "k": rational_json(rates.k),
        "support": {"guilty": rates.support[0], "innocent": rates.support[1]},
    }


def verdict_json(verdict: FairnessVerdict) -> dict[str, Any]:
    return {
        "group_a": group_spec_json(verdict.group_a),
        "group_b": group_spec_json(verdict.group_b),
        "tolerance": rational_json(verdict.tolerance),
        "fair": verdict.fair,
        "classes": [
            {
                "merit": c.merit,
                "rate_a": rational_json(c.rate_a),
                "rate_b": rational_json(c.rate_b),
                "difference": rational_json(c.difference),
                "comparable": c.comparable,
                "violation": c.violation,
            }
            for c in verdict.comparisons
        ],
    }


def absolute_report_json(report: AbsoluteFairnessReport) -> dict[str, Any]:
    return {
        "mode": report.mode,
        "fair": report.fair,
        "truncated": report.truncated,
        "violations": [
            {
                "group_a": group_spec_json(v.group_a),
                "group_b": group_spec_json(v.group_b),
                "merit_classes": list(v.merit_classes),
            }
            for v in report.violations
        ],
    }


def contingency_json(table: ContingencyTable) -> dict[str, Any]:
    def cell_json(cell) -> dict[str, Any]:
        return {
            "count": cell.count,
            "expected_convictions": rational_json(cell.expected_convictions),
            "expected_acquittals": rational_json(cell.expected_acquittals),
        }

    return {
        "attribute": table.attribute,
        "groups": {
            value: {str(merit): cell_json(cell) for merit, cell in sorted(by_merit.items())}
            for value, by_merit in table.cells.items()
        },
        "totals": {str(merit): cell_json(cell) for merit, cell in sorted(table.totals().items())},
    }


def justice_json(metrics: JusticeMetrics) -> dict[str, Any]:
    def one(gj) -> dict[str, Any]:
        return {
            "expected_convictions": rational_json(gj.convictions),
            "mistaken_convictions": rational_json(gj.mistaken_convictions),
            "guilty_share": rational_json(gj.guilty_share),
        }

    return {
        "per_group": {value: one(gj) for value, gj in metrics.per_group.items()},
        "overall": one(metrics.overall),
    }


def witness_json(report: WitnessReport) -> dict[str, Any]:
    return {
        "group_x1": group_spec_json(report.group_x1),
        "group_x0": group_spec_json(report.group_x0),
        "violated_merit_classes": list(report.violated_merit_classes),
        "class_probabilities": {
            str(j): {"x0": rational_json(p0), "x1": rational_json(p1)}
            for j, (p0, p1) in sorted(report.class_probabilities.items())
        },
        "procedure_class": report.procedure_class.value if report.procedure_class else None,
        "perfect": report.perfect,
        "unwitnessable": report.unwitnessable,
    }


def bipartition_json(b: Bipartition) -> dict[str, Any]:
    return {
        "subset": list(b.subset),
        "complement": list(b.complement),
        "violated_merit_classes": list(b.violated_merit_classes),
    }


def property_report_json(report: PropertyReport) -> dict[str, Any]:
    return {
        "n_individuals": report.n_individuals,
        "n_trials": report.n_trials,
        "seed": report.seed,
        "perfect_instances": report.perfect_instances,
        "witnessed_instances": report.witnessed_instances,
        "unwitnessable_instances": report.unwitnessable_instances,
        "counterexamples": list(report.counterexamples),
        "passed": report.passed,
    }
