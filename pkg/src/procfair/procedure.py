"""Decision procedures: outcomes, exact conviction rates, and simulation.

Two procedure families are modeled. A deterministic procedure convicts
exactly when the individual's criterion label is 0 (outcome equals
criterion). A randomized procedure convicts by chance, with conviction
probabilities conditioned on merit: ``h = P(U=0 | J=0)`` for the guilty and
``k = P(U=0 | J=1)`` for the innocent, configured either globally or per
value of one attribute.

All exact rates are computed with :class:`fractions.Fraction`; floating
point enters only in Monte-Carlo simulation, which is fully determined by
its seed.
"""

from __future__ import annotations

import json
import numbers
from collections.abc import Mapping as MappingABC
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import IO, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import (
    AmbiguousRateError,
    MissingCriterionError,
    MissingRateError,
    ProcedureSpecError,
)
from .population import GUILTY, INNOCENT, GroupSpec, Individual, Population, group_members

# Outcome labels: 1 = acquitted (favorable), 0 = convicted (unfavorable).
CONVICTED = 0
ACQUITTED = 1


def as_rational(value: int | float | str | Fraction | Decimal) -> Fraction:
    """Parse an exact rational from a number or a decimal / ``a/b`` string.

    Floats are read through their shortest decimal representation, so
    ``0.1`` becomes exactly 1/10 rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"cannot interpret {value!r} as a rational")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):  # floats, including numpy scalars
        return Fraction(Decimal(repr(float(value))))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            return Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise ValueError(f"cannot interpret {value!r} as a rational") from exc
    raise ValueError(f"cannot interpret {value!r} as a rational")


def as_probability(value: int | float | str | Fraction | Decimal) -> Fraction:
    """Like :func:`as_rational` but rejects values outside [0, 1]."""
    frac = as_rational(value)
    if not 0 <= frac <= 1:
        raise ValueError(f"probability out of range [0, 1]: {value!r}")
    return frac


# --- procedures ------------------------------------------------------------


@dataclass(frozen=True)
class DeterministicProcedure:
    """Outcome equals each individual's criterion label: U = X."""


@dataclass(frozen=True)
class GlobalRates:
    """One conviction-rate pair for everybody."""

    h: Fraction  # P(U=0 | J=0)
    k: Fraction  # P(U=0 | J=1)

    def __init__(self, h, k):
        object.__setattr__(self, "h", as_probability(h))
        object.__setattr__(self, "k", as_probability(k))


@dataclass(frozen=True)
class PerGroupRates:
    """Conviction-rate pairs keyed by the values of one attribute."""

    attribute: str
    table: Mapping[str, tuple[Fraction, Fraction]]

    def __init__(self, attribute: str, table: Mapping[str, tuple]):
        if not attribute:
            raise ValueError("attribute name must be non-empty")
        if not table:
            raise ValueError("per-group rate table must be non-empty")
        normalized = {
            str(value): (as_probability(pair[0]), as_probability(pair[1]))
            for value, pair in table.items()
        }
        object.__setattr__(self, "attribute", attribute)
        object.__setattr__(self, "table", normalized)


@dataclass(frozen=True)
class RandomizedProcedure:
    """Convicts by chance with merit-conditional rates (global or per group)."""

    rates: GlobalRates | PerGroupRates


Procedure = Union[DeterministicProcedure, RandomizedProcedure]


def global_procedure(h, k) -> RandomizedProcedure:
    return RandomizedProcedure(GlobalRates(h, k))


def per_group_procedure(attribute: str, table: Mapping[str, tuple]) -> RandomizedProcedure:
    return RandomizedProcedure(PerGroupRates(attribute, table))


def make_group_fair(h, k, attribute: str, values: Iterable[str]) -> RandomizedProcedure:
    """A per-group procedure that gives every listed value the same (h, k) pair.

    This is the constructive way to satisfy pairwise group fairness for the
    listed groups while keeping the overall rates of an imperfect procedure.
    """
    values = tuple(values)
    if not values:
        raise ValueError("make_group_fair requires at least one attribute value")
    pair = (as_probability(h), as_probability(k))
    return per_group_procedure(attribute, {value: pair for value in values})


def applicable_rates(proc: RandomizedProcedure, ind: Individual) -> tuple[Fraction, Fraction]:
    """The (h, k) pair that governs this individual under ``proc``."""
    rates = proc.rates
    if isinstance(rates, GlobalRates):
        return rates.h, rates.k
    value = ind.attributes.get(rates.attribute)
    if value is None:
        raise MissingRateError(
            f"individual {ind.id!r} has no value for attribute {rates.attribute!r}"
        )
    pair = rates.table.get(value)
    if pair is None:
        raise MissingRateError(
            f"no configured rates for {rates.attribute}={value!r} (individual {ind.id!r})"
        )
    return pair


def conviction_probability(proc: Procedure, ind: Individual) -> Fraction:
    """P(U=0) for one individual under ``proc``, as an exact rational."""
    if isinstance(proc, DeterministicProcedure):
        if ind.criterion is None:
            raise MissingCriterionError(
                f"individual {ind.id!r} has no criterion label; "
                "deterministic procedures require X"
            )
        return Fraction(1 - ind.criterion)
    h, k = applicable_rates(proc, ind)
    return h if ind.merit == GUILTY else k


# --- outcomes --------------------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    """Where an outcome assignment came from."""

    kind: str  # "deterministic" or "simulated"
    seed: int | None = None
    trial: int | None = None


class OutcomeAssignment(MappingABC):
    """One outcome per individual id: 1 = acquitted, 0 = convicted.

    Behaves as a read-only mapping. The id order matches the population the
    assignment was produced from; ``values_array`` exposes the outcomes in
    that order for bulk processing.
    """

    __slots__ = ("_ids", "_values", "provenance", "_index")

    def __init__(self, ids: Sequence[str], values, provenance: Provenance):
        self._ids = tuple(ids)
        self._values = np.asarray(values, dtype=np.uint8)
        if self._values.shape != (len(self._ids),):
            raise ValueError("one outcome required per id")
        self.provenance = provenance
        self._index: dict[str, int] | None = None

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def values_array(self) -> np.ndarray:
        return self._values

    def __getitem__(self, ident: str) -> int:
        if self._index is None:
            self._index = {ident: i for i, ident in enumerate(self._ids)}
        return int(self._values[self._index[ident]])

    def __iter__(self) -> Iterator[str]:
        return iter(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __repr__(self) -> str:
        return f"OutcomeAssignment({len(self)} outcomes, {self.provenance})"


def apply_deterministic(proc: DeterministicProcedure, pop: Population) -> OutcomeAssignment:
    """Evaluate U = X over the whole population."""
    values = []
    for ind in pop:
        if ind.criterion is None:
            raise MissingCriterionError(
                f"individual {ind.id!r} has no criterion label; "
                "deterministic procedures require X"
            )
        values.append(ind.criterion)
    return OutcomeAssignment(pop.ids(), values, Provenance("deterministic"))


def simulate(
    proc: RandomizedProcedure, pop: Population, seed: int, trials: int
) -> list[OutcomeAssignment]:
    """Draw ``trials`` independent outcome assignments.

    Each individual is convicted with probability equal to their applicable
    rate, independently across individuals and trials. The generator is
    numpy's seeded PCG64, so identical (procedure, population, seed, trials)
    inputs reproduce bit-identical outcomes.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    probs = np.array([float(conviction_probability(proc, ind)) for ind in pop])
    rng = np.random.default_rng(seed)
    draws = rng.random((trials, len(pop)))
    outcomes = np.where(draws < probs, CONVICTED, ACQUITTED).astype(np.uint8)
    ids = pop.ids()
    return [
        OutcomeAssignment(ids, outcomes[t], Provenance("simulated", seed=seed, trial=t))
        for t in range(trials)
    ]


# --- conditional rates -----------------------------------------------------


@dataclass(frozen=True)
class ConditionalRates:
    """Conviction rates for a (sub)population: h = P(U=0|J=0), k = P(U=0|J=1).

    ``support`` holds the (guilty, innocent) member counts behind the rates;
    a rate is ``None`` exactly when its merit class is empty.
    """

    h: Fraction | None
    k: Fraction | None
    support: tuple[int, int]

    def __post_init__(self):
        n_guilty, n_innocent = self.support
        if (self.h is None) != (n_guilty == 0) or (self.k is None) != (n_innocent == 0):
            raise ValueError("a rate must be present exactly when its class has support")

    @property
    def acquittal_h(self) -> Fraction | None:
        """P(U=1 | J=0), the complement of h."""
        return None if self.h is None else 1 - self.h

    @property
    def acquittal_k(self) -> Fraction | None:
        """P(U=1 | J=1), the complement of k."""
        return None if self.k is None else 1 - self.k


def exact_rates(
    proc: Procedure, pop: Population, g: GroupSpec | None = None
) -> ConditionalRates:
    """Exact conviction rates of ``proc`` on group ``g`` (``None`` = everyone).

    Deterministic procedures count criterion labels per merit class in
    rational arithmetic. Randomized procedures report their configured rates;
    a group spanning members with different configured pairs raises
    :class:`AmbiguousRateError`. A merit class with no members yields ``None``
    for its rate.
    """
    members = group_members(pop, g)
    guilty = [ind for ind in members if ind.merit == GUILTY]
    innocent = [ind for ind in members if ind.merit == INNOCENT]
    support = (len(guilty), len(innocent))

    if isinstance(proc, DeterministicProcedure):
        for ind in members:
            if ind.criterion is None:
                raise MissingCriterionError(
                    f"individual {ind.id!r} has no criterion label; "
                    "deterministic procedures require X"
                )
        h = Fraction(sum(1 for i in guilty if i.criterion == 0), len(guilty)) if guilty else None
        k = (
            Fraction(sum(1 for i in innocent if i.criterion == 0), len(innocent))
            if innocent
            else None
        )
        return ConditionalRates(h, k, support)

    pairs = {applicable_rates(proc, ind) for ind in members}
    if len(pairs) > 1:
        raise AmbiguousRateError(
            "group spans members with different configured rates: "
            + ", ".join(f"({h}, {k})" for h, k in sorted(pairs))
        )
    if not pairs:
        return ConditionalRates(None, None, (0, 0))
    (h, k), = pairs
    return ConditionalRates(h if guilty else None, k if innocent else None, support)


def empirical_rates(
    pop: Population,
    assignments: Sequence[OutcomeAssignment],
    g: GroupSpec | None = None,
) -> ConditionalRates:
    """Observed conviction frequencies over simulated assignments.

    Rates are exact ratios of counts (convictions over member-trials), so
    they can be fed to the same comparisons as configured rates; compare
    them with a positive tolerance, since they carry sampling noise.
    """
    if not assignments:
        raise ValueError("empirical_rates requires at least one assignment")
    members = group_members(pop, g)
    positions = {ident: i for i, ident in enumerate(pop.ids())}
    idx_guilty = [positions[i.id] for i in members if i.merit == GUILTY]
    idx_innocent = [positions[i.id] for i in members if i.merit == INNOCENT]
    support = (len(idx_guilty), len(idx_innocent))
    trials = len(assignments)

    def rate(indices: list[int]) -> Fraction | None:
        if not indices:
            return None
        convicted = sum(
            int(np.count_nonzero(a.values_array[indices] == CONVICTED)) for a in assignments
        )
        return Fraction(convicted, len(indices) * trials)

    return ConditionalRates(rate(idx_guilty), rate(idx_innocent), support)


# --- procedure description files -------------------------------------------


def load_procedure(source: str | IO[str]) -> Procedure:
    """Parse a procedure description document.

    Accepted forms::

        {"type": "deterministic"}
        {"type": "randomized", "rates": {"global": [h, k]}}
        {"type": "randomized", "attribute": "sex", "rates": {"M": [h, k], "F": [h, k]}}

    Probabilities may be JSON numbers, decimal strings, or ``"a/b"`` strings.
    """
    text = source if isinstance(source, str) else source.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProcedureSpecError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProcedureSpecError("procedure description must be a JSON object")
    kind = doc.get("type")
    if kind == "deterministic":
        return DeterministicProcedure()
    if kind != "randomized":
        raise ProcedureSpecError(f"unknown procedure type {kind!r}")
    rates = doc.get("rates")
    if not isinstance(rates, dict) or not rates:
        raise ProcedureSpecError("randomized procedure needs a non-empty 'rates' object")

    def pair(raw, where: str) -> tuple[Fraction, Fraction]:
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise ProcedureSpecError(f"rates for {where} must be a [h, k] pair")
        try:
            return as_probability(raw[0]), as_probability(raw[1])
        except ValueError as exc:
            raise ProcedureSpecError(f"bad probability for {where}: {exc}") from exc

    attribute = doc.get("attribute")
    if attribute is None:
        if set(rates) != {"global"}:
            raise ProcedureSpecError(
                "rates must be keyed 'global', or an 'attribute' must be named"
            )
        h, k = pair(rates["global"], "global")
        return global_procedure(h, k)
    if "global" in rates:
        raise ProcedureSpecError("per-attribute rates cannot also contain 'global'")
    table = {value: pair(raw, f"{attribute}={value}") for value, raw in rates.items()}
    return per_group_procedure(str(attribute), table)
