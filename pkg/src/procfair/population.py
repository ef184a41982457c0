"""Individuals, populations, attribute-defined groups, and CSV ingestion.

A population is an ordered, immutable collection of individuals. Each
individual carries a binary merit label (does this person deserve the
favorable outcome?), an optional binary criterion label (the fact pattern a
deterministic procedure reads), and named categorical attributes such as
``sex=M``. Everything downstream treats these values as read-only, so every
operation here is a pure function and safe under concurrent use.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Iterator, Mapping, Union

from .errors import PopulationParseError, UnknownIdError

# Merit labels: 1 means the individual deserves the favorable outcome
# (acquittal), 0 means they deserve the unfavorable one (conviction).
GUILTY = 0
INNOCENT = 1
MERIT_VALUES = (GUILTY, INNOCENT)

CSV_HEADER = ("id", "J", "X", "attrs")


@dataclass(frozen=True)
class Individual:
    """One subject of a decision procedure.

    ``merit`` is the ground-truth label: 1 deserving acquittal, 0 deserving
    conviction. ``criterion`` is the binary fact label a deterministic
    procedure evaluates; it is ``None`` for individuals only ever handled by
    randomized procedures. ``attributes`` maps attribute names to categorical
    values; names must not contain ``=`` or ``;`` and values must not contain
    ``;`` (both are structural in the CSV format).
    """

    id: str
    merit: int
    criterion: int | None = None
    attributes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("individual id must be a non-empty string")
        if self.merit not in MERIT_VALUES:
            raise ValueError(f"merit must be 0 or 1, got {self.merit!r}")
        if self.criterion is not None and self.criterion not in (0, 1):
            raise ValueError(f"criterion must be 0, 1 or None, got {self.criterion!r}")
        for name, value in self.attributes.items():
            if not name or not isinstance(name, str) or "=" in name or ";" in name:
                raise ValueError(f"bad attribute name {name!r}")
            if not value or not isinstance(value, str) or ";" in value:
                raise ValueError(f"bad value {value!r} for attribute {name!r}")
        object.__setattr__(self, "attributes", dict(self.attributes))


@dataclass(frozen=True)
class Population:
    """An ordered collection of individuals with unique ids."""

    members: tuple[Individual, ...]

    def __init__(self, members: Iterable[Individual]):
        object.__setattr__(self, "members", tuple(members))
        seen: set[str] = set()
        for ind in self.members:
            if ind.id in seen:
                raise ValueError(f"duplicate individual id {ind.id!r}")
            seen.add(ind.id)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Individual]:
        return iter(self.members)

    def __repr__(self) -> str:
        return f"Population({len(self.members)} members)"

    @cached_property
    def by_id(self) -> Mapping[str, Individual]:
        return {ind.id: ind for ind in self.members}

    def ids(self) -> tuple[str, ...]:
        return tuple(ind.id for ind in self.members)

    def attribute_values(self, name: str) -> tuple[str, ...]:
        """Distinct values of an attribute, in first-appearance order."""
        seen: dict[str, None] = {}
        for ind in self.members:
            value = ind.attributes.get(name)
            if value is not None:
                seen.setdefault(value)
        return tuple(seen)


# --- group specs -----------------------------------------------------------


@dataclass(frozen=True)
class AttributeEquals:
    """Members whose attribute ``name`` equals ``value``."""

    name: str
    value: str

    def matches(self, ind: Individual) -> bool:
        return ind.attributes.get(self.name) == self.value

    def label(self) -> str:
        return f"{self.name}={self.value}"


@dataclass(frozen=True)
class CriterionEquals:
    """Members whose criterion label equals ``value`` (0 or 1)."""

    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"criterion value must be 0 or 1, got {self.value!r}")

    def matches(self, ind: Individual) -> bool:
        return ind.criterion == self.value

    def label(self) -> str:
        return f"X={self.value}"


@dataclass(frozen=True)
class ExplicitIdSet:
    """Members listed by id; every id must exist in the target population."""

    ids: frozenset[str]

    def __init__(self, ids: Iterable[str]):
        object.__setattr__(self, "ids", frozenset(ids))

    def matches(self, ind: Individual) -> bool:
        return ind.id in self.ids

    def label(self) -> str:
        return "{" + ",".join(sorted(self.ids)) + "}"


@dataclass(frozen=True)
class Singleton:
    """The one-member group containing exactly ``id``."""

    id: str

    def matches(self, ind: Individual) -> bool:
        return ind.id == self.id

    def label(self) -> str:
        return "{" + self.id + "}"


GroupSpec = Union[AttributeEquals, CriterionEquals, ExplicitIdSet, Singleton]


def group_members(pop: Population, g: GroupSpec | None) -> tuple[Individual, ...]:
    """Members satisfying ``g``, in population order. ``None`` selects everyone."""
    if g is None:
        return pop.members
    if isinstance(g, ExplicitIdSet):
        unknown = g.ids - set(pop.by_id)
        if unknown:
            raise UnknownIdError(f"unknown ids in group: {sorted(unknown)}")
    elif isinstance(g, Singleton) and g.id not in pop.by_id:
        raise UnknownIdError(f"unknown id in group: {g.id!r}")
    return tuple(ind for ind in pop.members if g.matches(ind))


def merit_counts(pop: Population, g: GroupSpec | None = None) -> tuple[int, int]:
    """(number guilty, number innocent) within the group. Empty group gives (0, 0)."""
    members = group_members(pop, g)
    n_guilty = sum(1 for ind in members if ind.merit == GUILTY)
    return n_guilty, len(members) - n_guilty


# --- CSV ingestion ---------------------------------------------------------


def _parse_binary(text: str, column: str, line: int, optional: bool = False) -> int | None:
    text = text.strip()
    if not text:
        if optional:
            return None
        raise PopulationParseError(f"empty {column} value", line)
    if text == "0":
        return 0
    if text == "1":
        return 1
    raise PopulationParseError(f"{column} must be 0 or 1, got {text!r}", line)


def _parse_attrs(text: str, line: int) -> dict[str, str]:
    attrs: dict[str, str] = {}
    text = text.strip()
    if not text:
        return attrs
    for pair in text.split(";"):
        name, sep, value = pair.partition("=")
        if not sep or not name or not value:
            raise PopulationParseError(f"bad attribute pair {pair!r}", line)
        if name in attrs:
            raise PopulationParseError(f"duplicate attribute {name!r}", line)
        attrs[name] = value
    return attrs


def load_population(source: str | IO[str]) -> Population:
    """Parse the population CSV format (header ``id,J,X,attrs``).

    ``X`` may be empty; ``attrs`` is a semicolon-separated list of
    ``name=value`` pairs and may be empty. CRLF input is tolerated. Raises
    :class:`PopulationParseError` naming the offending line on any malformed
    row, duplicate id, or out-of-range label.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    reader = csv.reader(stream)
    members: list[Individual] = []
    seen: set[str] = set()
    header_seen = False
    for line, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if not header_seen:
            if tuple(cell.strip() for cell in row) != CSV_HEADER:
                raise PopulationParseError(
                    f"expected header {','.join(CSV_HEADER)!r}, got {','.join(row)!r}", line
                )
            header_seen = True
            continue
        if len(row) != 4:
            raise PopulationParseError(f"expected 4 columns, got {len(row)}", line)
        ident = row[0].strip()
        if not ident:
            raise PopulationParseError("empty id", line)
        if ident in seen:
            raise PopulationParseError(f"duplicate id {ident!r}", line)
        seen.add(ident)
        merit = _parse_binary(row[1], "J", line)
        criterion = _parse_binary(row[2], "X", line, optional=True)
        attrs = _parse_attrs(row[3], line)
        try:
            members.append(Individual(ident, merit, criterion, attrs))
        except ValueError as exc:
            raise PopulationParseError(str(exc), line) from exc
    if not header_seen:
        raise PopulationParseError("empty input: missing header", 1)
    return Population(members)


def dump_population(pop: Population) -> str:
    """Serialize back to the population CSV format (LF line endings).

    ``load_population(dump_population(p))`` reproduces ``p`` exactly.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for ind in pop.members:
        attrs = ";".join(f"{name}={value}" for name, value in ind.attributes.items())
        criterion = "" if ind.criterion is None else str(ind.criterion)
        writer.writerow([ind.id, str(ind.merit), criterion, attrs])
    return out.getvalue()
