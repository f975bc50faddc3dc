"""State roster, population data, square-root weights, and quota formulas.

A :class:`Union` is an ordered roster of states with exact person counts.
Weights follow the square-root rule with populations expressed in millions,
the conventional scale for EU Council voting-power analyses.  All types are immutable and every operation is a pure
function.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from .errors import DatasetError

__all__ = [
    "StateRecord",
    "Union",
    "WeightVector",
    "QuotaSpec",
    "load_union",
    "load_eu27",
    "eu27_path",
    "sqrt_weights",
    "normalize",
    "jagcom_quota",
]

# Populations are stored as exact person counts; weights divide by 10^6
# before the square root so that sqrt-weights print on the familiar scale.
POPULATION_SCALE = 10**6

_POPULATION_RE = re.compile(r"^[0-9]+$")


@dataclass(frozen=True)
class StateRecord:
    """One state: a unique name and an exact positive person count."""

    name: str
    population: int


@dataclass(frozen=True)
class Union:
    """Ordered roster of states under analysis."""

    states: tuple[StateRecord, ...]

    def __post_init__(self):
        if not self.states:
            raise DatasetError("a union needs at least one state")
        seen = set()
        for rec in self.states:
            if not rec.name:
                raise DatasetError("state names must be non-empty")
            if rec.name in seen:
                raise DatasetError(f"duplicate state name: {rec.name!r}")
            seen.add(rec.name)
            if not isinstance(rec.population, int) or rec.population < 1:
                raise DatasetError(
                    f"population of {rec.name!r} must be a positive integer"
                )

    def __len__(self) -> int:
        return len(self.states)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(rec.name for rec in self.states)

    @property
    def populations(self) -> tuple[int, ...]:
        return tuple(rec.population for rec in self.states)

    @property
    def total_population(self) -> int:
        return sum(rec.population for rec in self.states)


@dataclass(frozen=True)
class WeightVector:
    """Positive council weights aligned with a union's state order."""

    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("weight vector must be non-empty")
        for w in self.weights:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError("weights must be positive finite reals")

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, j: int) -> float:
        return self.weights[j]

    @property
    def total(self) -> float:
        """Aggregate weight, compensated summation."""
        return math.fsum(self.weights)


_PROVENANCES = ("zero", "jagcom-star", "explicit")


@dataclass(frozen=True)
class QuotaSpec:
    """Pass threshold as a fraction of total weight: a motion passes iff the
    weighted vote sum exceeds q times the aggregate weight."""

    q: float
    provenance: str = "explicit"

    def __post_init__(self):
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"unknown quota provenance: {self.provenance!r}")
        if not math.isfinite(self.q):
            raise ValueError("quota must be finite")

    @classmethod
    def zero(cls) -> "QuotaSpec":
        return cls(0.0, "zero")

    @classmethod
    def explicit(cls, q: float) -> "QuotaSpec":
        return cls(float(q), "explicit")


def load_union(source: str | Path | IO[str] | Iterable[str]) -> Union:
    """Read a union from delimited text with header ``name,population``.

    Accepts a path or an open text stream.  Row order is preserved, fields
    are stripped of surrounding whitespace, populations must be plain
    base-10 positive integers (no grouping separators).

    Raises:
        DatasetError: empty input, bad header, malformed row (reported with
            its line number), non-positive or non-integer population, or a
            duplicate state name.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _parse_union(fh)
    return _parse_union(source)


def _parse_union(stream: Iterable[str]) -> Union:
    reader = csv.reader(stream)
    header = None
    records = []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = [cell.strip() for cell in row]
            if header != ["name", "population"]:
                raise DatasetError(
                    f"line {lineno}: expected header 'name,population', "
                    f"got {','.join(header)!r}"
                )
            continue
        if len(row) != 2:
            raise DatasetError(f"line {lineno}: expected 2 fields, got {len(row)}")
        name = row[0].strip()
        pop_text = row[1].strip()
        if not name:
            raise DatasetError(f"line {lineno}: empty state name")
        if not _POPULATION_RE.match(pop_text):
            raise DatasetError(
                f"line {lineno}: population must be a base-10 integer, "
                f"got {pop_text!r}"
            )
        population = int(pop_text)
        if population < 1:
            raise DatasetError(f"line {lineno}: population must be >= 1")
        records.append(StateRecord(name, population))
    if header is None:
        raise DatasetError("empty dataset: no header row")
    if not records:
        raise DatasetError("empty dataset: no state rows")
    return Union(tuple(records))


def eu27_path() -> Path:
    """Filesystem path of the bundled EU27 QMV2017 dataset."""
    return Path(str(resources.files("twotier").joinpath("data/eu27_qmv2017.csv")))


def load_eu27() -> Union:
    return load_union(eu27_path())


def sqrt_weights(u: Union) -> WeightVector:
    """Square-root weights: w_j = sqrt(population_j in millions)."""
    return WeightVector(
        tuple(math.sqrt(rec.population / POPULATION_SCALE) for rec in u.states)
    )


def normalize(w: WeightVector) -> WeightVector:
    """Rescale entries to sum to 100."""
    total = w.total
    if not total > 0:
        raise ValueError("cannot normalise a weight vector with zero aggregate")
    return WeightVector(tuple(100.0 * x / total for x in w.weights))


def jagcom_quota(u: Union) -> QuotaSpec:
    """Quota placing the pass threshold at sqrt(total population) on the
    weight scale: q* = sqrt(sum N_j) / sum sqrt(N_j).

    Numerator and denominator both use populations in millions, matching
    :func:`sqrt_weights`; the ratio is unit-free.
    """
    millions = [rec.population / POPULATION_SCALE for rec in u.states]
    denominator = math.fsum(math.sqrt(x) for x in millions)
    return QuotaSpec(math.sqrt(math.fsum(millions)) / denominator, "jagcom-star")
