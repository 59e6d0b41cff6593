"""Dimension values, IRDs and their comparison.

Values are stored in *live* form: the probability that a dimension keeps at
least one working path. The outage form is always derived as ``1 - live``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .core_model import ModelError, SystemModel, canonical, validate_model


class ComparisonResult(enum.Enum):
    FIRST_HIGHER = "first-higher"
    SECOND_HIGHER = "second-higher"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _check_probability(p: float, what: str = "probability") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} out of range: {p!r}")
    return p


@dataclass(frozen=True)
class PathParam:
    path_id: str
    p_outage: float
    params: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "path_id", canonical(self.path_id))
        object.__setattr__(self, "p_outage", _check_probability(self.p_outage, "p_outage"))
        params = {canonical(k): str(v) for k, v in dict(self.params).items()}
        object.__setattr__(self, "params", MappingProxyType(params))

    def __eq__(self, other):
        if not isinstance(other, PathParam):
            return NotImplemented
        return (self.path_id, self.p_outage, dict(self.params)) == (
            other.path_id,
            other.p_outage,
            dict(other.params),
        )

    def __hash__(self):
        return hash((self.path_id, self.p_outage, tuple(sorted(self.params.items()))))


@dataclass(frozen=True)
class DimensionValue:
    live: float
    paths: tuple[PathParam, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "live", _check_probability(self.live, "live"))
        object.__setattr__(self, "paths", tuple(self.paths))

    def _key(self):
        return self.live, sorted(self.paths, key=lambda p: (p.path_id, p.p_outage))

    # path order carries no meaning, so equality treats paths as a multiset
    def __eq__(self, other):
        if not isinstance(other, DimensionValue):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.live, frozenset(self.paths)))

    @property
    def outage(self) -> float:
        return to_outage(self.live)


@dataclass(frozen=True)
class IRD:
    dimensions: Mapping[str, DimensionValue] = field(default_factory=dict)

    def __post_init__(self):
        dims = {}
        for name, value in dict(self.dimensions).items():
            cname = canonical(name)
            if not cname:
                raise ValueError("empty dimension name")
            if cname in dims:
                raise ValueError(f"duplicate dimension name: {cname!r}")
            dims[cname] = value
        object.__setattr__(self, "dimensions", MappingProxyType(dims))

    def __eq__(self, other):
        if not isinstance(other, IRD):
            return NotImplemented
        return dict(self.dimensions) == dict(other.dimensions)

    def __hash__(self):
        return hash(tuple(sorted(self.dimensions.items())))

    def __len__(self):
        return len(self.dimensions)

    def lives(self) -> dict[str, float]:
        return {k: v.live for k, v in self.dimensions.items()}


def outage_product(paths: Iterable[PathParam]) -> float:
    """Probability that every path is down, assuming independence.

    Factors are multiplied in (path_id, p_outage) order so the float result is
    identical for any permutation of ``paths``.
    """
    ordered = sorted(paths, key=lambda p: (p.path_id, p.p_outage))
    return math.prod(p.p_outage for p in ordered)


def dimension_value(paths: Iterable[PathParam]) -> DimensionValue:
    paths = tuple(paths)
    if not paths:
        raise ValueError("dimension has no redundant path")
    return DimensionValue(live=1.0 - outage_product(paths), paths=paths)


def to_outage(live: float) -> float:
    """Outage probability of a dimension given its live probability.

    ``to_live(to_outage(v)) == v`` holds exactly for every ``v`` on the
    2**-53 lattice, which includes anything drawn by :mod:`random` or by
    :func:`ird.rng.uniform01`.
    """
    return 1.0 - _check_probability(live, "live")


def to_live(outage: float) -> float:
    return 1.0 - _check_probability(outage, "outage")


def ird_of_model(model: SystemModel) -> IRD:
    violations = validate_model(model)
    if violations:
        raise ModelError("; ".join(str(v) for v in violations))
    dims = {}
    for name, paths in model.dimensions.items():
        params = [PathParam(p.id, p.p_outage, model.path_attributes(p)) for p in paths]
        dims[name] = dimension_value(params)
    return IRD(dims)


def ird_from_outages(outages: Mapping[str, float]) -> IRD:
    """Build an IRD from per-dimension outage probabilities.

    Each dimension gets a single synthetic path named after it, which is how
    outage-form profiles such as ``{"d1": 0.001, "d2": 0.005}`` are brought
    into live form.
    """
    return IRD({name: dimension_value([PathParam(name, p)]) for name, p in outages.items()})


def compare(a: IRD, b: IRD) -> ComparisonResult:
    """Rank two IRDs by their weakest dimensions.

    Presence is decided first: an IRD whose dimension set is a strict subset
    of the other's has fewer ways to fail and ranks higher; if each side has a
    dimension the other lacks they are incomparable. With equal dimension
    sets, sorted live values are compared from the smallest upward and the
    first difference decides.
    """
    da, db = set(a.dimensions), set(b.dimensions)
    if da < db:
        return ComparisonResult.FIRST_HIGHER
    if db < da:
        return ComparisonResult.SECOND_HIGHER
    if da != db:
        return ComparisonResult.INCOMPARABLE
    for va, vb in zip(sorted(a.lives().values()), sorted(b.lives().values())):
        if va < vb:
            return ComparisonResult.SECOND_HIGHER
        if va > vb:
            return ComparisonResult.FIRST_HIGHER
    return ComparisonResult.EQUAL


def weakest_dimension(ird: IRD) -> tuple[str, float]:
    if not ird.dimensions:
        raise ValueError("IRD has no dimension")
    name = min(ird.dimensions, key=lambda n: (ird.dimensions[n].live, n))
    return name, ird.dimensions[name].live
