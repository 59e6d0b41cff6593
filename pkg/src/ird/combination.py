"""Combination functions and the add/subtract operations on IRDs.

Two rules are registered:

``independent``
    every merged path fails on its own; the dimension value is the usual
    ``1 - prod(p_outage)`` over the deduplicated path list.
``dedupe_by_key``
    paths sharing a value of ``key`` are treated as failing together. Within a
    group the joint failure probability is the smallest member outage
    (comonotone coupling), and groups are independent of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .algebra import IRD, DimensionValue, PathParam, outage_product
from .core_model import canonical

CF_NAMES = ("independent", "dedupe_by_key")


class CombinationError(ValueError):
    """Bad combination-function configuration or removal request."""


@dataclass(frozen=True)
class CombinationFunction:
    name: str = "independent"
    key: str | None = None

    def __post_init__(self):
        if self.name not in CF_NAMES:
            raise CombinationError(f"unknown combination function: {self.name!r}")
        if self.key is not None:
            object.__setattr__(self, "key", canonical(self.key))

    def evaluate(self, paths: Iterable[PathParam]) -> DimensionValue:
        """Dimension value of ``paths`` under this rule."""
        paths = tuple(paths)
        if not paths:
            raise CombinationError("dimension has no redundant path")
        if self.name == "independent":
            return DimensionValue(1.0 - outage_product(paths), paths)
        if not self.key:
            raise CombinationError("dedupe_by_key requires a key")
        groups: dict[tuple, list[float]] = {}
        for p in paths:
            value = p.params.get(self.key)
            tag = ("value", value) if value is not None else ("missing", p.path_id)
            groups.setdefault(tag, []).append(p.p_outage)
        joint = [min(v) for _, v in sorted(groups.items())]
        return DimensionValue(1.0 - math.prod(joint), paths)


INDEPENDENT = CombinationFunction("independent")


@dataclass(frozen=True)
class CfAssignment:
    default: CombinationFunction = INDEPENDENT
    per_dimension: Mapping[str, CombinationFunction] = field(default_factory=dict)

    def __post_init__(self):
        per = {canonical(k): v for k, v in dict(self.per_dimension).items()}
        object.__setattr__(self, "per_dimension", MappingProxyType(per))

    def for_dimension(self, name: str) -> CombinationFunction:
        return self.per_dimension.get(canonical(name), self.default)


def merge_paths(a: Iterable[PathParam], b: Iterable[PathParam]) -> tuple[PathParam, ...]:
    """Concatenate two path lists, keeping the first occurrence of each id."""
    seen: set[str] = set()
    out = []
    for p in (*a, *b):
        if p.path_id not in seen:
            seen.add(p.path_id)
            out.append(p)
    return tuple(out)


def combine_dimension(cf: CombinationFunction, a: DimensionValue, b: DimensionValue) -> DimensionValue:
    if not a.paths or not b.paths:
        raise CombinationError("cannot combine a dimension value without paths")
    return cf.evaluate(merge_paths(a.paths, b.paths))


def add(a: IRD, b: IRD, assignment: CfAssignment = CfAssignment()) -> IRD:
    dims = {}
    for name in sorted(set(a.dimensions) | set(b.dimensions)):
        if name in a.dimensions and name in b.dimensions:
            cf = assignment.for_dimension(name)
            dims[name] = combine_dimension(cf, a.dimensions[name], b.dimensions[name])
        else:
            dims[name] = a.dimensions.get(name) or b.dimensions[name]
    return IRD(dims)


def subtract(
    ird: IRD,
    removal: Iterable[tuple[str, str]],
    assignment: CfAssignment = CfAssignment(),
) -> IRD:
    """Remove paths from an IRD and re-evaluate the touched dimensions.

    ``removal`` lists ``(dimension, path_id)`` pairs. A dimension that loses
    its last path disappears from the result.
    """
    doomed: dict[str, set[str]] = {}
    for dim, pid in removal:
        dname, pid = canonical(dim), canonical(pid)
        if dname not in ird.dimensions:
            raise CombinationError(f"unknown dimension: {dim!r}")
        if pid not in {p.path_id for p in ird.dimensions[dname].paths}:
            raise CombinationError(f"unknown path id {pid!r} in dimension {dname!r}")
        doomed.setdefault(dname, set()).add(pid)

    dims = {}
    for name, value in ird.dimensions.items():
        if name not in doomed:
            dims[name] = value
            continue
        survivors = [p for p in value.paths if p.path_id not in doomed[name]]
        if survivors:
            dims[name] = assignment.for_dimension(name).evaluate(survivors)
    return IRD(dims)
