"""Systems as dimensioned collections of redundant processing paths.

A :class:`SystemModel` groups :class:`RedundancyPath` objects under named
dimensions. Each path is a chain of components; components carry free-form
attributes (``lab``, ``city``, ``os`` ...) and two paths are *coherent* as soon
as they share a component or any (attribute, value) pair.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Iterable, Mapping

COMPONENT_KINDS = ("hardware", "software", "network", "power", "location", "license", "other")
DIMENSION_SCOPES = ("space", "time", "layer", "dependence", "other")

# separator used when a path's components disagree on one attribute
MULTI_VALUE_SEP = "|"


class ModelError(ValueError):
    """A model that breaks one of its invariants."""


class SchemaError(ValueError):
    """A JSON document with missing, unknown or mistyped fields."""


def check_fields(doc, required: Iterable[str], optional: Iterable[str] = (), where: str = "document") -> dict:
    """Validate the field set of a decoded JSON object and return it."""
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object, got {type(doc).__name__}")
    required = tuple(required)
    allowed = set(required) | set(optional)
    for name in doc:
        if name not in allowed:
            raise SchemaError(f"{where}: unknown field {name!r}")
    for name in required:
        if name not in doc:
            raise SchemaError(f"{where}: missing field {name!r}")
    return doc


def canonical(name: str) -> str:
    """Trimmed, lowercased, NFC-normalized form of ``name``."""
    return unicodedata.normalize("NFC", name.strip().lower())


@dataclass(frozen=True)
class ComponentRef:
    id: str
    kind: str = "other"
    attributes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "id", canonical(self.id))
        attrs = {canonical(k): str(v) for k, v in dict(self.attributes).items()}
        object.__setattr__(self, "attributes", MappingProxyType(attrs))


@dataclass(frozen=True)
class RedundancyPath:
    id: str
    components: tuple[str, ...]
    p_outage: float

    def __post_init__(self):
        object.__setattr__(self, "id", canonical(self.id))
        object.__setattr__(self, "components", tuple(canonical(c) for c in self.components))
        object.__setattr__(self, "p_outage", float(self.p_outage))


@dataclass(frozen=True)
class Dimension:
    name: str
    scope: str = "other"
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "name", canonical(self.name))


@dataclass(frozen=True)
class SystemModel:
    """A named system: dimensions, each holding its redundant paths.

    ``dimensions`` maps a canonical dimension name to its list of paths;
    ``dimension_info`` keeps the scope/description of each dimension.
    """

    name: str
    dimensions: Mapping[str, tuple[RedundancyPath, ...]]
    components: Mapping[str, ComponentRef]
    dimension_info: Mapping[str, Dimension] = field(default_factory=dict)
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        dims = {canonical(k): tuple(v) for k, v in dict(self.dimensions).items()}
        object.__setattr__(self, "dimensions", MappingProxyType(dims))
        comps = {c.id: c for c in dict(self.components).values()}
        object.__setattr__(self, "components", MappingProxyType(comps))
        info = {canonical(k): v for k, v in dict(self.dimension_info).items()}
        for name in dims:
            info.setdefault(name, Dimension(name))
        object.__setattr__(self, "dimension_info", MappingProxyType(info))

    def paths(self) -> Iterable[RedundancyPath]:
        for paths in self.dimensions.values():
            yield from paths

    def path(self, path_id: str) -> RedundancyPath:
        pid = canonical(path_id)
        for p in self.paths():
            if p.id == pid:
                return p
        raise KeyError(f"unknown path id: {path_id!r}")

    def coherence_keys(self, path: RedundancyPath) -> frozenset[tuple[str, str]]:
        """(attribute, value) pairs collected from the path's components."""
        keys = set()
        for cid in path.components:
            comp = self.components.get(cid)
            if comp is not None:
                keys.update(comp.attributes.items())
        return frozenset(keys)

    def path_attributes(self, path: RedundancyPath) -> dict[str, str]:
        """Coherence keys folded into one value per attribute.

        When components of a path disagree, values are sorted and joined with
        ``|`` so the result is still a single, deterministic string.
        """
        values: dict[str, set[str]] = {}
        for k, v in self.coherence_keys(path):
            values.setdefault(k, set()).add(v)
        return {k: MULTI_VALUE_SEP.join(sorted(vs)) for k, vs in sorted(values.items())}


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str

    def __str__(self):
        return f"{self.entity}: {self.rule}"


@dataclass(frozen=True)
class CoherenceReport:
    path_a: str
    path_b: str
    shared_keys: frozenset[tuple[str, str]]
    shared_components: frozenset[str]

    @property
    def verdict(self) -> str:
        if self.shared_keys or self.shared_components:
            return "coherent"
        return "independent"


def validate_model(model: SystemModel) -> list[Violation]:
    """Return every invariant violation in ``model``; empty means well formed."""
    out: list[Violation] = []
    for cid, comp in model.components.items():
        if not cid:
            out.append(Violation("component", "empty component id"))
        if comp.kind not in COMPONENT_KINDS:
            out.append(Violation(f"component {cid}", f"unknown kind {comp.kind!r}"))
    if not model.dimensions:
        out.append(Violation(f"model {model.name}", "model has no dimension"))
    seen: dict[str, str] = {}
    for dname, paths in model.dimensions.items():
        if not dname:
            out.append(Violation("dimension", "empty dimension name"))
        scope = model.dimension_info[dname].scope
        if scope not in DIMENSION_SCOPES:
            out.append(Violation(f"dimension {dname}", f"unknown scope {scope!r}"))
        if not paths:
            out.append(Violation(f"dimension {dname}", "dimension has no redundant path"))
        for p in paths:
            if not p.id:
                out.append(Violation(f"dimension {dname}", "empty path id"))
            if p.id in seen:
                out.append(Violation(f"path {p.id}", "duplicate path id"))
            seen[p.id] = dname
            if not 0.0 <= p.p_outage <= 1.0:
                out.append(Violation(f"path {p.id}", "probability out of range"))
            if not p.components:
                out.append(Violation(f"path {p.id}", "path has no component"))
            for cid in p.components:
                if cid not in model.components:
                    out.append(Violation(f"path {p.id}", f"unknown component {cid!r}"))
    return out


def check_independence(model: SystemModel, path_a: str, path_b: str) -> CoherenceReport:
    """Structural independence test between two paths.

    Two paths are independent iff they share no component id and no
    (attribute, value) pair. Ids in the report are sorted so the result does
    not depend on argument order.
    """
    a, b = model.path(path_a), model.path(path_b)
    if b.id < a.id:
        a, b = b, a
    return CoherenceReport(
        path_a=a.id,
        path_b=b.id,
        shared_keys=model.coherence_keys(a) & model.coherence_keys(b),
        shared_components=frozenset(a.components) & frozenset(b.components),
    )


def coherence_groups(model: SystemModel, dimension: str, key: str) -> list[list[str]]:
    """Partition a dimension's paths by their value of ``key``.

    Paths lacking the attribute each form their own group. Groups are listed
    in order of first appearance; members keep the dimension's path order.
    """
    dname = canonical(dimension)
    if dname not in model.dimensions:
        raise KeyError(f"unknown dimension: {dimension!r}")
    key = canonical(key)
    groups: dict[Any, list[str]] = {}
    for p in model.dimensions[dname]:
        value = model.path_attributes(p).get(key)
        tag = ("value", value) if value is not None else ("missing", p.id)
        groups.setdefault(tag, []).append(p.id)
    return list(groups.values())
