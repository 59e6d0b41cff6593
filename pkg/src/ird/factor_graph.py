"""Singleness factors, their relations, scope expansion and coverage audit."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Mapping

from .core_model import ModelError, SystemModel, canonical, check_fields, coherence_groups, validate_model

AXES = ("space", "time", "layer", "dependence")
RELATION_KINDS = ("contains", "depends_on", "time_coherent")
DEFAULT_TIME_WINDOW = timedelta(seconds=86400)


class KnowledgeBaseError(ValueError):
    pass


@dataclass(frozen=True)
class SinglenessFactor:
    id: str
    label: str = ""
    axis: str = "space"
    origin: str = "declared"
    derived_from: tuple[str, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "id", canonical(self.id))
        if self.axis not in AXES:
            raise KnowledgeBaseError(f"factor {self.id!r}: unknown axis {self.axis!r}")
        if (self.origin == "derived") != (self.derived_from is not None):
            raise KnowledgeBaseError(f"factor {self.id!r}: derived_from must be set iff derived")


@dataclass(frozen=True)
class FactorRelation:
    kind: str
    source: str
    target: str

    def __post_init__(self):
        object.__setattr__(self, "source", canonical(self.source))
        object.__setattr__(self, "target", canonical(self.target))
        if self.kind not in RELATION_KINDS:
            raise KnowledgeBaseError(f"unknown relation kind {self.kind!r}")
        if self.source == self.target:
            raise KnowledgeBaseError(f"self-loop on {self.source!r}")


@dataclass(frozen=True)
class KnowledgeBase:
    factors: Mapping[str, SinglenessFactor]
    relations: tuple[FactorRelation, ...] = ()
    key_bindings: Mapping[str, str] = field(default_factory=dict)
    version: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", MappingProxyType(dict(self.factors)))
        object.__setattr__(self, "relations", tuple(self.relations))
        bindings = {canonical(k): canonical(v) for k, v in dict(self.key_bindings).items()}
        object.__setattr__(self, "key_bindings", MappingProxyType(bindings))
        for rel in self.relations:
            for end in (rel.source, rel.target):
                if end not in self.factors:
                    raise KnowledgeBaseError(f"relation endpoint {end!r} is not a known factor")
        for fid in bindings:
            if fid not in self.factors:
                raise KnowledgeBaseError(f"key binding for unknown factor {fid!r}")
        cycle = _find_contains_cycle(self.relations)
        if cycle:
            raise KnowledgeBaseError("contains relations form a cycle: " + " -> ".join(cycle))

    def neighbours(self, fid: str) -> list[tuple[str, str]]:
        """(neighbour id, relation kind) pairs reachable from ``fid`` in one step.

        ``contains`` is walked both ways (broader and narrower scope),
        ``depends_on`` only forward, ``time_coherent`` both ways.
        """
        out = []
        for rel in self.relations:
            if rel.kind == "depends_on":
                if rel.source == fid:
                    out.append((rel.target, rel.kind))
            elif rel.source == fid:
                out.append((rel.target, rel.kind))
            elif rel.target == fid:
                out.append((rel.source, rel.kind))
        return sorted(set(out), key=lambda t: (t[0], RELATION_KINDS.index(t[1])))


def _find_contains_cycle(relations: Iterable[FactorRelation]) -> list[str] | None:
    children: dict[str, list[str]] = {}
    for rel in relations:
        if rel.kind == "contains":
            children.setdefault(rel.source, []).append(rel.target)
    state: dict[str, int] = {}

    def visit(node, trail):
        state[node] = 1
        for child in sorted(children.get(node, ())):
            if state.get(child) == 1:
                return trail + [node, child]
            if child not in state:
                found = visit(child, trail + [node])
                if found:
                    return found
        state[node] = 2
        return None

    for node in sorted(children):
        if node not in state:
            found = visit(node, [])
            if found:
                return found
    return None


def kb_from_dict(doc: Mapping) -> KnowledgeBase:
    check_fields(doc, ["factors"], ["version", "relations", "key_bindings"], "knowledge base")
    factors = {}
    for entry in doc["factors"]:
        check_fields(entry, ["id"], ["label", "axis"], "factor")
        f = SinglenessFactor(entry["id"], entry.get("label", ""), entry.get("axis", "space"))
        if f.id in factors:
            raise KnowledgeBaseError(f"duplicate factor id {f.id!r}")
        factors[f.id] = f
    for r in doc.get("relations", []):
        check_fields(r, ["kind", "from", "to"], where="relation")
    relations = [FactorRelation(r["kind"], r["from"], r["to"]) for r in doc.get("relations", [])]
    return KnowledgeBase(factors, tuple(relations), doc.get("key_bindings", {}), doc.get("version", ""))


def kb_to_dict(kb: KnowledgeBase) -> dict:
    return {
        "version": kb.version,
        "factors": [{"id": f.id, "label": f.label, "axis": f.axis} for f in kb.factors.values()],
        "relations": [{"kind": r.kind, "from": r.source, "to": r.target} for r in kb.relations],
        "key_bindings": dict(kb.key_bindings),
    }


def default_kb_text() -> str:
    return resources.files("ird.data").joinpath("default_kb.json").read_text(encoding="utf-8")


def default_kb() -> KnowledgeBase:
    return kb_from_dict(json.loads(default_kb_text()))


def expand(declared: Iterable[str], kb: KnowledgeBase) -> list[SinglenessFactor]:
    """Close a set of declared factors over the knowledge-base relations.

    Breadth-first from the declared ids (sorted); every newly reached factor is
    tagged ``derived`` with the factor and relation kind it was reached from.
    """
    start = sorted({canonical(d) for d in declared})
    for fid in start:
        if fid not in kb.factors:
            raise KeyError(f"unknown factor id: {fid!r}")
    found: dict[str, SinglenessFactor] = {}
    queue = deque()
    for fid in start:
        base = kb.factors[fid]
        found[fid] = SinglenessFactor(fid, base.label, base.axis)
        queue.append(fid)
    while queue:
        fid = queue.popleft()
        for nid, kind in kb.neighbours(fid):
            if nid in found:
                continue
            base = kb.factors[nid]
            found[nid] = SinglenessFactor(nid, base.label, base.axis, "derived", (fid, kind))
            queue.append(nid)
    return list(found.values())


@dataclass(frozen=True)
class CoverageEntry:
    factor: str
    status: str
    evidence: tuple[tuple[str, ...], ...] = ()


@dataclass(frozen=True)
class CoverageReport:
    factors: tuple[SinglenessFactor, ...]
    entries: tuple[CoverageEntry, ...]

    def status(self, fid: str) -> str:
        fid = canonical(fid)
        for e in self.entries:
            if e.factor == fid:
                return e.status
        raise KeyError(fid)

    @property
    def uncovered(self) -> list[str]:
        return [e.factor for e in self.entries if e.status == "uncovered"]


def _parse_instant(value: str) -> datetime:
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def _path_expiry(model: SystemModel, path, key: str) -> datetime | None:
    values = [v for k, v in model.coherence_keys(path) if k == key]
    if not values:
        return None
    return min(_parse_instant(v) for v in values)


def _audit_factor(model: SystemModel, factor: SinglenessFactor, key: str, window: timedelta) -> CoverageEntry:
    fallback: tuple[tuple[str, ...], ...] = ()
    seen_key = False
    for dname in sorted(model.dimensions):
        paths = model.dimensions[dname]
        carrying = {p.id for p in paths if key in model.path_attributes(p)}
        if not carrying:
            continue
        seen_key = True
        groups = tuple(tuple(g) for g in coherence_groups(model, dname, key) if g[0] in carrying)
        if len(groups) >= 2:
            if factor.axis != "time":
                return CoverageEntry(factor.id, "covered", groups)
            expiries = [_path_expiry(model, p, key) for p in paths if p.id in carrying]
            if max(expiries) - min(expiries) > window:
                return CoverageEntry(factor.id, "covered", groups)
        if not fallback:
            fallback = groups
    if not seen_key:
        return CoverageEntry(factor.id, "unknown")
    return CoverageEntry(factor.id, "uncovered", fallback)


def audit(
    model: SystemModel,
    kb: KnowledgeBase,
    declared: Iterable[str],
    time_window: timedelta = DEFAULT_TIME_WINDOW,
) -> CoverageReport:
    """Check which expanded singleness factors the model has redundancy against.

    A factor is covered when some dimension holds at least two paths that
    carry the bound attribute with different values; for time-axis factors
    those expiry instants must also be more than ``time_window`` apart. A
    factor without a key binding, or whose attribute no path carries, is
    reported as unknown.
    """
    violations = validate_model(model)
    if violations:
        raise ModelError("; ".join(str(v) for v in violations))
    factors = expand(declared, kb)
    entries = []
    for f in factors:
        key = kb.key_bindings.get(f.id)
        if key is None:
            entries.append(CoverageEntry(f.id, "unknown"))
        else:
            entries.append(_audit_factor(model, f, key, time_window))
    return CoverageReport(tuple(factors), tuple(entries))
