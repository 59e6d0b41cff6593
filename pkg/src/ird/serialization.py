"""JSON documents: system models, IRDs, combination-function assignments.

Output is canonical (dimensions sorted by name, paths by id, two-space
indent, trailing newline) so the same value always produces the same bytes.
Floats are written with :func:`repr`, the shortest text that reads back to the
identical double.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from .algebra import IRD, DimensionValue, PathParam
from .combination import CfAssignment, CombinationFunction
from .core_model import (
    ComponentRef,
    Dimension,
    ModelError,
    RedundancyPath,
    SchemaError,
    SystemModel,
    check_fields,
)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _string(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a string, got {value!r}")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array")
    return value


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- system model ------------------------------------------------------------


def model_from_dict(doc: Mapping) -> SystemModel:
    check_fields(doc, ["name", "components", "dimensions"], ["metadata"], "model")
    components: dict[str, ComponentRef] = {}
    for i, c in enumerate(_list(doc["components"], "components")):
        check_fields(c, ["id"], ["kind", "attributes"], f"components[{i}]")
        attrs = c.get("attributes", {})
        if not isinstance(attrs, dict):
            raise SchemaError(f"components[{i}].attributes: expected an object")
        comp = ComponentRef(_string(c["id"], f"components[{i}].id"), c.get("kind", "other"), attrs)
        if comp.id in components:
            raise ModelError(f"component {comp.id}: duplicate component id")
        components[comp.id] = comp

    dims: dict[str, list[RedundancyPath]] = {}
    info: dict[str, Dimension] = {}
    for i, d in enumerate(_list(doc["dimensions"], "dimensions")):
        where = f"dimensions[{i}]"
        check_fields(d, ["name", "paths"], ["scope", "description"], where)
        dim = Dimension(_string(d["name"], f"{where}.name"), d.get("scope", "other"), d.get("description", ""))
        if dim.name in dims:
            raise ModelError(f"dimension {dim.name}: duplicate dimension name")
        info[dim.name] = dim
        dims[dim.name] = []
        for j, p in enumerate(_list(d["paths"], f"{where}.paths")):
            pw = f"{where}.paths[{j}]"
            check_fields(p, ["id", "components", "p_outage"], where=pw)
            comps = [_string(c, f"{pw}.components") for c in _list(p["components"], f"{pw}.components")]
            dims[dim.name].append(RedundancyPath(_string(p["id"], f"{pw}.id"), tuple(comps), _number(p["p_outage"], f"{pw}.p_outage")))
    return SystemModel(doc["name"], dims, components, info, doc.get("metadata", {}))


def model_to_dict(model: SystemModel) -> dict:
    doc: dict[str, Any] = {
        "name": model.name,
        "components": [
            {"id": c.id, "kind": c.kind, "attributes": dict(sorted(c.attributes.items()))}
            for c in sorted(model.components.values(), key=lambda c: c.id)
        ],
        "dimensions": [],
    }
    for name in sorted(model.dimensions):
        dim = model.dimension_info[name]
        entry: dict[str, Any] = {"name": name, "scope": dim.scope}
        if dim.description:
            entry["description"] = dim.description
        entry["paths"] = [
            {"id": p.id, "components": list(p.components), "p_outage": p.p_outage} for p in model.dimensions[name]
        ]
        doc["dimensions"].append(entry)
    if model.metadata:
        doc["metadata"] = dict(model.metadata)
    return doc


# --- IRD -----------------------------------------------------------------------


def ird_from_dict(doc: Mapping) -> IRD:
    check_fields(doc, ["dimensions"], where="ird")
    dims = {}
    for i, d in enumerate(_list(doc["dimensions"], "dimensions")):
        where = f"dimensions[{i}]"
        check_fields(d, ["name", "live", "paths"], where=where)
        paths = []
        for j, p in enumerate(_list(d["paths"], f"{where}.paths")):
            pw = f"{where}.paths[{j}]"
            check_fields(p, ["path_id", "p_outage"], ["params"], pw)
            params = p.get("params", {})
            if not isinstance(params, dict):
                raise SchemaError(f"{pw}.params: expected an object")
            paths.append(PathParam(_string(p["path_id"], f"{pw}.path_id"), _number(p["p_outage"], f"{pw}.p_outage"), params))
        name = _string(d["name"], f"{where}.name")
        if name in dims:
            raise ModelError(f"dimension {name}: duplicate dimension name")
        dims[name] = DimensionValue(_number(d["live"], f"{where}.live"), tuple(paths))
    return IRD(dims)


def ird_to_dict(ird: IRD) -> dict:
    dims = []
    for name in sorted(ird.dimensions):
        value = ird.dimensions[name]
        paths = sorted(value.paths, key=lambda p: (p.path_id, p.p_outage))
        dims.append(
            {
                "name": name,
                "live": value.live,
                "paths": [
                    {"path_id": p.path_id, "p_outage": p.p_outage, "params": dict(sorted(p.params.items()))}
                    for p in paths
                ],
            }
        )
    return {"dimensions": dims}


def removal_from_dict(doc: Mapping) -> list[tuple[str, str]]:
    """Paths to subtract: either ``{"remove": [{dimension, path_id}]}`` or a
    whole IRD document, meaning every path it lists."""
    if isinstance(doc, dict) and "remove" in doc:
        check_fields(doc, ["remove"], where="removal")
        out = []
        for i, r in enumerate(_list(doc["remove"], "remove")):
            check_fields(r, ["dimension", "path_id"], where=f"remove[{i}]")
            out.append((_string(r["dimension"], f"remove[{i}].dimension"), _string(r["path_id"], f"remove[{i}].path_id")))
        return out
    ird = ird_from_dict(doc)
    return [(name, p.path_id) for name, v in ird.dimensions.items() for p in v.paths]


# --- combination-function assignment -------------------------------------------


def _cf_from_dict(doc: Mapping, where: str) -> CombinationFunction:
    check_fields(doc, ["name"], ["key"], where)
    return CombinationFunction(doc["name"], doc.get("key"))


def cf_assignment_from_dict(doc: Mapping) -> CfAssignment:
    check_fields(doc, ["default"], ["per_dimension"], "cf assignment")
    per = doc.get("per_dimension", {})
    if not isinstance(per, dict):
        raise SchemaError("per_dimension: expected an object")
    return CfAssignment(
        _cf_from_dict(doc["default"], "default"),
        {name: _cf_from_dict(cf, f"per_dimension.{name}") for name, cf in per.items()},
    )


def _cf_to_dict(cf: CombinationFunction) -> dict:
    out = {"name": cf.name}
    if cf.key is not None:
        out["key"] = cf.key
    return out


def cf_assignment_to_dict(assignment: CfAssignment) -> dict:
    return {
        "default": _cf_to_dict(assignment.default),
        "per_dimension": {k: _cf_to_dict(v) for k, v in sorted(assignment.per_dimension.items())},
    }


def removal_to_dict(removal: Iterable[tuple[str, str]]) -> dict:
    return {"remove": [{"dimension": d, "path_id": p} for d, p in removal]}
