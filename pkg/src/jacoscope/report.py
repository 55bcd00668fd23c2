"""JSON report assembly (schema ``jacoscope-report/1``)."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .config import RunConfig
from .criteria.results import Verdict
from .parser import print_poly
from .polycore import PolyMap, default_names

SCHEMA_ID = "jacoscope-report/1"

_CRITERION = {
    "type": "object",
    "required": ["name", "status", "exactness", "certificate", "one_sided", "evidence"],
    "properties": {
        "name": {"enum": ["jacobian", "degree-bound", "braun", "cima", "properness"]},
        "status": {"enum": ["holds", "fails", "inconclusive"]},
        "exactness": {"enum": ["exact", "numeric"]},
        "certificate": {"type": "object"},
        "one_sided": {"type": "boolean"},
        "evidence": {"enum": ["computed", "literature"]},
    },
    "additionalProperties": False,
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "map", "normalization", "verdict", "chain", "config", "seed"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "map": {
            "type": "object",
            "required": ["variables", "components", "text"],
            "properties": {
                "variables": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "components": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "names": {"type": "array", "items": {"type": "string"}},
                "text": {"type": "string"},
            },
        },
        "normalization": {
            "type": "object",
            "required": ["translation", "applied"],
            "properties": {
                "translation": {"type": "array", "items": {"type": "string"}},
                "applied": {"type": "boolean"},
            },
        },
        "verdict": {
            "type": "object",
            "required": ["outcome", "decided_by", "invalid_hypothesis", "notes"],
            "properties": {
                "outcome": {"enum": ["Injective", "NotInjective", "Unknown"]},
                "decided_by": {"type": ["string", "null"]},
                "invalid_hypothesis": {"type": "boolean"},
                "notes": {"type": "array", "items": {"type": "string"}},
            },
        },
        "chain": {"type": "array", "items": _CRITERION, "minItems": 1},
        "config": {"type": "object"},
        "seed": {"type": "integer"},
        "monodromy": {
            "type": ["object", "null"],
            "required": ["verdict", "probes", "config"],
            "properties": {"verdict": {"enum": ["Monodromic", "NotMonodromic", "Inconclusive"]}},
        },
        "oracle": {
            "type": ["object", "null"],
            "required": ["witnesses"],
            "properties": {
                "witnesses": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["p", "q", "residual", "separation"],
                    },
                }
            },
        },
    },
    "additionalProperties": False,
}


def jsonable(obj: Any) -> Any:
    """Convert Fractions, numpy scalars, tuples and non-finite floats into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


def map_block(F: PolyMap) -> dict:
    from .parser import print_map

    names = default_names(F.n)
    return {
        "variables": list(names),
        "components": [print_poly(p, names) for p in F],
        "names": list(F.names) if F.names else [],
        "text": print_map(F, vars=names),
    }


def build_report(F: PolyMap, verdict: Verdict, config: RunConfig) -> dict:
    return jsonable({
        "schema": SCHEMA_ID,
        "map": map_block(F),
        "normalization": verdict.normalization,
        "verdict": verdict.to_dict(),
        "chain": [r.to_dict() for r in verdict.chain],
        "config": config.to_dict(),
        "seed": config.seed,
        "monodromy": verdict.monodromy,
        "oracle": verdict.oracle,
    })


def dumps(report: dict) -> str:
    """Byte-stable serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"
