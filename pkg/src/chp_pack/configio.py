"""Reading and writing packing configurations as versioned JSON.

Coordinates are printed at 17 significant digits, which round-trips
IEEE doubles exactly, and the writer emits keys in a fixed order so
identical configurations produce identical bytes.
"""

from __future__ import annotations

import json
import math
import os
from typing import IO, List, Optional, Union

import numpy as np

from .builder import PackingConfiguration
from .chp import CIRCLE
from .errors import ParseError, SchemaMismatch
from .geometry import PolygonSpec

SCHEMA_VERSION = "chp-pack/1"

_PROVENANCE_KEYS = ("mode", "seed", "trial", "params", "theta", "scale", "refine_drift", "refine_stability")


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in output")
    return format(float(x), ".17g")


def _json_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt(float(v))
    return json.dumps(str(v))


def dumps_config(config: PackingConfiguration) -> str:
    """Serialize to the v1 document with deterministic bytes."""
    meta = config.meta or {}
    sigma = config.sigma
    lines: List[str] = ["{"]
    lines.append(f'  "schema_version": {json.dumps(SCHEMA_VERSION)},')
    lines.append(f'  "sigma": {json.dumps(sigma) if isinstance(sigma, str) else int(sigma)},')
    if "k" in meta:
        lines.append(f'  "k": {int(meta["k"])},')
    lines.append(f'  "n_disks": {config.n_disks},')
    lines.append(f'  "diameter": {_fmt(config.diameter)},')
    lines.append('  "centers": [')
    last = config.n_disks - 1
    for i, (x, y) in enumerate(np.asarray(config.centers, dtype=float)):
        comma = "," if i != last else ""
        lines.append(f"    [{_fmt(x)}, {_fmt(y)}]{comma}")
    lines.append("  ],")
    if "dna" in meta and meta["dna"] is not None:
        lines.append(f'  "dna": {json.dumps(str(meta["dna"]))},')
    prov: List[str] = []
    for key in _PROVENANCE_KEYS:
        if key not in meta or meta[key] is None:
            continue
        val = meta[key]
        if key == "params" and not isinstance(val, str):
            items = val if isinstance(val, dict) else vars(val)
            inner = ", ".join(f"{json.dumps(k)}: {_json_scalar(items[k])}" for k in sorted(items))
            prov.append(f'{json.dumps(key)}: {{{inner}}}')
        else:
            prov.append(f"{json.dumps(key)}: {_json_scalar(val)}")
    lines.append('  "provenance": {' + ", ".join(prov) + "}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_config(config: PackingConfiguration, dest: Union[str, os.PathLike, IO[str]]) -> None:
    text = dumps_config(config)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _require(doc: dict, field: str):
    if field not in doc:
        raise ParseError(f"field {field!r} is missing")
    return doc[field]


def loads_config(text: str) -> PackingConfiguration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}")

    sigma = _require(doc, "sigma")
    if sigma == CIRCLE:
        spec: Optional[PolygonSpec] = None
    elif isinstance(sigma, int) and not isinstance(sigma, bool) and sigma >= 3:
        spec = PolygonSpec(sigma, 0.0)
    else:
        raise ParseError(f"field 'sigma': expected an integer >= 3 or \"circle\", got {sigma!r}")

    n = _require(doc, "n_disks")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"field 'n_disks': expected a positive integer, got {n!r}")
    diameter = _require(doc, "diameter")
    if not isinstance(diameter, (int, float)) or isinstance(diameter, bool) or not diameter > 0:
        raise ParseError(f"field 'diameter': expected a positive number, got {diameter!r}")

    raw = _require(doc, "centers")
    if not isinstance(raw, list) or len(raw) != n:
        count = len(raw) if isinstance(raw, list) else "non-list"
        raise ParseError(f"field 'centers': expected {n} pairs, got {count}")
    centers = np.empty((n, 2), dtype=float)
    for i, item in enumerate(raw):
        if (not isinstance(item, list)) or len(item) != 2 or any(
            isinstance(c, bool) or not isinstance(c, (int, float)) for c in item
        ):
            raise ParseError(f"field 'centers[{i}]': expected [x, y] numbers, got {item!r}")
        centers[i] = (float(item[0]), float(item[1]))
    if not np.all(np.isfinite(centers)):
        raise ParseError("field 'centers': coordinates must be finite")

    meta: dict = {}
    if "k" in doc:
        meta["k"] = doc["k"]
    if "dna" in doc and doc["dna"] is not None:
        meta["dna"] = doc["dna"]
    prov = doc.get("provenance", {})
    if prov and not isinstance(prov, dict):
        raise ParseError(f"field 'provenance': expected an object, got {prov!r}")
    meta.update(prov)
    return PackingConfiguration(spec=spec, centers=centers, diameter=float(diameter), meta=meta)


def read_config(src: Union[str, os.PathLike, IO[str]]) -> PackingConfiguration:
    if hasattr(src, "read"):
        return loads_config(src.read())
    with open(src, "r", encoding="utf-8") as fh:
        return loads_config(fh.read())
