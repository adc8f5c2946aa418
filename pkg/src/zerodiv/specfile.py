"""Reading and writing ring spec files and custom partition files (JSON)."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import SpecError
from .ring import FiniteRing, RingSpec, build_from_spec

KINDS = ("Zn", "Product", "Presented", "Table")
FIELDS = ("kind", "n", "factors", "orders", "one", "mul", "add_table",
          "mul_table", "zero", "one_id", "labels", "name")


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def spec_from_dict(doc: dict, base: Path | None = None) -> RingSpec:
    if not isinstance(doc, dict):
        raise SpecError("ring spec must be a JSON object")
    unknown = set(doc) - set(FIELDS)
    if unknown:
        raise SpecError(f"unknown spec fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {KINDS}, got {kind!r}")
    required = {
        "Zn": ("n",),
        "Product": ("factors",),
        "Presented": ("orders", "one", "mul"),
        "Table": ("add_table", "mul_table", "zero", "one_id"),
    }[kind]
    missing = [k for k in required if k not in doc]
    if missing:
        raise SpecError(f"{kind} spec missing fields {missing}")
    factors = ()
    if kind == "Product":
        if not isinstance(doc["factors"], list) or not doc["factors"]:
            raise SpecError("Product spec needs a nonempty factors list")
        parts = []
        for f in doc["factors"]:
            if isinstance(f, str):
                path = (base / f) if base is not None else Path(f)
                parts.append(load_spec(path))
            else:
                parts.append(spec_from_dict(f, base))
        factors = tuple(parts)
    if kind == "Zn" and (not isinstance(doc["n"], int) or doc["n"] < 1):
        raise SpecError("Zn spec needs a positive integer n")
    if kind == "Presented":
        orders = doc["orders"]
        if not isinstance(orders, list) or not orders or any(
            not isinstance(d, int) or d < 1 for d in orders
        ):
            raise SpecError("orders must be a nonempty list of positive integers")
    labels = doc.get("labels")
    return RingSpec(
        kind=kind,
        n=doc.get("n"),
        factors=factors,
        orders=_tuplify(doc.get("orders", [])),
        one=_tuplify(doc.get("one", [])),
        mul=_tuplify(doc.get("mul", [])),
        add_table=_tuplify(doc.get("add_table", [])),
        mul_table=_tuplify(doc.get("mul_table", [])),
        zero=doc.get("zero"),
        one_id=doc.get("one_id"),
        labels=tuple(labels) if labels is not None else None,
        name=doc.get("name"),
    )


def spec_to_dict(spec: RingSpec) -> dict:
    out: dict = {"kind": spec.kind}
    if spec.name:
        out["name"] = spec.name
    if spec.kind == "Zn":
        out["n"] = spec.n
    elif spec.kind == "Product":
        out["factors"] = [spec_to_dict(f) for f in spec.factors]
    elif spec.kind == "Presented":
        out["orders"] = list(spec.orders)
        out["one"] = list(spec.one)
        out["mul"] = [[list(v) for v in row] for row in spec.mul]
    else:
        out["add_table"] = [list(r) for r in spec.add_table]
        out["mul_table"] = [list(r) for r in spec.mul_table]
        out["zero"] = spec.zero
        out["one_id"] = spec.one_id
    if spec.labels is not None and spec.kind != "Product":
        out["labels"] = list(spec.labels)
    return out


def dumps_spec(spec: RingSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=1, ensure_ascii=False) + "\n"


def load_spec(path) -> RingSpec:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}: not valid JSON ({e})") from e
    return spec_from_dict(doc, base=path.parent)


def load_ring(path, validate: bool = True) -> FiniteRing:
    """Parse and build the ring in a spec file; the file stem names it if unnamed."""
    spec = load_spec(path)
    try:
        A = build_from_spec(spec, validate=validate)
    except (ValueError, IndexError, TypeError) as e:
        raise SpecError(f"{path}: {e}") from e
    if not spec.name:
        object.__setattr__(A, "name", Path(path).stem)
    return A


def write_spec(spec: RingSpec, path) -> None:
    Path(path).write_text(dumps_spec(spec), encoding="utf-8")


def load_partition(path, order: int) -> list[list[int]]:
    """Custom partition file: a JSON list of blocks of element ids."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SpecError(f"cannot read partition {path}: {e}") from e
    validate_partition(doc, order)
    return [sorted(b) for b in doc]


def validate_partition(blocks, order: int) -> None:
    if not isinstance(blocks, list) or not all(isinstance(b, list) and b for b in blocks):
        raise SpecError("partition must be a list of nonempty lists")
    seen = [x for b in blocks for x in b]
    if any(not isinstance(x, int) for x in seen):
        raise SpecError("partition entries must be element ids")
    if sorted(seen) != list(range(order)):
        raise SpecError(f"blocks must partition 0..{order - 1} exactly once each")

