"""JSON (de)serialization for groups, bi-sets, complexes and twistings.

File formats, all plain JSON with 0-based indices:

* group:    {"name": str, "order": n, "mul": [[...]]} with identity index 0
* biset:    {"size": m, "right": [[...]], "left": [[...]]}
* complex:  {"vertices": n, "on_curve": [bool], "triangles": [[a,b,c]],
             "curve_edges": [[a,b]]} where triangle order encodes orientation
* twisting: {"N": n, "alpha": [[e]], "beta": [[e]], "gamma": [[e]]}
            with entries integer exponents mod N
"""

from __future__ import annotations

import json
from pathlib import Path

from defectsum.algebra import BiSet, FiniteGroup, verify_biset, verify_group
from defectsum.surfaces import SurfaceCurveComplex, validate
from defectsum.twisting import TwistingTriple
from defectsum.twisting import validate as validate_twisting


class FormatError(ValueError):
    pass


def _load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _dump(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def load_group(path) -> FiniteGroup:
    doc = _load(path)
    try:
        mul = doc["mul"]
        order = doc.get("order", len(mul))
    except (KeyError, TypeError) as err:
        raise FormatError(f"{path}: missing group fields: {err}") from err
    if order != len(mul):
        raise FormatError(f"{path}: order {order} != table size {len(mul)}")
    group = verify_group(mul, name=doc.get("name", ""))
    if group.identity != 0:
        raise FormatError(f"{path}: identity must be element 0, found {group.identity}")
    return group


def save_group(group: FiniteGroup, path) -> None:
    _dump(
        {"name": group.name, "order": group.order, "mul": [list(r) for r in group.mul]},
        path,
    )


def load_biset(path, group: FiniteGroup, curve_group: FiniteGroup) -> BiSet:
    doc = _load(path)
    try:
        right, left = doc["right"], doc["left"]
        size = doc.get("size", len(right))
    except (KeyError, TypeError) as err:
        raise FormatError(f"{path}: missing biset fields: {err}") from err
    if size != len(right):
        raise FormatError(f"{path}: size {size} != right table rows {len(right)}")
    return verify_biset(right, left, group, curve_group)


def save_biset(biset: BiSet, path) -> None:
    _dump(
        {
            "size": biset.size,
            "right": [list(r) for r in biset.right],
            "left": [list(r) for r in biset.left],
        },
        path,
    )


def load_complex(path, flag_like: bool = True) -> SurfaceCurveComplex:
    doc = _load(path)
    try:
        c = SurfaceCurveComplex.build(
            doc["vertices"], doc["on_curve"], doc["triangles"], doc.get("curve_edges", [])
        )
    except (KeyError, TypeError) as err:
        raise FormatError(f"{path}: missing complex fields: {err}") from err
    return validate(c, flag_like=flag_like)


def save_complex(c: SurfaceCurveComplex, path) -> None:
    _dump(
        {
            "vertices": c.vertex_count,
            "on_curve": list(c.on_curve),
            "triangles": [list(t) for t in c.triangles],
            "curve_edges": sorted([list(e) for e in c.curve_edges]),
        },
        path,
    )


def load_twisting(path, group, curve_group, biset) -> TwistingTriple:
    doc = _load(path)
    try:
        return validate_twisting(
            doc["alpha"], doc["beta"], doc["gamma"], group, curve_group, biset, doc["N"]
        )
    except (KeyError, TypeError) as err:
        raise FormatError(f"{path}: missing twisting fields: {err}") from err


def save_twisting(t: TwistingTriple, path) -> None:
    _dump(
        {
            "N": t.modulus,
            "alpha": [list(r) for r in t.alpha],
            "beta": [list(r) for r in t.beta],
            "gamma": [list(r) for r in t.gamma],
        },
        path,
    )
