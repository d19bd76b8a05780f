"""JSON interchange for structure packages, maps, Maurer-Cartan elements,
and homotopy witnesses.

One format covers all structure kinds:

    {"kind": "ainf" | "linf" | "module" | "pair",
     "space": {"basis": [{"label": ..., "deg": ..., "weight": ...}, ...]},
     "maps": {"1": multimap, "2": multimap, ...},
     "algebra_ref": <linf package>}        # module kind only

    multimap = {"arity": n, "shift": s, "symmetry": ...,
                "entries": [{"in": [...], "out": [{"label": ..., "coef": "p/q"}]}]}

Pairs embed their two halves: {"kind": "pair", "algebra": ..., "module": ...}
with the module's algebra_ref implied.  Parsing validates degree shifts,
weight compatibility, and (for antisymmetric maps) that keys are canonical,
with element-level diagnostics.  Serialization is canonical: sorted keys,
stable entry order, so parse -> serialize -> parse is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .grading import BasisElement, GradedSpace
from .multimap import MultiMap
from .scalars import format_scalar, parse_scalar
from .structures import (
    AInfAlgebra,
    InfMorphism,
    LInfAlgebra,
    LInfModule,
    LInfPair,
)


class ParseError(ValueError):
    pass


# -- spaces -----------------------------------------------------------------

def space_to_json(space: GradedSpace) -> dict:
    return {
        "basis": [
            {"label": e.label, "deg": e.deg, "weight": e.weight}
            for e in space.elements
        ]
    }


def space_from_json(data: dict) -> GradedSpace:
    if not isinstance(data, dict) or "basis" not in data:
        raise ParseError("space needs a 'basis' list")
    elements = []
    for entry in data["basis"]:
        try:
            label = entry["label"]
            deg = int(entry["deg"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad basis element {entry!r}") from exc
        weight = entry.get("weight")
        elements.append(BasisElement(str(label), deg, None if weight is None else int(weight)))
    try:
        return GradedSpace(elements)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- maps ---------------------------------------------------------------------

def multimap_to_json(mm: MultiMap) -> dict:
    entries = []
    for key in sorted(mm.table):
        row = mm.table[key]
        entries.append({
            "in": list(key),
            "out": [
                {"label": lab, "coef": _coef_str(row[lab])}
                for lab in sorted(row)
            ],
        })
    return {
        "arity": mm.arity,
        "shift": mm.shift,
        "symmetry": mm.symmetry,
        "entries": entries,
    }


def _coef_str(c) -> str:
    if isinstance(c, Fraction):
        return format_scalar(c)
    return str(c)


def multimap_from_json(
    data: dict, space_in: GradedSpace, space_out: GradedSpace, where: str,
) -> MultiMap:
    try:
        arity = int(data["arity"])
        shift = int(data["shift"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: arity/shift missing or malformed") from exc
    symmetry = data.get("symmetry", "none")
    mm = MultiMap(space_in, space_out, arity, shift, symmetry)
    seen: set[tuple[str, ...]] = set()
    for entry in data.get("entries", []):
        key = tuple(entry.get("in", ()))
        if len(key) != arity:
            raise ParseError(f"{where}: entry {key} has arity {len(key)}, expected {arity}")
        for lab in key:
            if lab not in space_in:
                raise ParseError(f"{where}: unknown input label {lab!r} in {key}")
        ckey, sign = mm._canonical(key)
        if symmetry != "none" and (ckey != key or sign != 1):
            raise ParseError(
                f"{where}: entry {key} is not in canonical (sorted) order for a "
                f"{symmetry} map; store the sorted representative only")
        if ckey in seen:
            raise ParseError(f"{where}: duplicate entry at {key}")
        seen.add(ckey)
        in_deg = sum(space_in.deg(l) for l in key)
        in_weight = (
            sum(space_in.weight(l) for l in key)
            if space_in.weighted else None
        )
        for out in entry.get("out", ()):
            lab = out.get("label")
            if lab not in space_out:
                raise ParseError(f"{where}: unknown output label {lab!r} at {key}")
            coef = parse_scalar(str(out.get("coef", "0")))
            if space_out.deg(lab) != in_deg + shift:
                raise ParseError(
                    f"{where}: entry {key} -> {lab} violates the degree shift "
                    f"({in_deg} + {shift} != {space_out.deg(lab)})")
            if in_weight is not None and space_out.weighted and \
                    space_out.weight(lab) != in_weight:
                raise ParseError(
                    f"{where}: entry {key} -> {lab} violates weight additivity")
            mm.add(key, lab, coef)
    return mm


# -- packages -----------------------------------------------------------------

def package_to_json(obj) -> dict:
    if isinstance(obj, AInfAlgebra):
        return {
            "kind": "ainf",
            "space": space_to_json(obj.space),
            "maps": {str(n): multimap_to_json(m) for n, m in sorted(obj.products.items())},
        }
    if isinstance(obj, LInfAlgebra):
        return {
            "kind": "linf",
            "space": space_to_json(obj.space),
            "maps": {str(n): multimap_to_json(m) for n, m in sorted(obj.brackets.items())},
        }
    if isinstance(obj, LInfModule):
        return {
            "kind": "module",
            "space": space_to_json(obj.space),
            "maps": {str(n): multimap_to_json(m) for n, m in sorted(obj.actions.items())},
            "algebra_ref": package_to_json(obj.algebra),
        }
    if isinstance(obj, LInfPair):
        mod = package_to_json(obj.module)
        mod.pop("algebra_ref", None)
        return {
            "kind": "pair",
            "algebra": package_to_json(obj.algebra),
            "module": mod,
        }
    raise ParseError(f"cannot serialize {type(obj).__name__}")


def parse_structure(data: dict):
    """Validated structure package; every audit failure names the entry."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("structure package needs a 'kind'")
    kind = data["kind"]
    if kind == "ainf":
        space = space_from_json(data.get("space", {}))
        products = _parse_maps(data, space, space, expected_symmetry="none",
                               shift_of=lambda n: 2 - n)
        return AInfAlgebra(space, products)
    if kind == "linf":
        space = space_from_json(data.get("space", {}))
        brackets = _parse_maps(data, space, space, expected_symmetry="antisym",
                               shift_of=lambda n: 2 - n)
        return LInfAlgebra(space, brackets)
    if kind == "module":
        algebra = parse_structure(data.get("algebra_ref") or {})
        if not isinstance(algebra, LInfAlgebra):
            raise ParseError("module package needs a linf algebra_ref")
        return _parse_module(data, algebra)
    if kind == "pair":
        algebra = parse_structure(data.get("algebra") or {})
        if not isinstance(algebra, LInfAlgebra):
            raise ParseError("pair package needs a linf 'algebra'")
        module = _parse_module(data.get("module") or {}, algebra)
        return LInfPair(algebra, module)
    raise ParseError(f"unknown structure kind {kind!r}")


def _parse_maps(data, space_in, space_out, expected_symmetry, shift_of):
    maps = {}
    for key, raw in (data.get("maps") or {}).items():
        try:
            n = int(key)
        except ValueError as exc:
            raise ParseError(f"map key {key!r} is not an arity") from exc
        if raw.get("symmetry", expected_symmetry) != expected_symmetry:
            raise ParseError(f"map {key}: expected symmetry {expected_symmetry}")
        raw = dict(raw)
        raw.setdefault("symmetry", expected_symmetry)
        mm = multimap_from_json(raw, space_in, space_out, where=f"map {key}")
        if mm.shift != shift_of(n) or mm.arity != n:
            raise ParseError(
                f"map {key}: arity/shift ({mm.arity}, {mm.shift}) do not match "
                f"({n}, {shift_of(n)})")
        if not mm.is_zero():
            maps[n] = mm
    return maps


def _parse_module(data: dict, algebra: LInfAlgebra) -> LInfModule:
    from .grading import combine_spaces

    space = space_from_json(data.get("space", {}))
    combined = combine_spaces(algebra.space, space)
    actions = {}
    for key, raw in (data.get("maps") or {}).items():
        n = int(key)
        symmetry = "antisym_algebra" if n > 1 else "none"
        raw = dict(raw)
        raw.setdefault("symmetry", symmetry)
        if raw["symmetry"] != symmetry:
            raise ParseError(f"module map {key}: expected symmetry {symmetry}")
        mm = multimap_from_json(raw, combined, space, where=f"module map {key}")
        if mm.arity != n or mm.shift != 2 - n:
            raise ParseError(f"module map {key}: wrong arity or shift")
        for entry_key in mm.table:
            if any(lab not in algebra.space for lab in entry_key[:-1]):
                raise ParseError(
                    f"module map {key}: algebra slots of {entry_key} must hold "
                    "algebra labels")
            if entry_key[-1] not in space:
                raise ParseError(
                    f"module map {key}: last slot of {entry_key} must hold a "
                    "module label")
        if not mm.is_zero():
            actions[n] = mm
    return LInfModule(algebra, space, actions)


# -- Maurer-Cartan elements and witnesses -------------------------------------

def mc_to_json(ring, omega: dict) -> dict:
    return {
        "ring": ring.describe(),
        "entries": {lab: str(v) for lab, v in sorted(omega.items())},
    }


def mc_from_json(data: dict, ring=None):
    from .rings import parse_element, parse_ring

    if ring is None:
        if "ring" not in data:
            raise ParseError("MC element needs a ring descriptor")
        ring = parse_ring(data["ring"])
    omega = {}
    for lab, text in (data.get("entries") or {}).items():
        val = parse_element(ring, text)
        if val:
            omega[lab] = val
    return ring, omega


def witness_to_json(witness) -> dict:
    return {
        "ring": witness.ring.describe(),
        "t_part": {
            lab: {str(k): str(v) for k, v in sorted(p.c.items())}
            for lab, p in sorted(witness.t_part.items())
        },
        "dt_part": {
            lab: {str(k): str(v) for k, v in sorted(p.c.items())}
            for lab, p in sorted(witness.dt_part.items())
        },
    }


def witness_from_json(data: dict):
    from .deformation import HomotopyWitness, TPoly
    from .rings import parse_element, parse_ring

    ring = parse_ring(data["ring"])

    def part(raw):
        out = {}
        for lab, powers in (raw or {}).items():
            c = {int(k): parse_element(ring, v) for k, v in powers.items()}
            poly = TPoly(ring, c)
            if poly:
                out[lab] = poly
        return out

    return ring, HomotopyWitness(ring, part(data.get("t_part")), part(data.get("dt_part")))


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
