"""JSON reports. Operations are embedded as complete OpFile texts under "opfile"."""

from __future__ import annotations

import json

from .classifiers import (
    chi_triple,
    is_idempotent,
    is_majority,
    is_maltsev,
    is_minority,
    is_pixley,
    is_projection,
    is_semiprojection,
    is_totally_symmetric,
)
from .closure import BooleanGroup, CloneFragment, GeneratorSet
from .core import MultiOp, kind
from .fivetype import GuaranteeFailed, TypeWitness
from .opfile import emit_single, parse_opfile
from .projection import ProjectionPropertyReport

SCHEMA_VERSION = 1


def op_entry(name: str, f: MultiOp) -> dict:
    return {"name": name, "arity": f.arity, "kind": kind(f).value, "opfile": emit_single(name, f)}


def group_entry(G: BooleanGroup | None) -> dict | None:
    if G is None:
        return None
    return {"universe": G.k, "zero": G.zero, "add": [list(r) for r in G.add]}


def fragments_entry(frags: dict[int, CloneFragment]) -> dict:
    return {
        str(n): {"members": len(f), "saturated": f.saturated, "exact": f.exact}
        for n, f in sorted(frags.items())
    }


def classify_report(tw: TypeWitness, universe: int, cap: int, limit: int, zero: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "classify",
        "universe": universe,
        "cap": cap,
        "limit": limit,
        "zero": zero,
        "status": "inconclusive" if not tw.decided else "decided",
        "type": tw.type_tag.value,
        "witness": op_entry("witness", tw.witness) if tw.witness is not None else None,
        "group": group_entry(tw.group),
        "provenance": [
            {
                "step": s.name,
                "detail": s.detail,
                "op": op_entry(f"step{i}", s.op) if s.op is not None else None,
            }
            for i, s in enumerate(tw.provenance)
        ],
        "fragments": fragments_entry(tw.fragments),
    }


def falsifier_report(command: str, exc: GuaranteeFailed) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "status": "falsifier",
        "message": str(exc),
        "tuple": list(exc.tuple) if exc.tuple is not None else None,
        "operation": op_entry("offender", exc.operation) if exc.operation is not None else None,
        "provenance": [
            {"step": s.name, "detail": s.detail,
             "op": op_entry(f"step{i}", s.op) if s.op is not None else None}
            for i, s in enumerate(exc.provenance)
        ],
    }


def props_entry(name: str, f: MultiOp) -> dict:
    ternary = f.arity == 3
    chi = chi_triple(f) if ternary else None
    return {
        "name": name,
        "arity": f.arity,
        "kind": kind(f).value,
        "projection": is_projection(f),
        "idempotent": is_idempotent(f),
        "majority": is_majority(f) if ternary else None,
        "minority": is_minority(f) if ternary else None,
        "maltsev": is_maltsev(f) if ternary else None,
        "pixley": is_pixley(f) if ternary else None,
        "semiprojection": is_semiprojection(f) if f.arity >= 3 else None,
        "chi": str(chi) if chi is not None else None,
        "totally_symmetric": is_totally_symmetric(f),
    }


def props_report(gens: GeneratorSet) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "props",
        "universe": gens.universe.size,
        "operations": [props_entry(name, f) for name, f in gens.items()],
    }


def projection_property_report(rep: ProjectionPropertyReport, universe: int, limit: int) -> dict:
    w = rep.idempotent_nonprojection
    return {
        "schema": SCHEMA_VERSION,
        "command": "projection",
        "universe": universe,
        "cap": rep.cap,
        "limit": limit,
        "status": rep.verdict.value,
        "verdict": rep.verdict.value,
        "condition_i": rep.condition_i.value,
        "has_all_constants": rep.has_all_constants,
        "binary_idempotents_are_projections": rep.binary_idempotents_are_projections,
        "idempotent_nonprojection": (
            {"arity": w[0], **op_entry("idempotent_nonprojection", w[1])} if w else None
        ),
        "matched_group": group_entry(rep.matched_group),
        "notes": rep.notes,
        "fragments": fragments_entry(rep.fragments),
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _opfiles(obj):
    if isinstance(obj, dict):
        for key, v in obj.items():
            if key == "opfile" and isinstance(v, str):
                yield v
            else:
                yield from _opfiles(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _opfiles(v)


def load_source(text: str) -> GeneratorSet:
    """Parse an OpFile, or collect every operation embedded in a JSON report."""
    if not text.lstrip().startswith("{"):
        return parse_opfile(text)
    data = json.loads(text)
    names, ops, universe = [], [], None
    for block in _opfiles(data):
        gs = parse_opfile(block)
        if universe is not None and gs.universe != universe:
            raise ValueError("report embeds operations on different universes")
        universe = gs.universe
        for name, f in gs.items():
            names.append(name)
            ops.append(f)
    if universe is None:
        raise ValueError("report embeds no operations")
    return GeneratorSet(universe, tuple(ops), tuple(names))
