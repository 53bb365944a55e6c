"""Scenario documents: JSON schemas, execution, and a deterministic serializer.

Document formats (UTF-8 JSON, numbers emitted with 17 significant digits):

    space      {"p": number, "cells": [{"id": str, "weight": number}]}
    function   {"values": {cellId: number}}
    sublattice {"blocks": [{"cells": [id], "profile": {id: number}}]}
               or {"generators": [functionName]}
    scenario   {"space": ..., "functions": {name: function},
                "sublattices": {name: sublattice}, "commands": [command]}

Commands are records {"op": ..., argument names as strings, "r": number where
applicable}; ops: condexp | slice | profile | dist | typeeq | indep |
productcheck | cb | realize | extend | maharam.  Commands that refine the
space (realize, extend, maharam) thread the refinement through everything
registered, and the report logs it.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .core import DEFAULT_TOL, Refinement, Space, StepFunction, lift, step_function
from .errors import (
    ParseError,
    UnknownReference,
    ValidationError,
)
from .independence import (
    IndependenceVerdict,
    canonical_base,
    nonforking_extension,
    product_check,
    star_independent,
)
from .sublattice import Sublattice, cond_exp, dcl
from .typespace import (
    SliceProfile,
    TypeDatum,
    canonical_realization,
    conditional_slice,
    distance,
    maharam_select,
    slice_profile,
    tuple_type_equal,
    type_datum,
)


# --- deterministic serializer -------------------------------------------------

def _format_number(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite number {x!r}")
    s = format(float(x), ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _write(doc: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if doc is None:
        out.append("null")
    elif isinstance(doc, bool):
        out.append("true" if doc else "false")
    elif isinstance(doc, (int, float)):
        out.append(_format_number(doc))
    elif isinstance(doc, str):
        out.append(json.dumps(doc))
    elif isinstance(doc, (list, tuple)):
        if not doc:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(doc):
            out.append(inner)
            _write(item, indent + 1, out)
            out.append(",\n" if i + 1 < len(doc) else "\n")
        out.append(pad + "]")
    elif isinstance(doc, dict):
        if not doc:
            out.append("{}")
            return
        out.append("{\n")
        items = list(doc.items())
        for i, (key, value) in enumerate(items):
            out.append(inner + json.dumps(str(key)) + ": ")
            _write(value, indent + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    else:
        raise ValidationError(f"cannot serialize {type(doc).__name__}")


def dumps(doc: Any) -> str:
    """Serialize a report or scenario document with stable bytes."""
    out: list[str] = []
    _write(doc, 0, out)
    out.append("\n")
    return "".join(out)


# --- document <-> object ------------------------------------------------------

def space_to_doc(space: Space) -> dict:
    return {
        "p": space.p,
        "cells": [{"id": cid, "weight": w} for cid, w in space.cells],
    }


def space_from_doc(doc: Any) -> Space:
    if not isinstance(doc, dict) or "p" not in doc or "cells" not in doc:
        raise ValidationError("space document needs 'p' and 'cells'")
    try:
        cells = [(c["id"], c["weight"]) for c in doc["cells"]]
        return Space(tuple((str(i), float(w)) for i, w in cells), float(doc["p"]))
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"malformed space document: {exc}") from exc


def function_to_doc(f: StepFunction) -> dict:
    return {"values": {cid: f.values[cid] for cid in f.space.ids() if cid in f.values}}


def function_from_doc(doc: Any, space: Space) -> StepFunction:
    if not isinstance(doc, dict) or "values" not in doc:
        raise ValidationError("function document needs 'values'")
    return step_function(space, {str(k): float(v) for k, v in doc["values"].items()})


def sublattice_to_doc(C: Sublattice) -> dict:
    return {
        "blocks": [
            {
                "cells": list(block),
                "profile": {cid: C.profile[cid] for cid in block},
            }
            for block in C.blocks
        ]
    }


def profile_to_doc(prof: SliceProfile) -> dict:
    return {
        "blocks": [
            {
                "cells": list(block),
                "segments": [
                    {"length": ln, "value": v} for ln, v in prof.per_block[k]
                ],
            }
            for k, block in enumerate(prof.sublattice.blocks)
        ]
    }


def type_datum_to_doc(t: TypeDatum) -> dict:
    doc = profile_to_doc(t.profile)
    doc["orthPos"] = t.orth_pos
    doc["orthNeg"] = t.orth_neg
    return doc


def cond_distribution_to_doc(d) -> dict:
    return {
        "arity": d.arity,
        "blocks": [
            {
                "cells": list(block),
                "atoms": [{"vector": list(vec), "mass": mass} for vec, mass in atoms],
            }
            for block, atoms in zip(d.sublattice.blocks, d.per_block)
        ],
        "orth": [{"vector": list(vec), "mass": mass} for vec, mass in d.orth],
    }


def verdict_to_doc(v: IndependenceVerdict) -> dict:
    doc: dict[str, Any] = {"independent": v.independent}
    if v.witness is None:
        doc["witness"] = None
    else:
        w = v.witness
        witness: dict[str, Any] = {"kind": w.kind}
        if w.element is not None:
            witness["element"] = function_to_doc(w.element)
        if w.r is not None:
            witness["r"] = w.r
        witness["overB"] = function_to_doc(w.over_b)
        witness["overC"] = function_to_doc(w.over_c)
        witness["gap"] = w.gap
        doc["witness"] = witness
    return doc


def refinement_to_doc(r: Refinement) -> dict:
    splitting = {
        cid: [{"id": kid, "weight": w} for kid, w in kids]
        for cid, kids in ((cid, r.splitting[cid]) for cid in r.parent.ids())
        if len(kids) > 1 or kids[0][0] != cid
    }
    return {
        "splitting": splitting,
        "fresh": [
            {"id": cid, "weight": r.child.weight(cid)} for cid in r.fresh_cells
        ],
    }


# --- execution ----------------------------------------------------------------

class _Runner:
    def __init__(self, doc: dict, tol: float):
        self.tol = tol
        self.space = space_from_doc(doc.get("space"))
        self.functions: dict[str, StepFunction] = {}
        self.sublattices: dict[str, Sublattice] = {}
        self.refinements: list[dict] = []
        for name, fdoc in dict(doc.get("functions", {})).items():
            self.functions[name] = function_from_doc(fdoc, self.space)
        for name, sdoc in dict(doc.get("sublattices", {})).items():
            self.sublattices[name] = self._sublattice_from_doc(sdoc)

    def _sublattice_from_doc(self, doc: Any) -> Sublattice:
        if not isinstance(doc, dict):
            raise ValidationError("sublattice document must be an object")
        if "generators" in doc:
            gens = [self.function(name) for name in doc["generators"]]
            return dcl(self.space, gens, self.tol)
        if "blocks" in doc:
            blocks = []
            for b in doc["blocks"]:
                cells = [str(c) for c in b["cells"]]
                prof = {str(k): float(v) for k, v in b["profile"].items()}
                blocks.append((cells, prof))
            return Sublattice.make(self.space, blocks)
        raise ValidationError("sublattice document needs 'blocks' or 'generators'")

    def function(self, name: str) -> StepFunction:
        try:
            return self.functions[name]
        except KeyError:
            raise UnknownReference(f"no function named {name!r}") from None

    def sub(self, name: str) -> Sublattice:
        try:
            return self.sublattices[name]
        except KeyError:
            raise UnknownReference(f"no sublattice named {name!r}") from None

    def side(self, arg: Any):
        # a sublattice name or a list of function names
        if isinstance(arg, str):
            return self.sub(arg)
        return [self.function(name) for name in arg]

    def _apply_refinement(self, refinement: Refinement) -> None:
        self.space = refinement.child
        self.functions = {
            name: lift(f, refinement) for name, f in self.functions.items()
        }
        self.sublattices = {
            name: C.lift(refinement) for name, C in self.sublattices.items()
        }
        self.refinements.append(refinement_to_doc(refinement))

    def run(self, cmd: dict) -> dict:
        if not isinstance(cmd, dict) or "op" not in cmd:
            raise ValidationError("command records need an 'op'")
        op = cmd["op"]
        record: dict[str, Any] = dict(cmd)
        if op == "condexp":
            result = cond_exp(self.function(cmd["f"]), self.sub(cmd["c"]))
            record["result"] = function_to_doc(result)
            self._maybe_store(cmd, result)
        elif op == "slice":
            result = conditional_slice(
                self.function(cmd["f"]), self.sub(cmd["c"]), float(cmd["r"]), self.tol
            )
            record["result"] = function_to_doc(result)
            self._maybe_store(cmd, result)
        elif op == "profile":
            prof = slice_profile(self.function(cmd["f"]), self.sub(cmd["c"]), self.tol)
            record["result"] = profile_to_doc(prof)
        elif op == "dist":
            C = self.sub(cmd["c"])
            t1 = type_datum(self.function(cmd["f"]), C, self.tol)
            t2 = type_datum(self.function(cmd["g"]), C, self.tol)
            record["result"] = distance(t1, t2, self.tol)
        elif op == "typeeq":
            record["result"] = tuple_type_equal(
                [self.function(n) for n in cmd["fs"]],
                [self.function(n) for n in cmd["gs"]],
                self.sub(cmd["c"]),
                self.tol,
            )
        elif op == "indep":
            verdict = star_independent(
                self.side(cmd["a"]), self.side(cmd["b"]), self.side(cmd["c"]), self.tol
            )
            record["result"] = verdict_to_doc(verdict)
        elif op == "productcheck":
            record["result"] = product_check(
                self.sub(cmd["a"]), self.sub(cmd["b"]), self.sub(cmd["c"]), self.tol
            )
        elif op == "cb":
            base = canonical_base(
                [self.function(n) for n in cmd["fs"]], self.sub(cmd["a"]), self.tol
            )
            record["result"] = sublattice_to_doc(base)
            if "as" in cmd:
                self.sublattices[str(cmd["as"])] = base
        elif op == "realize":
            C = self.sub(cmd["c"])
            t = type_datum(self.function(cmd["f"]), C, self.tol)
            _, refinement, g = canonical_realization(t, self.tol)
            self._apply_refinement(refinement)
            record["result"] = function_to_doc(g)
            self._maybe_store(cmd, g)
        elif op == "extend":
            fs = [self.function(n) for n in cmd["fs"]]
            _, refinement, gs = nonforking_extension(
                fs, self.sub(cmd["c"]), self.sub(cmd["b"]), self.tol
            )
            self._apply_refinement(refinement)
            record["result"] = [function_to_doc(g) for g in gs]
            names = cmd.get("as")
            if names:
                for name, g in zip(names, gs):
                    self.functions[str(name)] = g
        elif op == "maharam":
            C = self.sub(cmd["c"])
            _, refinement, selected = maharam_select(
                [str(c) for c in cmd["cells"]],
                C,
                self.function(cmd["target"]),
                self.tol,
            )
            self._apply_refinement(refinement)
            record["result"] = {"selected": sorted(selected)}
        else:
            raise ValidationError(f"unknown op {op!r}")
        return record

    def _maybe_store(self, cmd: dict, f: StepFunction) -> None:
        if "as" in cmd:
            self.functions[str(cmd["as"])] = f


def execute_scenario_doc(doc: Any, tol: float = DEFAULT_TOL) -> dict:
    """Run a parsed scenario document and return the report document.

    Report documents are accepted too: the scenario they embed is run.
    """
    if isinstance(doc, dict) and "scenario" in doc and ("results" in doc or "space" not in doc):
        doc = doc["scenario"]
    if not isinstance(doc, dict):
        raise ValidationError("scenario must be a JSON object")
    runner = _Runner(doc, tol)
    results = [runner.run(cmd) for cmd in list(doc.get("commands", []))]
    return {
        "tol": tol,
        "scenario": doc,
        "results": results,
        "refinements": runner.refinements,
        "space": space_to_doc(runner.space),
    }


def execute_scenario(path: str, tol: float = DEFAULT_TOL) -> dict:
    """Load, validate, and run a scenario file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return execute_scenario_doc(doc, tol)
