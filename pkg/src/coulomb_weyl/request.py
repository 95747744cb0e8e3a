"""Analysis requests: JSON documents naming a group and a representation.

Weights are integer arrays in the cover's ambient coordinates (fundamental
weight coefficients for SU(n), epsilon coordinates for Sp/Spin/SO, plain
coordinates for tori).  With ``"doubled": true`` every entry is twice the
actual coordinate, which is how half-integral spin weights are written.
Kernel vectors are rational strings in the same ambient coordinates.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, Optional, Tuple, Union

import jsonschema

from . import representation as rp
from .analysis import ANALYSES, DEFAULT_WEYL_CAP, run_analysis
from .root_datum import RootDatum, RootDatumError, build_simple, build_torus, central_quotient, product

SCHEMA_VERSION = 1


class RequestError(ValueError):
    pass


def load_schema() -> Dict[str, Any]:
    return json.loads(resources.files("coulomb_weyl").joinpath("data/request.schema.json").read_text())


_VALIDATOR = None


def _validator():
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(load_schema())
    return _VALIDATOR


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


@dataclass
class AnalysisRequest:
    group: Dict[str, Any]
    representation: Dict[str, Any]
    options: Dict[str, Any]

    def to_document(self) -> Dict[str, Any]:
        return {"schema_version": SCHEMA_VERSION, "group": copy.deepcopy(self.group),
                "representation": copy.deepcopy(self.representation), "options": copy.deepcopy(self.options)}


def _normalize_rep(node: Dict[str, Any]) -> Dict[str, Any]:
    op = node["op"]
    if op in ("tensor", "sum"):
        return {"op": op, "args": [_normalize_rep(a) for a in node["args"]]}
    if op in ("dual", "quaternionify"):
        return {"op": op, "arg": _normalize_rep(node["arg"])}
    if op == "scale":
        return {"op": op, "k": node["k"], "arg": _normalize_rep(node["arg"])}
    if op == "spin":
        return {"op": op, "factor": node["factor"], "chirality": node.get("chirality", 0)}
    if op == "weights":
        ws = [{"weight": list(w["weight"]), "mult": w.get("mult", 1)} for w in node["weights"]]
        return {"op": op, "doubled": node.get("doubled", False), "weights": ws}
    return dict(node)


def parse_request(document: Union[str, bytes, Dict[str, Any]]) -> AnalysisRequest:
    """Validate a document (JSON text or already-decoded) into a request.

    Errors carry the JSON line/column for syntax problems and a ``$.field``
    path for schema violations; the group and weights are then built once so
    that non-central kernels and non-self-dual weights are reported here.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise RequestError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    errors = sorted(_validator().iter_errors(document), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise RequestError(f"schema violation at {_path(err.absolute_path)}: {err.message}")
    group = {"factors": [dict(f) for f in document["group"]["factors"]],
             "kernel": [list(k) for k in document["group"].get("kernel", [])]}
    opts = dict(document.get("options", {}))
    opts.setdefault("analyses", list(ANALYSES))
    opts.setdefault("corrections", "global")
    opts.setdefault("weyl_cap", DEFAULT_WEYL_CAP)
    req = AnalysisRequest(group, _normalize_rep(document["representation"]), opts)
    build(req)
    return req


def serialize_request(req: AnalysisRequest) -> str:
    return json.dumps(req.to_document(), sort_keys=True, indent=2)


# ---------------------------------------------------------------- building

def build_group(group: Dict[str, Any]) -> RootDatum:
    d = None
    for i, f in enumerate(group["factors"]):
        try:
            g = build_torus(f["n"]) if f["family"] == "T" else build_simple(f["family"], f["n"])
        except RootDatumError as exc:
            raise RequestError(f"$.group.factors[{i}]: {exc}") from None
        d = g if d is None else product(d, g)
    kernel = group.get("kernel", [])
    if kernel:
        try:
            d = central_quotient(d, [[Fraction(x) for x in k] for k in kernel])
        except RootDatumError as exc:
            raise RequestError(f"$.group.kernel: {exc}") from None
    return d


def build_rep(d: RootDatum, node: Dict[str, Any], path: str = "$.representation") -> rp.WeightMultiset:
    op = node["op"]
    try:
        if op == "standard":
            return rp.standard_rep(d, node["factor"])
        if op == "su2_irrep":
            return rp.su2_irrep(d, node["factor"], node["twice_spin"])
        if op == "spin":
            return rp.spin_rep(d, node["factor"], node.get("chirality", 0))
        if op == "adjoint":
            return rp.adjoint_rep(d)
        if op in ("tensor", "sum"):
            f = rp.tensor if op == "tensor" else rp.direct_sum
            out = None
            for i, a in enumerate(node["args"]):
                x = build_rep(d, a, f"{path}.args[{i}]")
                out = x if out is None else f(out, x)
            return out
        if op == "dual":
            return rp.dual(build_rep(d, node["arg"], path + ".arg"))
        if op == "quaternionify":
            return rp.quaternionify(build_rep(d, node["arg"], path + ".arg"))
        if op == "scale":
            return rp.scale(build_rep(d, node["arg"], path + ".arg"), node["k"])
        if op == "weights":
            den = 2 if node.get("doubled") else 1
            return rp.from_ambient(d, [([Fraction(x, den) for x in w["weight"]], w.get("mult", 1))
                                       for w in node["weights"]])
    except (rp.RepresentationError, RootDatumError, IndexError) as exc:
        raise RequestError(f"{path}: {exc}") from None
    raise RequestError(f"{path}: unknown op {op!r}")


def build(req: AnalysisRequest) -> Tuple[RootDatum, rp.WeightMultiset, Optional[Tuple[int, ...]]]:
    """Root datum, validated quaternionic weights and the ``xi0`` override."""
    d = build_group(req.group)
    e = build_rep(d, req.representation)
    try:
        e.check_quaternionic()
    except rp.RepresentationError as exc:
        raise RequestError(f"$.representation: {exc}") from None
    xi0 = None
    opts = req.options
    if "xi0" in opts:
        xi0 = tuple(opts["xi0"])
        if len(xi0) != d.rank:
            raise RequestError(f"$.options.xi0: length {len(xi0)}, expected rank {d.rank}")
    elif "xi0_ambient" in opts:
        amb = [Fraction(x) for x in opts["xi0_ambient"]]
        if len(amb) != d.ambient_dim:
            raise RequestError(f"$.options.xi0_ambient: length {len(amb)}, expected {d.ambient_dim}")
        pair = d.coweight_pairings(amb)
        if any(x.denominator != 1 for x in pair):
            raise RequestError("$.options.xi0_ambient: not a coweight of the group")
        xi0 = tuple(int(x) for x in pair)
    return d, e, xi0


def run_request(req: AnalysisRequest) -> Dict[str, Any]:
    d, e, xi0 = build(req)
    o = req.options
    return run_analysis(d, e, xi0, analyses=o["analyses"], weyl_cap=o["weyl_cap"], corrections=o["corrections"])
