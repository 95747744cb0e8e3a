"""Registry of worked examples with stored expectations.

Every example is a list of request documents plus checks.  A check reads
one value out of the combined report (or computes an independent quantity)
and compares it with the stored expectation; ``run_example`` returns the
report together with the failing checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Tuple

from . import formal_sections as fs
from .linalg import mat_inverse_fraction
from .representation import c2_form, from_ambient, polarize
from .request import build, parse_request, run_request
from .root_datum import build_torus, close_group
from .weyl_cohomology import cocycle_s2, s2_cochain, solve_coboundary_s2


def _doc(factors, rep, kernel=(), **options) -> Dict[str, Any]:
    doc = {"schema_version": 1,
           "group": {"factors": [{"family": f, "n": n} for f, n in factors],
                     "kernel": [list(k) for k in kernel]},
           "representation": rep}
    if options:
        doc["options"] = options
    return doc


def std(i: int) -> Dict[str, Any]:
    return {"op": "standard", "factor": i}


def _w(ws) -> Dict[str, Any]:
    return {"op": "weights", "weights": [{"weight": list(w), "mult": m} for w, m in ws]}


@dataclass
class Check:
    name: str
    expected: Any
    actual: Callable[[Dict[str, Any]], Any]


@dataclass
class Example:
    name: str
    title: str
    cases: Dict[str, Dict[str, Any]]
    checks: List[Check]
    extras: Callable[[], Dict[str, Any]] = None


def _root_row(rows: List[Dict[str, Any]], root: List[int]) -> Dict[str, Any]:
    for r in rows:
        if r["root"] == list(root):
            return r
    raise KeyError(root)


# ---------------------------------------------------------------- SU(2)^3 quotient, secondary obstruction

B1_KERNEL = [["1/2", "1/2", "0"], ["0", "1/2", "1/2"]]


def b1_documents() -> Dict[str, Dict[str, Any]]:
    return {"main": _doc([("SU", 2)] * 3, {"op": "tensor", "args": [std(0), std(1), std(2)]}, B1_KERNEL)}


def ambient_tensor_to_lattice_mod2(basis, T) -> Tuple[int, ...]:
    """Coordinates of an ambient tensor ``T`` in the weight-lattice basis, mod 2."""
    inv = mat_inverse_fraction(basis)
    r = len(basis)
    n = len(T)
    # T = B^T A B with B the basis rows, so A = inv^T T inv
    A = [[sum(inv[k][i] * T[k][l] * inv[l][j] for k in range(n) for l in range(n)) for j in range(r)] for i in range(r)]
    out = []
    for row in A:
        for x in row:
            if Fraction(x).denominator != 1:
                raise ValueError("tensor is not in the lattice square")
            out.append(int(x) % 2)
    return tuple(out)


def _b1_extras() -> Dict[str, Any]:
    d, e, _ = build(parse_request(b1_documents()["main"]))
    T = [[0, 4, 0], [4, 0, 0], [0, 0, 0]]      # 4 w1 (x) w2 + 4 w2 (x) w1 in cover coordinates
    return {"displayed_class_mod2": list(ambient_tensor_to_lattice_mod2(d.basis, T))}


# ---------------------------------------------------------------- disconnected torus extension

def b2_model() -> Dict[str, Any]:
    """Weyl-side model of the disconnected example: ``W = {1, -1}`` on ``Z^3``.

    The group is not connected, so only the torus data is modelled: weights
    ``+-e_i`` and ``+-(e1+e2+e3)``, the component group acting by inversion.
    """
    t = build_torus(3)
    E = from_ambient(t, [(tuple(s * x for x in w), 1)
                         for w in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)) for s in (1, -1)])
    minus = tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
    W = close_group([minus], 3)
    split = polarize(E, (4, 2, 1))
    s2 = s2_cochain(split, W)
    q = c2_form(E)
    # polynomial coefficients of x_i x_j (i <= j) in x^T G x
    coeffs = {f"w{i + 1}w{j + 1}": str(q.gram[i][j] * (1 if i == j else 2)) for i in range(3) for j in range(i, 3)}
    return {
        "weyl_order": len(W),
        "s2_inversion": list(cocycle_s2(split, minus)),
        "s2_exact": solve_coboundary_s2(s2, W) is not None,
        "c2_coefficients": coeffs,
        "c2_even": all(Fraction(x) % 2 == 0 for x in coeffs.values()),
    }


# ---------------------------------------------------------------- Sp(2) non-trivial torsor

def b3_documents() -> Dict[str, Dict[str, Any]]:
    ws = [((2 * a, b), 1) for a in (1, -1) for b in (1, -1)] + [((a, 2 * b), 1) for a in (1, -1) for b in (1, -1)]
    ws += [((1, 0), 2), ((-1, 0), 2), ((0, 1), 2), ((0, -1), 2)]
    return {"main": _doc([("Sp", 2)], _w(ws), xi0_ambient=["1", "1"])}


B3_COLUMNS = [(1, 3), (3, 1), (1, -3), (3, -1)]


def b3_display(a: Tuple[int, int]) -> Tuple[int, int]:
    """Sp(2) epsilon coordinates to the displayed coordinates ``(a + b, a - b)``."""
    return (a[0] + a[1], a[0] - a[1])


def _b3_extras() -> Dict[str, Any]:
    d, e, xi0 = build(parse_request(b3_documents()["main"]))
    split = polarize(e, xi0)
    inv = fs.chi_w(split, ((-1, 0), (0, -1))).inverse()
    cols = {}
    for key, lam in inv.factors:
        k = b3_display(key)
        lam = b3_display(lam)
        for target in B3_COLUMNS:
            # key orientation only changes a constant sign
            if k == target or k == (-target[0], -target[1]):
                cols[target] = lam
    matrix = [[cols[c][i] if c in cols else None for c in B3_COLUMNS] for i in range(2)]
    return {"chi_matrix": matrix, "torsor_verdict_inversion": fs.torsor_parity(inv).verdict}


# ---------------------------------------------------------------- SU(2)xU(1) sign correction

def b4_documents() -> Dict[str, Dict[str, Any]]:
    rep = {"op": "tensor", "args": [std(0), {"op": "quaternionify", "arg": std(1)}]}
    return {"main": _doc([("SU", 2), ("T", 1)], rep)}


# ---------------------------------------------------------------- families

def su2_family_documents() -> Dict[str, Dict[str, Any]]:
    f = [("SU", 2)]
    return {
        "0": _doc(f, _w([])),
        "H": _doc(f, std(0)),
        "2H": _doc(f, {"op": "quaternionify", "arg": std(0)}),
        "spin3/2": _doc(f, {"op": "su2_irrep", "factor": 0, "twice_spin": 3}),
        "adjoint_doubled": _doc(f, {"op": "quaternionify", "arg": {"op": "adjoint"}}),
        "adjoint_doubled+H": _doc(f, {"op": "sum", "args": [{"op": "quaternionify", "arg": {"op": "adjoint"}}, std(0)]}),
    }


def family_status(doc: Dict[str, Any], report: Dict[str, Any]) -> str:
    if report["representation"]["dim"] == 0:
        return "pure"
    if not report["cocycles"]["c"]["exact"]:
        return "obstructed"
    if doc["representation"]["op"] == "quaternionify":
        return "polarized"
    return "unobstructed"


def whenodd_documents() -> Dict[str, Dict[str, Any]]:
    kernel = [["1/2", "1/2", "1/2", "1/2"]]
    return {"main": _doc([("SU", 2), ("SO", 6)], {"op": "tensor", "args": [std(0), std(1)]}, kernel),
            "sp1_H": _doc([("Sp", 1)], std(0))}


def kobst_documents() -> Dict[str, Dict[str, Any]]:
    kernel = [["1/2", "1/2", "1/2"]]
    return {"main": _doc([("SO", 4), ("Sp", 1)], {"op": "tensor", "args": [std(0), std(1)]}, kernel)}


# ---------------------------------------------------------------- registry

def _get(*path):
    def f(rep):
        x = rep
        for p in path:
            x = x[p]
        return x
    return f


EXAMPLES: Dict[str, Example] = {
    "b1": Example(
        "b1", "SU(2)^3/S(mu2^3) with H(x)H(x)H: secondary but no primary obstruction",
        b1_documents(),
        [Check("c exact", True, _get("cases", "main", "cocycles", "c", "exact")),
         Check("primary unobstructed", True, _get("cases", "main", "obstruction", "primary_unobstructed")),
         Check("s2 exact", False, _get("cases", "main", "cocycles", "s2", "exact")),
         Check("s2 on first reflection equals displayed class",
               True, lambda r: r["cases"]["main"]["cocycles"]["s2"]["values"].get("s1")
               == r["extras"]["displayed_class_mod2"]),
         Check("displayed class nonzero", True, lambda r: any(r["extras"]["displayed_class_mod2"]))],
        _b1_extras),
    "b2": Example(
        "b2", "disconnected extension of U(1)^3 by mu2: Weyl-side model only",
        {},
        [Check("s2 on inversion", [0, 1, 1, 1, 0, 1, 1, 1, 0], _get("extras", "s2_inversion")),
         Check("s2 exact", False, _get("extras", "s2_exact")),
         Check("c2 = 2(h + sum w_i^2)", {k: "2" for k in ("w1w1", "w1w2", "w1w3", "w2w2", "w2w3", "w3w3")},
               _get("extras", "c2_coefficients")),
         Check("c2 even", True, _get("extras", "c2_even"))],
        b2_model),
    "b3": Example(
        "b3", "Sp(2) with the 12-dimensional complement: non-trivial Toda torsor",
        b3_documents(),
        [Check("chi matrix", [[1, 3, 1, 3], [3, 1, -3, -1]], _get("extras", "chi_matrix")),
         Check("torsor parity", "nontrivial", _get("cases", "main", "torsor", "parity_verdict")),
         Check("inversion parity", "nontrivial", _get("extras", "torsor_verdict_inversion")),
         Check("c exact", True, _get("cases", "main", "cocycles", "c", "exact"))],
        _b3_extras),
    "b4": Example(
        "b4", "SU(2)xU(1) with C2(x)(C+Cbar): sign correction on the root hyperplane",
        b4_documents(),
        [Check("uncorrected residual", ["-(xi2)^2", "-1"],
               lambda r: _root_row(r["cases"]["main"]["torsor"]["hyperplanes"], [2, 0])["residual"]),
         Check("uncorrected class trivial", False,
               lambda r: _root_row(r["cases"]["main"]["torsor"]["hyperplanes"], [2, 0])["trivial"]),
         Check("correction flips bottom entry", [0, 1],
               lambda r: _root_row(r["cases"]["main"]["torsor"]["hyperplanes"], [2, 0])["correction_sign"]),
         Check("corrected class trivial", True,
               lambda r: _root_row(r["cases"]["main"]["torsor"]["hyperplanes"], [2, 0])["corrected_trivial"]),
         Check("corrected verdict", "trivial torsor", _get("cases", "main", "torsor", "verdict"))]),
    "su2_family": Example(
        "su2_family", "SU(2) with small quaternionic E",
        su2_family_documents(),
        [Check("status table", {"0": "pure", "H": "obstructed", "2H": "polarized", "spin3/2": "unobstructed",
                                "adjoint_doubled": "polarized", "adjoint_doubled+H": "obstructed"},
               lambda r: r["extras"]["status"]),
         Check("C3 eligibility", {"0": False, "H": False, "2H": False, "spin3/2": True,
                                  "adjoint_doubled": True, "adjoint_doubled+H": True},
               lambda r: {k: v["abelianization"]["eligible_c3"] for k, v in r["cases"].items()}),
         Check("C4 eligibility", {"0": False, "H": False, "2H": False, "spin3/2": False,
                                  "adjoint_doubled": True, "adjoint_doubled+H": True},
               lambda r: {k: v["abelianization"]["eligible_c4"] for k, v in r["cases"].items()})]),
    "whenodd_ii": Example(
        "whenodd_ii", "SU(2)x_mu2 SO(6) with H(x)R^6: case (ii)",
        whenodd_documents(),
        [Check("case", "case_ii", _get("cases", "main", "obstruction", "classification_case")),
         Check("mod-2 root in H2(BG)", True, lambda r: any(r["cases"]["main"]["obstruction"]["in_h2bg"])),
         Check("integral lift", False, lambda r: any(r["cases"]["main"]["obstruction"]["integral_lift"])),
         Check("c exact", True, _get("cases", "main", "cocycles", "c", "exact")),
         Check("Sp(1) with H", "case_i", _get("cases", "sp1_H", "obstruction", "classification_case")),
         Check("Sp(1) with H, c exact", False, _get("cases", "sp1_H", "cocycles", "c", "exact"))]),
    "kobst_witness": Example(
        "kobst_witness", "SO(4)x_mu2 Sp(1) with R^4(x)H: secondary obstruction",
        kobst_documents(),
        [Check("sigma", "nonzero", _get("cases", "main", "obstruction", "sigma_status")),
         Check("primary unobstructed", True, _get("cases", "main", "obstruction", "primary_unobstructed")),
         Check("s2 exact", False, _get("cases", "main", "cocycles", "s2", "exact"))]),
}


def run_example(name: str) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """Run one example; returns ``(report, failing checks)``."""
    ex = EXAMPLES[name]
    report: Dict[str, Any] = {"example": name, "title": ex.title, "cases": {}}
    for label, doc in ex.cases.items():
        report["cases"][label] = run_request(parse_request(doc))
    report["extras"] = ex.extras() if ex.extras else {}
    if name == "su2_family":
        report["extras"]["status"] = {k: family_status(ex.cases[k], v) for k, v in report["cases"].items()}
    checks, failures = [], []
    for c in ex.checks:
        try:
            actual = c.actual(report)
        except (KeyError, TypeError) as exc:
            actual = f"<missing: {exc}>"
        row = {"check": c.name, "expected": c.expected, "actual": actual, "ok": actual == c.expected}
        checks.append(row)
        if not row["ok"]:
            failures.append(row)
    report["checks"] = checks
    return report, failures
