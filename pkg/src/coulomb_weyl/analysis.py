"""Run every analysis on one ``(G, E)`` pair and assemble a JSON-ready report.

Each report section is either a dict of results or ``{"skipped": reason}``.
Vectors are lists of ints in weight-lattice (or coweight) coordinates;
Weyl elements are named by words in the simple reflections, ``e`` being the
identity.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence

from . import descent, formal_sections as fs, obstructions as ob, weyl_cohomology as wc
from .representation import PolarizationSplit, WeightMultiset, default_xi0, polarize
from .root_datum import RootDatum, WeylGroup, enumerate_weyl, fundamental_group

ANALYSES = ("obstruction", "cocycles", "identities", "torsor", "abelianization", "conditions")
DEFAULT_WEYL_CAP = 10 ** 6


def element_names(W: WeylGroup) -> List[str]:
    return ["e" if not w else " ".join(f"s{g + 1}" for g in w) for w in W.generator_words]


def _vec(v) -> List[int]:
    return [int(x) for x in v]


def _skip(reason: str) -> Dict[str, str]:
    return {"skipped": reason}


class Context:
    """Shared state: polarization, Weyl group and the cocycle solutions."""

    def __init__(self, d: RootDatum, e: WeightMultiset, xi0: Optional[Sequence[int]] = None,
                 weyl_cap: int = DEFAULT_WEYL_CAP, corrections: str = "global"):
        self.d = d
        self.e = e
        self.xi0 = tuple(xi0) if xi0 is not None else default_xi0(e)
        self.split: PolarizationSplit = polarize(e, self.xi0)
        self.split.require_strict()
        self.W = enumerate_weyl(d, cap=weyl_cap)
        self.names = element_names(self.W)
        self.corrections = corrections
        self._c = None
        self._c_sol = False

    @property
    def c(self) -> wc.Cochain2:
        if self._c is None:
            self._c = wc.c_cochain(self.split, self.W)
        return self._c

    @property
    def c_solution(self) -> Optional[wc.AffineSolution]:
        if self._c_sol is False:
            self._c_sol = wc.solve_coboundary_c(self.c, self.W)
        return self._c_sol

    def reflection_element(self, root_index: int) -> int:
        return self.W.index[self.d.reflection(root_index)]


# ---------------------------------------------------------------- sections

def obstruction_section(ctx: Context) -> Dict[str, Any]:
    rep = ob.obstruction_report(ctx.d, ctx.e)
    return {
        "w4_mod2_roots": [_vec(r) for r in rep.w4_mod2_roots],
        "in_h2bg": list(rep.in_h2bg),
        "integral_lift": list(rep.integral_lift),
        "mod4_lift": list(rep.mod4_lift),
        "lifts": [None if x is None else _vec(x) for x in rep.lifts],
        "classification_case": rep.classification_case,
        "primary_unobstructed": rep.primary_unobstructed,
        "sigma_status": rep.sigma_status,
        "sigma_witness": rep.sigma_witness,
        "notes": list(rep.notes),
    }


def _cochain1_map(ctx: Context, phi: wc.Cochain1) -> Dict[str, List[int]]:
    return {ctx.names[i]: _vec(v) for i, v in enumerate(phi.values) if any(v)}


def cocycles_section(ctx: Context) -> Dict[str, Any]:
    W, split = ctx.W, ctx.split
    ok_c, bad_c = wc.verify_2cocycle(ctx.c, W)
    sol = ctx.c_solution
    s2 = wc.s2_cochain(split, W)
    ok_s, bad_s = wc.verify_crossed_hom(s2, W)
    s2_sol = wc.solve_coboundary_s2(s2, W)
    d = wc.d_cochain(split, W)
    ok_d, _ = wc.verify_2cocycle(d, W)
    bock = wc.bockstein_relation(split, W)
    return {
        "c": {
            "cocycle": ok_c,
            "failing_triple": None if ok_c else [None if x is None else ctx.names[x] for x in bad_c],
            "exact": sol is not None,
            "trivialization": None if sol is None else _cochain1_map(ctx, sol.particular),
            "trivialization_freedom": 0 if sol is None else len(sol.kernel),
        },
        "s2": {
            "crossed_hom": ok_s,
            "failing_pair": None if ok_s else [ctx.names[x] for x in bad_s],
            "values": _cochain1_map(ctx, s2),
            "exact": s2_sol is not None,
            "primitive": None if s2_sol is None else _vec(s2_sol.particular),
        },
        "d": {"cocycle": ok_d},
        "bockstein": {"even": bock.even, "cohomologous_to_d": bock.cohomologous},
    }


def identities_section(ctx: Context) -> Dict[str, Any]:
    W, split, E = ctx.W, ctx.split, ctx.W.elements
    chi_bad, kappa_bad = [], []
    for i, u in enumerate(E):
        for j, v in enumerate(E):
            c = wc.cocycle_c(split, u, v)
            if fs.delta_chi(split, u, v) != c:
                chi_bad.append([ctx.names[i], ctx.names[j]])
            sign, mono = fs.delta_kappa(split, u, v)
            if sign != c or tuple(mono) != tuple(wc.cocycle_d(split, u, v)):
                kappa_bad.append([ctx.names[i], ctx.names[j]])
    vep = {}
    reg = {}
    for flavor in (fs.LINEAR, fs.CHARACTER):
        vep[flavor] = [ctx.names[i] for i, w in enumerate(E) if not fs.verify_vepchikappa(split, w, flavor).is_zero]
        reg[flavor] = [ctx.names[i] for i, w in enumerate(E) if not fs.verify_regweyl(split, w, flavor).is_zero]
    cc = fs.c_squared(split, fs.LINEAR)
    ko = fs.lambda_KO(split)
    return {
        "pairs_checked": len(E) ** 2,
        "delta_chi_mismatches": chi_bad,
        "delta_kappa_mismatches": kappa_bad,
        "vepchikappa_nonzero": vep,
        "regweyl_nonzero": reg,
        "charge_conjugation_squared": fs.format_section(cc),
        # informational: the KO Euler section and its order-2 torsor
        "ko_orientation": {
            "form": [list(row) for row in _rows(ko.form, len(split.xi0))],
            "monodromy_mod2": [list(row) for row in ko.monodromy],
            "torsor_nontrivial": ko.torsor_nontrivial,
        },
    }


def _rows(flat, r):
    return [flat[i * r:(i + 1) * r] for i in range(r)]


def _hyperplane_rows(ctx: Context, global_corr) -> List[Dict[str, Any]]:
    d, split = ctx.d, ctx.split
    rows = []
    for idx, (a, h, pos) in enumerate(zip(d.roots, d.coroots, d.positive)):
        if not pos:
            continue
        M = d.reflection(idx)
        row: Dict[str, Any] = {"root": _vec(a)}
        res = fs.restrict_to_hyperplane(fs.modified_weyl(split, M).shift.inverse(), a, h)
        row["residual"] = res.residual_display()
        row["trivial"] = fs.hyperplane_class_trivial(res, h)
        corr = None
        if global_corr is not None:
            corr = global_corr[ctx.reflection_element(idx)]
        else:
            rc = descent.solve_root_correction(split, idx)
            if rc.section is not None:
                corr = rc.extra_sign
        if corr is not None:
            res2 = fs.restrict_to_hyperplane(fs.modified_weyl(split, M, correction=corr).shift.inverse(), a, h)
            row["correction_sign"] = _vec(corr)
            row["corrected_residual"] = res2.residual_display()
            row["corrected_trivial"] = fs.hyperplane_class_trivial(res2, h)
        rows.append(row)
    return rows


def torsor_section(ctx: Context) -> Dict[str, Any]:
    split, W = ctx.split, ctx.W
    failing = []
    for i, w in enumerate(W.elements):
        tp = fs.torsor_parity(fs.chi_w(split, w), w)
        if tp.verdict == "nontrivial":
            failing.append({"element": ctx.names[i],
                            "lines": [{"line": _vec(k), "exponent": _vec(lam), "admissible": ok}
                                      for k, lam, ok in tp.exponents]})
    out: Dict[str, Any] = {"parity_verdict": "nontrivial" if failing else "coboundary-possible",
                           "parity_failures": failing}
    if ctx.c_solution is None:
        out["hyperplanes"] = _skip("Weyl cocycle c is not exact")
        out["verdict"] = "obstructed"
        return out
    rep = descent.evaluation_conditions(ctx.d, ctx.e, split, c_exact=True, c_solution=ctx.c_solution, W=W)
    rows = _hyperplane_rows(ctx, rep.global_correction if ctx.corrections == "global" else None)
    out["hyperplanes"] = rows
    if failing:
        out["verdict"] = "nontrivial"
    elif all(r.get("corrected_trivial", r["trivial"]) for r in rows):
        out["verdict"] = "trivial torsor"
    else:
        out["verdict"] = "undetermined"
    return out


def abelianization_section(ctx: Context) -> Dict[str, Any]:
    m = descent.abelianizable(ctx.d, ctx.e)
    return {
        "eligible_c3": m.eligible_c3,
        "eligible_c4": m.eligible_c4,
        "roots": [{"root": _vec(r.root), "multiplicity": r.multiplicity, "required": r.required,
                   "eligible": r.eligible, "affine_multiplicity": r.affine_multiplicity,
                   "affine_eligible": r.affine_eligible} for r in m.roots],
        "torus_weights": None if m.torus_weights is None else
        [{"weight": _vec(w), "mult": k} for w, k in m.torus_weights.lattice()],
        "subtraction_error": m.subtraction_error,
    }


def conditions_section(ctx: Context) -> Dict[str, Any]:
    if ctx.c_solution is None:
        return _skip("obstructed: Weyl cocycle c is not exact")
    rep = descent.evaluation_conditions(ctx.d, ctx.e, ctx.split, c_exact=True,
                                        c_solution=ctx.c_solution, W=ctx.W)
    return {
        "global_correction": None if rep.global_correction is None else
        {ctx.names[i]: _vec(v) for i, v in enumerate(rep.global_correction) if any(v)},
        "roots": [{"root": _vec(rc.root), "levi_case": rc.levi_case, "odd_spin_sum": rc.odd_spin_sum,
                   "status": rc.status, "condition": rc.condition, "note": rc.note,
                   "correction": None if rc.correction is None else fs.format_section(rc.correction),
                   "correction_sign": _vec(rc.correction_sign)} for rc in rep.roots],
    }


SECTIONS = {
    "obstruction": obstruction_section,
    "cocycles": cocycles_section,
    "identities": identities_section,
    "torsor": torsor_section,
    "abelianization": abelianization_section,
    "conditions": conditions_section,
}


def run_analysis(d: RootDatum, e: WeightMultiset, xi0: Optional[Sequence[int]] = None,
                 analyses: Sequence[str] = ANALYSES, weyl_cap: int = DEFAULT_WEYL_CAP,
                 corrections: str = "global") -> Dict[str, Any]:
    """Full report; sections not requested are marked skipped.

    ``corrections`` picks the constant signs used on root hyperplanes:
    ``"global"`` takes them from one trivialization of the Weyl cocycle,
    ``"per-root"`` from each root's own correction.
    """
    e.check_quaternionic()
    ctx = Context(d, e, xi0, weyl_cap, corrections)
    report: Dict[str, Any] = {
        "group": {"name": d.name, "rank": d.rank, "weyl_order": len(ctx.W),
                  "fundamental_group": fundamental_group(d), "labels": list(d.labels)},
        "representation": {"dim": e.dim, "weights": [{"weight": _vec(w), "mult": m} for w, m in e.lattice()]},
        "xi0": _vec(ctx.xi0),
    }
    for name in ANALYSES:
        report[name] = SECTIONS[name](ctx) if name in analyses else _skip("not requested")
    return report
