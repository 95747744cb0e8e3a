"""Primary and secondary obstructions of a quaternionic representation.

The primary obstruction asks for a mod-2 class ``r`` with ``w4(E) = r^2``,
detected on the torus as ``q(g) = <r|g> mod 2`` for the c2 form ``q``.
``r`` must come from ``H^2(BG; Z/2)`` and lift integrally for the Z-graded
theory.  The secondary class is decided from the tensor structure ``R (x) S``
of an irreducible, with the Weyl 1-cocycle ``s2`` as an independent witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .linalg import gf2_solve, integer_kernel
from .representation import PolarizationSplit, WeightMultiset, c2_form
from .root_datum import (FactorSlot, RootDatum, Vec, build_simple, dot)


class ObstructionError(ValueError):
    pass


UNOBSTRUCTED = "unobstructed"
CASE_I = "case_i"
CASE_II = "case_ii"
NOT_APPLICABLE = "not_applicable"


def _bits(v: Sequence[int]) -> int:
    return sum((x % 2) << i for i, x in enumerate(v))


def _unbits(x: int, r: int) -> Vec:
    return tuple((x >> i) & 1 for i in range(r))


def invariant_lattice(d: RootDatum) -> List[Vec]:
    """Basis of ``Lambda^W`` (kernel of ``w - 1`` for every generator)."""
    r = d.rank
    rows = []
    for M in d.weyl_generators:
        for i in range(r):
            rows.append([M[i][j] - int(i == j) for j in range(r)])
    if not rows:
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return [tuple(v) for v in integer_kernel(rows, r)]


@dataclass
class SquareRoot:
    rbar: Vec
    in_h2bg: bool          # <rbar|h> even for every coroot
    integral_lift: bool
    lift: Optional[Vec]    # a W-invariant integral representative, when one exists
    mod4_lift: bool


def _mod2_invariant(d: RootDatum, v: Vec) -> bool:
    for M in d.weyl_generators:
        img = tuple(sum(M[i][j] * v[j] for j in range(d.rank)) % 2 for i in range(d.rank))
        if img != tuple(x % 2 for x in v):
            return False
    return True


def w4_square_root_search(d: RootDatum, e: WeightMultiset) -> List[SquareRoot]:
    """All ``rbar in (Lambda/2)^W`` with ``q_E(g) = <rbar|g> mod 2`` on coweights.

    The condition is imposed on the coweight basis and on pairwise sums of
    basis vectors, which pins down the mod-2 reduction of ``q``.
    """
    r = d.rank
    q = c2_form(e)
    basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    tests = basis + [tuple(a + b for a, b in zip(basis[i], basis[j])) for i in range(r) for j in range(i + 1, r)]
    qvals = [q(g) for g in tests]
    if any(v.denominator != 1 for v in qvals):
        return []
    inv = invariant_lattice(d)
    inv_bits = [_bits(v) for v in inv]
    out = []
    for x in range(2 ** r):
        rb = _unbits(x, r)
        if not _mod2_invariant(d, rb):
            continue
        if any((dot(rb, g) - int(qv)) % 2 for g, qv in zip(tests, qvals)):
            continue
        in_h2 = all(dot(rb, h) % 2 == 0 for h in d.coroots)
        lift = None
        sol = gf2_solve([_column(inv_bits, i) for i in range(r)], list(rb), len(inv)) if inv else None
        if inv and sol is not None:
            coeffs = _unbits(sol[0], len(inv))
            lift = tuple(sum(c * v[i] for c, v in zip(coeffs, inv)) for i in range(r))
        elif not inv and not any(rb):
            lift = tuple([0] * r)
        out.append(SquareRoot(rb, in_h2, lift is not None, lift, _mod4_lift(d, rb)))
    return out


def _column(vec_bits: Sequence[int], i: int) -> int:
    """Row ``i`` of the matrix whose columns are the given bit vectors."""
    return sum(((b >> i) & 1) << k for k, b in enumerate(vec_bits))


def _mod4_lift(d: RootDatum, rb: Vec) -> bool:
    """Is there ``r = rbar mod 2`` with ``<r|h> = 0 mod 4`` for all coroots?"""
    if any(dot(rb, h) % 2 for h in d.coroots):
        return False
    rows = [_bits(h) for h in d.coroots]
    rhs = [(dot(rb, h) // 2) % 2 for h in d.coroots]
    if not rows:
        return True
    return gf2_solve(rows, rhs, d.rank) is not None


# ---------------------------------------------------------------- structure

def _leaves(structure: Any) -> List[Any]:
    if isinstance(structure, tuple) and structure and structure[0] == "tensor":
        return _leaves(structure[1]) + _leaves(structure[2])
    return [structure]


def _support(d: RootDatum, e: WeightMultiset) -> List[int]:
    out = []
    for idx, slot in enumerate(d.factors):
        if any(w[slot.offset + k] for w, _ in e.entries for k in range(slot.size)):
            out.append(idx)
    return out


def _is_symplectic(slot: FactorSlot) -> bool:
    return slot.family == "Sp" or (slot.family == "SU" and slot.n == 2)


def _sp_center(slot: FactorSlot) -> Tuple[Fraction, ...]:
    return tuple(Fraction(1, 2) for _ in range(slot.size))


def _kernel_elements(d: RootDatum, limit: int = 4096) -> List[Tuple[Fraction, ...]]:
    ks = list(d.kernel_ambient)
    if not ks:
        return []
    orders = []
    for k in ks:
        den = 1
        for x in k:
            den = den * x.denominator // _gcd(den, x.denominator)
        orders.append(den)
    out = []
    for coeffs in itertools.product(*(range(o) for o in orders)):
        if not any(coeffs):
            continue
        v = tuple(sum(c * k[i] for c, k in zip(coeffs, ks)) % 1 for i in range(d.ambient_dim))
        out.append(v)
        if len(out) > limit:
            break
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass
class TensorSplit:
    """``E = R (x) S`` with ``S`` quaternionic on one symplectic factor."""
    R: Optional[WeightMultiset]
    S: WeightMultiset
    factor: int
    dim_R: int
    dimH_S: int
    c2_S: int
    mu2_quotient: bool


def split_tensor(d: RootDatum, e: WeightMultiset, operands: Sequence[WeightMultiset]) -> TensorSplit:
    """Pick ``S`` among the tensor operands: the last one supported on a single
    symplectic factor on which the centre acts by ``-1``."""
    from .representation import tensor
    pick = None
    for idx in reversed(range(len(operands))):
        op = operands[idx]
        sup = _support(d, op)
        if len(sup) != 1 or not _is_symplectic(d.factors[sup[0]]):
            continue
        slot = d.factors[sup[0]]
        z = [Fraction(0)] * d.ambient_dim
        for k, c in enumerate(_sp_center(slot)):
            z[slot.offset + k] = c
        if all(dot(w, z) % 1 == Fraction(1, 2) for w, _ in op.entries):
            pick = idx
            break
    if pick is None:
        raise ObstructionError("representation is not structured as R (x) S with S quaternionic on a symplectic factor")
    S = operands[pick]
    rest = [op for i, op in enumerate(operands) if i != pick]
    R = None
    for op in rest:
        R = op if R is None else tensor(R, op)
    factor = _support(d, S)[0]
    slot = d.factors[factor]
    q = c2_form(S, ambient=True)
    g = [0] * d.ambient_dim
    g[slot.offset] = 1
    c2S = q(g)
    mu2 = any(all((x - Fraction(1, 2)) % 1 == 0 for x in k[slot.offset:slot.offset + slot.size])
              for k in _kernel_elements(d))
    dim_R = R.dim if R is not None else 1
    return TensorSplit(R, S, factor, dim_R, S.dim // 2, int(c2S), mu2)


def tensor_operands(e: WeightMultiset) -> List[WeightMultiset]:
    """Rebuild the tensor operands recorded in ``e.structure``."""
    if len(_leaves(e.structure)) == 1:
        return [e]
    return [_realize(e.datum, s) for s in _leaves(e.structure)]


def _realize(d: RootDatum, s: Any) -> WeightMultiset:
    from . import representation as rp
    kind = s[0]
    if kind == "standard":
        return rp.standard_rep(d, s[1])
    if kind == "su2_irrep":
        return rp.su2_irrep(d, s[1], s[2])
    if kind == "spin":
        return rp.spin_rep(d, s[1], s[2])
    if kind == "adjoint":
        return rp.adjoint_rep(d)
    if kind == "sum":
        return rp.direct_sum(_realize(d, s[1]), _realize(d, s[2]))
    if kind == "tensor":
        return rp.tensor(_realize(d, s[1]), _realize(d, s[2]))
    if kind == "dual":
        return rp.dual(_realize(d, s[1]))
    if kind == "quaternionify":
        return rp.quaternionify(_realize(d, s[1]))
    if kind == "scale":
        return rp.scale(_realize(d, s[2]), s[1])
    if kind == "explicit":
        return rp.WeightMultiset(d, s[1], s)
    raise ObstructionError(f"cannot rebuild representation node {kind!r}")


def classify_irreducible(d: RootDatum, e: WeightMultiset) -> str:
    """Case (i), case (ii) or unobstructed for ``E = R (x) S``."""
    if e.dim == 0:
        return UNOBSTRUCTED
    ts = split_tensor(d, e, tensor_operands(e))
    if not ts.mu2_quotient and ts.dim_R % 2 == 1 and ts.c2_S % 2 == 1:
        return CASE_I
    if ts.mu2_quotient and ts.dim_R % 4 == 2 and ts.dimH_S % 2 == 1:
        return CASE_II
    return UNOBSTRUCTED


# ---------------------------------------------------------------- secondary

ZERO = "zero"
NONZERO = "nonzero"
CONDITIONAL = "conditional"


def _w3_witness(d: RootDatum, R: Optional[WeightMultiset]) -> Optional[str]:
    """Recognize representations ``R`` with ``w3(R) != 0``.

    Two shapes are recognized: the vector representation of an ``SO(4k)``
    factor, and ``std (x) std`` of two ``SU(2)``/``Sp(1)`` factors when the
    diagonal central element of the pair lies in the kernel (so ``R`` is the
    vector representation of ``SO(4)``).
    """
    if R is None:
        return None
    leaves = _leaves(R.structure)
    if len(leaves) == 1 and leaves[0][0] == "standard":
        slot = d.factors[leaves[0][1]]
        if slot.family == "SO" and slot.n % 4 == 0:
            return f"vector representation of {slot.label}"
    if len(leaves) == 2 and all(l[0] == "standard" for l in leaves):
        f1, f2 = leaves[0][1], leaves[1][1]
        s1, s2 = d.factors[f1], d.factors[f2]
        if f1 != f2 and all(s.family in ("SU", "Sp") and s.size == 1 and (s.family == "Sp" or s.n == 2) for s in (s1, s2)):
            for k in _kernel_elements(d):
                if k[s1.offset] == Fraction(1, 2) and k[s2.offset] == Fraction(1, 2):
                    return f"std (x) std of {s1.label} x {s2.label} through SO(4)"
    return None


@dataclass
class SigmaResult:
    status: str
    witness: Optional[str]
    reason: str


def secondary_sigma(d: RootDatum, e: WeightMultiset) -> SigmaResult:
    roots = [r for r in w4_square_root_search(d, e) if r.in_h2bg]
    if not roots:
        raise ObstructionError("secondary obstruction needs a mod-2 square root of w4")
    if not any(_is_symplectic(s) for s in d.factors):
        return SigmaResult(ZERO, None, "connected group without symplectic factors")
    if e.dim == 0:
        return SigmaResult(ZERO, None, "zero representation")
    try:
        ts = split_tensor(d, e, tensor_operands(e))
    except ObstructionError as exc:
        return SigmaResult(CONDITIONAL, None, f"no tensor structure: {exc}")
    if ts.mu2_quotient and ts.dim_R % 4 == 2 and ts.dimH_S % 2 == 1:
        return SigmaResult(ZERO, None, "case (ii): the home of sigma vanishes")
    if not (ts.mu2_quotient and ts.dim_R % 4 == 0 and ts.dimH_S % 2 == 1):
        return SigmaResult(ZERO, None, "outside the exceptional family (mu2 quotient, dim R = 4k, dim_H S odd)")
    w = _w3_witness(d, ts.R)
    if w:
        return SigmaResult(NONZERO, f"w3(R) x with R the {w}", "exceptional family with w3(R) != 0")
    return SigmaResult(CONDITIONAL, None, "exceptional family; w3(R) not decided")


# ---------------------------------------------------------------- d5 table

def basic_form(d: RootDatum) -> Tuple[Tuple[Fraction, ...], ...]:
    """Invariant form on ambient coweights of a simple datum with ``q = 1`` on the shortest coroots."""
    n = d.ambient_dim
    G = [[sum(a[i] * a[j] for a in d.roots_ambient) for j in range(n)] for i in range(n)]
    vals = [sum(h[i] * G[i][j] * h[j] for i in range(n) for j in range(n)) for h in d.coroots_ambient]
    m = min(vals)
    return tuple(tuple(x / m for x in row) for row in G)


D5_CASES = {
    ("PSp", "c2"), ("PSU", "c2"), ("Spin", "p1/2"), ("SO", "p1"), ("PSO", "p1"), ("Spin/b+", "p1/2"),
}


def d5_transgression(family_case: str, cls: str, param: int, generator: str = "") -> Fraction:
    """``q(class)`` restricted to the kernel generator, as an element of Q/Z.

    ``family_case``/``cls``: ``PSp(m)``/``c2``, ``PSU(n)``/``c2``,
    ``Spin(2l)``/``p1/2`` on generator ``a`` or ``b+``/``b-``, ``SO(2l)``/``p1``
    on ``a``, ``PSO(2l)``/``p1`` on ``b+``, ``Spin(4k)/<b+>``/``p1/2``
    (``param`` is ``k``).  The c2 class carries the negative basic form.
    """
    if (family_case, cls) not in D5_CASES:
        raise ObstructionError(f"unsupported transgression ({family_case}, {cls})")
    if family_case == "PSp":
        d = build_simple("Sp", param)
        z = d.center_ambient[0]
    elif family_case == "PSU":
        d = build_simple("SU", param)
        z = d.center_ambient[0]
    else:
        l = 2 * param if family_case == "Spin/b+" else param
        d = build_simple("Spin", 2 * l)
        gens = {"a": d.center_ambient[0], "b+": d.center_ambient[1], "b-": d.center_ambient[2]}
        default = {"Spin": "b+", "SO": "a", "PSO": "b+", "Spin/b+": "b+"}[family_case]
        z = gens[generator or default]
    G = basic_form(d)
    scale = {"c2": -1, "p1/2": 1, "p1": 2}[cls]
    n = d.ambient_dim
    val = scale * sum(z[i] * G[i][j] * z[j] for i in range(n) for j in range(n))
    return val % 1


def d5_closed_form(family_case: str, param: int, generator: str = "") -> Fraction:
    """Tabulated values, used to cross-check :func:`d5_transgression`."""
    if family_case == "PSp":
        return Fraction(-param, 4) % 1
    if family_case == "PSU":
        return Fraction(1 - param, 2 * param) % 1
    if family_case == "Spin":
        return Fraction(1, 2) if generator == "a" else Fraction(param, 8) % 1
    if family_case == "SO":
        return Fraction(0)
    if family_case == "PSO":
        return Fraction(param, 4) % 1
    if family_case == "Spin/b+":
        return Fraction(param, 4) % 1
    raise ObstructionError(f"unknown family {family_case}")


def dim_c2_mod4_check(d: RootDatum, e: WeightMultiset, factor: int = 0) -> bool:
    """``dim_H E = m c2(E) mod 4`` for an ``Sp(m)`` factor."""
    slot = d.factors[factor]
    if not _is_symplectic(slot):
        raise ObstructionError("factor is not symplectic")
    m = slot.size
    g = [0] * d.ambient_dim
    g[slot.offset] = 1
    c2 = c2_form(e, ambient=True)(g)
    return (e.dim // 2 - m * c2) % 4 == 0


# ---------------------------------------------------------------- parity

def fiber_dimension(split: PolarizationSplit, gamma: Sequence[int], dimS: int) -> int:
    """``-sum_{<nu|g> > 0} <nu|g> - dimS`` over all weights of E."""
    total = 0
    for nu, m in split.positive.entries + split.zero.entries + split.negative.entries:
        p = dot(nu, gamma)
        if p > 0:
            total += m * p
    return -total - dimS


def even_choice(r: Sequence[int]):
    """The assignment ``gamma -> <r|gamma>`` as a callable."""
    r = tuple(r)
    return lambda gamma: dot(r, gamma)


# ---------------------------------------------------------------- report

@dataclass
class ObstructionReport:
    w4_mod2_roots: List[Vec]
    in_h2bg: List[bool]
    integral_lift: List[bool]
    mod4_lift: List[bool]
    lifts: List[Optional[Vec]]
    classification_case: str
    sigma_status: str
    sigma_witness: Optional[str]
    notes: List[str] = field(default_factory=list)

    @property
    def primary_unobstructed(self) -> bool:
        return any(self.integral_lift)


def obstruction_report(d: RootDatum, e: WeightMultiset) -> ObstructionReport:
    roots = w4_square_root_search(d, e)
    notes = []
    try:
        case = classify_irreducible(d, e)
    except ObstructionError as exc:
        case = NOT_APPLICABLE
        notes.append(str(exc))
    if any(r.in_h2bg for r in roots):
        sig = secondary_sigma(d, e)
        sigma, witness = sig.status, sig.witness
        notes.append(f"sigma: {sig.reason}")
    else:
        sigma, witness = CONDITIONAL, None
        notes.append("sigma not evaluated: no mod-2 square root of w4 in H^2(BG;Z/2)")
    if roots and not any(r.in_h2bg for r in roots):
        notes.append("mod-2 roots exist in (Lambda/2)^W but none lies in H^2(BG;Z/2)")
    lifted = any(r.integral_lift for r in roots)
    if case != NOT_APPLICABLE and (case == UNOBSTRUCTED) != lifted:
        notes.append(f"classification {case} disagrees with the weight search (integral lift {lifted})")
    return ObstructionReport(
        [r.rbar for r in roots], [r.in_h2bg for r in roots], [r.integral_lift for r in roots],
        [r.mod4_lift for r in roots], [r.lift for r in roots], case, sigma, witness, notes)
