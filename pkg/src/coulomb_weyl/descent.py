"""Abelianization eligibility, Fourier modes and per-root evaluation data.

Everything here is *model data*: weights, hyperplane multiplicities, the
Levi type along each root and an explicit correction section ``r`` with
``chi_s = r * s[r]^-1`` whenever one can be built.  No coordinate rings.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .formal_sections import LINEAR, Section, chi_w, weyl_act
from .linalg import gf2_solve, solve_integer
from .representation import PolarizationSplit, WeightMultiset, adjoint_rep
from .root_datum import RootDatum, Vec, dot, mat_vec


class DescentError(ValueError):
    pass


# ---------------------------------------------------------------- abelianization

def _ratio(nu: Sequence[int], alpha: Sequence[int]) -> Optional[Fraction]:
    """``k`` with ``nu = k alpha`` or ``None``."""
    k = None
    for a, b in zip(nu, alpha):
        if b == 0:
            if a != 0:
                return None
            continue
        q = Fraction(a, b)
        if k is None:
            k = q
        elif q != k:
            return None
    return k


def hyperplane_multiplicity(weights: Sequence[Tuple[Vec, int]], alpha: Vec, coroot: Vec,
                            integral_only: bool = False) -> int:
    """``sum m <nu|h>`` over weights ``nu = k alpha`` with ``k > 0``.

    This is the vanishing order of the Euler class along the root
    hyperplane.  ``integral_only`` keeps integer ``k`` only, which is the
    count at the central translate where ``x^(alpha/2) = -1``.
    """
    total = 0
    for nu, m in weights:
        k = _ratio(nu, alpha)
        if k is None or k <= 0:
            continue
        if integral_only and k.denominator != 1:
            continue
        total += m * dot(nu, coroot)
    return total


@dataclass
class RootEligibility:
    root: Vec
    multiplicity: int
    required: int
    eligible: bool
    affine_multiplicity: int
    affine_eligible: bool
    root_present: bool


@dataclass
class AbelianizedModel:
    torus_weights: Optional[WeightMultiset]
    roots: List[RootEligibility]
    eligible_c3: bool
    eligible_c4: bool
    subtraction_error: Optional[str] = None


def abelianizable(d: RootDatum, e: WeightMultiset) -> AbelianizedModel:
    """Compare hyperplane multiplicities of ``E`` with those of ``g_H``."""
    ws = e.lattice()
    counts = dict(ws)
    rows = []
    for a, h, pos in zip(d.roots, d.coroots, d.positive):
        if not pos:
            continue
        # quaternionified adjoint: each root twice
        need = 2 * dot(a, h)
        n = hyperplane_multiplicity(ws, a, h)
        na = hyperplane_multiplicity(ws, a, h, integral_only=True)
        rows.append(RootEligibility(a, n, need, n >= need, na, na >= need,
                                    counts.get(a, 0) >= 2 and counts.get(tuple(-x for x in a), 0) >= 2))
    torus = None
    err = None
    try:
        torus = subtract_adjoint(e)
    except DescentError as exc:
        err = str(exc)
    return AbelianizedModel(torus, rows, all(r.eligible for r in rows), all(r.affine_eligible for r in rows), err)


def quaternionic_adjoint(d: RootDatum) -> WeightMultiset:
    adj = adjoint_rep(d)
    return WeightMultiset.from_counter(d, {w: 2 * m for w, m in adj.entries}, ("quaternionify", ("adjoint",)))


def subtract_adjoint(e: WeightMultiset) -> WeightMultiset:
    """``E - g_H`` where ``g_H`` is the adjoint made quaternionic."""
    d = e.datum
    have = Counter(e.counts)
    need = quaternionic_adjoint(d)
    order = list(d.roots_ambient) + [tuple([Fraction(0)] * d.ambient_dim)]
    for w in order:
        m = need.counts.get(w, 0)
        if have.get(w, 0) < m:
            raise DescentError(f"E does not contain g_H: weight {[str(x) for x in w]} missing "
                               f"(needs multiplicity {m}, has {have.get(w, 0)})")
    for w, m in need.entries:
        have[w] -= m
    return WeightMultiset.from_counter(d, {w: m for w, m in have.items() if m})


# ---------------------------------------------------------------- Fourier modes

@dataclass(frozen=True)
class FourierMode:
    gamma: Vec
    section: Section


def fourier_mode(split: PolarizationSplit, gamma: Sequence[int], flavor: str = LINEAR) -> FourierMode:
    """``h^gamma * prod <nu|xi>^<nu|gamma>`` over ``nu < 0`` with ``<nu|gamma> > 0``.

    Exponents are scalars (``scalar`` mode); with the mass polarization of
    ``E = V + V^vee`` the factors are exactly the poles of the pairing of the
    Euler section of ``V`` with ``gamma``.
    """
    split.require_strict()
    gamma = tuple(gamma)
    s = Section.unit(flavor, split.xi0, split.datum.rank, scalar=True)
    entries = []
    for nu, m in split.negative.entries:
        p = dot(nu, gamma)
        if p > 0:
            entries.append((nu, (m * p,)))
    return FourierMode(gamma, s.with_factors(entries))


# ---------------------------------------------------------------- evaluation conditions

SO3 = "Z x SO(3)"
SU2 = "Z x SU(2)"
SU2_MU2 = "Z x_mu2 SU(2)"


def levi_case(d: RootDatum, alpha: Vec, coroot: Vec) -> str:
    r = d.rank
    if all(coroot[i] % 2 == 0 for i in range(r)):
        return SO3
    g = 0
    for x in alpha:
        g = _gcd(g, x)
    return SU2_MU2 if g == 1 else SU2


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def odd_spin_sum(weights: Sequence[Tuple[Vec, int]], coroot: Vec) -> int:
    """``sum m n`` over weights with ``n = <nu|h> > 0`` odd."""
    total = 0
    for nu, m in weights:
        n = dot(nu, coroot)
        if n > 0 and n % 2:
            total += m * n
    return total


@dataclass
class RootCondition:
    root: Vec
    levi_case: str
    odd_spin_sum: int
    correction: Optional[Section]
    correction_sign: Vec            # constant sign that must be added to chi_s
    status: str                     # "constructed", "needs sign correction", "exists, not constructed"
    condition: str
    note: str = ""


@dataclass
class EvaluationConditionReport:
    roots: List[RootCondition]
    global_correction: Optional[Tuple[Vec, ...]] = None


def _span_reduce(v: int, basis: Dict[int, int]) -> int:
    for low in sorted(basis):
        if (v >> low) & 1:
            v ^= basis[low]
    return v


def _echelon(vectors: Sequence[int]) -> Dict[int, int]:
    basis: Dict[int, int] = {}
    for v in vectors:
        v = _span_reduce(v, basis)
        if v:
            low = (v & -v).bit_length() - 1
            for k in list(basis):
                if (basis[k] >> low) & 1:
                    basis[k] ^= v
            basis[low] = v
    return basis


def _bits(v: Sequence[int]) -> int:
    return sum((x % 2) << i for i, x in enumerate(v))


def _unbits(x: int, r: int) -> Vec:
    return tuple((x >> i) & 1 for i in range(r))


def saturated_image(alpha: Vec) -> Vec:
    """Primitive generator of ``Q alpha`` in the lattice: the saturation of ``(1-s)Lambda``."""
    g = 0
    for x in alpha:
        g = _gcd(g, x)
    return tuple(x // g for x in alpha)


@dataclass
class RootCorrection:
    section: Optional[Section]
    extra_sign: Vec                # constant sign to add to chi_s
    status: str
    absorbable: Dict[int, int]     # echelon basis (bitsets) of signs absorbed by r and constants
    note: str = ""


def _primitive(k: Vec) -> Tuple[Vec, int]:
    g = 0
    for x in k:
        g = _gcd(g, x)
    return tuple(x // g for x in k), g


def solve_root_correction(split: PolarizationSplit, s_idx: int) -> RootCorrection:
    """Find ``r`` with ``chi_s = r * s[r]^-1`` up to constants ``t * s(t)^-1``.

    Keys are first replaced by their primitive multiples (``<g nu|xi> =
    g <nu|xi>``); the positive constants produced this way are absorbable
    when their exponent is proportional to the root.  Exponents then come
    from an integer system over the ``s``-closure of the keys.  The sign part
    is an F2 system whose free directions are the parities of homogeneous
    exponent solutions and the 2-torsion of the subtorus ``(1-s)H``.
    ``extra_sign`` is the reduced constant sign that must still be added to
    ``chi_s``.
    """
    d = split.datum
    r = d.rank
    alpha = d.roots[s_idx]
    M = d.reflection(s_idx)
    chi = chi_w(split, M)
    xi0 = split.xi0
    zero = tuple([0] * r)

    def norm(k):
        return k if dot(k, xi0) > 0 else tuple(-x for x in k)

    lam: Dict[Vec, Vec] = {}
    note = ""
    for k, v in chi.factors:
        p, g = _primitive(k)
        lam[p] = tuple(a + b for a, b in zip(lam.get(p, zero), v))
        if g > 1 and _ratio(v, alpha) is None and any(v):
            note = "positive constants from non-primitive keys are not absorbable"
    lam = {k: v for k, v in lam.items() if any(v)}
    keys = set(lam)
    frontier = list(keys)
    while frontier:
        k = frontier.pop()
        k2 = norm(mat_vec(M, k))
        if k2 not in keys:
            keys.add(k2)
            frontier.append(k2)
    keys = sorted(keys)
    kidx = {k: i for i, k in enumerate(keys)}
    n = len(keys) * r
    A, b = [], []
    for k in keys:
        pk = kidx[norm(mat_vec(M, k))]
        target = lam.get(k, zero)
        for i in range(r):
            row = [0] * n
            row[kidx[k] * r + i] += 1
            for j in range(r):
                row[pk * r + j] -= M[i][j]
            A.append(row)
            b.append(target[i])
    sol = solve_integer(A, b, n) if n else ([], [])
    sat = _bits(saturated_image(alpha))
    if sol is None or note:
        return RootCorrection(None, zero, "exists, not constructed", _echelon([sat]),
                              note or "no integral exponent solution")
    mu, kernel = sol

    def signterm(vec) -> int:
        acc = [0] * r
        for k in keys:
            if dot(mat_vec(M, k), xi0) < 0:
                smu = mat_vec(M, vec[kidx[k] * r:(kidx[k] + 1) * r])
                acc = [a + x for a, x in zip(acc, smu)]
        return _bits(acc)

    gens = [signterm(kv) for kv in kernel]
    basis = _echelon(gens + [sat])
    need = _bits(chi.sign) ^ signterm(mu)
    residual = _span_reduce(need, basis)
    target = need ^ residual
    if target:
        cols = gens + [sat]
        rows = [sum(((g >> i) & 1) << j for j, g in enumerate(cols)) for i in range(r)]
        x, _ = gf2_solve(rows, list(_unbits(target, r)), len(cols))
        for j, kv in enumerate(kernel):
            if (x >> j) & 1:
                mu = [a + c for a, c in zip(mu, kv)]
    entries = [(k, tuple(mu[kidx[k] * r:(kidx[k] + 1) * r])) for k in keys]
    rsec = Section.unit(LINEAR, xi0, r).with_factors(entries)
    status = "constructed" if residual == 0 else "needs sign correction"
    return RootCorrection(rsec, _unbits(residual, r), status, basis)


def check_root_correction(split: PolarizationSplit, s_idx: int, rsec: Section, extra_sign: Sequence[int]) -> bool:
    """Verify ``chi_s * (-1)^extra = r * s[r]^-1`` modulo constants ``t s(t)^-1``."""
    d = split.datum
    M = d.reflection(s_idx)
    chi = chi_w(split, M).with_factors((), extra_sign)
    merged = Section.unit(LINEAR, split.xi0, d.rank).with_factors(
        [(_primitive(k)[0], v) for k, v in chi.factors], chi.sign)
    q = merged * (rsec * weyl_act(M, rsec).inverse()).inverse()
    if not q.is_constant():
        return False
    sat = _bits(saturated_image(d.roots[s_idx]))
    v = _bits(q.sign)
    return v == 0 or v == sat


def evaluation_conditions(d: RootDatum, e: WeightMultiset, split: PolarizationSplit,
                          c_exact: bool = True, flavor: str = LINEAR,
                          c_solution=None, W=None) -> EvaluationConditionReport:
    """Per positive root: Levi type, odd-spin sum and a correction ``r_alpha``.

    When a trivialization set ``c_solution`` of the Weyl cocycle is passed
    (with the group ``W``), a member supplying every required sign is chosen.
    """
    if not c_exact:
        raise DescentError("obstructed input: the Weyl cocycle c has no trivialization")
    ws = e.lattice()
    out = []
    absorb = []
    cond = "exp(h_alpha) o (s r_alpha) = O(alpha)" if flavor == LINEAR else "exp(h_alpha) o (s q_alpha) = O(e^alpha - 1)"
    for idx, (a, h, pos) in enumerate(zip(d.roots, d.coroots, d.positive)):
        if not pos:
            continue
        lc = levi_case(d, a, h)
        osum = odd_spin_sum(ws, h)
        if flavor != LINEAR:
            out.append(RootCondition(a, lc, osum, None, tuple([0] * d.rank),
                                     "exists, not constructed", cond,
                                     "character-flavour corrections are not mechanized"))
            continue
        rc = solve_root_correction(split, idx)
        note = rc.note or ("" if e.dim else "pure gauge: the condition reads exp(h_alpha) o s = 1")
        out.append(RootCondition(a, lc, osum, rc.section, rc.extra_sign, rc.status, cond, note))
        absorb.append((idx, rc))
    report = EvaluationConditionReport(out)
    if c_solution is not None and W is not None:
        report.global_correction = select_global_correction(d, W, c_solution, absorb)
    return report


def select_global_correction(d: RootDatum, W, c_solution, per_root) -> Optional[Tuple[Vec, ...]]:
    """Pick a trivialization ``phi`` of ``c`` whose value on each reflection
    supplies the sign that root needs (modulo what that root absorbs).

    Returns ``phi`` as a tuple indexed by group element, or ``None`` when no
    member of the affine solution set works.
    """
    r = d.rank
    part = c_solution.particular.values
    kers = [k.values for k in c_solution.kernel]
    rows, rhs = [], []
    for idx, rc in per_root:
        if rc.section is None:
            continue
        w = W.index[d.reflection(idx)]
        base = _span_reduce(_bits(part[w]) ^ _bits(rc.extra_sign), rc.absorbable)
        cols = [_span_reduce(_bits(kv[w]), rc.absorbable) for kv in kers]
        for i in range(r):
            rows.append(sum(((c >> i) & 1) << j for j, c in enumerate(cols)))
            rhs.append((base >> i) & 1)
    sol = gf2_solve(rows, rhs, len(kers)) if rows else (0, [])
    if sol is None:
        return None
    x, _ = sol
    phi = [list(v) for v in part]
    for j, kv in enumerate(kers):
        if (x >> j) & 1:
            phi = [[(a + b) % 2 for a, b in zip(p, q)] for p, q in zip(phi, kv)]
    return tuple(tuple(p) for p in phi)
