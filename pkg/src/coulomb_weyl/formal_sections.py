"""Normal-form algebra of rational sections from the Toda base to the dual torus.

A *linear* section is a product ``(-1)^sign * prod <nu|xi>^lam`` and a
*character* section is ``(-1)^sign * x^T * prod (1 - x^-nu)^lam`` with
``T in Lambda (x) Lambda`` (the map ``x -> prod (x^mu)^lam`` for
``T = sum mu (x) lam``).  Factor keys are kept positive with respect to a
fixed regular coweight ``xi0``; entering a negative key applies

* ``<-nu|xi>^lam = (-1)^lam <nu|xi>^lam``
* ``(1 - x^nu)^lam = (-1)^lam x^(nu (x) lam) (1 - x^-nu)^lam``.

Weyl elements are integer matrices on weight coordinates.  ``w[s]`` means
``p -> w . s(w^-1 p)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import mat_inverse_fraction, solve_integer
from .representation import PolarizationSplit
from .root_datum import Mat, Vec, dot, identity, mat_mul, mat_vec, transpose

LINEAR = "linear"
CHARACTER = "character"


class SectionError(ValueError):
    pass


def int_inverse(M: Mat) -> Mat:
    inv = mat_inverse_fraction(M)
    return tuple(tuple(int(x) for x in row) for row in inv)


def _mod2(v) -> Vec:
    return tuple(x % 2 for x in v)


@dataclass(frozen=True)
class Section:
    """Common representation of linear and character sections.

    ``factors`` maps a positive key to its exponent; ``monomial`` is a flat
    ``r*r`` tuple (all zero for the linear flavor).  In *scalar* mode the
    exponents, sign and monomial are plain integers stored as 1-tuples; this
    is how pairings with a cocharacter and Fourier modes are stored.
    """
    flavor: str
    xi0: Vec
    factors: Tuple[Tuple[Vec, Vec], ...]
    sign: Vec
    monomial: Vec
    scalar: bool = False

    # -- construction ------------------------------------------------------
    @staticmethod
    def unit(flavor: str, xi0: Sequence[int], rank: int, scalar: bool = False) -> "Section":
        e = 1 if scalar else rank
        return Section(flavor, tuple(xi0), (), tuple([0] * e), tuple([0] * (rank * e)), scalar)

    @property
    def rank(self) -> int:
        return len(self.xi0)

    @property
    def ewidth(self) -> int:
        return 1 if self.scalar else self.rank

    @property
    def convention(self) -> Tuple[str, Vec]:
        return (self.flavor, self.xi0)

    def factor_dict(self) -> Dict[Vec, Vec]:
        return dict(self.factors)

    def is_constant(self) -> bool:
        return not self.factors

    def is_identity(self) -> bool:
        return not self.factors and not any(self.sign) and not any(self.monomial)

    def _check(self, other: "Section") -> None:
        if self.convention != other.convention or self.scalar != other.scalar:
            raise SectionError("sections built with different conventions cannot be combined")

    # -- normal form ---------------------------------------------------------
    def with_factors(self, entries: Iterable[Tuple[Sequence[int], Sequence[int]]],
                     sign: Optional[Sequence[int]] = None,
                     monomial: Optional[Sequence[int]] = None) -> "Section":
        """Multiply by raw factors ``(key, exponent)``, normalizing keys."""
        f = self.factor_dict()
        s = list(self.sign)
        mono = list(self.monomial)
        if sign is not None:
            s = [a + b for a, b in zip(s, sign)]
        if monomial is not None:
            mono = [a + b for a, b in zip(mono, monomial)]
        ew = self.ewidth
        for key, lam in entries:
            key = tuple(key)
            lam = tuple(lam)
            p = dot(key, self.xi0)
            if p == 0:
                raise SectionError(f"factor key {key} is not regular for xi0 {self.xi0}")
            if p < 0:
                key = tuple(-x for x in key)
                s = [a + b for a, b in zip(s, lam)]
                if self.flavor == CHARACTER:
                    # x^(key (x) lam), key now the positive representative
                    mono = [mono[i * ew + j] + key[i] * lam[j] for i in range(self.rank) for j in range(ew)]
            old = f.get(key, tuple([0] * ew))
            f[key] = tuple(a + b for a, b in zip(old, lam))
        f = {k: v for k, v in f.items() if any(v)}
        return Section(self.flavor, self.xi0, tuple(sorted(f.items())), _mod2(s), tuple(mono), self.scalar)

    # -- algebra ---------------------------------------------------------------
    def __mul__(self, other: "Section") -> "Section":
        self._check(other)
        return self.with_factors(other.factors, other.sign, other.monomial)

    def inverse(self) -> "Section":
        return Section(self.flavor, self.xi0, tuple((k, tuple(-x for x in v)) for k, v in self.factors),
                       self.sign, tuple(-x for x in self.monomial), self.scalar)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Section) and self.convention == other.convention
                and self.factors == other.factors and _mod2(self.sign) == _mod2(other.sign)
                and tuple(self.monomial) == tuple(other.monomial) and self.scalar == other.scalar)

    def __hash__(self):
        return hash((self.flavor, self.xi0, self.factors, self.sign, self.monomial))

    def constant_part(self) -> Tuple[Vec, Vec]:
        return self.sign, self.monomial


# ---------------------------------------------------------------- transformations

def _tensor_left(M: Mat, T: Sequence[int], r: int, ew: int) -> Vec:
    return tuple(sum(M[i][k] * T[k * ew + j] for k in range(r)) for i in range(r) for j in range(ew))


def _tensor_right(M: Mat, T: Sequence[int], r: int) -> Vec:
    # sum mu (x) M lam, i.e. T M^T
    return tuple(sum(T[i * r + k] * M[j][k] for k in range(r)) for i in range(r) for j in range(r))


def precompose(s: Section, w: Mat, negate: bool = False) -> Section:
    """The section ``p -> s(+-w p)`` (point in the base, ``w`` on weights)."""
    if s.scalar:
        raise SectionError("precomposition of scalar sections is not supported")
    winv = int_inverse(w)
    r = s.rank
    mono = _tensor_left(winv, s.monomial, r, r)
    if negate:
        mono = tuple(-x for x in mono)
    out = Section.unit(s.flavor, s.xi0, r).with_factors((), s.sign, mono)
    entries = []
    for key, lam in s.factors:
        k = mat_vec(winv, key)
        if negate:
            k = tuple(-x for x in k)
        entries.append((k, lam))
    return out.with_factors(entries)


def apply_value(s: Section, w: Mat, e: int = 1) -> Section:
    """The section ``p -> w . s(p)^e`` (``w`` acting on the value)."""
    r = s.rank
    factors = tuple((k, tuple(e * x for x in mat_vec(w, lam))) for k, lam in s.factors)
    mono = tuple(e * x for x in _tensor_right(w, s.monomial, r))
    return Section(s.flavor, s.xi0, factors, _mod2(mat_vec(w, s.sign)), mono)


def weyl_act(w: Mat, s: Section) -> Section:
    """``w[s](p) = w . s(w^-1 p)``."""
    return apply_value(precompose(s, int_inverse(w)), w)


def substitute_neg(s: Section) -> Section:
    return precompose(s, identity(s.rank), negate=True)


def multiply(a: Section, b: Section) -> Section:
    return a * b


def invert(s: Section) -> Section:
    return s.inverse()


# ---------------------------------------------------------------- named sections

def _unit_for(split: PolarizationSplit, flavor: str) -> Section:
    return Section.unit(flavor, split.xi0, split.datum.rank)


def _scaled(v: Sequence[int], m: int) -> Vec:
    return tuple(m * x for x in v)


def chi_w(split: PolarizationSplit, w: Mat, flavor: str = LINEAR) -> Section:
    """``prod <w nu|xi>^(w nu)`` (resp. ``(1 - x^-(w nu))^(w nu)``) over ``nu > 0, w nu < 0``."""
    split.require_strict()
    entries = []
    for nu, m in split.positive.entries:
        wn = mat_vec(w, nu)
        if dot(wn, split.xi0) < 0:
            entries.append((wn, _scaled(wn, m)))
    return _unit_for(split, flavor).with_factors(entries)


def kappa_w(split: PolarizationSplit, w: Mat) -> Section:
    return chi_w(split, w, CHARACTER)


def epsilon_plus(split: PolarizationSplit, flavor: str = LINEAR) -> Section:
    split.require_strict()
    return _unit_for(split, flavor).with_factors((nu, _scaled(nu, m)) for nu, m in split.positive.entries)


def lambda_plus(split: PolarizationSplit) -> Section:
    return epsilon_plus(split, CHARACTER)


def epsilon_V(xi0: Sequence[int], v_weights: Iterable[Tuple[Vec, int]], flavor: str = LINEAR) -> Section:
    """Euler section of a polarization ``E = V + V^vee``: ``prod <nu|xi>^nu`` over ``nu in V``.

    Mass parameters enter as an extra torus factor of the datum, so the
    factor ``<nu|xi> + mu`` is just ``<nu|xi>`` on the enlarged lattice.
    """
    v_weights = list(v_weights)
    r = len(xi0)
    zero = [nu for nu, _ in v_weights if not any(nu)]
    if zero:
        raise SectionError("V has a zero weight; its Euler section vanishes")
    return Section.unit(flavor, xi0, r).with_factors((nu, _scaled(nu, m)) for nu, m in v_weights)


def lambda_V(xi0: Sequence[int], v_weights: Iterable[Tuple[Vec, int]]) -> Section:
    return epsilon_V(xi0, v_weights, CHARACTER)


@dataclass(frozen=True)
class KOOrientation:
    """KO Euler section ``prod_{nu>0} (x^(nu/2) - x^(-nu/2))^nu``.

    ``doubled`` is the section in the variable ``y = x^(1/2)`` (keys ``2 nu``,
    monomial ``B``), and ``lambda^O = x^(B/2) lambda_+`` with
    ``B = sum m nu (x) nu``.  Going once around the loop ``gamma`` multiplies
    it by ``(-1)^(B gamma)``, so it lives on an order-2 torsor over the torus.
    """
    doubled: Section
    form: Vec                 # B, flat r*r
    monodromy: Tuple[Vec, ...]  # rows: B gamma_i mod 2 for the lattice generators

    @property
    def torsor_nontrivial(self) -> bool:
        return any(any(row) for row in self.monodromy)


def lambda_KO(split: PolarizationSplit) -> KOOrientation:
    split.require_strict()
    r = len(split.xi0)
    B = [0] * (r * r)
    for nu, m in split.positive.entries:
        for i in range(r):
            for j in range(r):
                B[i * r + j] += m * nu[i] * nu[j]
    doubled = Section.unit(CHARACTER, split.xi0, r).with_factors(
        ((tuple(2 * x for x in nu), _scaled(nu, m)) for nu, m in split.positive.entries), monomial=B)
    mono = tuple(tuple(B[i * r + j] % 2 for j in range(r)) for i in range(r))
    return KOOrientation(doubled, tuple(B), mono)


# ---------------------------------------------------------------- identities

@dataclass(frozen=True)
class Discrepancy:
    sign: Vec
    monomial: Vec

    @property
    def is_zero(self) -> bool:
        return not any(self.sign) and not any(self.monomial)


def _as_discrepancy(s: Section, what: str) -> Discrepancy:
    if not s.is_constant():
        raise SectionError(f"{what}: non-constant discrepancy {s.factors}")
    return Discrepancy(_mod2(s.sign), tuple(s.monomial))


def delta_section(split: PolarizationSplit, u: Mat, v: Mat, flavor: str = LINEAR) -> Discrepancy:
    """Constant ``chi_uv * (chi_u * u[chi_v])^-1``; equals ``c(u,v)`` (and ``d(u,v)``)."""
    cu = chi_w(split, u, flavor)
    cv = chi_w(split, v, flavor)
    cuv = chi_w(split, mat_mul(u, v), flavor)
    return _as_discrepancy(cuv * (cu * weyl_act(u, cv)).inverse(), "delta")


def delta_chi(split: PolarizationSplit, u: Mat, v: Mat) -> Vec:
    return delta_section(split, u, v, LINEAR).sign


def delta_kappa(split: PolarizationSplit, u: Mat, v: Mat) -> Tuple[Vec, Vec]:
    d = delta_section(split, u, v, CHARACTER)
    return d.sign, d.monomial


def verify_vepchikappa(split: PolarizationSplit, w: Mat, flavor: str = LINEAR) -> Discrepancy:
    """Compare ``chi_w(p) chi_w(-p)`` with ``w[eps+](p) eps+(p)^-1``, both at the same point."""
    chi = chi_w(split, w, flavor)
    lhs = chi * substitute_neg(chi)
    eps = epsilon_plus(split, flavor)
    rhs = weyl_act(w, eps) * eps.inverse()
    return _as_discrepancy(lhs * rhs.inverse(), "vepchikappa")


# ---------------------------------------------------------------- Toda automorphisms

@dataclass(frozen=True)
class TodaAutomorphism:
    """``(p, h) -> (+-w p, shift(p) . v h^e)``.

    ``base`` is ``(w, negate)``, ``fiber`` is ``(v, e)``; ``shift`` is a
    section evaluated at the input point ``p``.
    """
    base: Tuple[Mat, bool]
    fiber: Tuple[Mat, int]
    shift: Section

    def compose(self, first: "TodaAutomorphism") -> "TodaAutomorphism":
        """``self o first``."""
        w2, n2 = self.base
        w1, n1 = first.base
        v2, e2 = self.fiber
        v1, e1 = first.fiber
        shift = precompose(self.shift, w1, n1) * apply_value(first.shift, v2, e2)
        return TodaAutomorphism((mat_mul(w2, w1), n1 != n2), (mat_mul(v2, v1), e1 * e2), shift)


def compose(g2: TodaAutomorphism, g1: TodaAutomorphism) -> TodaAutomorphism:
    return g2.compose(g1)


def charge_conjugation_Cplus(split: PolarizationSplit, flavor: str = LINEAR) -> TodaAutomorphism:
    I = identity(split.datum.rank)
    return TodaAutomorphism((I, True), (I, -1), epsilon_plus(split, flavor).inverse())


def modified_weyl(split: PolarizationSplit, w: Mat, flavor: str = LINEAR,
                  correction: Optional[Sequence[int]] = None) -> TodaAutomorphism:
    """``(p, h) -> (w p, chi_w(w p) . w h)``, optionally times a constant sign."""
    shift = precompose(chi_w(split, w, flavor), w)
    if correction is not None:
        shift = shift.with_factors((), correction)
    return TodaAutomorphism((w, False), (w, 1), shift)


def verify_regweyl(split: PolarizationSplit, w: Mat, flavor: str = LINEAR) -> Discrepancy:
    """Vertical discrepancy between ``C+ o w~`` and ``w~ o C+``."""
    C = charge_conjugation_Cplus(split, flavor)
    W = modified_weyl(split, w, flavor)
    a = C.compose(W)
    b = W.compose(C)
    if a.base != b.base or a.fiber != b.fiber:
        raise SectionError("base or fiber parts do not commute")
    return _as_discrepancy(a.shift * b.shift.inverse(), "regweyl")


def c_squared(split: PolarizationSplit, flavor: str = LINEAR) -> Section:
    C = charge_conjugation_Cplus(split, flavor)
    return C.compose(C).shift


# ---------------------------------------------------------------- evaluations

def pair_with_cocharacter(s: Section, gamma: Sequence[int]) -> Section:
    """Scalar section obtained by pairing every exponent with ``gamma``."""
    gamma = tuple(gamma)
    r = s.rank
    factors = {}
    for k, lam in s.factors:
        x = dot(lam, gamma)
        if x:
            factors[k] = (x,)
    mono = tuple(sum(s.monomial[i * r + j] * gamma[j] for j in range(r)) for i in range(r))
    return Section(s.flavor, s.xi0, tuple(sorted(factors.items())), ((dot(s.sign, gamma)) % 2,), mono, True)


def _hyperplane_reference(s: Section, root: Vec, coroot: Vec, refl) -> Vec:
    forms = [tuple(a + b for a, b in zip(k, refl(k))) for k, _ in s.factors]
    forms = [f for f in forms if any(f)]
    r = s.rank
    K = 1 + 2 * max([abs(x) for f in forms for x in f] + [1]) * r

    def candidates():
        yield s.xi0
        for size in range(1, r + 1):
            for combo in itertools.combinations(range(r), size):
                for signs in itertools.product((1, -1), repeat=size):
                    z = [K * x for x in s.xi0]
                    for i, sg in zip(combo, signs):
                        z[i] += sg
                    yield tuple(z)

    for z in candidates():
        k0 = dot(root, z)
        xi1 = tuple(2 * a - k0 * b for a, b in zip(z, coroot))
        if all(dot(f, xi1) for f in forms):
            return xi1
    raise SectionError("no regular reference coweight on the hyperplane")


@dataclass
class HyperplaneRestriction:
    root: Vec
    vanishing_exponent: Vec
    forms: Tuple[Tuple[Vec, Vec], ...]   # doubled s_alpha-invariant form -> exponent
    sign: Vec
    reference: Vec                      # coweight on the hyperplane fixing positivity

    def residual_display(self, labels: Optional[Sequence[str]] = None) -> List[str]:
        return format_components(self.forms, self.sign, labels, halve_keys=True)


def restrict_to_hyperplane(s: Section, root: Sequence[int], coroot: Sequence[int]) -> HyperplaneRestriction:
    """Restrict a linear section to ``{<root|xi> = 0}``.

    A linear form ``nu`` restricts to the class of ``nu`` modulo the root; the
    class is stored as the doubled invariant form ``nu + s(nu)``.  Keys are
    made positive against ``xi1 = z + s(z)``, which lies on the hyperplane;
    ``z = xi0`` unless that makes some restricted form vanish, in which case
    ``z`` is the first ``K xi0 + e_i`` (then ``K xi0 + e_i + e_j``, ...)
    that is regular.
    """
    if s.flavor != LINEAR:
        raise SectionError("hyperplane restriction is only defined for linear sections")
    root, coroot = tuple(root), tuple(coroot)
    r = s.rank

    def refl(nu):
        k = dot(nu, coroot)
        return tuple(a - k * b for a, b in zip(nu, root))

    xi1 = _hyperplane_reference(s, root, coroot, refl)
    vanish = [0] * r
    sign = list(s.sign)
    forms: Dict[Vec, List[int]] = {}
    for key, lam in s.factors:
        f = tuple(a + b for a, b in zip(key, refl(key)))
        if not any(f):
            vanish = [a + b for a, b in zip(vanish, lam)]
            continue
        p = dot(f, xi1)
        if p == 0:
            raise SectionError(f"form {key} is not regular on the hyperplane")
        if p < 0:
            f = tuple(-x for x in f)
            sign = [a + b for a, b in zip(sign, lam)]
        acc = forms.setdefault(f, [0] * r)
        for i in range(r):
            acc[i] += lam[i]
    out = tuple(sorted((k, tuple(v)) for k, v in forms.items() if any(v)))
    return HyperplaneRestriction(root, tuple(vanish), out, _mod2(sign), xi1)


def hyperplane_class_trivial(res: HyperplaneRestriction, coroot: Sequence[int]) -> bool:
    """Is the restricted section of the form ``t * s(t)^-1`` near the hyperplane?

    Such sections have exponents in ``(1-s)Lambda = <Lambda|h> alpha`` and a
    constant sign in the mod-2 span of the primitive vector along ``alpha``.
    """
    alpha = res.root
    g = 0
    for x in coroot:
        g = math.gcd(g, x)
    for _, lam in res.forms:
        k = _multiple_of(lam, alpha)
        if k is None or k % g:
            return False
    a = 0
    for x in alpha:
        a = math.gcd(a, x)
    prim = _mod2(tuple(x // a for x in alpha))
    return not any(res.sign) or tuple(res.sign) == prim


def _multiple_of(v: Sequence[int], alpha: Sequence[int]) -> Optional[int]:
    k = None
    for a, b in zip(v, alpha):
        if b == 0:
            if a:
                return None
            continue
        if a % b:
            return None
        if k is None:
            k = a // b
        elif k != a // b:
            return None
    return 0 if k is None else k


@dataclass
class TorsorParity:
    exponents: List[Tuple[Vec, Vec, bool]]   # line, total exponent, admissible flag
    verdict: str                              # "coboundary-possible" or "nontrivial"


def torsor_parity(s: Section, w: Optional[Mat] = None) -> TorsorParity:
    """Valuation test for ``s = w[phi] / phi`` with ``phi`` rational.

    Along a line ``nu = 0`` fixed by ``w`` such a quotient has valuation in
    ``(1 - w) Lambda``; for the inversion (``w = None``) that is ``2 Lambda``.
    Proportional keys lie on the same line, so their exponents are summed.
    """
    r = s.rank
    if w is None:
        w = tuple(tuple(-int(i == j) for j in range(r)) for i in range(r))
    lines: Dict[Vec, List[int]] = {}
    for k, lam in s.factors:
        g = 0
        for x in k:
            g = math.gcd(g, x)
        p = tuple(x // g for x in k)
        wp = mat_vec(w, p)
        if wp != p and wp != tuple(-x for x in p):
            continue
        acc = lines.setdefault(p, [0] * r)
        for i in range(r):
            acc[i] += lam[i]
    A = [[int(i == j) - w[i][j] for j in range(r)] for i in range(r)]
    rows = []
    for p, lam in sorted(lines.items()):
        rows.append((p, tuple(lam), solve_integer(A, list(lam), r) is not None))
    ok = all(flag for _, _, flag in rows)
    return TorsorParity(rows, "coboundary-possible" if ok else "nontrivial")


# ---------------------------------------------------------------- printing

def _linear_form(key: Sequence, labels: Sequence[str]) -> str:
    terms = []
    for c, name in zip(key, labels):
        if c == 0:
            continue
        coeff = "" if abs(c) == 1 else str(abs(c))
        terms.append(("-" if c < 0 else "+") + coeff + name)
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def format_components(factors: Sequence[Tuple[Vec, Vec]], sign: Sequence[int],
                      labels: Optional[Sequence[str]] = None, halve_keys: bool = False) -> List[str]:
    """One string per coordinate of the dual torus, e.g. ``-(xi2)^2``."""
    r = len(sign)
    if labels is None:
        labels = [f"xi{i+1}" for i in range(len(factors[0][0]) if factors else r)]
    out = []
    for i in range(r):
        parts = []
        for key, lam in factors:
            if lam[i] == 0:
                continue
            k = tuple(Fraction(x, 2) for x in key) if halve_keys else key
            form = _linear_form(k, labels)
            parts.append(f"({form})" + (f"^{lam[i]}" if lam[i] != 1 else ""))
        body = "*".join(parts) if parts else "1"
        out.append(("-" if sign[i] % 2 else "") + body)
    return out


def format_section(s: Section, labels: Optional[Sequence[str]] = None) -> str:
    """Bracketed notation ``[c_1, ..., c_r]`` (linear flavor)."""
    return "[" + ", ".join(format_components(s.factors, s.sign, labels)) + "]"
