"""Root data for products of classical groups, circles and central quotients.

Every datum carries an *ambient* coordinate system inherited from its simply
connected cover (fundamental weights for SU(n), epsilon coordinates for Sp
and Spin/SO, the standard basis for tori).  Ambient weights and coweights
pair by the plain dot product.  Internally the weight lattice of the actual
group is fixed by a basis matrix ``basis`` (rows are lattice generators in
ambient coordinates); weights are integer vectors in that basis and
coweights are integer vectors in the dual basis, so the pairing is the dot
product of integer vectors.

Conventions for the simple factors:

* ``SU(n)``: ambient = fundamental weights, coweights in simple coroot
  coordinates; the centre is generated by the first fundamental coweight.
* ``Sp(m)``: roots ``±2e_i, ±e_i±e_j``, coroots ``±e_i, ±e_i±e_j``; the
  centre is ``(1/2, ..., 1/2)``.
* ``Spin(2l+1)``: roots ``±e_i±e_j, ±e_i``, coroots ``±e_i±e_j, ±2e_i``;
  centre generator ``a = e_1``.
* ``Spin(2l)``: roots and coroots ``±e_i±e_j``; centre generators in the
  fixed order ``a = e_1``, ``b+ = (1/2, ..., 1/2)``,
  ``b- = (-1/2, 1/2, ..., 1/2)``.
* ``SO(n)`` is ``Spin(n)/<a>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .linalg import (integral_sublattice, mat_inverse_fraction, row_hnf,
                     smith_diagonal)

Vec = Tuple[int, ...]
Mat = Tuple[Tuple[int, ...], ...]
FVec = Tuple[Fraction, ...]


class RootDatumError(ValueError):
    pass


class WeylCapExceeded(RuntimeError):
    pass


def _fv(xs) -> FVec:
    return tuple(Fraction(x) for x in xs)


def _unit(n: int, i: int, scale=1) -> FVec:
    return tuple(Fraction(scale) if k == i else Fraction(0) for k in range(n))


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(A: Mat, B: Mat) -> Mat:
    Bt = list(zip(*B)) if B else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A: Mat, v: Sequence[int]) -> Vec:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A)) if A else ()


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Lattice:
    rank: int
    basis_labels: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FactorSlot:
    """A simple or torus factor occupying ambient coordinates ``offset..offset+size``."""
    family: str  # "SU", "Sp", "Spin", "SO" or "T"
    n: int
    offset: int
    size: int

    @property
    def label(self) -> str:
        return f"{self.family}({self.n})" if self.family != "T" else f"U(1)^{self.n}"


@dataclass(frozen=True)
class RootDatum:
    name: str
    ambient_dim: int
    basis: Tuple[FVec, ...]          # rows: weight-lattice basis in ambient coords
    cover_basis: Tuple[FVec, ...]    # weight lattice of the simply connected cover
    roots_ambient: Tuple[FVec, ...]
    coroots_ambient: Tuple[FVec, ...]
    positive: Tuple[bool, ...]
    simple: Tuple[int, ...]          # indices into roots of the simple roots
    center_ambient: Tuple[FVec, ...]  # centre generators of the cover (coweights)
    kernel_ambient: Tuple[FVec, ...]  # quotient kernel accumulated so far
    factors: Tuple[FactorSlot, ...]
    factor_structure: Any
    labels: Tuple[str, ...]
    # derived, filled in __post_init__
    roots: Tuple[Vec, ...] = field(init=False)
    coroots: Tuple[Vec, ...] = field(init=False)
    weyl_generators: Tuple[Mat, ...] = field(init=False)
    _basis_inv: Tuple[FVec, ...] = field(init=False, repr=False)

    def __post_init__(self):
        r = self.rank
        if r:
            inv = mat_inverse_fraction(self.basis)
        else:
            inv = []
        object.__setattr__(self, "_basis_inv", tuple(tuple(row) for row in inv))
        roots = tuple(self.weight_from_ambient(a) for a in self.roots_ambient)
        coroots = tuple(self.coweight_from_ambient(h) for h in self.coroots_ambient)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "coroots", coroots)
        gens = []
        for i in self.simple:
            a, h = roots[i], coroots[i]
            gens.append(tuple(tuple(int(p == q) - a[p] * h[q] for q in range(r)) for p in range(r)))
        object.__setattr__(self, "weyl_generators", tuple(gens))

    # -- lattices -------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def weight_lattice(self) -> Lattice:
        return Lattice(self.rank, tuple(f"b{i}" for i in range(self.rank)))

    @property
    def coweight_lattice(self) -> Lattice:
        return Lattice(self.rank, tuple(f"b{i}*" for i in range(self.rank)))

    @property
    def pairing(self) -> Mat:
        return identity(self.rank)

    def is_weight(self, amb: Sequence) -> bool:
        return all(x.denominator == 1 for x in self._to_basis(amb))

    def _to_basis(self, amb: Sequence) -> FVec:
        amb = _fv(amb)
        return tuple(sum(amb[k] * self._basis_inv[k][i] for k in range(self.ambient_dim))
                     for i in range(self.rank))

    def weight_from_ambient(self, amb: Sequence) -> Vec:
        y = self._to_basis(amb)
        if any(x.denominator != 1 for x in y):
            raise RootDatumError(f"{tuple(str(x) for x in _fv(amb))} is not in the weight lattice of {self.name}")
        return tuple(int(x) for x in y)

    def weight_to_ambient(self, y: Sequence[int]) -> FVec:
        return tuple(sum(Fraction(y[i]) * self.basis[i][k] for i in range(self.rank))
                     for k in range(self.ambient_dim))

    def coweight_pairings(self, amb: Sequence) -> FVec:
        """Pairings of an ambient coweight with the weight-lattice basis."""
        amb = _fv(amb)
        return tuple(dot(row, amb) for row in self.basis)

    def coweight_from_ambient(self, amb: Sequence) -> Vec:
        g = self.coweight_pairings(amb)
        if any(x.denominator != 1 for x in g):
            raise RootDatumError(f"{tuple(str(x) for x in _fv(amb))} is not in the coweight lattice of {self.name}")
        return tuple(int(x) for x in g)

    def coweight_to_ambient(self, g: Sequence[int]) -> FVec:
        return tuple(sum(self._basis_inv[k][i] * g[i] for i in range(self.rank))
                     for k in range(self.ambient_dim))

    # -- roots ----------------------------------------------------------
    @property
    def positive_roots(self) -> List[Vec]:
        return [a for a, p in zip(self.roots, self.positive) if p]

    def coroot_of(self, root: Sequence[int]) -> Vec:
        return self.coroots[self.roots.index(tuple(root))]

    def reflection(self, idx: int) -> Mat:
        a, h = self.roots[idx], self.coroots[idx]
        r = self.rank
        return tuple(tuple(int(p == q) - a[p] * h[q] for q in range(r)) for p in range(r))

    # -- centre -----------------------------------------------------------
    def center_invariants(self) -> List[int]:
        """Invariant factors of the centre ``(Lambda_G^vee + centre) / Lambda_G^vee``."""
        gens = [self.coweight_pairings(c) for c in self.center_ambient]
        return _finite_quotient_invariants(gens, self.rank)


def _finite_quotient_invariants(gens: Sequence[FVec], r: int) -> List[int]:
    if not gens or r == 0:
        return []
    D = 1
    for g in gens:
        for x in g:
            D = D * x.denominator // _gcd(D, x.denominator)
    rows = [[D * int(i == j) for j in range(r)] for i in range(r)]
    rows += [[int(x * D) for x in g] for g in gens]
    H = row_hnf(rows, r)
    Hinv = mat_inverse_fraction(H)
    C = [[int(D * Hinv[i][j]) for j in range(r)] for i in range(r)]
    return [d for d in smith_diagonal(C, r) if d > 1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------- builders

def _cartan_su(n: int) -> List[List[int]]:
    r = n - 1
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]


def _build_su(n: int) -> RootDatum:
    r = n - 1
    A = _cartan_su(n)
    roots, coroots, pos = [], [], []
    simple_idx = []
    for i in range(r):
        for j in range(i, r):
            root = tuple(Fraction(sum(A[k][c] for k in range(i, j + 1))) for c in range(r))
            coroot = tuple(Fraction(int(i <= c <= j)) for c in range(r))
            for sgn in (1, -1):
                if sgn == 1 and i == j:
                    simple_idx.append(len(roots))
                roots.append(tuple(sgn * x for x in root))
                coroots.append(tuple(sgn * x for x in coroot))
                pos.append(sgn == 1)
    Ainv = mat_inverse_fraction(A)
    center = (tuple(Ainv[k][0] for k in range(r)),)
    return _make(f"SU({n})", "SU", n, r, [_unit(r, i) for i in range(r)], roots, coroots,
                 pos, simple_idx, center, [f"w{i+1}" for i in range(r)])


def _build_sp(m: int) -> RootDatum:
    roots, coroots, pos, simple_idx = [], [], [], []

    def add(root, coroot, positive, is_simple=False):
        if is_simple:
            simple_idx.append(len(roots))
        roots.append(_fv(root))
        coroots.append(_fv(coroot))
        pos.append(positive)

    for i in range(m):
        for sgn in (1, -1):
            add(_unit(m, i, 2 * sgn), _unit(m, i, sgn), sgn == 1, sgn == 1 and i == m - 1)
    _add_pm_pairs(m, add)
    center = (tuple(Fraction(1, 2) for _ in range(m)),)
    return _make(f"Sp({m})", "Sp", m, m, [_unit(m, i) for i in range(m)], roots, coroots,
                 pos, simple_idx, center, [f"e{i+1}" for i in range(m)])


def _add_pm_pairs(l: int, add) -> None:
    """Roots ``±e_i±e_j``; ``e_i - e_{i+1}`` simple (coroot equal to root)."""
    for i in range(l):
        for j in range(i + 1, l):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [0] * l
                    v[i], v[j] = si, sj
                    add(v, v, si == 1, si == 1 and sj == -1 and j == i + 1)


def _build_spin(n: int) -> RootDatum:
    l = n // 2
    odd = n % 2 == 1
    roots, coroots, pos, simple_idx = [], [], [], []

    def add(root, coroot, positive, is_simple=False):
        if is_simple:
            simple_idx.append(len(roots))
        roots.append(_fv(root))
        coroots.append(_fv(coroot))
        pos.append(positive)

    _add_pm_pairs(l, add)
    if odd:
        for i in range(l):
            for sgn in (1, -1):
                add(_unit(l, i, sgn), _unit(l, i, 2 * sgn), sgn == 1, sgn == 1 and i == l - 1)
    else:
        # e_{l-1} + e_l is the extra simple root
        target = [0] * l
        target[l - 2], target[l - 1] = 1, 1
        simple_idx.append(roots.index(_fv(target)))
    half = tuple(Fraction(1, 2) for _ in range(l))
    basis = [_unit(l, i) for i in range(l - 1)] + [half]
    center = [_unit(l, 0)]
    if not odd:
        center.append(half)
        center.append(tuple(Fraction(-1, 2) if k == 0 else Fraction(1, 2) for k in range(l)))
    return _make(f"Spin({n})", "Spin", n, l, basis, roots, coroots, pos, simple_idx, center,
                 [f"e{i+1}" for i in range(l)])


def _make(name, family, n, dim, basis, roots, coroots, pos, simple_idx, center, labels) -> RootDatum:
    basis = tuple(_fv(b) for b in basis)
    return RootDatum(
        name=name, ambient_dim=dim, basis=basis, cover_basis=basis,
        roots_ambient=tuple(roots), coroots_ambient=tuple(coroots), positive=tuple(pos),
        simple=tuple(simple_idx), center_ambient=tuple(_fv(c) for c in center),
        kernel_ambient=(), factors=(FactorSlot(family, n, 0, dim),),
        factor_structure={"kind": "simple", "family": family, "n": n},
        labels=tuple(f"{family}{n}.{x}" for x in labels))


def build_simple(family: str, n: int) -> RootDatum:
    """Simply connected datum for SU/Sp/Spin, and SO(n) = Spin(n)/<a>."""
    if family == "SU":
        if n < 2:
            raise RootDatumError("SU(n) needs n >= 2")
        return _build_su(n)
    if family == "Sp":
        if n < 1:
            raise RootDatumError("Sp(m) needs m >= 1")
        return _build_sp(n)
    if family in ("Spin", "SO"):
        if n < 3:
            raise RootDatumError(f"{family}(n) needs n >= 3")
        spin = _build_spin(n)
        if family == "Spin":
            return spin
        q = central_quotient(spin, [spin.center_ambient[0]])
        slot = FactorSlot("SO", n, 0, q.ambient_dim)
        return _replace(q, name=f"SO({n})", factors=(slot,),
                        factor_structure={"kind": "simple", "family": "SO", "n": n},
                        labels=tuple(x.replace("Spin", "SO") for x in q.labels))
    raise RootDatumError(f"unknown family {family!r}")


def build_torus(r: int) -> RootDatum:
    if r < 1:
        raise RootDatumError("torus rank must be >= 1")
    basis = tuple(_unit(r, i) for i in range(r))
    return RootDatum(
        name=f"U(1)^{r}" if r > 1 else "U(1)", ambient_dim=r, basis=basis, cover_basis=basis,
        roots_ambient=(), coroots_ambient=(), positive=(), simple=(), center_ambient=(),
        kernel_ambient=(), factors=(FactorSlot("T", r, 0, r),),
        factor_structure={"kind": "torus", "r": r},
        labels=tuple(f"T.t{i+1}" for i in range(r)))


def _replace(d: RootDatum, **kw) -> RootDatum:
    fields_ = dict(name=d.name, ambient_dim=d.ambient_dim, basis=d.basis, cover_basis=d.cover_basis,
                   roots_ambient=d.roots_ambient, coroots_ambient=d.coroots_ambient,
                   positive=d.positive, simple=d.simple, center_ambient=d.center_ambient,
                   kernel_ambient=d.kernel_ambient, factors=d.factors,
                   factor_structure=d.factor_structure, labels=d.labels)
    fields_.update(kw)
    return RootDatum(**fields_)


def _pad(v: FVec, before: int, after: int) -> FVec:
    return tuple([Fraction(0)] * before) + tuple(v) + tuple([Fraction(0)] * after)


def product(a: RootDatum, b: RootDatum) -> RootDatum:
    na, nb = a.ambient_dim, b.ambient_dim
    ra = len(a.roots_ambient)
    return RootDatum(
        name=f"{a.name} x {b.name}", ambient_dim=na + nb,
        basis=tuple(_pad(v, 0, nb) for v in a.basis) + tuple(_pad(v, na, 0) for v in b.basis),
        cover_basis=tuple(_pad(v, 0, nb) for v in a.cover_basis) + tuple(_pad(v, na, 0) for v in b.cover_basis),
        roots_ambient=tuple(_pad(v, 0, nb) for v in a.roots_ambient) + tuple(_pad(v, na, 0) for v in b.roots_ambient),
        coroots_ambient=tuple(_pad(v, 0, nb) for v in a.coroots_ambient) + tuple(_pad(v, na, 0) for v in b.coroots_ambient),
        positive=a.positive + b.positive,
        simple=a.simple + tuple(i + ra for i in b.simple),
        center_ambient=tuple(_pad(v, 0, nb) for v in a.center_ambient) + tuple(_pad(v, na, 0) for v in b.center_ambient),
        kernel_ambient=tuple(_pad(v, 0, nb) for v in a.kernel_ambient) + tuple(_pad(v, na, 0) for v in b.kernel_ambient),
        factors=a.factors + tuple(FactorSlot(f.family, f.n, f.offset + na, f.size) for f in b.factors),
        factor_structure={"kind": "product", "children": [a.factor_structure, b.factor_structure]},
        labels=a.labels + b.labels)


def central_quotient(d: RootDatum, kernel: Sequence[Sequence]) -> RootDatum:
    """Quotient by central elements given as ambient rational coweights."""
    kernel = [_fv(k) for k in kernel]
    for k in kernel:
        if len(k) != d.ambient_dim:
            raise RootDatumError(f"kernel vector has length {len(k)}, expected {d.ambient_dim}")
        for a in d.roots_ambient:
            if dot(a, k).denominator != 1:
                raise RootDatumError(
                    f"kernel vector {[str(x) for x in k]} is not central: pairs non-integrally with root {[str(x) for x in a]}")
    if not kernel:
        return d
    P = [[dot(row, k) for k in kernel] for row in d.basis]
    Y = integral_sublattice(P)
    new_basis = tuple(tuple(sum(Fraction(y[i]) * d.basis[i][c] for i in range(d.rank))
                            for c in range(d.ambient_dim)) for y in Y)
    return _replace(d, name=f"{d.name}/<{len(kernel)} gens>", basis=new_basis,
                    kernel_ambient=d.kernel_ambient + tuple(kernel),
                    factor_structure={"kind": "quotient", "child": d.factor_structure,
                                      "kernel": [[str(x) for x in k] for k in kernel]})


# ---------------------------------------------------------------- Weyl group

@dataclass
class WeylGroup:
    """Finite group of integer matrices acting on the weight lattice."""
    elements: List[Mat]
    generator_words: List[Tuple[int, ...]]
    index: Dict[Mat, int]

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.index[mat_mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self._inverses[i]

    def __post_init__(self):
        inv = [0] * len(self.elements)
        for i in range(len(self.elements)):
            for j in range(len(self.elements)):
                if mat_mul(self.elements[i], self.elements[j]) == self.elements[0]:
                    inv[i] = j
                    break
        self._inverses = inv

    def coweight_matrix(self, i: int) -> Mat:
        """Contragredient action on coweight coordinates."""
        return transpose(self.elements[self._inverses[i]])


def close_group(generators: Sequence[Mat], rank: int, cap: int = 10 ** 6) -> WeylGroup:
    """Breadth-first closure of a finite matrix group with one word per element."""
    e = identity(rank)
    elements = [e]
    words: List[Tuple[int, ...]] = [()]
    index = {e: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            for g, M in enumerate(generators):
                P = mat_mul(M, elements[idx])
                if P not in index:
                    if len(elements) >= cap:
                        raise WeylCapExceeded(f"group exceeds cap {cap}")
                    index[P] = len(elements)
                    elements.append(P)
                    words.append((g,) + words[idx])
                    nxt.append(index[P])
        frontier = nxt
    return WeylGroup(elements, words, index)


def enumerate_weyl(d: RootDatum, cap: int = 10 ** 6) -> WeylGroup:
    return close_group(d.weyl_generators, d.rank, cap)


def fundamental_group(d: RootDatum) -> List[int]:
    """Invariant factors of ``Lambda^vee / coroot lattice``; free part listed as 0."""
    divisors = smith_diagonal([list(h) for h in d.coroots], d.rank)
    torsion = [x for x in divisors if x > 1]
    return torsion + [0] * (d.rank - len(divisors))


def find_factor(d: RootDatum, index: int) -> FactorSlot:
    if not 0 <= index < len(d.factors):
        raise RootDatumError(f"unknown factor {index}; datum has {len(d.factors)}")
    return d.factors[index]
