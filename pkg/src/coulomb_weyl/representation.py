"""Quaternionic representations seen through the maximal torus."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .root_datum import FVec, RootDatum, RootDatumError, Vec, dot, find_factor


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class WeightMultiset:
    """Weights in ambient (cover) coordinates with positive multiplicities.

    Factors of a tensor product need not be representations of a quotient
    group, so entries stay in cover coordinates; :meth:`lattice` converts to
    weight-lattice coordinates of the datum and fails for non-members.
    ``structure`` records how the multiset was built so that the irreducible
    classifier can recover ``R (x) S``.
    """
    datum: RootDatum
    entries: Tuple[Tuple[FVec, int], ...]
    structure: Any = ("weights",)

    @staticmethod
    def from_counter(datum: RootDatum, counts: Mapping[Sequence, int], structure: Any = ("weights",)) -> "WeightMultiset":
        for k, m in counts.items():
            if m < 0:
                raise RepresentationError("negative multiplicity")
            if len(k) != datum.ambient_dim:
                raise RepresentationError(
                    f"weight {[str(x) for x in k]} has length {len(k)}, expected {datum.ambient_dim}")
        items = tuple(sorted((tuple(Fraction(x) for x in k), int(v)) for k, v in counts.items() if v))
        if structure == ("weights",):
            structure = ("explicit", items)
        return WeightMultiset(datum, items, structure)

    @property
    def counts(self) -> Dict[FVec, int]:
        return dict(self.entries)

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.entries)

    def in_lattice(self) -> bool:
        return all(self.datum.is_weight(k) for k, _ in self.entries)

    def lattice(self) -> List[Tuple[Vec, int]]:
        """Entries in weight-lattice coordinates (raises for non-members)."""
        try:
            return sorted((self.datum.weight_from_ambient(k), m) for k, m in self.entries)
        except RootDatumError as exc:
            raise RepresentationError(str(exc)) from None

    def is_self_dual(self) -> bool:
        c = self.counts
        return all(c.get(tuple(-x for x in k), 0) == m for k, m in c.items())

    def check_quaternionic(self) -> None:
        if not self.is_self_dual():
            raise RepresentationError("weights are not closed under negation with equal multiplicities")
        if self.dim % 2:
            raise RepresentationError(f"total dimension {self.dim} is odd")
        self.lattice()

    def __eq__(self, other) -> bool:  # structure is bookkeeping only
        return isinstance(other, WeightMultiset) and self.entries == other.entries and self.datum is other.datum

    def __hash__(self):
        return hash(self.entries)


def from_ambient(d: RootDatum, weights: Iterable[Tuple[Sequence, int]], structure: Any = ("weights",)) -> WeightMultiset:
    c: Counter = Counter()
    for amb, m in weights:
        c[tuple(Fraction(x) for x in amb)] += m
    return WeightMultiset.from_counter(d, c, structure)


def from_lattice(d: RootDatum, weights: Iterable[Tuple[Sequence[int], int]], structure: Any = ("weights",)) -> WeightMultiset:
    return from_ambient(d, ((d.weight_to_ambient(w), m) for w, m in weights), structure)


def _slot_vectors(d: RootDatum, factor: int) -> Tuple[int, int, str, int]:
    slot = find_factor(d, factor)
    return slot.offset, slot.size, slot.family, slot.n


def _embed(d: RootDatum, offset: int, local: Sequence) -> Tuple[Fraction, ...]:
    v = [Fraction(0)] * d.ambient_dim
    for i, x in enumerate(local):
        v[offset + i] = Fraction(x)
    return tuple(v)


def _standard_local(family: str, n: int, size: int) -> List[Tuple[Fraction, ...]]:
    unit = lambda i, s=1: tuple(Fraction(s) if k == i else Fraction(0) for k in range(size))
    if family == "SU":
        out = [unit(0)]
        for i in range(1, n - 1):
            out.append(tuple(Fraction(int(k == i) - int(k == i - 1)) for k in range(size)))
        out.append(unit(n - 2, -1))
        return out
    if family == "Sp":
        return [unit(i, s) for i in range(n) for s in (1, -1)]
    if family in ("Spin", "SO"):
        out = [unit(i, s) for i in range(size) for s in (1, -1)]
        if n % 2:
            out.append(tuple(Fraction(0) for _ in range(size)))
        return out
    if family == "T":
        return [unit(i) for i in range(size)]
    raise RepresentationError(f"no standard representation for {family}")


def standard_rep(d: RootDatum, factor: int) -> WeightMultiset:
    """Defining representation of one factor (trivial on the others)."""
    off, size, fam, n = _slot_vectors(d, factor)
    return from_ambient(d, [(_embed(d, off, w), 1) for w in _standard_local(fam, n, size)],
                        ("standard", factor))


def su2_irrep(d: RootDatum, factor: int, twice_spin: int) -> WeightMultiset:
    """Irreducible of dimension ``twice_spin + 1`` of an SU(2)/Sp(1)/Spin(3) factor."""
    off, size, fam, n = _slot_vectors(d, factor)
    if (fam, n) in (("SU", 2), ("Sp", 1)):
        unit = Fraction(1)
    elif (fam, n) in (("Spin", 3), ("SO", 3)):
        unit = Fraction(1, 2)
    else:
        raise RepresentationError(f"factor {factor} is {fam}({n}), not of type A1")
    ws = [(_embed(d, off, [unit * (twice_spin - 2 * i)]), 1) for i in range(twice_spin + 1)]
    return from_ambient(d, ws, ("su2_irrep", factor, twice_spin))


def spin_rep(d: RootDatum, factor: int, chirality: int = 0) -> WeightMultiset:
    """Spin representation of a Spin factor; ``chirality`` +-1 picks a half-spin rep."""
    off, size, fam, n = _slot_vectors(d, factor)
    if fam != "Spin":
        raise RepresentationError(f"factor {factor} is not a Spin group")
    ws = []
    for mask in range(2 ** size):
        signs = [(-1) ** ((mask >> i) & 1) for i in range(size)]
        neg = sum(s < 0 for s in signs)
        if chirality and n % 2 == 0 and (-1) ** neg != chirality:
            continue
        ws.append((_embed(d, off, [Fraction(s, 2) for s in signs]), 1))
    return from_ambient(d, ws, ("spin", factor, chirality))


def adjoint_rep(d: RootDatum) -> WeightMultiset:
    c: Counter = Counter(d.roots_ambient)
    if d.rank:
        c[tuple([Fraction(0)] * d.ambient_dim)] += d.rank
    return WeightMultiset.from_counter(d, c, ("adjoint",))


def _same(a: WeightMultiset, b: WeightMultiset) -> None:
    if a.datum is not b.datum:
        raise RepresentationError("representations live on different root data")


def tensor(a: WeightMultiset, b: WeightMultiset) -> WeightMultiset:
    _same(a, b)
    c: Counter = Counter()
    for x, m in a.entries:
        for y, n in b.entries:
            c[tuple(p + q for p, q in zip(x, y))] += m * n
    return WeightMultiset.from_counter(a.datum, c, ("tensor", a.structure, b.structure))


def direct_sum(a: WeightMultiset, b: WeightMultiset) -> WeightMultiset:
    _same(a, b)
    c = Counter(a.counts)
    c.update(b.counts)
    return WeightMultiset.from_counter(a.datum, c, ("sum", a.structure, b.structure))


def dual(a: WeightMultiset) -> WeightMultiset:
    return WeightMultiset.from_counter(a.datum, {tuple(-x for x in k): m for k, m in a.entries},
                                       ("dual", a.structure))


def quaternionify(a: WeightMultiset) -> WeightMultiset:
    """``V (+) V^vee``."""
    c = Counter(a.counts)
    c.update(dual(a).counts)
    return WeightMultiset.from_counter(a.datum, c, ("quaternionify", a.structure))


def scale(a: WeightMultiset, k: int) -> WeightMultiset:
    return WeightMultiset.from_counter(a.datum, {w: m * k for w, m in a.entries}, ("scale", k, a.structure))


def central_character(e: WeightMultiset, z_ambient: Sequence) -> List[Fraction]:
    """Distinct values of ``<nu|z> mod 1``; a quaternionic irreducible needs
    the central involution to act by a single value ``1/2``."""
    vals = {dot(w, [Fraction(x) for x in z_ambient]) % 1 for w, _ in e.entries}
    return sorted(vals)


# ---------------------------------------------------------------- polarization

@dataclass(frozen=True)
class LatticeWeights:
    """Weights in weight-lattice coordinates (one part of a polarization)."""
    datum: RootDatum
    entries: Tuple[Tuple[Vec, int], ...]

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.entries)


_LatticePart = LatticeWeights


@dataclass(frozen=True)
class PolarizationSplit:
    xi0: Vec
    positive: LatticeWeights
    zero: LatticeWeights
    negative: LatticeWeights
    @property
    def datum(self) -> RootDatum:
        return self.positive.datum

    @property
    def strict(self) -> bool:
        """No nonzero weight pairs to zero with ``xi0``."""
        return all(not any(w) for w, _ in self.zero.entries)

    def require_strict(self) -> None:
        if not self.strict:
            bad = [w for w, _ in self.zero.entries if any(w)]
            raise RepresentationError(f"xi0 {self.xi0} is not regular for weight {bad[0]}")

    def all_weights(self) -> List[Tuple[Vec, int]]:
        return list(self.positive.entries) + list(self.zero.entries) + list(self.negative.entries)


def polarize(e: WeightMultiset, xi0: Sequence[int]) -> PolarizationSplit:
    xi0 = tuple(int(x) for x in xi0)
    if len(xi0) != e.datum.rank:
        raise RepresentationError(f"xi0 has length {len(xi0)}, expected {e.datum.rank}")
    parts: List[Counter] = [Counter(), Counter(), Counter()]
    for w, m in e.lattice():
        p = dot(w, xi0)
        parts[0 if p > 0 else (1 if p == 0 else 2)][w] += m
    d = e.datum
    return PolarizationSplit(xi0, *(_LatticePart(d, tuple(sorted(c.items()))) for c in parts))


def default_xi0(e: WeightMultiset, include_roots: bool = True) -> Vec:
    """Lexicographic regular coweight: earlier ambient coordinates dominate.

    The ambient coweight ``(K^(n-1), ..., K, 1)`` is scaled to lie in the
    coweight lattice; ``K`` exceeds twice the largest ambient coordinate of
    any weight (and root), so the sign of the pairing is the sign of the
    first nonzero ambient coordinate.
    """
    d = e.datum
    vecs = [w for w, _ in e.entries]
    if include_roots:
        vecs += list(d.roots_ambient)
    den = 1
    for row in d.basis:
        for x in row:
            den = den * x.denominator // _g(den, x.denominator)
    bound = 1
    for v in vecs:
        for x in v:
            bound = max(bound, abs(x) * 2 * den)
    K = int(bound) * d.ambient_dim + 1
    n = d.ambient_dim
    amb = [Fraction(den * K ** (n - 1 - i)) for i in range(n)]
    g = d.coweight_pairings(amb)
    scale_ = 1
    for x in g:
        scale_ = scale_ * x.denominator // _g(scale_, x.denominator)
    return tuple(int(x * scale_) for x in g)


def _g(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------- c2 form

@dataclass(frozen=True)
class QuadraticForm:
    """``q(g) = g^T Q g`` on coweight coordinates."""
    gram: Tuple[Tuple[Fraction, ...], ...]

    def __call__(self, g: Sequence[int]) -> Fraction:
        return sum(g[i] * self.gram[i][j] * g[j] for i in range(len(g)) for j in range(len(g)))

    def bilinear(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        return sum(a[i] * self.gram[i][j] * b[j] for i in range(len(a)) for j in range(len(b)))

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.gram, other.gram)))

    def is_integral(self) -> bool:
        n = len(self.gram)
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        vecs = basis + [tuple(a + b for a, b in zip(basis[i], basis[j])) for i in range(n) for j in range(i + 1, n)]
        return all(self(v).denominator == 1 for v in vecs)


def c2_form(e: WeightMultiset, ambient: bool = False) -> QuadraticForm:
    """``q(g) = sum over positive weights of <nu|g>^2`` (positive sign convention).

    Computed as half the sum over all weights, which avoids choosing a
    polarization.  With ``ambient=True`` the Gram matrix is taken on ambient
    coweight coordinates, which also works for factors of a tensor product
    that are not representations of the quotient group.
    """
    ents = e.entries if ambient else e.lattice()
    r = e.datum.ambient_dim if ambient else e.datum.rank
    G = [[Fraction(0)] * r for _ in range(r)]
    for w, m in ents:
        for i in range(r):
            if w[i]:
                for j in range(r):
                    G[i][j] += Fraction(m * w[i] * w[j], 2)
    return QuadraticForm(tuple(tuple(row) for row in G))
