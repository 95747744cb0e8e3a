"""Weyl group cocycles attached to a torus polarization, and their exactness.

Modules are ``Lambda/2`` (mod-2 weight vectors), ``Lambda(x)Lambda`` and its
reduction mod 2.  Tensors are ``r x r`` integer matrices ``T = sum mu nu^T``
and ``w`` acts by ``M T M^T``.  Cochains are indexed by positions in an
enumerated :class:`~coulomb_weyl.root_datum.WeylGroup`; every value is a
flat tuple of ints so that one solver handles all coefficient modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .linalg import gf2_solve, solve_integer
from .representation import PolarizationSplit
from .root_datum import Mat, WeylGroup, dot, mat_mul, mat_vec

Flat = Tuple[int, ...]


@dataclass
class Cochain1:
    values: List[Flat]          # indexed by group element
    module: str                 # "lambda2", "tensor2" or "tensor"


@dataclass
class Cochain2:
    values: Dict[Tuple[int, int], Flat]
    module: str


# ---------------------------------------------------------------- actions

def act_weight(M: Mat, v: Sequence[int]) -> Flat:
    return mat_vec(M, v)


def act_tensor(M: Mat, flat: Sequence[int]) -> Flat:
    r = len(M)
    T = [flat[i * r:(i + 1) * r] for i in range(r)]
    MT = [[sum(M[i][k] * T[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
    return tuple(sum(MT[i][k] * M[j][k] for k in range(r)) for i in range(r) for j in range(r))


def outer(a: Sequence[int], b: Sequence[int]) -> Flat:
    return tuple(x * y for x in a for y in b)


def _action(module: str) -> Callable[[Mat, Sequence[int]], Flat]:
    return act_weight if module == "lambda2" else act_tensor


def _mod2(v: Sequence[int]) -> Flat:
    return tuple(x % 2 for x in v)


def _add(a: Sequence[int], b: Sequence[int], sign: int = 1) -> Flat:
    return tuple(x + sign * y for x, y in zip(a, b))


# ---------------------------------------------------------------- cocycles

def _sign(split: PolarizationSplit, w: Sequence[int]) -> int:
    p = dot(w, split.xi0)
    return (p > 0) - (p < 0)


def cocycle_c(split: PolarizationSplit, u: Mat, v: Mat) -> Flat:
    """``sum uv(nu)`` over ``nu > 0, v nu < 0, uv nu > 0``, mod 2."""
    split.require_strict()
    r = split.datum.rank
    acc = [0] * r
    for nu, m in split.positive.entries:
        vn = mat_vec(v, nu)
        if _sign(split, vn) < 0:
            uvn = mat_vec(u, vn)
            if _sign(split, uvn) > 0:
                for i in range(r):
                    acc[i] += m * uvn[i]
    return _mod2(acc)


def s2_integral(split: PolarizationSplit, w: Mat) -> Flat:
    """Integral lift ``sum w(nu) (x) w(nu)`` over ``nu > 0, w nu < 0``."""
    split.require_strict()
    r = split.datum.rank
    acc = [0] * (r * r)
    for nu, m in split.positive.entries:
        wn = mat_vec(w, nu)
        if _sign(split, wn) < 0:
            acc = [a + m * x for a, x in zip(acc, outer(wn, wn))]
    return tuple(acc)


def cocycle_s2(split: PolarizationSplit, w: Mat) -> Flat:
    return _mod2(s2_integral(split, w))


def cocycle_d(split: PolarizationSplit, u: Mat, v: Mat) -> Flat:
    """``sum uv(nu) (x) uv(nu)`` over ``nu < 0, v nu > 0, uv nu < 0``."""
    split.require_strict()
    r = split.datum.rank
    acc = [0] * (r * r)
    for nu, m in split.negative.entries:
        vn = mat_vec(v, nu)
        if _sign(split, vn) > 0:
            uvn = mat_vec(u, vn)
            if _sign(split, uvn) < 0:
                acc = [a + m * x for a, x in zip(acc, outer(uvn, uvn))]
    return tuple(acc)


def c_cochain(split: PolarizationSplit, W: WeylGroup) -> Cochain2:
    E = W.elements
    return Cochain2({(i, j): cocycle_c(split, E[i], E[j]) for i in range(len(E)) for j in range(len(E))}, "lambda2")


def s2_cochain(split: PolarizationSplit, W: WeylGroup) -> Cochain1:
    return Cochain1([cocycle_s2(split, M) for M in W.elements], "tensor2")


def s2_integral_cochain(split: PolarizationSplit, W: WeylGroup) -> Cochain1:
    return Cochain1([s2_integral(split, M) for M in W.elements], "tensor")


def d_cochain(split: PolarizationSplit, W: WeylGroup) -> Cochain2:
    E = W.elements
    return Cochain2({(i, j): cocycle_d(split, E[i], E[j]) for i in range(len(E)) for j in range(len(E))}, "tensor")


# ---------------------------------------------------------------- checks

def _reduce(module: str, v: Sequence[int]) -> Flat:
    return tuple(v) if module == "tensor" else _mod2(v)


def coboundary1(phi: Cochain1, W: WeylGroup) -> Cochain2:
    """``(d phi)(u, v) = u.phi(v) - phi(uv) + phi(u)``."""
    act = _action(phi.module)
    out = {}
    n = len(W)
    for i in range(n):
        for j in range(n):
            val = _add(_add(act(W.elements[i], phi.values[j]), phi.values[W.mul(i, j)], -1), phi.values[i])
            out[(i, j)] = _reduce(phi.module, val)
    return Cochain2(out, phi.module)


def verify_2cocycle(c: Cochain2, W: WeylGroup):
    """Normalization plus ``u.c(v,t) - c(uv,t) + c(u,vt) - c(u,v) = 0``.

    Returns ``(True, None)`` or ``(False, (u, v, t))`` with the first failing
    triple (``t`` is ``None`` for a normalization failure).
    """
    act = _action(c.module)
    n = len(W)
    zero = tuple([0] * len(next(iter(c.values.values()))))
    for i in range(n):
        if _reduce(c.module, c.values[(0, i)]) != zero:
            return False, (0, i, None)
        if _reduce(c.module, c.values[(i, 0)]) != zero:
            return False, (i, 0, None)
    table = [[W.mul(i, j) for j in range(n)] for i in range(n)]
    vals = c.values
    for u in range(n):
        Mu = W.elements[u]
        acted: Dict[Flat, Flat] = {}
        for v in range(n):
            uv = table[u][v]
            cuv = vals[(u, v)]
            for t in range(n):
                x = vals[(v, t)]
                ax = acted.get(x)
                if ax is None:
                    ax = acted[x] = act(Mu, x)
                y = vals[(uv, t)]
                z = vals[(u, table[v][t])]
                val = tuple(a - b + c_ - d for a, b, c_, d in zip(ax, y, z, cuv))
                if _reduce(c.module, val) != zero:
                    return False, (u, v, t)
    return True, None


def verify_crossed_hom(s: Cochain1, W: WeylGroup):
    """``s(uv) = s(u) + u.s(v)``; returns ``(ok, failing pair)``."""
    act = _action(s.module)
    n = len(W)
    for u in range(n):
        for v in range(n):
            lhs = s.values[W.mul(u, v)]
            rhs = _add(s.values[u], act(W.elements[u], s.values[v]))
            if _reduce(s.module, _add(lhs, rhs, -1)) != tuple([0] * len(lhs)):
                return False, (u, v)
    return True, None


# ---------------------------------------------------------------- solvers

@dataclass
class AffineSolution:
    """A particular solution plus a basis of the homogeneous solutions."""
    particular: object
    kernel: list


def _unpack_bits(x: int, nvars: int) -> List[int]:
    return [(x >> k) & 1 for k in range(nvars)]


def solve_coboundary_c(c: Cochain2, W: WeylGroup) -> Optional[AffineSolution]:
    """Find ``phi: W -> Lambda/2`` with ``phi(e) = 0`` and ``d phi = c``.

    Unknown ``(w, k)`` (``w >= 1``) sits at bit ``(w-1)*r + k``.  Returns
    ``None`` when ``c`` is not a coboundary.
    """
    n = len(W)
    r = len(next(iter(c.values.values())))
    nvars = (n - 1) * r

    def var(w: int, k: int) -> int:
        return 1 << ((w - 1) * r + k) if w else 0

    rows, rhs = [], []
    for u in range(n):
        Mu = W.elements[u]
        for v in range(n):
            uv = W.mul(u, v)
            target = c.values[(u, v)]
            for k in range(r):
                row = 0
                if v:
                    for j in range(r):
                        if Mu[k][j] % 2:
                            row ^= var(v, j)
                row ^= var(uv, k)
                row ^= var(u, k)
                rows.append(row)
                rhs.append(target[k] % 2)
    sol = gf2_solve(rows, rhs, nvars)
    if sol is None:
        return None
    x, kernel = sol

    def to_cochain(bits: int) -> Cochain1:
        b = _unpack_bits(bits, nvars)
        vals = [tuple([0] * r)] + [tuple(b[(w - 1) * r:w * r]) for w in range(1, n)]
        return Cochain1(vals, "lambda2")

    return AffineSolution(to_cochain(x), [to_cochain(k) for k in kernel])


def solve_coboundary_s2(s: Cochain1, W: WeylGroup) -> Optional[AffineSolution]:
    """Find ``t`` in ``Lambda(x)Lambda / 2`` with ``s(w) = t - w.t`` for all ``w``."""
    n = len(W)
    rr = len(s.values[0])
    rows, rhs = [], []
    unit = [tuple(int(i == k) for i in range(rr)) for k in range(rr)]
    images = [[act_tensor(M, unit[k]) for k in range(rr)] for M in W.elements]
    for w in range(n):
        for p in range(rr):
            row = 0
            for k in range(rr):
                coeff = (int(p == k) - images[w][k][p]) % 2
                if coeff:
                    row |= 1 << k
            rows.append(row)
            rhs.append(s.values[w][p] % 2)
    sol = gf2_solve(rows, rhs, rr)
    if sol is None:
        return None
    x, kernel = sol
    return AffineSolution(tuple(_unpack_bits(x, rr)), [tuple(_unpack_bits(k, rr)) for k in kernel])


def solve_integral_coboundary(target: Cochain2, W: WeylGroup) -> Optional[AffineSolution]:
    """Integral ``psi: W -> Lambda(x)Lambda`` with ``psi(e) = 0`` and ``d psi = target``.

    ``target`` must be a normalized 2-cocycle.  Such a cocycle vanishing on
    all pairs ``(g, v)`` with ``g`` a generator vanishes identically, so only
    those equations are imposed.  They determine ``psi`` from its values on
    the generators (the unknowns) via ``psi(g v) = g psi(v) + psi(g) - t(g, v)``;
    the remaining ones are linear constraints on those unknowns.
    """
    n = len(W)
    rr = len(next(iter(target.values.values())))
    gens = sorted({w[0] for w in W.generator_words if len(w) == 1})
    gpos = {g: i for i, w in enumerate(W.generator_words) if len(w) == 1 for g in w}
    k = len(gens) * rr
    col = {g: j * rr for j, g in enumerate(gens)}
    # psi(w) = A[w] x + b[w]; A[w] is rr rows of length k
    zero_row = [0] * k
    A: List[Optional[List[List[int]]]] = [None] * n
    b: List[Optional[List[int]]] = [None] * n
    A[0] = [list(zero_row) for _ in range(rr)]
    b[0] = [0] * rr
    for g in gens:
        i = gpos[g]
        A[i] = [[int(c == col[g] + p) for c in range(k)] for p in range(rr)]
        b[i] = [0] * rr

    def image(M, rows, vec):
        # act on the tensor coordinate index: rows[p] are coefficient rows
        out_rows = [[0] * k for _ in range(rr)]
        out_vec = [0] * rr
        for q in range(rr):
            unit = tuple(int(i == q) for i in range(rr))
            img = act_tensor(M, unit)
            for p in range(rr):
                if img[p]:
                    out_vec[p] += img[p] * vec[q]
                    rq = rows[q]
                    op = out_rows[p]
                    for c in range(k):
                        if rq[c]:
                            op[c] += img[p] * rq[c]
        return out_rows, out_vec

    order = sorted(range(n), key=lambda i: len(W.generator_words[i]))
    for i in order:
        word = W.generator_words[i]
        if len(word) <= 1:
            continue
        g = word[0]
        v = W.index[_strip_first(W, gpos[g], i)]
        gi = gpos[g]
        rows, vec = image(W.elements[gi], A[v], b[v])
        t = target.values[(gi, v)]
        A[i] = [[x + y for x, y in zip(rows[p], A[gi][p])] for p in range(rr)]
        b[i] = [vec[p] + b[gi][p] - t[p] for p in range(rr)]
    eqs, rhs = [], []
    for g in gens:
        gi = gpos[g]
        M = W.elements[gi]
        for v in range(n):
            gv = W.mul(gi, v)
            rows, vec = image(M, A[v], b[v])
            t = target.values[(gi, v)]
            for p in range(rr):
                eqs.append([rows[p][c] - A[gv][p][c] + A[gi][p][c] for c in range(k)])
                rhs.append(t[p] - vec[p] + b[gv][p] - b[gi][p])
    sol = solve_integer(eqs, rhs, k)
    if sol is None:
        return None
    x, kernel = sol

    def to_cochain(vec, affine: bool):
        vals = []
        for w in range(n):
            base = b[w] if affine else [0] * rr
            vals.append(tuple(base[p] + sum(A[w][p][c] * vec[c] for c in range(k)) for p in range(rr)))
        return Cochain1(vals, "tensor")

    return AffineSolution(to_cochain(x, True), [to_cochain(kv, False) for kv in kernel])


def _strip_first(W: WeylGroup, gi: int, i: int) -> Mat:
    return mat_mul(W.elements[W.inv(gi)], W.elements[i])


@dataclass
class BockResult:
    even: bool
    cohomologous: bool
    witness: Optional[Cochain1]


def bockstein_relation(split: PolarizationSplit, W: WeylGroup) -> BockResult:
    """Check ``dS = 0 mod 2`` for the integral lift ``S`` of ``s2`` and that
    ``dS/2`` and ``d`` agree in integral Weyl cohomology."""
    S = s2_integral_cochain(split, W)
    dS = coboundary1(S, W)
    if any(x % 2 for v in dS.values.values() for x in v):
        return BockResult(False, False, None)
    d = d_cochain(split, W)
    diff = Cochain2({k: tuple(x // 2 - y for x, y in zip(dS.values[k], d.values[k])) for k in dS.values}, "tensor")
    sol = solve_integral_coboundary(diff, W)
    return BockResult(True, sol is not None, sol.particular if sol else None)
