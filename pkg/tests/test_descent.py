from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coulomb_weyl import descent as ds
from coulomb_weyl import formal_sections as fs
from coulomb_weyl import representation as rp
from coulomb_weyl import weyl_cohomology as wc
from coulomb_weyl.analysis import Context
from coulomb_weyl.root_datum import build_simple, build_torus, central_quotient, product

F = Fraction
SU2 = build_simple("SU", 2)


def _su2(e):
    return ds.abelianizable(SU2, e)


# ---------------------------------------------------------------- abelianization

def test_su2_trichotomy():
    std = rp.standard_rep(SU2, 0)
    adj2 = rp.quaternionify(rp.adjoint_rep(SU2))
    for e in (rp.from_ambient(SU2, []), std, rp.scale(std, 2)):
        m = _su2(e)
        assert not m.eligible_c3 and not m.eligible_c4
    for e in (adj2, rp.direct_sum(adj2, std)):
        m = _su2(e)
        assert m.eligible_c3 and m.eligible_c4
    m = _su2(rp.su2_irrep(SU2, 0, 3))
    # weights 3w and w both lie on the root line; only the integral multiple
    # of alpha = 2w survives at the central translate
    row = m.roots[0]
    assert (row.multiplicity, row.required, row.affine_multiplicity) == (4, 4, 0)
    assert m.eligible_c3 and not m.eligible_c4


def test_subtract_adjoint():
    std = rp.standard_rep(SU2, 0)
    adj2 = rp.quaternionify(rp.adjoint_rep(SU2))
    rest = ds.subtract_adjoint(rp.direct_sum(adj2, std))
    assert rest.lattice() == [((-1,), 1), ((1,), 1)]
    assert ds.subtract_adjoint(adj2).dim == 0
    with pytest.raises(ds.DescentError, match="'2'"):
        ds.subtract_adjoint(std)


def test_hyperplane_multiplicity_counts_positive_multiples():
    ws = [((2,), 1), ((1,), 3), ((-1,), 3), ((4,), 1)]
    assert ds.hyperplane_multiplicity(ws, (2,), (1,)) == 2 + 3 + 4
    assert ds.hyperplane_multiplicity(ws, (2,), (1,), integral_only=True) == 2 + 4


# ---------------------------------------------------------------- Fourier modes

def test_fourier_mode_su2_h():
    split = rp.polarize(rp.standard_rep(SU2, 0), (1,))
    # the negative weight -1 pairs positively with gamma = -1: <-1|xi>^1 = -xi
    m = ds.fourier_mode(split, (-1,))
    assert m.section.factors == (((1,), (1,)),) and m.section.sign == (1,)
    assert ds.fourier_mode(split, (1,)).section.is_identity()
    assert ds.fourier_mode(split, (-3,)).section.factors == (((1,), (3,)),)


def test_fourier_mode_matches_pairing_of_euler_section():
    # with E = V + V^vee and V = E+, the mode's factors are the poles of <eps_V|gamma>
    d = build_simple("SU", 3)
    e = rp.quaternionify(rp.standard_rep(d, 0))
    split = rp.polarize(e, rp.default_xi0(e))
    for gamma in [(1, 0), (0, 1), (-1, 2), (2, -3)]:
        mode = ds.fourier_mode(split, gamma).section
        eps = fs.pair_with_cocharacter(fs.epsilon_V(split.xi0, split.negative.entries), gamma)
        poles = {k: v for k, v in eps.factors if v[0] > 0}
        assert dict(mode.factors) == poles


# ---------------------------------------------------------------- roots

def test_levi_cases():
    assert ds.levi_case(SU2, (2,), (1,)) == ds.SU2
    so3 = central_quotient(SU2, [[F(1, 2)]])
    assert ds.levi_case(so3, so3.roots[0], so3.coroots[0]) == ds.SO3
    u2 = central_quotient(product(SU2, build_torus(1)), [[F(1, 2), F(1, 2)]])
    i = u2.positive.index(True)
    assert ds.levi_case(u2, u2.roots[i], u2.coroots[i]) == ds.SU2_MU2


def test_odd_spin_sum():
    ws = rp.su2_irrep(SU2, 0, 3).lattice()
    assert ds.odd_spin_sum(ws, (1,)) == 4
    assert ds.odd_spin_sum(rp.adjoint_rep(SU2).lattice(), (1,)) == 0


CORRECTIONS = {
    "su2_2H": [(0,)], "su2_spin3half": [(0,)], "b4": [(0, 1)],
    "b3": [(0, 0)] * 4, "b1": [(0, 0, 1), (0, 0, 0), (0, 0, 0)],
}


@pytest.mark.parametrize("name", sorted(CORRECTIONS))
def test_root_corrections(corpus, name):
    d, e, xi0 = corpus[name]
    ctx = Context(d, e, xi0)
    rep = ds.evaluation_conditions(d, e, ctx.split, c_solution=ctx.c_solution, W=ctx.W)
    assert [rc.correction_sign for rc in rep.roots] == CORRECTIONS[name]
    for idx, pos in enumerate(d.positive):
        if pos:
            rc = ds.solve_root_correction(ctx.split, idx)
            assert rc.section is not None
            assert ds.check_root_correction(ctx.split, idx, rc.section, rc.extra_sign)
    assert rep.global_correction is not None


def test_global_correction_supplies_b4_sign(corpus):
    d, e, xi0 = corpus["b4"]
    ctx = Context(d, e, xi0)
    rep = ds.evaluation_conditions(d, e, ctx.split, c_solution=ctx.c_solution, W=ctx.W)
    s = ctx.reflection_element(d.roots.index((2, 0)))
    assert rep.global_correction[s] == (0, 1)
    # and it is still a trivialization of c
    phi = wc.Cochain1(list(rep.global_correction), "lambda2")
    assert wc.coboundary1(phi, ctx.W).values == ctx.c.values


def test_obstructed_input_rejected(corpus):
    d, e, xi0 = corpus["su2_H"]
    ctx = Context(d, e, xi0)
    with pytest.raises(ds.DescentError):
        ds.evaluation_conditions(d, e, ctx.split, c_exact=False)


def test_character_flavor_is_reported_not_constructed(corpus):
    d, e, xi0 = corpus["su2_2H"]
    ctx = Context(d, e, xi0)
    rep = ds.evaluation_conditions(d, e, ctx.split, flavor=fs.CHARACTER)
    assert all(rc.status == "exists, not constructed" for rc in rep.roots)


@given(st.integers(0, 3), st.integers(0, 3))
def test_polarized_su2_corrections_are_exact(a, b):
    # E = a(H + H) + b(spin 3/2 + its copy) is polarized; no sign correction is needed
    parts = [rp.quaternionify(rp.standard_rep(SU2, 0))] * a + [rp.quaternionify(rp.su2_irrep(SU2, 0, 3))] * b
    e = rp.from_ambient(SU2, [])
    for p in parts:
        e = rp.direct_sum(e, p)
    split = rp.polarize(e, (1,))
    rc = ds.solve_root_correction(split, 0)
    assert rc.section is not None and rc.extra_sign == (0,)
    assert ds.check_root_correction(split, 0, rc.section, rc.extra_sign)
