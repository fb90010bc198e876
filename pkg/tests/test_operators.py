"""Property suite for the normal-ordered operator algebra.

The four core properties (ring laws, Jacobi identity, reordering soundness
against the monomial action, canonical-form idempotence) each run 1000
randomized cases.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from susy2d.exact import Expo, GaussianRational, Poly
from susy2d.operators import (
    Operator,
    PrefactorError,
    apply_to_monomial,
    commutator,
    compose,
)

CASES = 1000

# Small pools of exact values keep the draw cost of a case low while still
# covering complex coefficients, Laurent degrees, and zeta-affine exponents.
_GAUSS_POOL = [
    GaussianRational(F(a), F(b))
    for a, b in [(1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (1, 2), (-3, 1),
                 (F(1, 2), 0), (0, F(1, 2)), (F(-1, 2), F(3, 2)), (F(2, 3), 0)]
]
_POLY_POOL = (
    [Poly.monomial(c, m=dm, E=de)
     for c in _GAUSS_POOL[:5] for dm in (-1, 0, 1, 2) for de in (0, 1)]
    + [Poly.var("m") + 1, Poly.var("m") * Poly.var("m") - Poly.const(F(1, 4)),
       Poly.var("E") - Poly.var("m"), Poly.var("n") * 2 + Poly.var("E", -1)]
)
_EXPO_POOL = [
    Expo.of(c, z)
    for c in (F(-2), F(-1), F(-1, 2), F(0), F(1, 2), F(1), F(2))
    for z in (F(0), F(1, 2), F(1))
]

gauss = st.sampled_from(_GAUSS_POOL)
polys = st.sampled_from(_POLY_POOL)
expos = st.sampled_from(_EXPO_POOL)


def _mk_operator(terms):
    op = Operator.zero()
    for coeff, phase, rho, d, lz in terms:
        op = op + Operator.term(coeff, phase_k=phase, rho_pow=rho,
                                drho_order=d, lz_order=lz)
    return op


def operators(max_terms=2, max_d=2):
    term = st.tuples(polys, expos, expos, st.integers(0, max_d),
                     st.integers(0, 1))
    return st.lists(term, min_size=1, max_size=max_terms).map(_mk_operator)


@settings(max_examples=CASES, deadline=None)
@given(operators(max_d=1), operators(max_d=1), operators(max_terms=1, max_d=1))
def test_ring_laws(a, b, c):
    # additive structure
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + Operator.zero() == a
    assert (a - a).is_zero()
    # multiplicative structure
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, Operator.identity()) == a
    assert compose(Operator.identity(), a) == a
    # distributivity
    assert compose(a, b + c) == compose(a, b) + compose(a, c)
    assert compose(a + b, c) == compose(a, c) + compose(b, c)


@settings(max_examples=CASES, deadline=None)
@given(
    operators(max_terms=1, max_d=1),
    operators(max_terms=1, max_d=1),
    operators(max_terms=1, max_d=2),
)
def test_jacobi_identity(a, b, c):
    total = (
        commutator(commutator(a, b), c)
        + commutator(commutator(b, c), a)
        + commutator(commutator(c, a), b)
    )
    assert total.is_zero()


def _action(op, s_offset=Expo.of(0), k_offset=Expo.of(0)):
    pref, results = apply_to_monomial(op, s_offset, k_offset)
    assert pref == {}
    return {(r, k): c for c, r, k in results}


@settings(max_examples=CASES, deadline=None)
@given(operators(), operators())
def test_reordering_soundness(a, b):
    """compose(a, b) acts on rho^s e^{ik phi} exactly as b then a."""
    composed = _action(compose(a, b))

    two_step: dict = {}
    for (r_off, k_off), cb in _action(b).items():
        for (r2, k2), ca in _action(a, r_off, k_off).items():
            key = (r2, k2)
            s = two_step.get(key, Poly()) + ca * cb
            if s.is_zero():
                two_step.pop(key, None)
            else:
                two_step[key] = s
    assert composed == two_step


prefactors = st.dictionaries(
    st.sampled_from(["2", "E", "A", "zeta"]),
    st.fractions(min_value=F(-3, 2), max_value=F(5, 2), max_denominator=2),
    max_size=2,
)


@settings(max_examples=CASES, deadline=None)
@given(operators(), prefactors)
def test_canonical_idempotence(op, pref):
    """Rebuilding through the constructor is idempotent, including prefactor
    normalization (integer exponent parts migrate into the coefficients)."""
    scaled = op.scale(**{("two" if b == "2" else b): q for b, q in pref.items()})
    once = scaled.canonical()
    assert once == scaled
    assert once.canonical() == once
    # normalized prefactor exponents are proper fractions in [0, 1)
    for q in once.prefactor.values():
        assert 0 < q < 1
    if not once.is_zero():
        rebuilt = Operator(once.terms, once.prefactor)
        assert rebuilt == once


# ---------------------------------------------------------------------------
# directed units
# ---------------------------------------------------------------------------

def test_normal_ordering_d_rho():
    # d . rho = rho d + 1
    d, rho = Operator.drho(), Operator.rho()
    assert compose(d, rho) == compose(rho, d) + Operator.identity()
    # [d, rho^p] = p rho^{p-1} with symbolic (zeta) power
    rz = Operator.rho(0, 1)  # rho^zeta
    comm = commutator(d, rz)
    expected = Operator.term(Poly.var("zeta"), rho_pow=Expo.of(-1, 1))
    assert comm == expected


def test_normal_ordering_lz_phase():
    # Lz . e^{ik phi} = e^{ik phi} (Lz + k)
    lz = Operator.lz()
    ph = Operator.phase(2)
    got = compose(lz, ph)
    expected = compose(ph, lz) + ph.scale(2)
    assert got == expected


def test_prefactor_sum_mismatch_raises():
    a = Operator.identity().scale(two=F(1, 2))
    b = Operator.identity()
    with pytest.raises(PrefactorError):
        a + b


def test_prefactor_integer_part_pushed_into_coeff():
    op = Operator.identity().scale(two=F(3, 2))  # 2*sqrt(2)
    assert op.prefactor == {"2": F(1, 2)}
    ((key, coeff),) = op.terms.items()
    assert coeff == Poly.const(2)


def test_substitute_zeta_collapses_exponents():
    op = Operator.rho(0, 1)  # rho^zeta
    sub = op.substitute("zeta", 2)
    assert sub == Operator.rho(2)
    with pytest.raises(ValueError):
        op.substitute("zeta", -1)


def test_substitute_prefactor_rationality():
    op = Operator.identity().scale(E=F(1, 2))  # sqrt(E)
    assert op.substitute("E", 4) == Operator.identity().scale(2)
    with pytest.raises(ValueError):
        op.substitute("E", 3)


def test_substitute_poly_shifts_coefficients():
    op = Operator.term(Poly.var("m"))
    assert op.substitute_poly("m", Poly.var("m") + 1) == Operator.term(
        Poly.var("m") + 1
    )
    with pytest.raises(ValueError):
        Operator.identity().scale(E=F(1, 2)).substitute_poly("E", Poly.var("n"))


def test_adjoint_involution_and_antihomomorphism():
    a = Operator.term(Poly.var("m"), rho_pow=Expo.of(1), drho_order=1)
    b = Operator.phase(1) + Operator.drho(2)
    for measure in ("u", "psi"):
        assert a.adjoint(measure).adjoint(measure) == a
        assert compose(a, b).adjoint(measure) == compose(
            b.adjoint(measure), a.adjoint(measure)
        )


def test_adjoint_measures_differ_by_jacobian():
    # In L^2(rho d rho) the adjoint of d_rho picks up the -1/rho Jacobian term
    d = Operator.drho()
    assert d.adjoint("u") == -d
    assert d.adjoint("psi") == -d - Operator.rho(-1)


def test_to_json_dict_is_canonically_ordered():
    op = Operator.drho(2) + Operator.rho(1) + Operator.phase(1)
    d1, d2 = op.to_json_dict(), op.canonical().to_json_dict()
    assert d1 == d2
    assert [t["d"] for t in d1["terms"]] == sorted(
        [t["d"] for t in d1["terms"]],
        key=lambda x: [t["d"] for t in d1["terms"]].index(x),
    )


def test_apply_to_monomial_derivative():
    # d^2 on rho^s: s(s-1) rho^{s-2}
    pref, results = apply_to_monomial(Operator.drho(2))
    assert pref == {}
    ((coeff, r_off, k_off),) = results
    s = Poly.var("s")
    assert coeff == s * (s - 1)
    assert r_off == Expo.of(-2)
    assert k_off.is_zero()
