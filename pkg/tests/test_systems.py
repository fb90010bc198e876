"""Units for the operator builders: catalog coverage, elementary exact
relations, ladder semantics, and parameter substitution."""

from fractions import Fraction as F

import pytest

from susy2d import systems as sy
from susy2d.exact import Expo, Poly
from susy2d.operators import Operator, commutator, compose
from susy2d.systems import SystemId, UnknownOperatorError


class TestSystemId:
    def test_kinds(self):
        for kind in ("ho", "ha", "gen"):
            assert SystemId(kind).kind == kind
        with pytest.raises(ValueError):
            SystemId("box")

    def test_gen_parameter_validation(self):
        SystemId("gen", zeta=F(3, 2), A=F(1, 2), B=F(2))
        for bad in (dict(zeta=F(-1)), dict(A=F(0)), dict(B=F(-3))):
            with pytest.raises(ValueError):
                SystemId("gen", **bad)


class TestCatalogs:
    def test_every_name_builds(self):
        for kind in ("ho", "ha", "gen"):
            for name in sy.operator_names(kind):
                op = sy.build(kind, name)
                assert isinstance(op, Operator)
                assert not op.is_zero()

    def test_unknown_name_rejected(self):
        with pytest.raises(UnknownOperatorError):
            sy.build("ho", "Q")

    def test_gen_substitution_on_build(self):
        sid = SystemId("gen", zeta=F(2), A=F(1, 2), B=F(1))
        op = sy.build(sid, "H")
        assert "zeta" not in op.params_present()
        assert "A" not in op.params_present()

    def test_gen_irrational_sqrt_rejected(self):
        # the builders carry alpha = sqrt(2A); A = 3/2 makes it irrational
        sid = SystemId("gen", A=F(3, 2))
        with pytest.raises(ValueError):
            sy.build(sid, "Theta+")


class TestOscillatorBuilders:
    def test_radial_hamiltonian_terms(self):
        # H_m = -1/2 d^2 + rho^2/2 + (m^2 - 1/4)/(2 rho^2)
        h = sy.ho_hamiltonian_radial()
        expected = (
            Operator.drho(2).scale(F(-1, 2))
            + Operator.rho(2).scale(F(1, 2))
            + Operator.term(
                (Poly.var("m") * Poly.var("m") - F(1, 4)) * F(1, 2),
                rho_pow=Expo.of(-2),
            )
        )
        assert h == expected

    def test_a_operators_obey_ccr(self):
        # [a1, a1+] = 1, [a2, a2+] = 1, mixed commutators vanish
        a1, a1d = sy.ho_a(1), sy.ho_a(1, dagger=True)
        a2, a2d = sy.ho_a(2), sy.ho_a(2, dagger=True)
        one = Operator.identity()
        assert commutator(a1, a1d) == one
        assert commutator(a2, a2d) == one
        assert commutator(a1, a2).is_zero()
        assert commutator(a1, a2d).is_zero()

    def test_a_adjoints_are_daggers(self):
        for i in (1, 2):
            assert sy.ho_a(i).adjoint("psi") == sy.ho_a(i, dagger=True)

    def test_number_operator_gives_hamiltonian(self):
        # a1+ a1 + a2+ a2 + 1 = H (2D oscillator)
        n_op = (
            compose(sy.ho_a(1, dagger=True), sy.ho_a(1))
            + compose(sy.ho_a(2, dagger=True), sy.ho_a(2))
            + Operator.identity()
        )
        assert n_op == sy.ho_hamiltonian_2d()

    def test_level_operators_commute_with_h(self):
        h = sy.ho_hamiltonian_2d()
        assert commutator(h, sy.ho_o3()).is_zero()
        assert commutator(h, sy.ho_opm(1)).is_zero()
        assert commutator(h, sy.ho_opm(-1)).is_zero()


class TestHydrogenBuilders:
    def test_radial_hamiltonian_terms(self):
        h = sy.ha_hamiltonian_radial()
        expected = (
            Operator.drho(2).scale(F(-1, 2))
            - Operator.rho(-1)
            + Operator.term(
                (Poly.var("m") * Poly.var("m") - F(1, 4)) * F(1, 2),
                rho_pow=Expo.of(-2),
            )
        )
        assert h == expected

    def test_g3_is_lz(self):
        assert sy.ha_g3() == Operator.lz()

    def test_g_pm_adjoint_pair(self):
        gp, gm = sy.ha_gpm(1), sy.ha_gpm(-1)
        assert gp.adjoint("psi") == gm

    def test_g_pm_commute_with_h(self):
        h = sy.ha_hamiltonian_2d()
        # [H, G+-] vanishes after clearing the 1/sqrt(2|E|) normalization:
        # the commutator with the E-independent core must vanish on-shell via
        # the symmetry algebra; here we check the exact 2D symmetry
        assert commutator(h, sy.ha_g3()).is_zero()


class TestLadderSemantics:
    def test_table_covers_all_arrows(self):
        ho_names = {n for k, n in sy.LADDER_TABLE if k == "ho"}
        ha_names = {n for k, n in sy.LADDER_TABLE if k == "ha"}
        assert ho_names == {"Dn+", "Dn-", "O+", "O-", "a1", "a1+", "a2", "a2+",
                            "B1", "B1+", "B2", "B2+"}
        assert ha_names == {"Tn+", "Tn-", "G+", "G-", "F1", "F1+", "F2", "F2+"}

    def test_dagger_pairs_are_inverse_arrows(self):
        for (kind, name), (dn, dm) in sy.LADDER_TABLE.items():
            partner = name[:-1] if name.endswith("+") else name + "+"
            if (kind, partner) in sy.LADDER_TABLE:
                pdn, pdm = sy.LADDER_TABLE[(kind, partner)]
                assert (pdn, pdm) == (-dn, -dm), (kind, name)

    def test_unknown_operator(self):
        with pytest.raises(UnknownOperatorError):
            sy.ladder_semantics("ho", "G+")


class TestPartnerStructure:
    def test_b_products_give_shifted_hamiltonians(self):
        # B1(m) B1+(m) = H_m - (m - 1),  B1+(m) B1(m) = H_{m-1} - m  (in the
        # intertwined radial sectors); validated here through the exact
        # operator products
        m = Poly.var("m")
        b1, b1d = sy.ho_b(1), sy.ho_b(1, dagger=True)
        h = sy.ho_hamiltonian_radial()
        assert compose(b1, b1d) == h - Operator.term(m + 1)
        assert compose(b1d, b1) == h.substitute_poly("m", m + 1) - Operator.term(m)

    def test_f_cleared_matches_scaled_f(self):
        # the denominator-cleared variant differs from F1 only by the scalar
        # sqrt(2)(m + 1/2) (kept symbolic there, so the algebra stays exact;
        # the plain builder needs a numeric m)
        f1 = sy.ha_f(1, m=2)
        f1c = sy.ha_f_cleared(1, m=2)
        assert f1c == f1.scale(F(5, 2), two=F(1, 2)).canonical()
