"""Verification-layer units: ladder reports, annihilation classification,
factorization roundtrip, on-shell residual, zero-energy subspace."""

from fractions import Fraction as F

import pytest

from susy2d import checks as ck
from susy2d import numerics as nm
from susy2d import systems as sy
from susy2d.systems import SystemId

HO = SystemId("ho")
HA = SystemId("ha")


class TestLadderCheck:
    def test_mapped_arrow(self):
        rep = ck.ladder_check(HO, "Dn+", (1, 1))
        assert rep.status == "mapped"
        assert rep.target == (3, 1)
        assert rep.overlap >= 1 - 1e-6
        assert rep.passed

    def test_a_constant(self):
        rep = ck.ladder_check(HO, "a2", (1, 1))
        assert rep.expected_constant == pytest.approx(1.0)
        assert abs(abs(rep.constant) - rep.expected_constant) <= 1e-6

    def test_annihilation_case(self):
        # a1 kills the m = n edge of the oscillator lattice
        rep = ck.ladder_check(HO, "a1", (2, 2))
        assert rep.status == "annihilated"
        assert rep.residual_norm < 1e-8
        assert rep.passed

    def test_b_arrow_changes_both_labels(self):
        rep = ck.ladder_check(HO, "B1", (2, 0))
        assert rep.target == (3, -1)
        assert rep.passed

    def test_hydrogen_f_arrow(self):
        rep = ck.ladder_check(HA, "F1", (3, 1))
        assert rep.target == (3, 0)
        assert rep.passed

    def test_hydrogen_t_arrow_in_scaled_variable(self):
        rep = ck.ladder_check(HA, "Tn+", (2, 1))
        assert rep.target == (3, 1)
        assert rep.passed

    def test_default_sources_are_valid_and_plentiful(self):
        for (kind, name) in sy.LADDER_TABLE:
            sid = HO if kind == "ho" else HA
            srcs = ck.default_sources(sid, name)
            assert len(srcs) >= 6, (kind, name)
            dn, dm = sy.ladder_semantics(sid, name)
            for n, m in srcs:
                assert nm.allowed_state(sid, n, m)
                assert nm.allowed_state(sid, n + dn, m + dm)

    def test_full_diagram_passes(self):
        for sid in (HO, HA):
            reports = ck.ladder_diagram(sid)
            assert all(r.passed for r in reports)
            # every arrow of the system is covered
            names = {r.operator for r in reports}
            assert names == {n for k, n in sy.LADDER_TABLE if k == sid.kind}


class TestRoundtrip:
    @pytest.mark.parametrize("n,m", [(0, 0), (2, 2), (4, 0), (3, -1)])
    def test_scalar_matches_factorization_eigenvalue(self, n, m):
        out = ck.roundtrip_check(n, m)
        assert out["pass"], out
        e = n + 1
        assert out["expected"] == pytest.approx(
            0.25 * ((e + 0.5) * (e + 1.5) - (m * m - 0.25))
        )


class TestOnShell:
    @pytest.mark.parametrize("n", [2, 3])
    def test_commutator_closes_on_shell(self, n):
        out = ck.on_shell_check(n)
        assert out["pass"]
        assert out["max_relative_residual"] <= 1e-4
        assert len(out["per_m"]) == 2 * n - 1


class TestZeroEnergy:
    @pytest.mark.parametrize("zeta", [F(1), F(3, 2), F(2)])
    def test_residual_small(self, zeta):
        for n in range(4):
            out = ck.zero_energy_check(zeta, F(1, 2), n)
            assert out["pass"], out

    def test_degeneracy_counts_admissible_m(self):
        # zeta = 2: all lattice m survive; zeta = 1: only even m (mu = m/2)
        assert ck.zero_energy_check(F(2), F(1, 2), 3)["degeneracy"] == 4
        assert ck.zero_energy_check(F(1), F(1, 2), 2)["degeneracy"] == 3
        assert ck.zero_energy_check(F(1), F(1, 2), 1)["degeneracy"] == 0

    def test_admissibility_predicate_is_configurable(self):
        out = ck.zero_energy_check(
            F(1), F(1, 2), 2, admissible=lambda zeta, m: m == 0
        )
        assert out["degeneracy"] == 1
        assert out["admissible_m_osc"] == [0]

    def test_b_eigenvalue_scaling(self):
        out = ck.zero_energy_check(F(1), F(2), 2)
        # B = (zeta sqrt(2A) / 2)(n + 1) = (1 * 2 / 2) * 3
        assert out["B"] == pytest.approx(3.0)
