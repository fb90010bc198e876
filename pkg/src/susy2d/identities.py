"""Registry of symbolic operator identities and the change-of-variables check.

Each identity is stored as a (lhs, rhs) pair of operator builders; verifying
it means computing the canonical form of lhs - rhs and testing it against the
zero operator.  Identities that only hold on an energy shell are registered
with ``asserted=False``: their residual is reported but not required to
vanish (the numeric on-shell check in :mod:`susy2d.checks` covers them).

Denominator conventions: identities involving the 1/(m +- 1/2) coefficients
of the F and g operators are registered in denominator-cleared form (both
sides multiplied by the appropriate power of m +- 1/2), and the su(2)/so(2,1)
relations of the generalized system are cleared by zeta*sqrt(2A); clearing by
a central, invertible scalar preserves the zero-or-not verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import Expo, GR_I, Poly, _frac
from .operators import Operator, commutator, compose
from . import systems as sy

F = Fraction
_I = sy._I_POLY


@dataclass(frozen=True)
class IdentityReport:
    name: str
    description: str
    lhs: dict
    rhs: dict
    residual: dict
    residual_terms: int
    asserted: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "asserted": self.asserted,
            "pass": self.passed,
            "residual_terms": self.residual_terms,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class Identity:
    name: str
    description: str
    lhs: Callable[[], Operator]
    rhs: Callable[[], Operator]
    asserted: bool = True


def _schrodinger_residual_ho() -> Operator:
    """rho^2 d^2 - rho^4 + 2 E rho^2 - (m^2 - 1/4): vanishes on oscillator
    eigenstates at level energy E."""
    E, m = Poly.var("E"), Poly.var("m")
    return (
        Operator.term(1, rho_pow=Expo.of(2), drho_order=2)
        - Operator.rho(4)
        + Operator.rho(2).scale(E * 2)
        - Operator.scalar(m * m - F(1, 4))
    )


def _schrodinger_residual_ha() -> Operator:
    """x^2 d^2 + 2 K x - x^2 - (m^2 - 1/4): vanishes on hydrogen
    eigenstates in the scaled variable x."""
    K, m = Poly.var("K"), Poly.var("m")
    return (
        Operator.term(1, rho_pow=Expo.of(2), drho_order=2)
        + Operator.rho(1).scale(K * 2)
        - Operator.rho(2)
        - Operator.scalar(m * m - F(1, 4))
    )


# ---------------------------------------------------------------------------
# change of variables rho^zeta = (zeta / (2 sqrt(2A))) y^2, theta = (zeta/2) phi
# ---------------------------------------------------------------------------

def pullback_to_radial(op: Operator, zeta: Fraction | None = None) -> Operator:
    """Pull an oscillator-language operator in (y, theta) back to (rho, phi).

    Exact chain-rule rewriting built from the factor maps

        e^{ik theta} -> e^{i k (zeta/2) phi}
        y            -> c rho^{zeta/2},    c = (2 alpha / zeta)^{1/2}
        d_y          -> (2/(zeta c)) rho^{1 - zeta/2} d_rho
        L_z(theta)   -> (2/zeta) L_z

    with alpha = sqrt(2A) kept symbolic.  The input operator must not itself
    depend on zeta.  If ``zeta`` is given, it is substituted at the end.
    """
    c_pref = {"2": F(1, 2), "A": F(1, 2), "zeta": F(-1, 2)}
    inv_c_pref = {"2": F(-1, 2), "A": F(-1, 2), "zeta": F(1, 2)}
    two_over_zeta = Poly.const(2) * Poly.var("zeta", -1)
    dy_map = Operator(
        {(Expo.of(0), Expo.of(1, F(-1, 2)), 1, 0): two_over_zeta}, inv_c_pref
    )
    lz_map = Operator.lz().scale(two_over_zeta)
    total = Operator.zero()
    for (phase, rho, j, l), coeff in op.terms.items():
        if phase.zeta_coeff != 0 or rho.zeta_coeff != 0:
            raise ValueError("pullback input must have zeta-free exponents")
        p = rho.const_part
        k = phase.const_part
        piece = Operator.term(
            coeff,
            phase_k=Expo.of(0, k * F(1, 2)),
            rho_pow=Expo.of(0, p * F(1, 2)),
        ).scale(1, **{b: q * p for b, q in (("two", F(1, 2)), ("A", F(1, 2)), ("zeta", F(-1, 2)))})
        for _ in range(j):
            piece = compose(piece, dy_map)
        for _ in range(l):
            piece = compose(piece, lz_map)
        total = total + piece
    if op.prefactor:
        total = total.scale(
            **{("two" if b == "2" else b): q for b, q in op.prefactor.items()}
        )
    if zeta is not None:
        total = total.substitute("zeta", zeta)
    return total


def transform_check(zeta: Fraction | int, A: Fraction | None = None) -> IdentityReport:
    """Verify that the (y, theta) oscillator equation is the pulled-back form
    of H psi = B psi: zeta*alpha*pullback(Htilde) = 2 H, exactly."""
    zeta = _frac(zeta)
    if zeta <= 0:
        raise ValueError("zeta must be positive")
    za = Poly.var("zeta") * Poly.var("A")
    lhs = pullback_to_radial(sy.ho_hamiltonian_2d()).scale(za)
    rhs = sy.gen_hhat().scale(2)
    lhs = lhs.substitute("zeta", zeta)
    rhs = rhs.substitute("zeta", zeta)
    if A is not None:
        alpha2 = 2 * _frac(A)
        root = sy._exact_sqrt(alpha2)
        if root is not None:
            lhs = lhs.substitute("A", root)
            rhs = rhs.substitute("A", root)
    ztag = str(zeta.numerator) if zeta.denominator == 1 else f"{zeta.numerator}d{zeta.denominator}"
    return _report(
        f"gen.transform.z{ztag}",
        f"pullback of the oscillator equation equals H psi = B psi at zeta={zeta}",
        lhs,
        rhs,
        asserted=True,
    )


# ---------------------------------------------------------------------------
# the registry
# ---------------------------------------------------------------------------

def _ho_identities() -> list[Identity]:
    m, E, n = Poly.var("m"), Poly.var("E"), Poly.var("n")
    cf = m * m - F(1, 4)
    one = Operator.identity

    def factor_plus_lhs():
        return compose(sy.ho_dn(-1) - one(), sy.ho_dn(1)) + _schrodinger_residual_ho().scale(F(1, 4))

    def factor_plus_rhs():
        return Operator.scalar(((E + F(1, 2)) * (E + F(3, 2)) - cf) * F(1, 4))

    def factor_minus_lhs():
        return compose(sy.ho_dn(1) + one(), sy.ho_dn(-1)) + _schrodinger_residual_ho().scale(F(1, 4))

    def factor_minus_rhs():
        return Operator.scalar(((E - F(1, 2)) * (E - F(3, 2)) - cf) * F(1, 4))

    ids = [
        Identity("ho.factor.plus",
                 "(D-^n - 1) D+^n factorization, modulo the radial equation",
                 factor_plus_lhs, factor_plus_rhs),
        Identity("ho.factor.minus",
                 "(D+^n + 1) D-^n factorization, modulo the radial equation",
                 factor_minus_lhs, factor_minus_rhs),
    ]
    for sgn, tag in ((1, "plus"), (-1, "minus")):
        for step, lbl, shift in ((2, "up", -1), (-2, "down", 1)):
            ids.append(
                Identity(
                    f"ho.recursion.{tag}.{lbl}",
                    f"D{tag[0]}^(n{step:+d}) = D{tag[0]}^n {'-' if shift < 0 else '+'} 1 at E_n = n+1",
                    lambda sgn=sgn, step=step: sy.ho_dn(sgn).substitute_poly("E", n + 1 + step),
                    lambda sgn=sgn, shift=shift: sy.ho_dn(sgn).substitute_poly("E", n + 1) + Operator.scalar(shift),
                )
            )
    ids += [
        Identity("ho.so21.pm", "[D+, D-] = -2 D3",
                 lambda: commutator(sy.ho_dpm(1), sy.ho_dpm(-1)),
                 lambda: sy.ho_d3().scale(-2)),
        Identity("ho.so21.p3", "[D+, D3] = -D+",
                 lambda: commutator(sy.ho_dpm(1), sy.ho_d3()),
                 lambda: -sy.ho_dpm(1)),
        Identity("ho.so21.m3", "[D-, D3] = +D-",
                 lambda: commutator(sy.ho_dpm(-1), sy.ho_d3()),
                 lambda: sy.ho_dpm(-1)),
        Identity("ho.su2.pm", "[O+, O-] = 2 O3",
                 lambda: commutator(sy.ho_opm(1), sy.ho_opm(-1)),
                 lambda: sy.ho_o3().scale(2)),
        Identity("ho.su2.p3", "[O+, O3] = -O+",
                 lambda: commutator(sy.ho_opm(1), sy.ho_o3()),
                 lambda: -sy.ho_opm(1)),
        Identity("ho.su2.m3", "[O-, O3] = +O-",
                 lambda: commutator(sy.ho_opm(-1), sy.ho_o3()),
                 lambda: sy.ho_opm(-1)),
        Identity("ho.ccr.a1", "[a1, a1+] = 1",
                 lambda: commutator(sy.ho_a(1), sy.ho_a(1, True)), one),
        Identity("ho.ccr.a2", "[a2, a2+] = 1",
                 lambda: commutator(sy.ho_a(2), sy.ho_a(2, True)), one),
        Identity("ho.ccr.a12", "[a1, a2] = 0",
                 lambda: commutator(sy.ho_a(1), sy.ho_a(2)), Operator.zero),
        Identity("ho.ccr.a12d", "[a1, a2+] = 0",
                 lambda: commutator(sy.ho_a(1), sy.ho_a(2, True)), Operator.zero),
        Identity("ho.product.oplus", "O+ = -i a2+ a1",
                 lambda: sy.ho_opm(1),
                 lambda: compose(sy.ho_a(2, True), sy.ho_a(1)).scale(_I * (-1))),
        Identity("ho.product.ominus", "O- = i a1+ a2",
                 lambda: sy.ho_opm(-1),
                 lambda: compose(sy.ho_a(1, True), sy.ho_a(2)).scale(_I)),
    ]
    for idx, s in ((1, 1), (2, -1)):
        ids += [
            Identity(f"ho.partner.b{idx}.plus",
                     f"B{idx} B{idx}+ = H_m {'-' if s > 0 else '+'} (m {'+' if s > 0 else '-'} 1)",
                     lambda idx=idx: compose(sy.ho_b(idx), sy.ho_b(idx, True)),
                     lambda s=s: sy.ho_hamiltonian_radial() + Operator.scalar((m + s) * (-s))),
            Identity(f"ho.partner.b{idx}.minus",
                     f"B{idx}+ B{idx} = H_(m{'+' if s > 0 else '-'}1) {'-' if s > 0 else '+'} m",
                     lambda idx=idx: compose(sy.ho_b(idx, True), sy.ho_b(idx)),
                     lambda s=s: sy.ho_hamiltonian_radial().substitute_poly("m", m + s)
                     + Operator.scalar(m * (-s))),
            Identity(f"ho.intertwine.o{idx}",
                     f"script-O{idx}(m) = -sqrt(2) B{idx}+",
                     lambda idx=idx: sy.ho_script_o(idx),
                     lambda idx=idx: sy.ho_b(idx, True).scale(-1, two=F(1, 2))),
            Identity(f"ho.intertwine.o{idx}dag",
                     f"script-O{idx}+(m{'+' if s > 0 else '-'}1) = -sqrt(2) B{idx}",
                     lambda idx=idx, s=s: sy.ho_script_o(idx, True).substitute_poly("m", m + s),
                     lambda idx=idx: sy.ho_b(idx).scale(-1, two=F(1, 2))),
            Identity(f"ho.adjoint.b{idx}",
                     f"formal u-adjoint of B{idx} equals the printed B{idx}+",
                     lambda idx=idx: sy.ho_b(idx).adjoint("u"),
                     lambda idx=idx: sy.ho_b(idx, True)),
            Identity(f"ho.adjoint.a{idx}",
                     f"formal psi-adjoint of a{idx} equals the printed a{idx}+",
                     lambda idx=idx: sy.ho_a(idx).adjoint("psi"),
                     lambda idx=idx: sy.ho_a(idx, True)),
        ]
    return ids


def _ha_identities() -> list[Identity]:
    m, K = Poly.var("m"), Poly.var("K")
    cf = m * m - F(1, 4)
    one = Operator.identity

    ids = [
        Identity("ha.factor.plus",
                 "(T-^n - 1) T+^n factorization, modulo the radial equation",
                 lambda: compose(sy.ha_tn(-1) - one(), sy.ha_tn(1)) + _schrodinger_residual_ha(),
                 lambda: Operator.scalar(K * (K + 1) - cf)),
        Identity("ha.factor.minus",
                 "(T+^n + 1) T-^n factorization, modulo the radial equation",
                 lambda: compose(sy.ha_tn(1) + one(), sy.ha_tn(-1)) + _schrodinger_residual_ha(),
                 lambda: Operator.scalar(K * (K - 1) - cf)),
        Identity("ha.recursion.plus", "T+ at K+1 equals T+ - 1",
                 lambda: sy.ha_tn(1).substitute_poly("K", K + 1),
                 lambda: sy.ha_tn(1) - one()),
        Identity("ha.recursion.minus", "T- at K-1 equals T- + 1",
                 lambda: sy.ha_tn(-1).substitute_poly("K", K - 1),
                 lambda: sy.ha_tn(-1) + one()),
        Identity("ha.so21.pm", "[T+, T-] = -2 T3",
                 lambda: commutator(sy.ha_tpm(1), sy.ha_tpm(-1)),
                 lambda: sy.ha_t3().scale(-2)),
        Identity("ha.so21.p3", "[T+, T3] = -T+",
                 lambda: commutator(sy.ha_tpm(1), sy.ha_t3()),
                 lambda: -sy.ha_tpm(1)),
        Identity("ha.so21.m3", "[T-, T3] = +T-",
                 lambda: commutator(sy.ha_tpm(-1), sy.ha_t3()),
                 lambda: sy.ha_tpm(-1)),
        Identity("ha.su2.p3", "[G+, G3] = -G+",
                 lambda: commutator(sy.ha_gpm(1), sy.ha_g3()),
                 lambda: -sy.ha_gpm(1)),
        Identity("ha.su2.m3", "[G-, G3] = +G-",
                 lambda: commutator(sy.ha_gpm(-1), sy.ha_g3()),
                 lambda: sy.ha_gpm(-1)),
        Identity("ha.g-su2", "[G+, G-] = 2 G3 (energy-shell identity: symbolic "
                 "residual reported, asserted only on-shell numerically)",
                 lambda: commutator(sy.ha_gpm(1), sy.ha_gpm(-1)),
                 lambda: sy.ha_g3().scale(2),
                 asserted=False),
        Identity("ha.f1-equals-gminus",
                 "sqrt(2)(m+1/2) F1 = (m+1/2) g-^(m+1)",
                 lambda: sy.ha_f_cleared(1),
                 lambda: sy.ha_g_radial_cleared(-1).substitute_poly("m", m + 1)),
        Identity("ha.f1dag-equals-gplus",
                 "sqrt(2)(m+1/2) F1+ = (m+1/2) g+^m",
                 lambda: sy.ha_f_cleared(1, True),
                 lambda: sy.ha_g_radial_cleared(+1)),
    ]
    for idx, s in ((1, 1), (2, -1)):
        w = m + F(s, 2)
        w2 = w * w

        ids += [
            Identity(f"ha.partner.f{idx}.plus",
                     f"F{idx} F{idx}+ = H~_m + 1/(2(m{'+' if s > 0 else '-'}1/2)^2), cleared",
                     lambda idx=idx: compose(sy.ha_f_cleared(idx), sy.ha_f_cleared(idx, True)),
                     lambda w2=w2: sy.ha_hamiltonian_radial().scale(w2 * 2) + Operator.identity()),
            Identity(f"ha.partner.f{idx}.minus",
                     f"F{idx}+ F{idx} = H~_(m{'+' if s > 0 else '-'}1) + 1/(2(m{'+' if s > 0 else '-'}1/2)^2), cleared",
                     lambda idx=idx: compose(sy.ha_f_cleared(idx, True), sy.ha_f_cleared(idx)),
                     lambda w2=w2, s=s: sy.ha_hamiltonian_radial().substitute_poly("m", m + s).scale(w2 * 2)
                     + Operator.identity()),
            Identity(f"ha.adjoint.f{idx}",
                     f"formal u-adjoint of cleared F{idx} equals the printed F{idx}+",
                     lambda idx=idx: sy.ha_f_cleared(idx).adjoint("u"),
                     lambda idx=idx: sy.ha_f_cleared(idx, True)),
        ]
    return ids


def _gen_identities() -> list[Identity]:
    z, a = Poly.var("zeta"), Poly.var("A")
    za = z * a

    def ctheta(sign):
        return sy.gen_theta(sign).scale(za)

    def cdelta(sign):
        return sy.gen_delta(sign).scale(za)

    ids = [
        Identity("gen.su2.pm", "[Theta+, Theta-] = 2 Theta3 (cleared by zeta*sqrt(2A))",
                 lambda: commutator(ctheta(1), ctheta(-1)),
                 lambda: sy.gen_theta3().scale(za * za * 2)),
        Identity("gen.su2.p3", "[Theta+, Theta3] = -Theta+",
                 lambda: commutator(ctheta(1), sy.gen_theta3()),
                 lambda: -ctheta(1)),
        Identity("gen.su2.m3", "[Theta-, Theta3] = +Theta-",
                 lambda: commutator(ctheta(-1), sy.gen_theta3()),
                 lambda: ctheta(-1)),
        Identity("gen.so21.pm", "[Delta+, Delta-] = -2 Delta3 (cleared by zeta*sqrt(2A))",
                 lambda: commutator(cdelta(1), cdelta(-1)),
                 lambda: sy.gen_delta3().scale(za * za * -2)),
        Identity("gen.so21.p3", "[Delta+, Delta3] = -Delta+",
                 lambda: commutator(cdelta(1), sy.gen_delta3()),
                 lambda: -cdelta(1)),
        Identity("gen.so21.m3", "[Delta-, Delta3] = +Delta-",
                 lambda: commutator(cdelta(-1), sy.gen_delta3()),
                 lambda: cdelta(-1)),
        Identity("gen.pullback.theta+",
                 "Theta+ equals the pullback of the oscillator constant of motion O+",
                 lambda: sy.gen_theta(1).scale(za),
                 lambda: pullback_to_radial(sy.ho_opm(1)).scale(za)),
        Identity("gen.pullback.theta-",
                 "Theta- equals the pullback of O-",
                 lambda: sy.gen_theta(-1).scale(za),
                 lambda: pullback_to_radial(sy.ho_opm(-1)).scale(za)),
        Identity("gen.pullback.theta3",
                 "Theta3 equals the pullback of O3",
                 lambda: sy.gen_theta3(),
                 lambda: pullback_to_radial(sy.ho_o3())),
        Identity("gen.pullback.delta3",
                 "2*zeta*alpha*Delta3 equals the pullback of the oscillator Hamiltonian, scaled",
                 lambda: sy.gen_delta3().scale(za * 2),
                 lambda: pullback_to_radial(sy.ho_hamiltonian_2d()).scale(za)),
    ]
    for sgn, tag in ((1, "+"), (-1, "-")):
        ids += [
            Identity(f"gen.reduce.z2.theta{tag}",
                     f"Theta{tag} at zeta=2, A=1/2 equals O{tag}",
                     lambda sgn=sgn: sy.gen_theta(sgn).substitute("zeta", 2).substitute("A", 1),
                     lambda sgn=sgn: sy.ho_opm(sgn)),
            Identity(f"gen.reduce.z2.delta{tag}",
                     f"Delta{tag} at zeta=2, A=1/2 equals the 2D Schrodinger operator K{tag}",
                     lambda sgn=sgn: sy.gen_delta(sgn).substitute("zeta", 2).substitute("A", 1),
                     lambda sgn=sgn: sy.gen_kpm(sgn)),
            Identity(f"gen.reduce.z1.theta{tag}",
                     f"Theta{tag} at zeta=1 equals {'-' if sgn > 0 else '+'}i G{tag} "
                     "modulo the hydrogen Schrodinger operator at energy -A",
                     lambda sgn=sgn: sy.gen_theta(sgn).substitute("zeta", 1).scale(a),
                     lambda sgn=sgn: sy.ha_gpm(sgn).scale(_I * (-sgn), two=F(1, 2), E=F(1, 2))
                     + compose(compose(Operator.rho(1), Operator.phase(sgn)),
                               sy.ha_hamiltonian_2d() + Operator.scalar(a * a * F(1, 2))).scale(_I * (-sgn))),
        ]
    ids += [
        Identity("gen.reduce.z2.theta3",
                 "Theta3 at zeta=2 equals O3",
                 lambda: sy.gen_theta3().substitute("zeta", 2),
                 lambda: sy.ho_o3()),
        Identity("gen.reduce.z2.delta3",
                 "Delta3 at zeta=2, A=1/2 equals K3 = Htilde/2",
                 lambda: sy.gen_delta3().substitute("zeta", 2).substitute("A", 1),
                 lambda: sy.gen_k3()),
    ]
    return ids


def _build_registry() -> dict[str, Identity]:
    reg: dict[str, Identity] = {}
    for ident in _ho_identities() + _ha_identities() + _gen_identities():
        if ident.name in reg:
            raise RuntimeError(f"duplicate identity id {ident.name}")
        reg[ident.name] = ident
    return reg


REGISTRY: dict[str, Identity] = _build_registry()


def identity_names() -> list[str]:
    return sorted(REGISTRY)


def _report(name, description, lhs: Operator, rhs: Operator, asserted: bool) -> IdentityReport:
    residual = lhs - rhs
    return IdentityReport(
        name=name,
        description=description,
        lhs=lhs.to_json_dict(),
        rhs=rhs.to_json_dict(),
        residual=residual.to_json_dict(),
        residual_terms=len(residual.terms),
        asserted=asserted,
        passed=residual.is_zero(),
    )


def verify_identity(name: str) -> IdentityReport:
    ident = REGISTRY[name]
    return _report(ident.name, ident.description, ident.lhs(), ident.rhs(), ident.asserted)


def verify_all(names: list[str] | None = None) -> list[IdentityReport]:
    return [verify_identity(n) for n in (names or identity_names())]
