"""Normal-ordered differential-operator algebra on the 2D radial half-line.

An :class:`Operator` is a finite sum of monomials

    coeff * e^{i k phi} * rho^p * d_rho^j * L_z^l

with ``coeff`` a Laurent :class:`~susy2d.exact.Poly` over the parameter
registry and ``k``, ``p`` affine in zeta.  Factors are kept in the fixed
normal order above; products are re-ordered with the exact rewriting rules

    d_rho^j . rho^p   = sum_i C(j,i) p(p-1)...(p-i+1) rho^{p-i} d_rho^{j-i}
    L_z^l  . e^{ikphi} = e^{ikphi} (L_z + k)^l

so that structural equality of the canonical form decides operator equality.

Square roots that the systems carry as overall scalars (1/sqrt(2),
1/sqrt(2|E|), ...) live in a multiplicative prefactor holding the fractional
part of each base's exponent; integer parts are always pushed into the
coefficients, so the prefactor of a canonical operator is unique.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .exact import (
    E_ZERO,
    Expo,
    GaussianRational,
    GR_ONE,
    P_ONE,
    P_ZERO,
    PARAMS,
    Poly,
    falling_factorial,
    _frac,
)

#: Bases admissible in a prefactor: the literal 2 plus every parameter.
PREFACTOR_BASES = ("2",) + PARAMS

TermKey = tuple[Expo, Expo, int, int]  # (phase_k, rho_pow, drho_order, lz_order)


class PrefactorError(ValueError):
    """Raised when two operators with incommensurate prefactors are summed."""


def _root_if_exact(value: Fraction, expo: Fraction) -> Fraction | None:
    """value**expo as an exact positive Fraction, or None if irrational."""
    if value <= 0:
        return None
    num, den = expo.numerator, expo.denominator

    def iroot(x: int, r: int) -> int | None:
        if x == 1:
            return 1
        lo, hi = 1, x
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid ** r
            if p == x:
                return mid
            if p < x:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    rn = iroot(value.numerator, den)
    rd = iroot(value.denominator, den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd) ** num


class Operator:
    """Canonical normal-ordered operator.  Immutable."""

    __slots__ = ("terms", "prefactor", "_hash")

    def __init__(
        self,
        terms: Mapping[TermKey, Poly] | None = None,
        prefactor: Mapping[str, Fraction] | None = None,
    ):
        raw = dict(terms) if terms else {}
        pref = {b: _frac(q) for b, q in (prefactor or {}).items() if _frac(q) != 0}
        for b in pref:
            if b not in PREFACTOR_BASES:
                raise KeyError(f"unknown prefactor base {b!r}")
        # Push integer parts of prefactor exponents into the coefficients.
        mult = P_ONE
        frac_pref: dict[str, Fraction] = {}
        for b, q in pref.items():
            n = q.numerator // q.denominator  # floor
            f = q - n
            if n:
                if b == "2":
                    mult = mult * Poly.const(Fraction(2) ** n)
                else:
                    mult = mult * Poly.var(b, n)
            if f:
                frac_pref[b] = f
        clean: dict[TermKey, Poly] = {}
        for key, coeff in raw.items():
            phase, rho, j, l = key
            if not (isinstance(j, int) and j >= 0 and isinstance(l, int) and l >= 0):
                raise ValueError("derivative and L_z orders must be nonnegative ints")
            c = coeff * mult if not mult.is_constant() or mult != P_ONE else coeff
            if c.is_zero():
                continue
            prev = clean.get(key)
            c2 = c if prev is None else prev + c
            if c2.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = c2
        if not clean:
            frac_pref = {}
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "prefactor", frac_pref)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Operator is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero() -> "Operator":
        return _ZERO

    @staticmethod
    def term(coeff, phase_k: Expo = E_ZERO, rho_pow: Expo = E_ZERO,
             drho_order: int = 0, lz_order: int = 0) -> "Operator":
        c = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        return Operator({(phase_k, rho_pow, drho_order, lz_order): c})

    @staticmethod
    def identity() -> "Operator":
        return Operator.term(1)

    @staticmethod
    def scalar(x) -> "Operator":
        return Operator.term(x)

    @staticmethod
    def rho(power=1, zeta_coeff=0) -> "Operator":
        return Operator.term(1, rho_pow=Expo.of(power, zeta_coeff))

    @staticmethod
    def drho(order: int = 1) -> "Operator":
        return Operator.term(1, drho_order=order)

    @staticmethod
    def lz(order: int = 1) -> "Operator":
        return Operator.term(1, lz_order=order)

    @staticmethod
    def phase(k, zeta_coeff=0) -> "Operator":
        """e^{i k phi}; k may carry a zeta part (e.g. e^{i zeta phi})."""
        return Operator.term(1, phase_k=Expo.of(k, zeta_coeff))

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[TermKey, Poly]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.terms == other.terms and self.prefactor == other.prefactor

    def __hash__(self):
        if self._hash is None:
            h = hash(
                (
                    frozenset(self.terms.items()),
                    frozenset(self.prefactor.items()),
                )
            )
            object.__setattr__(self, "_hash", h)
        return self._hash

    def canonical(self) -> "Operator":
        """Rebuild through the normalizing constructor (idempotent)."""
        return Operator(self.terms, self.prefactor)

    # -- linear operations -------------------------------------------------
    def __add__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.prefactor != other.prefactor:
            raise PrefactorError(
                f"cannot add operators with prefactors {self.prefactor} and {other.prefactor}"
            )
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, P_ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return Operator(out, self.prefactor)

    def __neg__(self) -> "Operator":
        return Operator({k: -c for k, c in self.terms.items()}, self.prefactor)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def scale(self, coeff=1, **prefactor_powers) -> "Operator":
        """Multiply by a scalar Poly/rational times prod(base**power).

        Prefactor powers are given as keyword args, e.g. ``two=Fraction(1,2)``
        for sqrt(2) or ``E=Fraction(-1,2)`` for 1/sqrt(|E|); the key ``two``
        names the base 2.
        """
        c = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        pref = dict(self.prefactor)
        for name, q in prefactor_powers.items():
            base = "2" if name == "two" else name
            pref[base] = pref.get(base, Fraction(0)) + _frac(q)
        return Operator({k: v * c for k, v in self.terms.items()}, pref)

    # -- multiplication ----------------------------------------------------
    def __mul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        return compose(self, other)

    def conjugate_coeffs(self) -> "Operator":
        return Operator(
            {k: c.conjugate() for k, c in self.terms.items()}, self.prefactor
        )

    # -- substitution ------------------------------------------------------
    def substitute(self, name: str, value) -> "Operator":
        """Instantiate a parameter to an exact rational value.

        ``zeta`` must be positive and also collapses the zeta parts of every
        exponent.  A fractional prefactor power of the substituted base must
        come out rational, else the substitution is rejected.
        """
        v = _frac(value)
        if name == "zeta":
            if v <= 0:
                raise ValueError("zeta must be positive")
        pref = dict(self.prefactor)
        mult = P_ONE
        if name in pref:
            q = pref.pop(name)
            r = _root_if_exact(v, q)
            if r is None:
                raise ValueError(
                    f"prefactor {name}^{q} is irrational at {name}={v}"
                )
            mult = Poly.const(r)
        out: dict[TermKey, Poly] = {}
        for (phase, rho, j, l), c in self.terms.items():
            c2 = c.substitute(name, v) * mult
            if name == "zeta":
                phase = phase.substitute_zeta(v)
                rho = rho.substitute_zeta(v)
            key = (phase, rho, j, l)
            s = out.get(key, P_ZERO) + c2
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return Operator(out, pref)

    def substitute_poly(self, name: str, value: Poly) -> "Operator":
        """Replace a parameter by a polynomial in the coefficients only
        (e.g. m -> m+1, E -> n+1).  The parameter must not appear in
        exponents or in the prefactor."""
        if name == "zeta":
            raise ValueError("use substitute() for zeta")
        if name in self.prefactor:
            raise ValueError(f"{name} appears in the prefactor")
        out: dict[TermKey, Poly] = {}
        for key, c in self.terms.items():
            c2 = c.substitute(name, value)
            if not c2.is_zero():
                out[key] = c2
        return Operator(out, self.prefactor)

    def params_present(self) -> set[str]:
        found = set(self.prefactor) - {"2"}
        for (phase, rho, _, _), c in self.terms.items():
            found |= c.params_present()
            if phase.zeta_coeff != 0 or rho.zeta_coeff != 0:
                found.add("zeta")
        return found

    # -- adjoint -----------------------------------------------------------
    def adjoint(self, measure: str = "u") -> "Operator":
        """Formal adjoint.

        measure="u":   L^2(d rho) for reduced radial functions u;
                       d_rho -> -d_rho.
        measure="psi": L^2(rho d rho) for full 2D wavefunctions;
                       d_rho -> -d_rho - 1/rho.
        Either way e^{ik phi} -> e^{-ik phi}, L_z -> L_z, coefficients are
        complex-conjugated and the factor order is reversed.
        """
        if measure not in ("u", "psi"):
            raise ValueError("measure must be 'u' or 'psi'")
        if measure == "u":
            d_adj = Operator.term(-1, drho_order=1)
        else:
            d_adj = Operator.term(-1, drho_order=1) + Operator.term(
                -1, rho_pow=Expo.of(-1)
            )
        total = _ZERO
        for (phase, rho, j, l), c in self.terms.items():
            piece = Operator.scalar(c.conjugate())
            piece = compose(piece, Operator.lz(l))
            for _ in range(j):
                piece = compose(piece, d_adj)
            piece = compose(piece, Operator.rho(rho.const_part, rho.zeta_coeff))
            piece = compose(piece, Operator.term(1, phase_k=-phase))
            total = _merge(total, piece)
        return total.scale(**{("two" if b == "2" else b): q for b, q in self.prefactor.items()})

    # -- serialization -----------------------------------------------------
    def to_json_dict(self) -> dict:
        terms = []
        for (phase, rho, j, l), c in self.sorted_terms():
            terms.append(
                {
                    "coeff": str(c),
                    "k": [str(phase.const_part), str(phase.zeta_coeff)],
                    "p": [str(rho.const_part), str(rho.zeta_coeff)],
                    "d": j,
                    "lz": l,
                }
            )
        pref = {b: str(q) for b, q in sorted(self.prefactor.items())}
        return {"prefactor": pref, "terms": terms}

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (phase, rho, j, l), c in self.sorted_terms():
            bits = [f"({c})"]
            if not phase.is_zero():
                bits.append(f"e^(i({phase})phi)")
            if not rho.is_zero():
                bits.append(f"rho^({rho})")
            if j:
                bits.append(f"d{j}" if j > 1 else "d")
            if l:
                bits.append(f"Lz^{l}" if l > 1 else "Lz")
            parts.append("*".join(bits))
        s = " + ".join(parts)
        if self.prefactor:
            pre = "*".join(f"{b}^({q})" for b, q in sorted(self.prefactor.items()))
            s = f"{pre} * [{s}]"
        return s

    __repr__ = __str__


_ZERO = Operator()


def _merge(a: Operator, b: Operator) -> Operator:
    """Sum allowing prefactor mismatch when the fractional parts agree after
    pushing an integer-power ratio into the coefficients (handled by the
    normalizing constructor)."""
    return a + b


def add(a: Operator, b: Operator) -> Operator:
    return a + b


def compose(a: Operator, b: Operator) -> Operator:
    """Operator product a . b, normal-ordered."""
    pref: dict[str, Fraction] = dict(a.prefactor)
    for base, q in b.prefactor.items():
        pref[base] = pref.get(base, Fraction(0)) + q
    out: dict[TermKey, Poly] = {}
    for (k1, p1, j1, l1), c1 in a.terms.items():
        for (k2, p2, j2, l2), c2 in b.terms.items():
            base_coeff = c1 * c2
            k2poly = k2.to_poly() if not k2.is_zero() else None
            p2poly = p2.to_poly()
            for t in range(l1 + 1):
                if t > 0 and k2poly is None:
                    break
                ct = base_coeff * comb(l1, t)
                if t > 0:
                    ct = ct * (k2poly ** t)
                lz = l1 - t + l2
                for i in range(j1 + 1):
                    ci = ct * comb(j1, i) * falling_factorial(p2poly, i) if i else ct
                    if ci.is_zero():
                        continue
                    key = (
                        k1 + k2,
                        p1 + p2 - Expo.of(i),
                        j1 - i + j2,
                        lz,
                    )
                    s = out.get(key, P_ZERO) + ci
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
                if t == l1 and k2poly is None:
                    break
    return Operator(out, pref)


def commutator(a: Operator, b: Operator) -> Operator:
    return compose(a, b) - compose(b, a)


def apply_to_monomial(
    op: Operator, s_offset: Expo = E_ZERO, k_offset: Expo = E_ZERO
) -> tuple[dict[str, Fraction], list[tuple[Poly, Expo, Expo]]]:
    """Exact action on the trial monomial rho^{s + s_offset} e^{i(k + k_offset)phi}.

    ``s`` and ``k`` are the registry parameters; offsets shift them by an
    affine-in-zeta amount.  Returns the operator's prefactor and a list of
    (coefficient Poly in the registry parameters, rho-exponent offset,
    phase offset): the produced monomials are
    coeff * rho^{s + rho_offset} e^{i(k + phase_offset)phi}.
    """
    s_base = Poly.var("s") + s_offset.to_poly()
    k_base = Poly.var("k") + k_offset.to_poly()
    collected: dict[tuple[Expo, Expo], Poly] = {}
    for (phase, rho, j, l), c in op.terms.items():
        coeff = c * (k_base ** l) * falling_factorial(s_base, j)
        if coeff.is_zero():
            continue
        key = (s_offset - Expo.of(j) + rho, k_offset + phase)
        s = collected.get(key, P_ZERO) + coeff
        if s.is_zero():
            collected.pop(key, None)
        else:
            collected[key] = s
    results = [
        (coeff, r_off, k_off) for (r_off, k_off), coeff in sorted(collected.items())
    ]
    return dict(op.prefactor), results
