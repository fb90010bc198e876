"""Exact scalar arithmetic: Gaussian rationals, Laurent polynomials, affine exponents.

Every symbolic computation in the package bottoms out here.  Coefficients are
Laurent polynomials (integer, possibly negative, multi-degrees) over the
Gaussian rationals in a fixed parameter registry; exponents of the radial
variable and of the angular phase are affine expressions in the single
parameter ``zeta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

#: Fixed parameter registry, in canonical variable order.
#: Conventions: ``E`` is an energy parameter (E_n for the oscillator, |E| for
#: hydrogen on-shell checks), ``K`` the hydrogen K_n, ``A`` carries
#: alpha = sqrt(2A) for the generalized potential (its square halved gives the
#: potential strength A), ``s`` and ``k`` are the trial-monomial exponents.
PARAMS: tuple[str, ...] = ("m", "n", "E", "K", "zeta", "A", "B", "s", "k")
_PARAM_INDEX = {name: i for i, name in enumerate(PARAMS)}
NVARS = len(PARAMS)

ScalarLike = Union[int, Fraction, "GaussianRational"]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex number re + im*i with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(x: ScalarLike) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(_frac(x), Fraction(0))

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other: ScalarLike) -> "GaussianRational":
        return GaussianRational.of(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        return self * GaussianRational.of(other).inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        im = f"{self.im}i" if abs(self.im) != 1 else ("i" if self.im > 0 else "-i")
        if self.re == 0:
            return im
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))
GR_I = GaussianRational(Fraction(0), Fraction(1))

Degrees = tuple[int, ...]
_ZERO_DEG: Degrees = (0,) * NVARS


def _deg(**powers: int) -> Degrees:
    d = [0] * NVARS
    for name, p in powers.items():
        d[_PARAM_INDEX[name]] = p
    return tuple(d)


class Poly:
    """Laurent polynomial over the parameter registry with Gaussian-rational
    coefficients.  Immutable; zero coefficients are never stored."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Mapping[Degrees, GaussianRational] | None = None):
        clean = {}
        if coeffs:
            for deg, c in coeffs.items():
                if not c.is_zero():
                    clean[deg] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def const(x: ScalarLike) -> "Poly":
        return Poly({_ZERO_DEG: GaussianRational.of(x)})

    @staticmethod
    def var(name: str, power: int = 1) -> "Poly":
        if name not in _PARAM_INDEX:
            raise KeyError(f"unknown parameter {name!r}")
        return Poly({_deg(**{name: power}): GR_ONE})

    @staticmethod
    def monomial(coeff: ScalarLike, **powers: int) -> "Poly":
        return Poly({_deg(**powers): GaussianRational.of(coeff)})

    # -- ring operations ---------------------------------------------------
    def __add__(self, other) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.const(other)
        out = dict(self.coeffs)
        for deg, c in o.coeffs.items():
            s = out.get(deg, GR_ZERO) + c
            if s.is_zero():
                out.pop(deg, None)
            else:
                out[deg] = s
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) + (-self)

    def __mul__(self, other) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.const(other)
        out: dict[Degrees, GaussianRational] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in o.coeffs.items():
                deg = tuple(a + b for a, b in zip(d1, d2))
                s = out.get(deg, GR_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(deg, None)
                else:
                    out[deg] = s
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a general Poly")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Poly":
        return Poly({d: c.conjugate() for d, c in self.coeffs.items()})

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(d == _ZERO_DEG for d in self.coeffs)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("Poly is not constant")
        return self.coeffs.get(_ZERO_DEG, GR_ZERO)

    def degree_in(self, name: str) -> tuple[int, int]:
        """(min, max) degree in the named parameter; (0, 0) for zero Poly."""
        i = _PARAM_INDEX[name]
        if not self.coeffs:
            return (0, 0)
        degs = [d[i] for d in self.coeffs]
        return (min(degs), max(degs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self.coeffs.items()))
            )
        return self._hash

    # -- substitution and evaluation --------------------------------------
    def substitute(self, name: str, value: "Poly | ScalarLike") -> "Poly":
        """Replace a parameter by a polynomial (or exact scalar).

        Negative degrees in the parameter require an invertible constant value.
        """
        i = _PARAM_INDEX[name]
        val = value if isinstance(value, Poly) else Poly.const(value)
        lo, _ = self.degree_in(name)
        inv = None
        if lo < 0:
            if not val.is_constant():
                raise ValueError(
                    f"cannot substitute non-constant into negative power of {name}"
                )
            inv = Poly.const(val.constant_value().inverse())
        out = Poly()
        for deg, c in self.coeffs.items():
            p = deg[i]
            rest = deg[:i] + (0,) + deg[i + 1 :]
            factor = val ** p if p >= 0 else inv ** (-p)
            out = out + Poly({rest: c}) * factor
        return out

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        """Numerical evaluation; every parameter present in the Poly must be
        given a value."""
        total = 0j
        for deg, c in self.coeffs.items():
            term = complex(c)
            for i, p in enumerate(deg):
                if p:
                    v = values.get(PARAMS[i])
                    if v is None:
                        raise KeyError(f"no value for parameter {PARAMS[i]!r}")
                    term *= complex(v) ** p
            total += term
        return total

    def params_present(self) -> set[str]:
        out = set()
        for deg in self.coeffs:
            for i, p in enumerate(deg):
                if p:
                    out.add(PARAMS[i])
        return out

    # -- printing ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for deg in sorted(self.coeffs):
            c = self.coeffs[deg]
            factors = []
            for i, p in enumerate(deg):
                if p == 1:
                    factors.append(PARAMS[i])
                elif p:
                    factors.append(f"{PARAMS[i]}^{p}")
            cs = str(c)
            if factors and cs == "1":
                parts.append("*".join(factors))
            elif factors and cs == "-1":
                parts.append("-" + "*".join(factors))
            elif factors:
                head = f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs
                parts.append(head + "*" + "*".join(factors))
            else:
                parts.append(f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"


P_ZERO = Poly()
P_ONE = Poly.const(1)


def fraction_to_poly(x: ScalarLike) -> Poly:
    return Poly.const(x)


@dataclass(frozen=True, order=True)
class Expo:
    """An exponent affine in zeta: value = const_part + zeta_coeff * zeta.

    Ordering is (zeta_coeff, const_part), fixing the canonical term order.
    """

    zeta_coeff: Fraction = Fraction(0)
    const_part: Fraction = Fraction(0)

    @staticmethod
    def of(const, zeta_coeff=0) -> "Expo":
        return Expo(_frac(zeta_coeff), _frac(const))

    def __add__(self, other: "Expo") -> "Expo":
        return Expo(self.zeta_coeff + other.zeta_coeff, self.const_part + other.const_part)

    def __sub__(self, other: "Expo") -> "Expo":
        return Expo(self.zeta_coeff - other.zeta_coeff, self.const_part - other.const_part)

    def __neg__(self) -> "Expo":
        return Expo(-self.zeta_coeff, -self.const_part)

    def scale(self, f) -> "Expo":
        f = _frac(f)
        return Expo(self.zeta_coeff * f, self.const_part * f)

    def is_zero(self) -> bool:
        return self.zeta_coeff == 0 and self.const_part == 0

    def is_numeric(self) -> bool:
        return self.zeta_coeff == 0

    def to_poly(self) -> Poly:
        """The exponent as a Poly in zeta (used by reordering rules)."""
        return Poly.const(self.const_part) + Poly.var("zeta") * Poly.const(self.zeta_coeff)

    def substitute_zeta(self, value: Fraction) -> "Expo":
        return Expo(Fraction(0), self.const_part + self.zeta_coeff * _frac(value))

    def evaluate(self, zeta: float | None = None) -> float:
        if self.zeta_coeff != 0:
            if zeta is None:
                raise KeyError("exponent depends on zeta but no value given")
            return float(self.const_part) + float(self.zeta_coeff) * zeta
        return float(self.const_part)

    def __str__(self) -> str:
        if self.zeta_coeff == 0:
            return str(self.const_part)
        z = "zeta" if self.zeta_coeff == 1 else f"{self.zeta_coeff}*zeta"
        if self.const_part == 0:
            return z
        return f"{self.const_part}+{z}" if self.zeta_coeff > 0 else f"{self.const_part}{z}"


E_ZERO = Expo()


def falling_factorial(base: Poly, j: int) -> Poly:
    """base * (base - 1) * ... * (base - j + 1) as an exact Poly."""
    out = P_ONE
    for i in range(j):
        out = out * (base - Poly.const(i))
    return out
