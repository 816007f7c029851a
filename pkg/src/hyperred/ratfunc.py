"""Rational functions of z with coefficients in a parameter field.

A RatFunc is a normalized fraction of polynomials whose variable tuple
ends in "z"; the earlier variables (if any) are symbolic parameters such
as "eps" or "n".  Expansion into a BiSeries requires the parameters to be
reduced to "eps" only.
"""

from __future__ import annotations

from fractions import Fraction
from .errors import PoleAtEpsZero
from .poly import Poly, PFrac
from .scalars import EpsLin
from .series import BiSeries, EpsPoly

_Z = "z"


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, _normalized=False):
        if num.vars[-1:] != (_Z,):
            raise ValueError(f"RatFunc variables must end in 'z', got {num.vars}")
        if den is None:
            den = Poly.const(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly.const(num.vars, 1)
            else:
                g = num.gcd(den)
                if not (g.is_const() and g.const_value() == 1):
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lf = den.lead_fraction()
                if lf != 1:
                    num = num.scale(1 / lf)
                    den = den.scale(1 / lf)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, vars, q):
        return cls(Poly.const(vars, q), _normalized=True)

    @classmethod
    def z(cls, vars):
        return cls(Poly.variable(vars, _Z), _normalized=True)

    @classmethod
    def from_pfrac(cls, f: PFrac):
        """Lift a parameter-field element to a z-constant rational function."""
        vars = f.vars + (_Z,)
        lift = {v: Poly.variable(vars, v) for v in f.vars}
        return cls(f.num.subst(vars, lift), f.den.subst(vars, lift))

    @classmethod
    def from_epslin(cls, vars, x: EpsLin):
        p = Poly.const(vars, x.const)
        if x.eps:
            p = p + Poly.variable(vars, "eps").scale(x.eps)
        return cls(p, _normalized=True)

    # basics ---------------------------------------------------------------

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_polynomial(self):
        return self.den.is_const()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.vars, other)
        if isinstance(other, Poly):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        g = self.den.gcd(o.den)
        if g.is_const() and g.const_value() == 1:
            return _lead_normalized(self.num * o.den + o.num * self.den,
                                    self.den * o.den)
        db, dd = self.den.exact_div(g), o.den.exact_div(g)
        t = self.num * dd + o.num * db
        g2 = t.gcd(g)
        if not (g2.is_const() and g2.const_value() == 1):
            t = t.exact_div(g2)
            g = g.exact_div(g2)
        return _lead_normalized(t, db * (dd * g))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RatFunc.const(self.vars, 0)
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        num = self.num.exact_div(g1) * o.num.exact_div(g2)
        den = self.den.exact_div(g2) * o.den.exact_div(g1)
        return _lead_normalized(num, den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * _lead_normalized(o.den, o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    __radd__ = __add__
    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    # calculus ---------------------------------------------------------------

    def theta(self) -> "RatFunc":
        """z * d/dz of the function."""
        zp = Poly.variable(self.vars, _Z)
        return RatFunc(zp * (self.num.derivative_top() * self.den
                             - self.num * self.den.derivative_top()),
                       self.den * self.den)

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative_top() * self.den
                       - self.num * self.den.derivative_top(),
                       self.den * self.den)

    def subst_params(self, new_vars, mapping) -> "RatFunc":
        """Substitute parameter variables (z maps to itself)."""
        full = dict(mapping)
        full[_Z] = Poly.variable(new_vars, _Z)
        return RatFunc(self.num.subst(new_vars, full), self.den.subst(new_vars, full))

    # series ------------------------------------------------------------------

    def to_biseries(self, N: int, K: int):
        """Expand as z^(-v) * S with S a BiSeries valid to z-order N.

        Returns (S, v).  Parameters other than eps must have been bound.
        """
        num_eps = _z_coeff_epspolys(self.num, K)
        den_eps = _z_coeff_epspolys(self.den, K)
        vn = _strip_zeros(num_eps)
        vd = _strip_zeros(den_eps)
        if not den_eps:
            raise ZeroDivisionError("zero denominator")
        if den_eps[0].coeffs[0] == 0:
            raise PoleAtEpsZero(
                f"denominator {self.den} vanishes at eps=0 after removing z^{vd}")
        if not num_eps:
            return BiSeries.zeros(N, K), 0
        num_s = BiSeries.from_eps_polys((num_eps + [EpsPoly.const(0, K)] * N)[:N + 1], K)
        den_s = BiSeries.from_eps_polys((den_eps + [EpsPoly.const(0, K)] * N)[:N + 1], K)
        s = num_s * den_s.invert()
        v = vd - vn
        if v < 0:
            s = s.mul_z_power(-v)
            v = 0
        return s, v

    def value_at_zero(self) -> Fraction:
        """Value at z=0 for an eps-free rational function regular there."""
        s, v = self.to_biseries(0, 0)
        if v > 0:
            raise ZeroDivisionError(f"{self} has a pole at z=0")
        return s.get(0, 0)

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _lead_normalized(num: Poly, den: Poly) -> RatFunc:
    """Wrap an already-coprime pair, scaling the denominator lead to 1."""
    if num.is_zero():
        return RatFunc.const(num.vars, 0)
    lf = den.lead_fraction()
    if lf != 1:
        num = num.scale(1 / lf)
        den = den.scale(1 / lf)
    return RatFunc(num, den, _normalized=True)


def _z_coeff_epspolys(p: Poly, K: int):
    """z-coefficients of p as EpsPoly values (vars must be within eps, z)."""
    extra = [v for v in p.vars[:-1] if v != "eps"]
    if extra:
        raise ValueError(f"unbound parameters {extra}; substitute them before expanding")
    if p.is_zero():
        return []
    out = []
    for c in (p.top_coeffs() if p.vars[-1] == _Z else [p]):
        coeffs = [Fraction(0)] * (K + 1)
        for exps, q in c.terms().items():
            k = exps[0] if c.vars else 0
            if k <= K:
                coeffs[k] = q
        out.append(EpsPoly(coeffs))
    return out


def _strip_zeros(polys):
    v = 0
    while polys and polys[0].is_zero():
        polys.pop(0)
        v += 1
    return v


