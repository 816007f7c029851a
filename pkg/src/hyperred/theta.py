"""Noncommutative operators: polynomials in theta = z d/dz.

Coefficients are rational functions of z written on the left of the theta
powers, so composition only has to push theta through coefficient
functions: theta . R(z) = R(z) . theta + (theta R)(z).
"""

from __future__ import annotations

from typing import Sequence

from .ratfunc import RatFunc
from .series import BiSeries


class ThetaOp:
    """sum_k coeffs[k] * theta^k with RatFunc coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RatFunc]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise ValueError("use ThetaOp.zero(vars) for the zero operator")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("ThetaOp is immutable")

    @classmethod
    def zero(cls, vars):
        op = object.__new__(cls)
        object.__setattr__(op, "coeffs", (RatFunc.const(vars, 0),))
        return op

    @classmethod
    def identity(cls, vars):
        return cls([RatFunc.const(vars, 1)])

    @classmethod
    def theta(cls, vars):
        return cls([RatFunc.const(vars, 0), RatFunc.const(vars, 1)])

    @classmethod
    def from_coeff_list(cls, coeffs):
        return cls(coeffs)

    @property
    def vars(self):
        return self.coeffs[0].vars

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0].is_zero():
            return -1
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> RatFunc:
        if k < len(self.coeffs):
            return self.coeffs[k]
        return RatFunc.const(self.vars, 0)

    def is_zero(self):
        return self.degree == -1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(k) + other.coeff(k) for k in range(n)]
        return _make(out, self.vars)

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(k) - other.coeff(k) for k in range(n)]
        return _make(out, self.vars)

    def __neg__(self):
        return _make([-c for c in self.coeffs], self.vars)

    def left_mul(self, r: RatFunc) -> "ThetaOp":
        """Multiply by a function on the left (commutes with nothing)."""
        return _make([r * c for c in self.coeffs], self.vars)

    def __eq__(self, other):
        if not isinstance(other, ThetaOp):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(k) == other.coeff(k) for k in range(n))

    def __hash__(self):
        return hash(self.coeffs)

    def theta_shift(self) -> "ThetaOp":
        """theta composed with self: applies theta . R = R theta + theta(R)."""
        vars = self.vars
        out = [RatFunc.const(vars, 0)] * (len(self.coeffs) + 1)
        for j, b in enumerate(self.coeffs):
            out[j] = out[j] + b.theta()
            out[j + 1] = out[j + 1] + b
        return _make(out, vars)

    def compose(self, other: "ThetaOp") -> "ThetaOp":
        """self after other, under theta.z = z.(theta+1)."""
        acc = ThetaOp.zero(self.vars)
        cur = other
        for k, a in enumerate(self.coeffs):
            if k > 0:
                cur = cur.theta_shift()
            if not a.is_zero():
                acc = acc + cur.left_mul(a)
        return acc

    def apply(self, s: BiSeries) -> BiSeries:
        """Apply to a series; truncation drops by the coefficients' z poles."""
        N, K = s.z_order, s.eps_order
        pieces = []
        theta_pow = s
        for k, c in enumerate(self.coeffs):
            if k > 0:
                theta_pow = theta_pow.theta()
            if c.is_zero():
                continue
            cs, v = c.to_biseries(N, K)
            pieces.append((cs * theta_pow).div_z(v).crop(N - v, K))
        if not pieces:
            return BiSeries.zeros(N, K)
        out = pieces[0]
        for p in pieces[1:]:
            out = out + p
        return out

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            tp = "" if k == 0 else ("*theta" if k == 1 else f"*theta^{k}")
            parts.append(f"({c}){tp}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def _make(coeffs, vars):
    if all(c.is_zero() for c in coeffs):
        return ThetaOp.zero(vars)
    return ThetaOp(coeffs)


def theta_compose(a: ThetaOp, b: ThetaOp) -> ThetaOp:
    """Operator composition a . b (associative)."""
    return a.compose(b)


def apply_theta_op(op: ThetaOp, s: BiSeries) -> BiSeries:
    return op.apply(s)
