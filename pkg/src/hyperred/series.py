"""Truncated power-series arithmetic: the verification oracle's currency.

``EpsPoly`` is a polynomial in eps truncated at a fixed order; ``BiSeries``
is a power series in z whose coefficients are EpsPoly values.  All entries
are exact rationals; every operation tracks the valid truncation orders and
mixing truncations takes the minimum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .errors import PoleAtEpsZero, UncancelledPole
from .hyper import HyperFn
from .scalars import EpsLin, rat

_ZERO = Fraction(0)


class EpsPoly:
    """Truncated polynomial in eps; coeffs[k] is the eps^k coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction]):
        object.__setattr__(self, "coeffs", tuple(rat(c) for c in coeffs))

    def __setattr__(self, *a):
        raise AttributeError("EpsPoly is immutable")

    @classmethod
    def const(cls, q, K: int):
        return cls((rat(q),) + (_ZERO,) * K)

    @classmethod
    def from_epslin(cls, x: EpsLin, K: int):
        if K == 0:
            return cls((x.const,))
        return cls((x.const, x.eps) + (_ZERO,) * (K - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, K: int) -> "EpsPoly":
        if K >= self.order:
            return self
        return EpsPoly(self.coeffs[:K + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        K = min(self.order, other.order)
        return EpsPoly(tuple(self.coeffs[k] + other.coeffs[k] for k in range(K + 1)))

    def __sub__(self, other):
        K = min(self.order, other.order)
        return EpsPoly(tuple(self.coeffs[k] - other.coeffs[k] for k in range(K + 1)))

    def __neg__(self):
        return EpsPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = rat(other)
            return EpsPoly(tuple(c * q for c in self.coeffs))
        K = min(self.order, other.order)
        out = [_ZERO] * (K + 1)
        for i, a in enumerate(self.coeffs[:K + 1]):
            if a == 0:
                continue
            for j in range(K + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return EpsPoly(out)

    __rmul__ = __mul__

    def inverse(self) -> "EpsPoly":
        """Multiplicative inverse as a truncated series in eps."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise PoleAtEpsZero(f"inverting {self} whose eps^0 part vanishes")
        K = self.order
        out = [_ZERO] * (K + 1)
        out[0] = 1 / c0
        for k in range(1, K + 1):
            s = _ZERO
            for i in range(1, k + 1):
                s += self.coeffs[i] * out[k - i] if i <= K else _ZERO
            out[k] = -s / c0
        return EpsPoly(out)

    def __eq__(self, other):
        if not isinstance(other, EpsPoly):
            return NotImplemented
        K = min(self.order, other.order)
        return self.coeffs[:K + 1] == other.coeffs[:K + 1]

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        return " + ".join(f"{c}*eps^{k}" for k, c in enumerate(self.coeffs) if c) or "0"

    __repr__ = __str__


class BiSeries:
    """Series in z up to z_order whose coefficients are eps-truncated.

    rows[j][k] is the coefficient of z^j eps^k.
    """

    __slots__ = ("z_order", "eps_order", "rows")

    def __init__(self, rows: Sequence[Sequence[Fraction]], z_order=None, eps_order=None):
        rows = tuple(tuple(rat(c) for c in r) for r in rows)
        if z_order is None:
            z_order = len(rows) - 1
        if eps_order is None:
            eps_order = len(rows[0]) - 1 if rows else 0
        if len(rows) != z_order + 1 or any(len(r) != eps_order + 1 for r in rows):
            raise ValueError("row shape does not match declared truncation orders")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "z_order", z_order)
        object.__setattr__(self, "eps_order", eps_order)

    def __setattr__(self, *a):
        raise AttributeError("BiSeries is immutable")

    @classmethod
    def zeros(cls, N: int, K: int):
        return cls(tuple((_ZERO,) * (K + 1) for _ in range(N + 1)))

    @classmethod
    def from_eps_polys(cls, polys: Sequence[EpsPoly], K: int):
        return cls(tuple(p.truncate(K).coeffs + (_ZERO,) * (K - min(K, p.order))
                         for p in polys))

    def get(self, j: int, k: int) -> Fraction:
        return self.rows[j][k]

    def eps_row(self, k: int) -> List[Fraction]:
        """The z-series at a fixed power of eps."""
        return [r[k] for r in self.rows]

    def crop(self, N: int, K: int) -> "BiSeries":
        N = min(N, self.z_order)
        K = min(K, self.eps_order)
        return BiSeries(tuple(r[:K + 1] for r in self.rows[:N + 1]))

    def _common(self, other):
        N = min(self.z_order, other.z_order)
        K = min(self.eps_order, other.eps_order)
        return N, K

    def __add__(self, other):
        N, K = self._common(other)
        return BiSeries(tuple(
            tuple(self.rows[j][k] + other.rows[j][k] for k in range(K + 1))
            for j in range(N + 1)))

    def __sub__(self, other):
        N, K = self._common(other)
        return BiSeries(tuple(
            tuple(self.rows[j][k] - other.rows[j][k] for k in range(K + 1))
            for j in range(N + 1)))

    def __neg__(self):
        return BiSeries(tuple(tuple(-c for c in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = rat(other)
            return BiSeries(tuple(tuple(c * q for c in r) for r in self.rows))
        if isinstance(other, EpsPoly):
            return self.mul_eps(other)
        N, K = self._common(other)
        out = [[_ZERO] * (K + 1) for _ in range(N + 1)]
        for j1 in range(N + 1):
            r1 = self.rows[j1]
            for j2 in range(N + 1 - j1):
                r2 = other.rows[j2]
                tgt = out[j1 + j2]
                for k1 in range(K + 1):
                    a = r1[k1]
                    if a == 0:
                        continue
                    for k2 in range(K + 1 - k1):
                        b = r2[k2]
                        if b:
                            tgt[k1 + k2] += a * b
        return BiSeries(tuple(tuple(r) for r in out))

    __rmul__ = __mul__

    def mul_eps(self, e: EpsPoly) -> "BiSeries":
        K = min(self.eps_order, e.order)
        ec = e.coeffs
        out = []
        for r in self.rows:
            row = [_ZERO] * (K + 1)
            for k1 in range(K + 1):
                a = r[k1]
                if a == 0:
                    continue
                for k2 in range(K + 1 - k1):
                    if ec[k2]:
                        row[k1 + k2] += a * ec[k2]
            out.append(tuple(row))
        return BiSeries(tuple(out))

    def mul_z_poly(self, coeffs: Sequence[EpsPoly]) -> "BiSeries":
        """Multiply by sum coeffs[m] * z^m; z truncation is preserved."""
        N, K = self.z_order, self.eps_order
        out = [[_ZERO] * (K + 1) for _ in range(N + 1)]
        for m, e in enumerate(coeffs):
            if m > N or e.is_zero():
                continue
            ec = e.truncate(K).coeffs
            for j in range(N + 1 - m):
                r = self.rows[j]
                tgt = out[j + m]
                for k1, a in enumerate(r):
                    if a == 0:
                        continue
                    for k2 in range(K + 1 - k1):
                        if k2 <= len(ec) - 1 and ec[k2]:
                            tgt[k1 + k2] += a * ec[k2]
        return BiSeries(tuple(tuple(r) for r in out))

    def theta(self) -> "BiSeries":
        """z d/dz on the series."""
        return BiSeries(tuple(tuple(c * j for c in r) for j, r in enumerate(self.rows)))

    def div_z(self, v: int) -> "BiSeries":
        """Divide by z^v; the v lowest rows must vanish."""
        if v == 0:
            return self
        for j in range(min(v, self.z_order + 1)):
            if any(c != 0 for c in self.rows[j]):
                raise UncancelledPole(
                    f"1/z^{v} applied to series with nonzero z^{j} coefficient")
        return BiSeries(self.rows[v:], self.z_order - v, self.eps_order)

    def mul_z_power(self, v: int) -> "BiSeries":
        """Multiply by z^v (v >= 0); keeps the declared z order."""
        if v == 0:
            return self
        K = self.eps_order
        pad = tuple((_ZERO,) * (K + 1) for _ in range(min(v, self.z_order + 1)))
        return BiSeries((pad + self.rows)[:self.z_order + 1], self.z_order, K)

    def invert(self) -> "BiSeries":
        """1/series; the z^0 coefficient must be invertible in eps."""
        N, K = self.z_order, self.eps_order
        c0 = EpsPoly(self.rows[0]).inverse()
        out = [c0.coeffs]
        for j in range(1, N + 1):
            s = EpsPoly.const(0, K)
            for i in range(1, j + 1):
                s = s + EpsPoly(self.rows[i]) * EpsPoly(out[j - i])
            out.append((-(s * c0)).coeffs)
        return BiSeries(tuple(out))

    def is_zero(self) -> bool:
        return all(c == 0 for r in self.rows for c in r)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        N, K = self._common(other)
        return all(self.rows[j][:K + 1] == other.rows[j][:K + 1] for j in range(N + 1))

    def __hash__(self):
        return hash(self.rows)

    def first_mismatch(self, other):
        """Lowest (j, k) where the two series differ, or None."""
        N, K = self._common(other)
        for j in range(N + 1):
            for k in range(K + 1):
                if self.rows[j][k] != other.rows[j][k]:
                    return (j, k)
        return None

    def __str__(self):
        return f"BiSeries(N={self.z_order}, K={self.eps_order})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Pochhammer machinery and the hypergeometric series oracle


def pochhammer_eps(x: EpsLin, j: int, K: int) -> EpsPoly:
    """(x)_j = prod_{m<j} (x.const + m + x.eps*eps), truncated at eps^K."""
    out = EpsPoly.const(1, K)
    for m in range(j):
        out = out * EpsPoly.from_epslin(x + m, K)
    return out


def inv_pochhammer_eps(x: EpsLin, j: int, K: int) -> EpsPoly:
    """1/(x)_j truncated at eps^K; raises PoleAtEpsZero on vanishing factors."""
    for m in range(j):
        if x.const + m == 0:
            raise PoleAtEpsZero(
                f"({x})_{j} vanishes at eps=0 (factor m={m}); inverse has an eps pole")
    return pochhammer_eps(x, j, K).inverse()


def series_of_hyper(f: HyperFn, N: int, K: int) -> BiSeries:
    """The defining series of f as a BiSeries, kappa absorbed into z powers."""
    for b in f.lower:
        if b.eps == 0 and b.const.denominator == 1 and b.const <= 0:
            raise PoleAtEpsZero(f"lower parameter {b} is a non-positive integer at eps=0")
    term = EpsPoly.const(1, K)
    rows = [term.coeffs]
    kpow = Fraction(1)
    for j in range(N):
        for a in f.upper:
            term = term * EpsPoly.from_epslin(a + j, K)
        for b in f.lower:
            factor = EpsLin(b.const + j, b.eps)
            if factor.const == 0:
                raise PoleAtEpsZero(f"lower parameter {b} hits 0 at series index {j}")
            term = term * EpsPoly.from_epslin(factor, K).inverse()
        term = term * Fraction(1, j + 1)
        kpow *= f.kappa
        rows.append((term * kpow).coeffs)
    return BiSeries(tuple(rows))


def compose_z_series(s: BiSeries, zser: Sequence[Fraction], M: int) -> BiSeries:
    """Substitute z -> zser(xi) (a series with zero constant term) into s.

    Returns a BiSeries in the new variable, valid to order M in it as long
    as zser starts at order v >= 1 with s.z_order * v >= M.
    """
    if zser and zser[0] != 0:
        raise ValueError("composition requires a series with zero constant term")
    K = s.eps_order
    zs = list(zser[:M + 1]) + [_ZERO] * max(0, M + 1 - len(zser))
    v = next((i for i, c in enumerate(zs) if c != 0), M + 1)
    if v >= 1 and s.z_order * v < M:
        raise ValueError(f"need z order >= {-(-M // v)} to compose to order {M}")
    out = [[_ZERO] * (K + 1) for _ in range(M + 1)]
    power = [Fraction(1)] + [_ZERO] * M
    for j in range(s.z_order + 1):
        if j > 0:
            nxt = [_ZERO] * (M + 1)
            for i1, c1 in enumerate(power):
                if c1 == 0:
                    continue
                for i2 in range(M + 1 - i1):
                    if zs[i2]:
                        nxt[i1 + i2] += c1 * zs[i2]
            power = nxt
            if all(c == 0 for c in power):
                break
        row = s.rows[j]
        for i, c in enumerate(power):
            if c == 0:
                continue
            tgt = out[i]
            for k in range(K + 1):
                if row[k]:
                    tgt[k] += c * row[k]
    return BiSeries(tuple(tuple(r) for r in out))


def mul_series_rows(rows_a: Sequence[Fraction], rows_b: Sequence[Fraction], M: int):
    """Plain Cauchy product of two one-variable coefficient lists."""
    out = [_ZERO] * (M + 1)
    for i, a in enumerate(rows_a[:M + 1]):
        if a == 0:
            continue
        for j in range(M + 1 - i):
            b = rows_b[j] if j < len(rows_b) else _ZERO
            if b:
                out[i + j] += a * b
    return out
