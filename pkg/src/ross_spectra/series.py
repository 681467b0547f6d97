"""Truncated Laurent series in r with exact rational coefficients.

A :class:`RationalSeries` stores the coefficients of ``r**e`` for
``valuation <= e < order``; everything from ``r**order`` on is unknown.
Ring operations propagate ``order`` so that every coefficient reported is
exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalSeries:
    coefficients: tuple[Fraction, ...]
    valuation: int
    order: int
    variable: str = "r"

    def __post_init__(self):
        coeffs = tuple(_frac(c) for c in self.coefficients)
        val = self.valuation
        # strip leading zeros so that coefficients[0] != 0 unless the series is O(r^order)
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        coeffs = coeffs[i:]
        val += i
        if not coeffs or val >= self.order:
            coeffs, val = (), self.order
        coeffs = coeffs[: self.order - val]
        coeffs = coeffs + (Fraction(0),) * (self.order - val - len(coeffs))
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "valuation", val)

    # ------------------------------------------------------------ builders
    @classmethod
    def from_terms(cls, terms: dict[int, object], order: int) -> RationalSeries:
        if not terms:
            return cls.zero(order)
        lo = min(terms)
        coeffs = [Fraction(0)] * max(order - lo, 0)
        for e, c in terms.items():
            if e < order:
                coeffs[e - lo] += _frac(c)
        return cls(tuple(coeffs), lo, order)

    @classmethod
    def zero(cls, order: int) -> RationalSeries:
        return cls((), order, order)

    @classmethod
    def constant(cls, c, order: int) -> RationalSeries:
        return cls.from_terms({0: c}, order)

    @classmethod
    def monomial(cls, power: int, order: int, coefficient=1) -> RationalSeries:
        return cls.from_terms({power: coefficient}, order)

    # ------------------------------------------------------------ access
    def __getitem__(self, exponent: int) -> Fraction:
        if exponent >= self.order:
            raise IndexError(f"coefficient of r^{exponent} is beyond the series order {self.order}")
        if exponent < self.valuation:
            return Fraction(0)
        return self.coefficients[exponent - self.valuation]

    def terms(self) -> dict[int, Fraction]:
        return {self.valuation + i: c for i, c in enumerate(self.coefficients) if c != 0}

    def coefficient_list(self, start: int = 0) -> list[Fraction]:
        return [self[e] for e in range(start, self.order)]

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    # ------------------------------------------------------------ arithmetic
    def __neg__(self) -> RationalSeries:
        return RationalSeries(tuple(-c for c in self.coefficients), self.valuation, self.order)

    def __add__(self, other) -> RationalSeries:
        if not isinstance(other, RationalSeries):
            return self + RationalSeries.from_terms({0: other}, self.order)
        order = min(self.order, other.order)
        lo = min(self.valuation, other.valuation)
        return RationalSeries(tuple(self[e] + other[e] for e in range(lo, order)), lo, order)

    __radd__ = __add__

    def __sub__(self, other) -> RationalSeries:
        return self + (-other if isinstance(other, RationalSeries) else -_frac(other))

    def __rsub__(self, other) -> RationalSeries:
        return (-self) + other

    def scale(self, c) -> RationalSeries:
        c = _frac(c)
        if c == 0:
            return RationalSeries.zero(self.order)
        return RationalSeries(tuple(c * x for x in self.coefficients), self.valuation, self.order)

    def __mul__(self, other) -> RationalSeries:
        if not isinstance(other, RationalSeries):
            return self.scale(other)
        a, b = self, other
        val = a.valuation + b.valuation
        order = min(a.order + b.valuation, b.order + a.valuation)
        n = order - val
        ca, cb = a.coefficients, b.coefficients
        out = [Fraction(0)] * max(n, 0)
        for i in range(min(n, len(ca))):
            ai = ca[i]
            if ai == 0:
                continue
            for j in range(min(n - i, len(cb))):
                out[i + j] += ai * cb[j]
        return RationalSeries(tuple(out), val, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalSeries:
        if not isinstance(other, RationalSeries):
            return self.scale(1 / _frac(other))
        if other.is_zero():
            raise ZeroDivisionError("series division by a series with no known nonzero coefficient")
        a, b = self, other
        val = a.valuation - b.valuation
        n = min(a.order - a.valuation, b.order - b.valuation)
        b0 = b.coefficients[0]
        cb = b.coefficients
        ca = a.coefficients
        q = []
        for i in range(n):
            acc = ca[i] if i < len(ca) else Fraction(0)
            for j in range(1, min(i, len(cb) - 1) + 1):
                acc -= cb[j] * q[i - j]
            q.append(acc / b0)
        return RationalSeries(tuple(q), val, val + n)

    def __rtruediv__(self, other) -> RationalSeries:
        return RationalSeries.constant(other, max(self.order - self.valuation, 1)) / self

    def __pow__(self, p: int) -> RationalSeries:
        if not isinstance(p, int):
            raise TypeError("only integer powers are supported")
        if p < 0:
            return 1 / (self ** (-p))
        if p == 0:
            return RationalSeries.constant(1, max(self.order - self.valuation, 1))
        result = None
        base = self
        while p:
            if p & 1:
                result = base if result is None else result * base
            p >>= 1
            if p:
                base = base * base
        return result

    def derivative(self) -> RationalSeries:
        terms = {e - 1: e * c for e, c in self.terms().items() if e != 0}
        return RationalSeries.from_terms(terms, self.order - 1) if terms else RationalSeries.zero(self.order - 1)

    def truncate(self, order: int) -> RationalSeries:
        return RationalSeries(self.coefficients, self.valuation, min(order, self.order))

    def shift(self, power: int) -> RationalSeries:
        """Multiply by r**power."""
        return RationalSeries(self.coefficients, self.valuation + power, self.order + power)

    def evaluate(self, r: float) -> float:
        return float(sum(float(c) * r**e for e, c in self.terms().items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return (self.order == other.order and self.valuation == other.valuation
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.coefficients, self.valuation, self.order))

    def __repr__(self) -> str:
        shown = [f"{c}*r^{e}" for e, c in sorted(self.terms().items())[:6]]
        tail = " + ..." if len(self.terms()) > 6 else ""
        return f"RationalSeries({' + '.join(shown) or '0'}{tail} + O(r^{self.order}))"


# ---------------------------------------------------------------- primitives

def _exp_like(m, order: int, parity: int, alternate: bool) -> RationalSeries:
    m = _frac(m)
    terms = {}
    for j in range(parity, max(order, 0), 2):
        sign = -1 if alternate and (j // 2) % 2 else 1
        terms[j] = sign * m**j / factorial(j)
    return RationalSeries.from_terms(terms, order) if terms else RationalSeries.zero(order)


def sinh(order: int, m=1) -> RationalSeries:
    """Series of sinh(m r) to O(r^order)."""
    return _exp_like(m, order, 1, False)


def cosh(order: int, m=1) -> RationalSeries:
    return _exp_like(m, order, 0, False)


def sin(order: int, m=1) -> RationalSeries:
    return _exp_like(m, order, 1, True)


def cos(order: int, m=1) -> RationalSeries:
    return _exp_like(m, order, 0, True)


def r_power(j: int, order: int) -> RationalSeries:
    return RationalSeries.monomial(j, order)


def first_negative(coeffs: Sequence[Fraction], start: int = 0) -> int | None:
    for i, c in enumerate(coeffs):
        if i >= start and c < 0:
            return i
    return None


def combine(parts: Iterable[tuple[object, RationalSeries]]) -> RationalSeries:
    parts = list(parts)
    total = parts[0][1].scale(parts[0][0])
    for c, s in parts[1:]:
        total = total + s.scale(c)
    return total
