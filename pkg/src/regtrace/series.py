"""Truncated power series with exact rational coefficients.

All generating functions for walks on the (q+1)-regular tree are built
here. Everything is exact: coefficients are :class:`fractions.Fraction`
and the public table functions return Python ints after checking that
each denominator is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import InvalidLength


@dataclass(frozen=True)
class IntSeries:
    """Power series in ``s`` known through ``s**order``."""

    coefficients: tuple[Fraction, ...]
    order: int

    def __init__(self, coefficients: Iterable, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = [Fraction(c) for c in coefficients][: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "order", order)

    @classmethod
    def constant(cls, c, order: int) -> "IntSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, power: int, order: int, c=1) -> "IntSeries":
        coeffs = [0] * (order + 1)
        if power <= order:
            coeffs[power] = c
        return cls(coeffs, order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __len__(self) -> int:
        return self.order + 1

    def _check(self, other: "IntSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, IntSeries):
            other = IntSeries.constant(other, self.order)
        n = self._check(other)
        return IntSeries((a + b for a, b in zip(self.coefficients[: n + 1], other.coefficients)), n)

    __radd__ = __add__

    def __neg__(self):
        return IntSeries((-a for a in self.coefficients), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, IntSeries):
            c = Fraction(other)
            return IntSeries((c * a for a in self.coefficients), self.order)
        n = self._check(other)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return IntSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = IntSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self) -> "IntSeries":
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        inv0 = 1 / a[0]
        b = [inv0]
        for n in range(1, self.order + 1):
            acc = sum((a[k] * b[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
            b.append(-acc * inv0)
        return IntSeries(b, self.order)

    def shift(self, k: int) -> "IntSeries":
        """Multiply by ``s**k`` keeping the same order."""
        return IntSeries([0] * k + list(self.coefficients[: self.order + 1 - k]), self.order)

    def euler_derivative(self) -> "IntSeries":
        """The series ``s * d/ds`` of this one."""
        return IntSeries((k * c for k, c in enumerate(self.coefficients)), self.order)

    def scale_variable(self, c) -> "IntSeries":
        """Substitute ``c*s`` for ``s``."""
        c = Fraction(c)
        return IntSeries((a * c**k for k, a in enumerate(self.coefficients)), self.order)

    def integers(self) -> list[int]:
        out = []
        for k, c in enumerate(self.coefficients):
            if c.denominator != 1:
                raise ArithmeticError(f"coefficient of s^{k} is not an integer: {c}")
            out.append(c.numerator)
        return out


def binomial_sqrt_series(q: int, exponent: Fraction, order: int) -> IntSeries:
    """``(1 - 4 q s^2) ** exponent`` from the binomial series."""
    exponent = Fraction(exponent)
    coeffs = [Fraction(0)] * (order + 1)
    term = Fraction(1)  # binom(exponent, n) * (-4q)^n
    for n in range(order // 2 + 1):
        coeffs[2 * n] = term
        term = term * (exponent - n) / (n + 1) * (-4 * q)
    return IntSeries(coeffs, order)


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return comb(2 * k, k) // (k + 1)


def first_return_counts(q: int, k_max: int) -> list[int]:
    """Closed tree walks of length 2k from the root meeting it only at the ends.

    Index k holds (q+1) q^(k-1) Cat_(k-1); index 0 is 0.
    """
    if q < 1 or k_max < 1:
        raise ValueError("need q >= 1 and k_max >= 1")
    return [0] + [(q + 1) * q ** (k - 1) * catalan(k - 1) for k in range(1, k_max + 1)]


def first_return_series(q: int, order: int) -> IntSeries:
    counts = first_return_counts(q, max(1, order // 2))
    coeffs = [0] * (order + 1)
    for k in range(1, order // 2 + 1):
        coeffs[2 * k] = counts[k]
    return IntSeries(coeffs, order)


@dataclass(frozen=True)
class TreeWalkTable:
    q: int
    p_tree: tuple[int, ...]
    p_tilde: tuple[int, ...]
    p_hat: tuple[int, ...]


def tree_walk_series(q: int, order: int) -> IntSeries:
    """Generating function of all closed walks at the root of the tree."""
    return (1 - first_return_series(q, order)).reciprocal()


def tree_walk_counts(q: int, l_max: int) -> TreeWalkTable:
    """Closed-walk tables for the (q+1)-regular tree, indexed by length."""
    if q < 1 or l_max < 0:
        raise ValueError("need q >= 1 and l_max >= 0")
    p_tilde = first_return_series(q, l_max).integers()
    return TreeWalkTable(
        q=q,
        p_tree=tuple(tree_walk_series(q, l_max).integers()),
        p_tilde=tuple(p_tilde),
        p_hat=tuple(prohibited_direction_counts(q, l_max)),
    )


def prohibited_direction_series(q: int, order: int) -> IntSeries:
    return (1 - Fraction(q, q + 1) * first_return_series(q, order)).reciprocal()


def prohibited_direction_counts(q: int, l_max: int) -> list[int]:
    """Closed tree walks at the root when one of its q+1 edges is forbidden."""
    if q < 1 or l_max < 0:
        raise ValueError("need q >= 1 and l_max >= 0")
    return prohibited_direction_series(q, l_max).integers()


def _check_length(m: int) -> None:
    if m < 3:
        raise InvalidLength(f"geodesic length {m} < 3 is impossible in a simple graph")


def trajectory_series(q: int, m: int, l_max: int) -> IntSeries:
    return (prohibited_direction_series(q, l_max).shift(1)) ** m


def trajectory_class_coefficients(q: int, m: int, l_max: int) -> list[int]:
    """Trajectories of each length homotopic to a fixed length-m geodesic."""
    _check_length(m)
    return trajectory_series(q, m, l_max).integers()


def homotopy_class_coefficients(q: int, m: int, l_max: int) -> list[int]:
    """h(m, l): closed paths of length l homotopic to a length-m geodesic, per unit of Lambda."""
    _check_length(m)
    paths = trajectory_series(q, m, l_max).euler_derivative() * Fraction(1, m)
    return paths.integers()


def closed_form_tree_walks(q: int, order: int) -> IntSeries:
    """((q+1) sqrt(1-4qs^2) - q + 1) / (2 (1 - (q+1)^2 s^2)), expanded directly."""
    num = (q + 1) * binomial_sqrt_series(q, Fraction(1, 2), order) - (q - 1)
    geometric = IntSeries(
        [(q + 1) ** (2 * (k // 2)) if k % 2 == 0 else 0 for k in range(order + 1)], order
    )
    return num * geometric * Fraction(1, 2)


def closed_form_homotopy(q: int, m: int, order: int) -> IntSeries:
    """(1-4qs^2)^(-1/2) * ((1 - sqrt(1-4qs^2)) / (2qs))^m, expanded directly."""
    root = binomial_sqrt_series(q, Fraction(1, 2), order + 1)
    # (1 - root) / (2q s) : drop the constant term and shift down by one
    numer = [-c for c in root.coefficients]
    numer[0] += 1
    u = IntSeries([c / (2 * q) for c in numer[1:]], order)
    return binomial_sqrt_series(q, Fraction(-1, 2), order) * u**m


def write_coefficients_csv(values: Sequence[int], path) -> None:
    """Debug dump of a coefficient table as (exponent, coefficient) rows."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["exponent", "coefficient"])
        w.writerows(enumerate(values))
