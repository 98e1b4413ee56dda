"""Exact rational polynomials in one and two variables.

Rationals are :class:`fractions.Fraction`.  Polynomials are immutable and
dense; degrees stay small (a few tens at most) in every use made of them here.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Union

Rational = Fraction
Number = Union[int, Fraction]

# Marker for an integration bound equal to the other variable of a Poly2.
OTHER = "other"


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Poly1:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly1":
        return cls((c,))

    @staticmethod
    def binomial_power(m: int, n: int) -> "Poly1":
        """(1+z)^m (1-z)^n."""
        return _binomial_power(m, n)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Poly1):
            other = Poly1.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly1(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly1(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            c = _q(other)
            return Poly1(c * x for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly1()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly1(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly1):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly1.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly1({[str(c) for c in self.coeffs]})"

    def antiderivative(self) -> "Poly1":
        return Poly1((Fraction(0),) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def divmod_linear(self, root) -> tuple["Poly1", Fraction]:
        """Synthetic division by (z - root): returns (quotient, remainder)."""
        root = _q(root)
        if self.is_zero():
            return Poly1(), Fraction(0)
        hi_first = list(reversed(self.coeffs))
        out = [hi_first[0]]
        for c in hi_first[1:]:
            out.append(c + out[-1] * root)
        rem = out.pop()
        return Poly1(reversed(out)), rem

    def root_multiplicity(self, root) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no finite root multiplicity")
        k, p = 0, self
        while True:
            q, r = p.divmod_linear(root)
            if r != 0:
                return k
            k, p = k + 1, q


_ONE_PLUS_Z = Poly1((1, 1))
_ONE_MINUS_Z = Poly1((1, -1))


@lru_cache(maxsize=None)
def _binomial_power(m: int, n: int) -> Poly1:
    if m:
        return _binomial_power(m - 1, n) * _ONE_PLUS_Z
    if n:
        return _binomial_power(0, n - 1) * _ONE_MINUS_Z
    return Poly1((1,))


class Poly2:
    """Bivariate polynomial; ``coeffs[(i, j)]`` multiplies z1**i * z2**j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {k: _q(v) for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def outer(cls, p: Poly1, q: Poly1) -> "Poly2":
        """p(z1) * q(z2)."""
        return cls({(i, j): a * b for i, a in enumerate(p.coeffs) for j, b in enumerate(q.coeffs)})

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degrees(self) -> tuple[int, int]:
        if not self.coeffs:
            return (-1, -1)
        return (max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs))

    def __call__(self, z1, z2) -> Fraction:
        return sum((c * Fraction(z1) ** i * Fraction(z2) ** j for (i, j), c in self.coeffs.items()), Fraction(0))

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Poly2(out)

    def __neg__(self):
        return Poly2({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            c = _q(other)
            return Poly2({k: c * v for k, v in self.coeffs.items()})
        out: dict = {}
        for (i, j), a in self.coeffs.items():
            for (k, l), b in other.coeffs.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + a * b
        return Poly2(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly2):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"Poly2({ {k: str(v) for k, v in sorted(self.coeffs.items())} })"

    def separate(self) -> tuple[Poly1, Poly1]:
        """Split a rank-one polynomial into p(z1), q(z2) with p*q == self.

        Raises ValueError when no such factorisation exists.
        """
        if self.is_zero():
            return Poly1(), Poly1()
        (i0, j0), pivot = min(self.coeffs.items())
        di, dj = self.degrees
        p = Poly1(self.coeffs.get((i, j0), 0) for i in range(di + 1))
        q = Poly1(self.coeffs.get((i0, j), 0) / pivot for j in range(dj + 1))
        if Poly2.outer(p, q) != self:
            raise ValueError("polynomial is not a product of univariate factors")
        return p, q


def poly_mul(p, q):
    """Exact product of two Poly1 or two Poly2."""
    if type(p) is not type(q):
        raise TypeError("poly_mul needs two polynomials of the same kind")
    return p * q


def integrate_definite(p: Poly1, lo, hi) -> Fraction:
    P = p.antiderivative()
    return P(_q(hi)) - P(_q(lo))


def integrate_partial(p: Poly2, var: int, lo, hi) -> Poly1:
    """Integrate out variable ``var`` (0 for z1, 1 for z2) of ``p``.

    Each bound is a rational constant or :data:`OTHER`, meaning the remaining
    variable; this covers the simplex domains {z1 < z2}.  The result is a
    polynomial in the remaining variable.
    """
    if var not in (0, 1):
        raise ValueError("var must be 0 or 1")
    out: dict[int, Fraction] = {}

    def bump(k, c):
        out[k] = out.get(k, Fraction(0)) + c

    for (i, j), c in p.coeffs.items():
        e, keep = (i, j) if var == 0 else (j, i)
        c = c / (e + 1)
        for bound, sign in ((hi, 1), (lo, -1)):
            if bound == OTHER:
                bump(keep + e + 1, sign * c)
            else:
                bump(keep, sign * c * _q(bound) ** (e + 1))
    if not out:
        return Poly1()
    return Poly1(out.get(k, 0) for k in range(max(out) + 1))


def beta_integral(m: int, n: int) -> Fraction:
    """Closed form of the integral of (1+z)^m (1-z)^n over [-1, 1]."""
    return Fraction(2 ** (m + n + 1), (m + n + 1) * comb(m + n, m))
