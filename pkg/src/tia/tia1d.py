"""Closed-form one-dimensional transverse intersection algebra.

Products of generators on the line are given by a finite table of cases
(general position, shared endpoints, infinitesimal contacts).  Periodic
lattices are handled by lifting to the line and summing over translates.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable

from .cells import (INFINITESIMAL, INTERVAL, POINT, Chain, Gen1D, Lattice1D, LINE, LatticeMismatch,
                    canonical, codim, infinitesimal, interval, point)

Terms = tuple  # tuple of (Fraction, Gen1D)


# --- coefficient families ----------------------------------------------------

def point_at_left_end(m, n, m2):
    """Point (m, n) meeting the left end of an interval with left decoration m2."""
    return Fraction(factorial(m + m2 + 1) * factorial(m + n + 1), factorial(m) * factorial(m + n + m2 + 2))


def point_at_right_end(m, n, n2):
    return Fraction(factorial(n + n2 + 1) * factorial(m + n + 1), factorial(n) * factorial(m + n + n2 + 2))


def point_on_infinitesimal(m, n, m2, n2):
    return Fraction(comb(m + m2 + 1, m) * comb(n + n2 + 1, n), comb(m + n + m2 + n2 + 3, m + n + 1))


def touching_intervals(m2, n):
    """[a,b] with right decoration n meets [b,c] with left decoration m2."""
    return Fraction(factorial(m2 + 1) * factorial(n + 1), factorial(m2 + n + 2))


def infinitesimal_at_left_end(m, n, k):
    return Fraction(factorial(m + n + 2) * factorial(m + k + 2), factorial(m + 1) * factorial(m + n + k + 3))


def infinitesimal_at_right_end(m, n, l):
    return Fraction(factorial(m + n + 2) * factorial(n + l + 2), factorial(n + 1) * factorial(m + n + l + 3))


def infinitesimal_pair(m, n, m2, n2):
    return Fraction(comb(m + n + 2, m + 1) * comb(m2 + n2 + 2, m2 + 1),
                    comb(m + n + m2 + n2 + 4, m + m2 + 2))


# --- generator products on the line ----------------------------------------------

def _point_times(p: Gen1D, g: Gen1D) -> Terms:
    c, m, n = p.a, p.m, p.n
    if g.kind == POINT:
        return ()
    if g.kind == INFINITESIMAL:
        if g.a != c:
            return ()
        return ((point_on_infinitesimal(m, n, g.m, g.n), point(c, m + g.m + 1, n + g.n + 1)),)
    a, b = g.a, g.b
    if a < c < b:
        return ((Fraction(1), p),)
    if c == a:
        return ((point_at_left_end(m, n, g.m), point(c, m + g.m + 1, n)),)
    if c == b:
        return ((point_at_right_end(m, n, g.n), point(c, m, n + g.n + 1)),)
    return ()


def _infinitesimal_times(x: Gen1D, g: Gen1D) -> Terms:
    s, m, n = x.a, x.m, x.n
    if g.kind == INFINITESIMAL:
        if g.a != s:
            return ()
        return ((infinitesimal_pair(m, n, g.m, g.n), infinitesimal(s, m + g.m + 1, n + g.n + 1)),)
    a, b = g.a, g.b
    if a < s < b:
        return ((Fraction(1), x),)
    if s == a:
        return ((infinitesimal_at_left_end(m, n, g.m), infinitesimal(s, m + g.m + 1, n)),)
    if s == b:
        return ((infinitesimal_at_right_end(m, n, g.n), infinitesimal(s, m, n + g.n + 1)),)
    return ()


def _interval_times(x: Gen1D, y: Gen1D) -> Terms:
    a, b, c, d = x.a, x.b, y.a, y.b
    if b < c or d < a:
        return ()
    if b == c:
        return ((touching_intervals(y.m, x.n), infinitesimal(b, y.m, x.n)),)
    if d == a:
        return ((touching_intervals(x.m, y.n), infinitesimal(a, x.m, y.n)),)
    # The wiggled overlap runs from the larger left end to the smaller right end;
    # ends sitting at the same site merge their decorations.
    if a < c:
        left, lm = c, y.m
    elif c < a:
        left, lm = a, x.m
    else:
        left, lm = a, x.m + y.m + 1
    if b < d:
        right, rn = b, x.n
    elif d < b:
        right, rn = d, y.n
    else:
        right, rn = b, x.n + y.n + 1
    return ((Fraction(1), interval(left, right, lm, rn)),)


@lru_cache(maxsize=1 << 20)
def line_product(g: Gen1D, h: Gen1D) -> Terms:
    """Transverse product of two generators on the infinite line."""
    if g.kind == POINT:
        return _point_times(g, h)
    if h.kind == POINT:
        return _point_times(h, g)
    if g.kind == INFINITESIMAL:
        return _infinitesimal_times(g, h)
    if h.kind == INFINITESIMAL:
        return _infinitesimal_times(h, g)
    return _interval_times(g, h)


def _support(g: Gen1D) -> tuple[int, int]:
    return (g.a, g.b)


def lifted_product(g: Gen1D, h: Gen1D, lattice: Lattice1D,
                   product: Callable[[Gen1D, Gen1D], Iterable] = line_product) -> Chain:
    """Product on ``lattice`` using a line rule ``product``.

    On a circle the first factor is lifted to the line and every translate of
    the second factor touching it contributes; results are folded back.
    """
    if not lattice.periodic:
        return Chain(((t, c) for c, t in product(g, h)), lattice)
    N = lattice.period
    g, h = canonical(g, lattice), canonical(h, lattice)
    lo, hi = _support(g)
    lo2, hi2 = _support(h)
    acc = []
    for k in range(-((hi2 - lo) // N), (hi - lo2) // N + 1):
        acc.extend((t, c) for c, t in product(g, h.shifted(k * N)))
    return Chain(acc, lattice)


def intersect_gen(g: Gen1D, h: Gen1D, lattice: Lattice1D = LINE) -> Chain:
    return lifted_product(g, h, lattice, line_product)


def intersect(x: Chain, y: Chain) -> Chain:
    if x.lattice != y.lattice:
        raise LatticeMismatch(f"{x.lattice} != {y.lattice}")
    acc = []
    for g, c in x.terms.items():
        for h, d in y.terms.items():
            acc.extend((t, c * d * e) for t, e in intersect_gen(g, h, x.lattice).terms.items())
    return Chain(acc, x.lattice)


def boundary_gen(g: Gen1D) -> Terms:
    if g.kind == POINT:
        return ()
    if g.kind == INTERVAL:
        return ((Fraction(1), point(g.b, 0, g.n)), (Fraction(-1), point(g.a, g.m, 0)))
    return ((Fraction(1), point(g.a, g.m + 1, g.n)), (Fraction(-1), point(g.a, g.m, g.n + 1)))


def boundary(x: Chain) -> Chain:
    return Chain(((t, c * e) for g, c in x.terms.items() for e, t in boundary_gen(g)), x.lattice)


def in_ideal(g: Gen1D, K: int) -> bool:
    return min(g.m, g.n) >= K


def truncate(x: Chain, K: int) -> Chain:
    """Drop every term lying in the ideal spanned by generators with all decorations >= K."""
    if K < 0:
        raise ValueError("K must be non-negative")
    return Chain({g: c for g, c in x.terms.items() if not in_ideal(g, K)}, x.lattice)


def graded_sign(g: Gen1D, h: Gen1D) -> int:
    return -1 if codim(g) * codim(h) % 2 else 1


def clear_caches() -> None:
    """Forget memoised products (needed after patching a coefficient function)."""
    line_product.cache_clear()
    from . import tensor
    tensor._factor_product.cache_clear()
