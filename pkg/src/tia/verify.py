"""Exhaustive and sampled checks of the algebra laws, and closed form vs oracle.

Every check returns a :class:`Check` holding how many instances were tested,
how many failed and a description of the first failure.  Arithmetic is exact
throughout; nothing here is compared with a tolerance.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Optional

from .cells import INFINITESIMAL, INTERVAL, LINE, POINT, Gen1D, Lattice1D, canonical, codim, infinitesimal, interval, point
from .oracle import boundary_via_integration, intersect_via_integration, intersect_via_integration_on
from .tensor import _factor_product, boundary_sign, interchange_sign
from .tia1d import boundary_gen, intersect_gen, in_ideal

log = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    checked: int = 0
    failures: int = 0
    first: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, good: bool, what: Callable[[], str]):
        self.checked += 1
        if not good:
            self.failures += 1
            if self.first is None:
                self.first = what()

    def line(self) -> str:
        s = f"{self.name}: {self.checked} checked, {self.failures} failed"
        return s if self.ok else f"{s}; first: {self.first}"


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


# --- generator pools ----------------------------------------------------------------------

def gens_1d(B: int, W: int, lattice: Lattice1D = LINE) -> list[Gen1D]:
    """Every generator with decorations <= B on a window of W sites (the whole circle if periodic)."""
    decs = list(iproduct(range(B + 1), repeat=2))
    out = []
    if lattice.periodic:
        N = lattice.period
        for a in range(N):
            for m, n in decs:
                out += [point(a, m, n), infinitesimal(a, m, n)]
                out += [interval(a, a + L, m, n) for L in range(1, N)]
        return out
    for a in range(W):
        for m, n in decs:
            out += [point(a, m, n), infinitesimal(a, m, n)]
            out += [interval(a, b, m, n) for b in range(a + 1, W)]
    return out


# --- sparse 1-D chains as plain dicts (fast path for sweeps) ------------------------------------

def _clean(x: dict) -> dict:
    return {k: v for k, v in x.items() if v}


def _acc(out: dict, k, v):
    out[k] = out.get(k, 0) + v


def _mul(x: dict, y: dict, lat) -> dict:
    out: dict = {}
    for g, c in x.items():
        for h, d in y.items():
            for t, e in _factor_product(g, h, lat):
                _acc(out, t, c * d * e)
    return _clean(out)


def _bd(x: dict, lat: Lattice1D = LINE) -> dict:
    out: dict = {}
    for g, c in x.items():
        for e, t in boundary_gen(g):
            _acc(out, canonical(t, lat), c * e)
    return _clean(out)


def _lin(*pairs) -> dict:
    out: dict = {}
    for s, x in pairs:
        for k, v in x.items():
            _acc(out, k, s * v)
    return _clean(out)


def _show(x: dict) -> str:
    if not x:
        return "0"
    return " + ".join(f"({c})*{g!r}" for g, c in sorted(x.items()))


# --- one dimension ---------------------------------------------------------------------------

def sweep_1d(B: int, W: int, period: Optional[int] = None, triples: bool = True,
             absorption: bool = False) -> Report:
    """Graded commutativity, associativity, Leibniz, boundary squared and the
    truncation ideal, exhaustively over all generators of ``gens_1d(B, W)``.

    The span of generators with both decorations >= K is closed under products
    of two of its members.  It does not absorb products with arbitrary
    generators (a point at the left end of an interval keeps its own right
    decoration); ``absorption=True`` adds that literal check, which fails."""
    lat = Lattice1D(period=period) if period else LINE
    G = gens_1d(B, W, lat)
    log.info("1-D sweep: %d generators, B=%d, W=%d, period=%s", len(G), B, W, period)
    rep = Report()
    comm = rep.add(Check("graded commutativity"))
    leib = rep.add(Check("Leibniz"))
    dd = rep.add(Check("boundary squared"))
    closed = rep.add(Check("ideal closed under products"))
    absorb = rep.add(Check("ideal absorbs products")) if absorption else None
    P = {}
    for g in G:
        for h in G:
            P[g, h] = dict(_factor_product(g, h, lat))
    bd = {g: _bd({g: 1}, lat) for g in G}
    for g in G:
        dd.record(not _bd(bd[g], lat), lambda: f"d(d({g!r})) != 0")
    for g in G:
        sg = -1 if codim(g) else 1
        for h in G:
            gh, hg = P[g, h], P[h, g]
            s = -1 if codim(g) * codim(h) else 1
            comm.record(gh == _lin((s, hg)),
                        lambda: f"{g!r} . {h!r} = {_show(gh)} but sign * {h!r} . {g!r} = {_show(hg)}")
            lhs = _bd(gh, lat)
            rhs = _lin((1, _mul(bd[g], {h: 1}, lat)), (sg, _mul({g: 1}, bd[h], lat)))
            leib.record(lhs == rhs, lambda: f"d({g!r} . {h!r}) = {_show(lhs)} != {_show(rhs)}")
            for K in range(1, B + 1):
                if not in_ideal(g, K):
                    continue
                inside = all(in_ideal(t, K) for t in gh)
                if in_ideal(h, K):
                    closed.record(inside, lambda: f"K={K}: {g!r} . {h!r} = {_show(gh)} leaves the ideal")
                if absorb is not None:
                    absorb.record(inside, lambda: f"K={K}: {g!r} . {h!r} = {_show(gh)} leaves the ideal")
    if triples:
        assoc = rep.add(Check("associativity"))
        for a in G:
            for b in G:
                ab = P[a, b]
                for c in G:
                    bc = P[b, c]
                    if not ab and not bc:
                        assoc.record(True, str)
                        continue
                    left = _mul(ab, {c: 1}, lat)
                    right = _mul({a: 1}, bc, lat)
                    assoc.record(left == right,
                                 lambda: f"({a!r} . {b!r}) . {c!r} = {_show(left)} != {_show(right)}")
    return rep


def ideal_witness(K: int) -> tuple[Gen1D, dict]:
    """An ideal generator whose boundary leaves the ideal (K >= 1)."""
    g = interval(0, 1, K, K)
    return g, _bd({g: 1})


# --- d dimensions ------------------------------------------------------------------------------

def _mul_d(x: dict, y: dict, lats) -> dict:
    out: dict = {}
    for g, c in x.items():
        cg = [codim(f) for f in g]
        for h, d in y.items():
            parts = []
            for f, e, lat in zip(g, h, lats):
                t = _factor_product(f, e, lat)
                if not t:
                    break
                parts.append(t)
            else:
                s = interchange_sign(cg, [codim(f) for f in h])
                for combo in iproduct(*parts):
                    v = c * d * s
                    for _, w in combo:
                        v *= w
                    _acc(out, tuple(t for t, _ in combo), v)
    return _clean(out)


def _bd_d(x: dict) -> dict:
    out: dict = {}
    for g, c in x.items():
        cs = [codim(f) for f in g]
        for i, f in enumerate(g):
            s = boundary_sign(cs, i)
            for e, t in boundary_gen(f):
                _acc(out, g[:i] + (t,) + g[i + 1:], c * s * e)
    return _clean(out)


def _show_d(x: dict) -> str:
    if not x:
        return "0"
    return " + ".join(f"({c})*" + "(x)".join(repr(f) for f in g) for g, c in sorted(x.items()))


def _check_pair(g, h, lats, comm: Check, leib: Check):
    gh, hg = _mul_d({g: 1}, {h: 1}, lats), _mul_d({h: 1}, {g: 1}, lats)
    cg, ch = sum(map(codim, g)), sum(map(codim, h))
    s = -1 if cg * ch % 2 else 1
    comm.record(gh == _lin((s, hg)), lambda: f"{_show_d({g: 1})} . {_show_d({h: 1})}: {_show_d(gh)} vs {_show_d(hg)}")
    lhs = _bd_d(gh)
    rhs = _lin((1, _mul_d(_bd_d({g: 1}), {h: 1}, lats)), (-1 if cg % 2 else 1, _mul_d({g: 1}, _bd_d({h: 1}), lats)))
    leib.record(lhs == rhs, lambda: f"d({_show_d({g: 1})} . {_show_d({h: 1})}) = {_show_d(lhs)} != {_show_d(rhs)}")


def _check_triple(a, b, c, lats, assoc: Check):
    left = _mul_d(_mul_d({a: 1}, {b: 1}, lats), {c: 1}, lats)
    right = _mul_d({a: 1}, _mul_d({b: 1}, {c: 1}, lats), lats)
    assoc.record(left == right,
                 lambda: f"({_show_d({a: 1})} . {_show_d({b: 1})}) . {_show_d({c: 1})}: {_show_d(left)} != {_show_d(right)}")


def sweep_d(d: int, B: int, W: int, samples: int = 2000, reps: int = 4, seed: int = 0) -> Report:
    """d-dimensional laws.

    The product of tensors is the tensor of factor products times a sign that
    depends only on the factor codimensions, so the laws reduce to the 1-D laws
    (checked exhaustively by :func:`sweep_1d`) plus sign bookkeeping.  The sign
    bookkeeping is checked for every codimension pattern of pairs and triples,
    ``reps`` times each, with factors drawn from generators through a common
    site so that the products are mostly nonzero.  On top of that ``samples``
    uniformly drawn pairs and triples are checked directly.  Boundary squared is
    exhaustive over all d-dimensional generators.
    """
    lats = (LINE,) * d
    G = gens_1d(B, W)
    mid = W // 2
    through = {0: [f for f in G if codim(f) == 0 and f.a <= mid <= f.b],
               1: [f for f in G if codim(f) == 1 and f.a == mid]}
    rng = random.Random(seed)
    rep = Report()
    comm = rep.add(Check(f"graded commutativity (d={d})"))
    leib = rep.add(Check(f"Leibniz (d={d})"))
    assoc = rep.add(Check(f"associativity (d={d})"))
    dd = rep.add(Check(f"boundary squared (d={d}, exhaustive)"))

    for g in iproduct(G, repeat=d):
        dd.record(not _bd_d(_bd_d({g: 1})), lambda: f"d(d({_show_d({g: 1})})) != 0")

    def draw(pattern):
        return tuple(rng.choice(through[c]) for c in pattern)

    for pat in iproduct((0, 1), repeat=2 * d):
        for _ in range(reps):
            _check_pair(draw(pat[:d]), draw(pat[d:]), lats, comm, leib)
    for pat in iproduct((0, 1), repeat=3 * d):
        for _ in range(reps):
            _check_triple(draw(pat[:d]), draw(pat[d:2 * d]), draw(pat[2 * d:]), lats, assoc)
    for _ in range(samples):
        g, h, k = (tuple(rng.choice(G) for _ in range(d)) for _ in range(3))
        _check_pair(g, h, lats, comm, leib)
        _check_triple(g, h, k, lats, assoc)
    return rep


# --- closed forms against the integration oracle -----------------------------------------------

def oracle_check(B: int, W: int, period: Optional[int] = None) -> Report:
    """Every ordered generator pair and every boundary of ``gens_1d(B, W)``."""
    lat = Lattice1D(period=period) if period else LINE
    G = gens_1d(B, W, lat)
    rep = Report()
    prods = rep.add(Check("products"))
    bds = rep.add(Check("boundaries"))
    for g in G:
        closed = dict((t, e) for e, t in boundary_gen(g))
        ref = boundary_via_integration(g).terms
        bds.record(_clean(closed) == ref, lambda: f"d{g!r}: closed form {_show(closed)}, oracle {_show(ref)}")
    for i, g in enumerate(G):
        if i % 50 == 0:
            log.debug("oracle check: %d / %d", i, len(G))
        for h in G:
            closed = intersect_gen(g, h, lat).terms
            ref = (intersect_via_integration_on(g, h, lat) if lat.periodic else intersect_via_integration(g, h)).terms
            prods.record(closed == ref,
                         lambda: f"{g!r} . {h!r}: closed form {_show(closed)}, oracle {_show(ref)}")
    return rep


# --- the subalgebra generated by zero-decorated W ------------------------------------------------

def u_closure(W: int = 7, max_dec: int = 3) -> set:
    """Generators reached by repeatedly multiplying zero-decorated points and
    centred 2h-intervals on a line window, keeping decorations <= max_dec."""
    seeds = {point(a) for a in range(W)} | {interval(a - 1, a + 1) for a in range(1, W - 1)}
    found = set(seeds)
    frontier = set(seeds)
    while frontier:
        new = set()
        for g in found:
            for h in frontier:
                for x, y in ((g, h), (h, g)):
                    for t in intersect_gen(x, y).terms:
                        if max(t.m, t.n) <= max_dec and t not in found:
                            new.add(t)
        found |= new
        frontier = new
    return found


def in_stated_u_basis(g: Gen1D) -> bool:
    """Membership in {points, length-1 intervals, length-2 intervals with m == n}."""
    if g.kind == POINT:
        return True
    if g.kind == INTERVAL:
        return g.b - g.a == 1 or (g.b - g.a == 2 and g.m == g.n)
    return False


def u_basis_check(W: int = 7, max_dec: int = 3) -> Report:
    """Compare the closure with the stated basis on the window interior (sites 2..W-3)."""
    found = u_closure(W, max_dec)
    lo, hi = 2, W - 3
    inner = lambda g: lo <= g.a and g.b <= hi  # noqa: E731
    stated = set()
    for a in range(lo, hi + 1):
        for m, n in iproduct(range(max_dec + 1), repeat=2):
            stated.add(point(a, m, n))
            if a + 1 <= hi:
                stated.add(interval(a, a + 1, m, n))
            if a + 2 <= hi and m == n:
                stated.add(interval(a, a + 2, m, n))
    got = {g for g in found if inner(g)}
    rep = Report()
    extra = rep.add(Check("closure elements outside the stated basis"))
    for g in sorted(got):
        extra.record(in_stated_u_basis(g), lambda: f"{g!r} is reached but not listed")
    missing = rep.add(Check("stated basis elements reached"))
    for g in sorted(stated):
        missing.record(g in got, lambda: f"{g!r} is listed but not reached")
    return rep
