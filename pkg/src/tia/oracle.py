"""Recompute boundaries and products by integrating wiggling densities exactly.

Every generator is a random cell whose endpoints live in local coordinates
z in [-1, 1] around lattice sites (the wiggle width is fixed to 1; no structure
constant depends on it).  Endpoints at different sites are ordered by their
sites, so only the relative order of endpoints sharing a site is random.  A
product is computed by enumerating those orders, intersecting the cells
literally, integrating out the endpoints that do not survive and reading the
surviving density off in the basis of normalised densities.

Nothing here consults the closed-form tables in :mod:`tia.tia1d`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .cells import INFINITESIMAL, INTERVAL, POINT, Chain, Gen1D, Lattice1D, LINE
from .exactnum import OTHER, Poly1, Poly2, integrate_definite, integrate_partial


class NotInBasis(ValueError):
    """A density that is not a multiple of any basis density."""


# --- densities -------------------------------------------------------------------

@dataclass(frozen=True)
class Density:
    """Unnormalised-or-normalised endpoint density of a wiggled cell.

    kind ``point``: ``poly`` is a Poly1 on [-1, 1] around ``anchors[0]``.
    kind ``interval``: ``poly`` is a Poly2 in (left, right) local coordinates,
    anchors ``(a, b)`` with a < b.
    kind ``simplex``: ``poly`` is a Poly2 supported on -1 <= z1 < z2 <= 1
    around ``anchors[0]``.
    """

    kind: str
    poly: object
    anchors: tuple

    def mass(self) -> Fraction:
        if self.kind == "point":
            return integrate_definite(self.poly, -1, 1)
        if self.kind == "interval":
            return integrate_definite(integrate_partial(self.poly, 0, -1, 1), -1, 1)
        return integrate_definite(integrate_partial(self.poly, 0, -1, OTHER), -1, 1)


@lru_cache(maxsize=None)
def _normalised(m: int, n: int) -> Poly1:
    p = Poly1.binomial_power(m, n)
    return p * (1 / integrate_definite(p, -1, 1))


def point_density(m: int, n: int) -> Poly1:
    """f_{m,n}: density proportional to (1+z)^m (1-z)^n with unit mass."""
    return _normalised(m, n)


@lru_cache(maxsize=None)
def simplex_density(m: int, n: int) -> Poly2:
    """g_{m,n}: density proportional to (1+z1)^m (1-z2)^n on z1 < z2, unit mass."""
    p = Poly2.outer(Poly1.binomial_power(m, 0), Poly1.binomial_power(0, n))
    mass = integrate_definite(integrate_partial(p, 0, -1, OTHER), -1, 1)
    return p * (1 / mass)


def density_of(g: Gen1D) -> Density:
    if g.kind == POINT:
        return Density("point", point_density(g.m, g.n), (g.a,))
    if g.kind == INTERVAL:
        return Density("interval", Poly2.outer(point_density(g.m, 0), point_density(0, g.n)), (g.a, g.b))
    return Density("simplex", simplex_density(g.m, g.n), (g.a,))


def express_in_basis(d: Density) -> tuple[Fraction, Gen1D]:
    """Return ``(mass, generator)`` with ``d`` equal to mass times the generator's density."""
    if d.poly.is_zero():
        raise NotInBasis("zero density")
    if d.kind == "point":
        p = d.poly
        M = p.root_multiplicity(-1)
        N = p.root_multiplicity(1)
        shape = Poly1.binomial_power(M, N)
        if p.degree != shape.degree:
            raise NotInBasis(f"point density {p!r} is not (1+z)^M (1-z)^N")
        c = p.coeffs[-1] / shape.coeffs[-1]
        if p != shape * c:
            raise NotInBasis(f"point density {p!r} is not (1+z)^M (1-z)^N")
        return d.mass(), Gen1D(POINT, d.anchors[0], d.anchors[0], M, N)
    M, N = d.poly.degrees
    shape = Poly2.outer(Poly1.binomial_power(M, 0), Poly1.binomial_power(0, N))
    c = d.poly.coeffs.get((M, N), Fraction(0)) / shape.coeffs[(M, N)]
    if c == 0 or d.poly != shape * c:
        raise NotInBasis(f"{d.kind} density {d.poly!r} is not (1+z1)^M (1-z2)^N")
    if d.kind == "interval":
        a, b = d.anchors
        return d.mass(), Gen1D(INTERVAL, a, b, M, N)
    a = d.anchors[0]
    return d.mass(), Gen1D(INFINITESIMAL, a, a, M, N)


# --- random endpoints ---------------------------------------------------------------

@dataclass(frozen=True)
class _Var:
    site: int
    weight: Poly1  # factor of the joint density carried by this endpoint


def _cell_vars(g: Gen1D, tag: int):
    """Endpoint variables of ``g`` plus the ordering constraints among them.

    Returns (vars, shape, constraints): ``shape`` is ('point', i) or
    ('interval', i, j) indexing into vars; constraints are pairs (i, j) meaning
    var i < var j.
    """
    d = density_of(g)
    if d.kind == "point":
        return [_Var(g.a, d.poly)], (POINT, 0), []
    left, right = d.poly.separate()
    if d.kind == "interval":
        return [_Var(g.a, left), _Var(g.b, right)], (INTERVAL, 0, 1), []
    return [_Var(g.a, left), _Var(g.a, right)], (INTERVAL, 0, 1), [(0, 1)]


def _orderings(vars_, constraints):
    """Yield rank maps var index -> rank within its site, one per admissible order."""
    by_site = defaultdict(list)
    for i, v in enumerate(vars_):
        by_site[v.site].append(i)
    sites = sorted(by_site)
    per_site = []
    for s in sites:
        opts = []
        for perm in permutations(by_site[s]):
            rank = {i: r for r, i in enumerate(perm)}
            if all(rank[i] < rank[j] for i, j in constraints if i in rank and j in rank):
                opts.append(perm)
        per_site.append(opts)
    for combo in product(*per_site):
        yield {s: perm for s, perm in zip(sites, combo)}


def _intersect_shape(shape1, shape2, key):
    """Literal intersection of two sampled cells given a total order ``key``."""
    if shape1[0] == POINT and shape2[0] == POINT:
        return None
    if shape1[0] == POINT or shape2[0] == POINT:
        (_, p), (_, l, r) = (shape1, shape2) if shape1[0] == POINT else (shape2, shape1)
        return (POINT, p) if key[l] < key[p] < key[r] else None
    (_, l1, r1), (_, l2, r2) = shape1, shape2
    lo = l1 if key[l1] > key[l2] else l2
    hi = r1 if key[r1] < key[r2] else r2
    return (INTERVAL, lo, hi) if key[lo] < key[hi] else None


def _site_marginal(chain, weights, free):
    """Integrate the endpoints of one site's ordered chain that are not free.

    ``chain`` lists var indices in increasing order.  Returns a dict var -> Poly1
    for the free variables (carrying the integrated weights) and a scalar for a
    site with no free variable.
    """
    pos = [k for k, i in enumerate(chain) if i in free]
    if not pos:
        acc = Poly1.const(1)
        for i in chain:
            acc = (weights[i] * acc).antiderivative()
            acc = acc - acc(-1)
        return {}, acc(1)
    first, last = pos[0], pos[-1]
    if any(chain[k] not in free for k in range(first, last + 1)):
        raise RuntimeError("surviving endpoints are separated by an integrated one")
    w = {i: weights[i] for i in chain}
    below = Poly1.const(1)
    for k in range(first):  # lowest variable up to the first free one
        below = (w[chain[k]] * below).antiderivative()
        below = below - below(-1)
    above = Poly1.const(1)
    for k in range(len(chain) - 1, last, -1):
        P = (w[chain[k]] * above).antiderivative()
        above = P(1) - P
    out = {i: w[i] for i in chain[first:last + 1]}
    out[chain[first]] = out[chain[first]] * below
    out[chain[last]] = out[chain[last]] * above
    return out, Fraction(1)


def intersect_via_integration(g: Gen1D, h: Gen1D) -> Chain:
    """Product of two generators on the line from their wiggling densities."""
    v1, s1, c1 = _cell_vars(g, 0)
    v2, s2, c2 = _cell_vars(h, 1)
    off = len(v1)
    vars_ = v1 + v2
    shape1 = s1
    shape2 = (s2[0],) + tuple(i + off for i in s2[1:])
    constraints = c1 + [(i + off, j + off) for i, j in c2]
    weights = [v.weight for v in vars_]

    densities: dict = {}
    for ranks in _orderings(vars_, constraints):
        key = {}
        for s, perm in ranks.items():
            for r, i in enumerate(perm):
                key[i] = (s, r)
        res = _intersect_shape(shape1, shape2, key)
        if res is None:
            continue
        free = set(res[1:])
        scalar = Fraction(1)
        marg = {}
        for s, perm in ranks.items():
            out, c = _site_marginal(list(perm), weights, free)
            marg.update(out)
            scalar *= c
        if res[0] == POINT:
            p = res[1]
            dens = Density("point", marg[p] * scalar, (vars_[p].site,))
        else:
            lo, hi = res[1], res[2]
            poly = Poly2.outer(marg[lo] * scalar, marg[hi])
            if vars_[lo].site == vars_[hi].site:
                dens = Density("simplex", poly, (vars_[lo].site,))
            else:
                dens = Density("interval", poly, (vars_[lo].site, vars_[hi].site))
        k = (dens.kind, dens.anchors)
        densities[k] = densities[k] + dens.poly if k in densities else dens.poly

    terms = []
    for (kind, anchors), poly in densities.items():
        if poly.is_zero():
            continue
        mass, gen = express_in_basis(Density(kind, poly, anchors))
        terms.append((gen, mass))
    return Chain(terms, LINE)


def boundary_via_integration(g: Gen1D) -> Chain:
    """Signed endpoint marginals of a wiggled interval, expressed as points."""
    d = density_of(g)
    if d.kind == "point":
        return Chain({}, LINE)
    if d.kind == "interval":
        a, b = d.anchors
        left = integrate_partial(d.poly, 1, -1, 1)
        right = integrate_partial(d.poly, 0, -1, 1)
    else:
        a = b = d.anchors[0]
        left = integrate_partial(d.poly, 1, OTHER, 1)
        right = integrate_partial(d.poly, 0, -1, OTHER)
    cr, gr = express_in_basis(Density("point", right, (b,)))
    cl, gl = express_in_basis(Density("point", left, (a,)))
    return Chain([(gr, cr), (gl, -cl)], LINE)


def intersect_via_integration_on(g: Gen1D, h: Gen1D, lattice: Lattice1D) -> Chain:
    """Oracle product on any lattice, lifting periodic configurations to the line."""
    from .tia1d import lifted_product

    def rule(x, y):
        return [(c, t) for t, c in intersect_via_integration(x, y).terms.items()]

    return lifted_product(g, h, lattice, rule)


# --- Monte Carlo ------------------------------------------------------------------------

_SITE_SPACING = 4.0  # > 2 * wiggle width, so wiggled sites never overlap


def _sample(g: Gen1D, rng: np.random.Generator, k: int):
    """Global coordinates of k wiggled copies of g: (left, right) arrays, or (p, p) for points."""
    if g.kind == POINT:
        z = 2.0 * rng.beta(g.m + 1, g.n + 1, size=k) - 1.0
        p = g.a * _SITE_SPACING + z
        return p, p
    if g.kind == INTERVAL:
        z1 = 2.0 * rng.beta(g.m + 1, 1, size=k) - 1.0
        z2 = 2.0 * rng.beta(1, g.n + 1, size=k) - 1.0
        return g.a * _SITE_SPACING + z1, g.b * _SITE_SPACING + z2
    # (u, v - u, 1 - v) is Dirichlet(m+1, 1, n+1) for u=(1+z1)/2, v=(1+z2)/2
    w = rng.dirichlet((g.m + 1, 1, g.n + 1), size=k)
    z1 = 2.0 * w[:, 0] - 1.0
    z2 = 2.0 * (w[:, 0] + w[:, 1]) - 1.0
    return g.a * _SITE_SPACING + z1, g.a * _SITE_SPACING + z2


def mc_estimate(g: Gen1D, h: Gen1D, samples: int, seed: int) -> dict:
    """Empirical masses of the combinatorial outcome types of ``g`` cut with ``h``.

    Keys are ('point', site), ('interval', a, b) or ('infinitesimal', a); values
    are frequencies over ``samples`` draws.  Empty outcomes are not reported.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    l1, r1 = _sample(g, rng, samples)
    l2, r2 = _sample(h, rng, samples)
    site = lambda x: np.rint(x / _SITE_SPACING).astype(np.int64)  # noqa: E731
    out: dict = {}
    if g.kind == POINT and h.kind == POINT:
        return out
    if g.kind == POINT or h.kind == POINT:
        p, (lo, hi) = (l1, (l2, r2)) if g.kind == POINT else (l2, (l1, r1))
        hit = (lo <= p) & (p <= hi)
        keys, counts = np.unique(site(p[hit]), return_counts=True)
        for s, c in zip(keys.tolist(), counts.tolist()):
            out[(POINT, s)] = c / samples
        return out
    lo = np.maximum(l1, l2)
    hi = np.minimum(r1, r2)
    hit = lo < hi
    pairs = np.stack([site(lo[hit]), site(hi[hit])], axis=1)
    if len(pairs):
        keys, counts = np.unique(pairs, axis=0, return_counts=True)
        for (a, b), c in zip(keys.tolist(), counts.tolist()):
            out[(INFINITESIMAL, a) if a == b else (INTERVAL, a, b)] = c / samples
    return out
