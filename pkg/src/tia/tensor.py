"""The d-dimensional algebra as a graded tensor product of 1-D copies.

A generator is a tuple of 1-D generators, one per axis, graded by total
codimension.  Koszul signs are taken with the axes read from last to first
(``SIGN_ORDER = "reversed"``): the interchange sign of a product counts pairs
(factor i of the left argument, factor j of the right argument) with i < j, and
the boundary acting on axis i passes the factors on the axes after i.  Reading
the axes the other way is an isomorphic algebra (the isomorphism multiplies a
generator by the sign of reversing its factors); the reversed reading is the
one in which the triple product of three coordinate 2h-squares through a
common corner comes out with a negative coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Sequence

from .cells import (INTERVAL, POINT, Combination, Gen1D, Lattice1D, LINE, LatticeMismatch, canonical, codim,
                    gen_from_json, gen_to_json, lattice_from_json, lattice_to_json, ChainFormatError,
                    coeff_from_json, _fmt)
from .tia1d import boundary_gen, intersect_gen

GenD = tuple  # tuple[Gen1D, ...]

SIGN_ORDER = "reversed"


class NotInW(ValueError):
    """A factor that is neither a point nor a 2h-interval centred on a site."""


class ChainD(Combination):
    """Chain of d-dimensional generators; ``lattice`` is a tuple of per-axis lattices."""

    def __init__(self, terms=(), lattice: Sequence[Lattice1D] = (LINE,)):
        lattice = tuple(lattice)
        super().__init__(terms, lattice)
        if any(l.periodic for l in lattice):
            merged: dict = {}
            for g, c in self.terms.items():
                g = tuple(canonical(f, l) for f, l in zip(g, lattice))
                merged[g] = merged.get(g, Fraction(0)) + c
            self.terms = {g: c for g, c in merged.items() if c}
        for g in self.terms:
            if len(g) != len(lattice):
                raise ValueError(f"generator {g!r} has {len(g)} factors on a {len(lattice)}-axis lattice")

    @property
    def dim(self) -> int:
        return len(self.lattice)

    @classmethod
    def of(cls, g: GenD, c=1, lattice=None) -> "ChainD":
        return cls({tuple(g): c}, lattice or (LINE,) * len(g))


def codim_d(g: GenD) -> int:
    return sum(codim(f) for f in g)


def _check_lattices(lx, ly):
    if len(lx) != len(ly) or any(a.h != b.h or a.period != b.period for a, b in zip(lx, ly)):
        raise LatticeMismatch(f"{lx} != {ly}")


def interchange_sign(cx: Sequence[int], cy: Sequence[int], order: str = None) -> int:
    """Koszul sign of bringing (x1..xd)(y1..yd) into (x1 y1)..(xd yd) form."""
    order = order or SIGN_ORDER
    d = len(cx)
    if order == "reversed":
        t = sum(cx[i] * cy[j] for i in range(d) for j in range(i + 1, d))
    else:
        t = sum(cx[i] * cy[j] for j in range(d) for i in range(j + 1, d))
    return -1 if t % 2 else 1


def boundary_sign(c: Sequence[int], i: int, order: str = None) -> int:
    """Sign of the axis-i term of the boundary of a generator with factor codims ``c``."""
    order = order or SIGN_ORDER
    t = sum(c[i + 1:]) if order == "reversed" else sum(c[:i])
    return -1 if t % 2 else 1


@lru_cache(maxsize=1 << 20)
def _factor_product(f: Gen1D, g: Gen1D, lat: Lattice1D):
    return tuple(intersect_gen(f, g, lat).terms.items())


def intersect_gen_d(g: GenD, h: GenD, lattice, order: str = None) -> dict:
    factors = []
    for f, e, lat in zip(g, h, lattice):
        t = _factor_product(f, e, lat)
        if not t:
            return {}
        factors.append(t)
    s = interchange_sign([codim(f) for f in g], [codim(f) for f in h], order)
    out: dict = {}
    for combo in iproduct(*factors):
        c = Fraction(s)
        for _, v in combo:
            c *= v
        key = tuple(t for t, _ in combo)
        out[key] = out.get(key, 0) + c
    return out


def intersect_d(x: ChainD, y: ChainD, order: str = None) -> ChainD:
    _check_lattices(x.lattice, y.lattice)
    acc = []
    for g, c in x.terms.items():
        for h, d in y.terms.items():
            acc.extend((k, c * d * v) for k, v in intersect_gen_d(g, h, x.lattice, order).items())
    return ChainD(acc, x.lattice)


def boundary_d(x: ChainD, order: str = None) -> ChainD:
    acc = []
    for g, c in x.terms.items():
        cs = [codim(f) for f in g]
        for i, f in enumerate(g):
            s = boundary_sign(cs, i, order)
            for e, t in boundary_gen(f):
                acc.append((g[:i] + (t,) + g[i + 1:], c * s * e))
    return ChainD(acc, x.lattice)


# --- star on W --------------------------------------------------------------------------

def _star_factor(f: Gen1D) -> Gen1D:
    if f.kind == POINT:
        return Gen1D(INTERVAL, f.a - 1, f.a + 1, f.m, f.n)
    if f.kind == INTERVAL and f.b - f.a == 2:
        return Gen1D(POINT, f.a + 1, f.a + 1, f.m, f.n)
    raise NotInW(f"{f!r} is neither a point nor a 2h-interval")


def star_sign(g: GenD, order: str = None) -> int:
    """Sign making ``*g`` cut ``g`` positively: the product of the starred factors with
    the original ones then carries no Koszul sign overall."""
    c = [codim(f) for f in g]
    return interchange_sign([1 - k for k in c], c, order)


def star_gen(g: GenD, order: str = None) -> tuple[int, GenD]:
    return star_sign(g, order), tuple(_star_factor(f) for f in g)


def star_W(x: ChainD, order: str = None) -> ChainD:
    """Factor-wise swap of decorated points and centred 2h-intervals, with Koszul sign."""
    acc = []
    for g, c in x.terms.items():
        s, sg = star_gen(g, order)
        acc.append((sg, s * c))
    return ChainD(acc, x.lattice)


# --- JSON -----------------------------------------------------------------------------------

def chaind_to_json(x: ChainD) -> dict:
    return {
        "lattice": [lattice_to_json(l) for l in x.lattice],
        "terms": [{"coeff": _fmt(c), "factors": [gen_to_json(f) for f in g]} for g, c in x],
    }


def chaind_from_json(d) -> ChainD:
    if not isinstance(d, dict):
        raise ChainFormatError("document: expected an object")
    lats = d.get("lattice")
    if not isinstance(lats, list) or not lats:
        raise ChainFormatError("lattice: expected a non-empty list of per-axis lattices")
    lattice = tuple(lattice_from_json(l, f"lattice[{i}]") for i, l in enumerate(lats))
    terms = d.get("terms", [])
    if not isinstance(terms, list):
        raise ChainFormatError("terms: expected a list")
    acc = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise ChainFormatError(f"terms[{i}]: expected an object")
        fs = t.get("factors")
        if not isinstance(fs, list) or len(fs) != len(lattice):
            raise ChainFormatError(f"terms[{i}].factors: expected {len(lattice)} generators")
        g = tuple(gen_from_json(f, l, f"terms[{i}].factors[{k}]") for k, (f, l) in enumerate(zip(fs, lattice)))
        acc.append((g, coeff_from_json(t.get("coeff"), f"terms[{i}].coeff")))
    return ChainD(acc, lattice)
