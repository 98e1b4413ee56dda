"""Lattices, decorated one-dimensional generators and formal chains."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

POINT = "point"
INTERVAL = "interval"
INFINITESIMAL = "infinitesimal"
KINDS = (POINT, INTERVAL, INFINITESIMAL)


class LatticeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Lattice1D:
    """Line (``period=None``) or circle of ``period`` sites, spacing ``h``.

    Positions are integers in units of ``h``; no coefficient depends on ``h``.
    """

    h: Fraction = Fraction(1)
    period: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "h", Fraction(self.h))
        if self.h <= 0:
            raise ValueError("lattice spacing must be positive")
        if self.period is not None and self.period < 3:
            raise ValueError("periodic lattices need at least 3 sites")

    @property
    def periodic(self) -> bool:
        return self.period is not None


LINE = Lattice1D()


@dataclass(frozen=True, order=True)
class Gen1D:
    """A decorated cell: point, regular interval [a, b] or infinitesimal at a.

    On a periodic lattice ``a`` is reduced into [0, period) and an interval
    keeps ``b = a + length`` with 1 <= length <= period - 1.
    """

    kind: str
    a: int
    b: int
    m: int = 0
    n: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.m < 0 or self.n < 0:
            raise ValueError("decorations must be non-negative")
        if self.kind == INTERVAL:
            if not self.a < self.b:
                raise ValueError("interval needs a < b")
        elif self.a != self.b:
            raise ValueError(f"{self.kind} carries a single position")

    def __repr__(self):
        sym = {POINT: "P", INTERVAL: "x", INFINITESIMAL: "x"}[self.kind]
        where = f"{self.a}" if self.kind == POINT else f"{self.a},{self.b}"
        return f"{sym}[{where}]^{self.m},{self.n}"

    @property
    def decoration(self) -> tuple[int, int]:
        return (self.m, self.n)

    def shifted(self, k: int) -> "Gen1D":
        return Gen1D(self.kind, self.a + k, self.b + k, self.m, self.n)

    def with_decoration(self, m: int, n: int) -> "Gen1D":
        return Gen1D(self.kind, self.a, self.b, m, n)


def point(a: int, m: int = 0, n: int = 0) -> Gen1D:
    return Gen1D(POINT, a, a, m, n)


def interval(a: int, b: int, m: int = 0, n: int = 0) -> Gen1D:
    return Gen1D(INTERVAL, a, b, m, n)


def infinitesimal(a: int, m: int = 0, n: int = 0) -> Gen1D:
    return Gen1D(INFINITESIMAL, a, a, m, n)


def codim(g: Gen1D) -> int:
    return 1 if g.kind == POINT else 0


def decoration_total(g: Gen1D) -> int:
    return g.m + g.n


def canonical(g: Gen1D, lattice: Lattice1D) -> Gen1D:
    """Reduce a generator onto the fundamental domain of a periodic lattice."""
    if not lattice.periodic:
        return g
    N = lattice.period
    if g.kind == INTERVAL:
        length = g.b - g.a
        if not 1 <= length <= N - 1:
            raise ValueError(f"interval length {length} does not fit on a circle of {N} sites")
    return g.shifted((g.a % N) - g.a)


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Combination:
    """Finite formal linear combination of hashable generators over Q.

    Values are treated as immutable: every operation returns a new instance.
    Zero coefficients are never stored, so equality is equality of term maps.
    """

    __slots__ = ("terms", "lattice")

    def __init__(self, terms: Mapping | Iterable = (), lattice=None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for g, c in items:
            c = Fraction(c)
            if c:
                acc[g] = acc.get(g, Fraction(0)) + c
        self.terms = {g: c for g, c in acc.items() if c}
        self.lattice = lattice

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.lattice != other.lattice:
            raise LatticeMismatch(f"{self.lattice} != {other.lattice}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, Fraction(0)) + c
        return type(self)(out, self.lattice)

    def __neg__(self):
        return type(self)({g: -c for g, c in self.terms.items()}, self.lattice)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Fraction(c)
        return type(self)({g: c * v for g, v in self.terms.items()}, self.lattice)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.lattice == other.lattice and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.lattice))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def coeff(self, g) -> Fraction:
        return self.terms.get(g, Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{_fmt(c)}*{g!r}" for g, c in self)


class Chain(Combination):
    """Chain in the one-dimensional algebra on a single :class:`Lattice1D`."""

    def __init__(self, terms=(), lattice: Lattice1D = LINE):
        super().__init__(terms, lattice)
        if lattice.periodic:
            self.terms = _merge_canonical(self.terms, lattice)

    @classmethod
    def of(cls, g: Gen1D, c=1, lattice: Lattice1D = LINE) -> "Chain":
        return cls({g: c}, lattice)

    @classmethod
    def zero(cls, lattice: Lattice1D = LINE) -> "Chain":
        return cls({}, lattice)


def _merge_canonical(terms, lattice):
    out: dict = {}
    for g, c in terms.items():
        g = canonical(g, lattice)
        out[g] = out.get(g, Fraction(0)) + c
    return {g: c for g, c in out.items() if c}


def chain_add(x: Chain, y: Chain) -> Chain:
    return x + y


def chain_scale(c, x: Chain) -> Chain:
    return c * x


# --- JSON -------------------------------------------------------------------

class ChainFormatError(ValueError):
    """Malformed chain document; the message names the offending field."""


def lattice_to_json(lat: Lattice1D) -> dict:
    return {"h": _fmt(lat.h), "period": lat.period}


def lattice_from_json(d, where="lattice") -> Lattice1D:
    if not isinstance(d, dict):
        raise ChainFormatError(f"{where}: expected an object")
    try:
        h = Fraction(str(d.get("h", "1")))
    except (ValueError, ZeroDivisionError):
        raise ChainFormatError(f"{where}.h: not a rational") from None
    period = d.get("period")
    if period is not None and (not isinstance(period, int) or isinstance(period, bool)):
        raise ChainFormatError(f"{where}.period: expected an integer or null")
    try:
        return Lattice1D(h, period)
    except ValueError as e:
        raise ChainFormatError(f"{where}: {e}") from None


def gen_to_json(g: Gen1D) -> dict:
    d = {"kind": g.kind, "a": g.a}
    if g.kind == INTERVAL:
        d["b"] = g.b
    d["m"], d["n"] = g.m, g.n
    return d


def gen_from_json(d, lattice: Lattice1D, where="gen") -> Gen1D:
    if not isinstance(d, dict):
        raise ChainFormatError(f"{where}: expected an object")
    kind = d.get("kind")
    if kind not in KINDS:
        raise ChainFormatError(f"{where}.kind: expected one of {', '.join(KINDS)}")
    vals = {}
    for key in ("a", "m", "n") + (("b",) if kind == INTERVAL else ()):
        v = d.get(key, 0 if key in "mn" else None)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ChainFormatError(f"{where}.{key}: expected an integer")
        vals[key] = v
    a, m, n = vals["a"], vals["m"], vals["n"]
    b = vals.get("b", a)
    if kind == INTERVAL and lattice.periodic:
        b = a + (b - a) % lattice.period
    try:
        return canonical(Gen1D(kind, a, b, m, n), lattice)
    except ValueError as e:
        raise ChainFormatError(f"{where}: {e}") from None


def coeff_from_json(v, where) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ChainFormatError(f"{where}: expected a rational string 'p/q'")
    if isinstance(v, str) and "." in v:
        raise ChainFormatError(f"{where}: decimal coefficients are not allowed")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ChainFormatError(f"{where}: not a rational") from None


def chain_to_json(x: Chain) -> dict:
    return {
        "lattice": lattice_to_json(x.lattice),
        "terms": [{"coeff": _fmt(c), "gen": gen_to_json(g)} for g, c in x],
    }


def chain_from_json(d) -> Chain:
    if not isinstance(d, dict):
        raise ChainFormatError("document: expected an object")
    lat = lattice_from_json(d.get("lattice", {"h": "1", "period": None}))
    terms = d.get("terms", [])
    if not isinstance(terms, list):
        raise ChainFormatError("terms: expected a list")
    acc = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise ChainFormatError(f"terms[{i}]: expected an object")
        acc.append((gen_from_json(t.get("gen"), lat, f"terms[{i}].gen"),
                    coeff_from_json(t.get("coeff"), f"terms[{i}].coeff")))
    return Chain(acc, lat)
