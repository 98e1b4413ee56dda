"""Fluid algebra on zero-decorated 2h-squares of a periodic 3-D lattice.

V is spanned by the coexact combinations of 2h-squares, realised as the
image of b -> *(boundary b).  On V:

    (a, b)    = #(*a . b)          metric
    <a, b>    = #(a . boundary b)  linking form
    {a, b, c} = #(a . b . c)       triple form

where ``.`` is the transverse product and ``#`` sends a decorated point to
delta ** (sum of its six decorations).  The operator D solves <X, Y> = (DX, Y)
and the Euler flow is (X', Z) = {X, DX, Z} for every Z.

Structure constants are exact; the flow itself runs in double precision.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations

import numpy as np
import scipy.linalg

from .cells import INTERVAL, POINT, Gen1D, Lattice1D, canonical, point
from .linalg import inertia, independent_rows, is_symmetric, ldl_pivots, matmul, solve, transpose
from .tensor import ChainD, boundary_d, intersect_d, star_W

log = logging.getLogger(__name__)


class FluidError(ValueError):
    pass


class MidpointDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class Augmentation:
    delta: Fraction = Fraction(1)

    def __post_init__(self):
        d = Fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if not 0 < d <= 1:
            raise ValueError("delta must lie in (0, 1]")


def augment(x: ChainD, aug: Augmentation) -> Fraction:
    total = Fraction(0)
    for g, c in x.terms.items():
        if any(f.kind != POINT for f in g):
            raise FluidError(f"augmentation is defined on points only, got {g!r}")
        total += c * aug.delta ** sum(f.m + f.n for f in g)
    return total


# --- the 2h complex -----------------------------------------------------------------------

def _stick(c: int, lat: Lattice1D) -> Gen1D:
    return canonical(Gen1D(INTERVAL, c - 1, c + 1), lat)


def build_2h_complex(N: int) -> dict[int, list[tuple]]:
    """Zero-decorated 2h cells by dimension; the cell of dimension k at vertex v has
    2h-intervals on k axes and points on the others."""
    if N < 3:
        raise FluidError("the 2h complex needs N >= 3")
    lat = Lattice1D(1, N)
    verts = [(i, j, k) for i in range(N) for j in range(N) for k in range(N)]
    cells: dict[int, list[tuple]] = {k: [] for k in range(4)}
    for k in range(4):
        for axes in combinations(range(3), k):
            for v in verts:
                cells[k].append(tuple(_stick(v[i], lat) if i in axes else point(v[i]) for i in range(3)))
    return cells


def lattice3(N: int):
    return (Lattice1D(1, N),) * 3


def coexact_basis(N: int, squares=None) -> tuple[list[ChainD], list[dict]]:
    """Independent vectors spanning the image of b -> *(boundary b) on 2h-squares.

    Returns the basis as chains and as sparse coordinate vectors over ``squares``.
    """
    squares = squares if squares is not None else build_2h_complex(N)[2]
    lat = lattice3(N)
    index = {s: i for i, s in enumerate(squares)}
    chains, vecs = [], []
    for s in squares:
        v = star_W(boundary_d(ChainD.of(s, 1, lat)))
        chains.append(v)
        vecs.append({index[g]: c for g, c in v.terms.items()})
    keep = independent_rows(vecs)
    return [chains[i] for i in keep], [vecs[i] for i in keep]


# --- assembly ---------------------------------------------------------------------------

def _bilinear(vecs, table):
    n = len(vecs)
    out = [[Fraction(0)] * n for _ in range(n)]
    for p in range(n):
        for q in range(n):
            acc = Fraction(0)
            for i, a in vecs[p].items():
                row = table[i]
                for j, b in vecs[q].items():
                    t = row.get(j)
                    if t:
                        acc += a * b * t
            out[p][q] = acc
    return out


def _orientation(s) -> int:
    return next(i for i, f in enumerate(s) if f.kind == POINT)


def _fingerprint(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def _q(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True, eq=False)
class FluidAlgebra:
    N: int
    aug: Augmentation
    squares: list
    basis: list            # list[ChainD]
    vectors: list          # sparse coordinates of the basis over ``squares``
    gram: list
    linking: list
    triple: dict           # {(p, q, r): value} for p < q < r, alternating extension implied
    D: list
    boundary_defect: list = field(default_factory=list)  # #(boundary(a . b)) over basis pairs

    @property
    def dim(self) -> int:
        return len(self.basis)

    def triple_value(self, p: int, q: int, r: int) -> Fraction:
        idx = (p, q, r)
        if len(set(idx)) < 3:
            return Fraction(0)
        order = sorted(range(3), key=lambda k: idx[k])
        inversions = sum(order[i] > order[j] for i in range(3) for j in range(i + 1, 3))
        v = self.triple.get(tuple(sorted(idx)), Fraction(0))
        return -v if inversions % 2 else v

    def definiteness(self) -> dict:
        piv = ldl_pivots(self.gram)
        pos, neg, zero = sum(x > 0 for x in piv), sum(x < 0 for x in piv), sum(x == 0 for x in piv)
        status = "positive definite" if pos == len(piv) else ("singular" if zero else "indefinite")
        return {"status": status, "positive": pos, "negative": neg, "zero": zero,
                "min_pivot": _q(min(piv)) if piv else None}

    def report(self) -> dict:
        return {
            "N": self.N,
            "delta": _q(self.aug.delta),
            "squares": len(self.squares),
            "dim_V": self.dim,
            "gram_symmetric": is_symmetric(self.gram),
            "linking_symmetric": is_symmetric(self.linking),
            "boundary_condition_holds": all(x == 0 for row in self.boundary_defect for x in row),
            "triple_nonzeros": len(self.triple),
            "definiteness": self.definiteness(),
            "checksums": {
                "gram": _fingerprint([[_q(x) for x in r] for r in self.gram]),
                "linking": _fingerprint([[_q(x) for x in r] for r in self.linking]),
                "triple": _fingerprint(sorted((list(k), _q(v)) for k, v in self.triple.items())),
                "D": None if self.D is None else _fingerprint([[_q(x) for x in r] for r in self.D]),
            },
        }

    # numeric views, built once
    @cached_property
    def _numeric(self):
        if self.D is None:
            raise FluidError("no dynamics on a singular metric")
        G = np.array([[float(x) for x in r] for r in self.gram])
        L = np.array([[float(x) for x in r] for r in self.linking])
        D = np.array([[float(x) for x in r] for r in self.D])
        ps, qs, rs, vs = [], [], [], []
        for (p, q, r), v in self.triple.items():
            for perm in permutations(range(3)):
                idx = ((p, q, r)[perm[0]], (p, q, r)[perm[1]], (p, q, r)[perm[2]])
                inv = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
                ps.append(idx[0]); qs.append(idx[1]); rs.append(idx[2])
                vs.append(-float(v) if inv % 2 else float(v))
        T = (np.array(ps, dtype=np.int64), np.array(qs, dtype=np.int64),
             np.array(rs, dtype=np.int64), np.array(vs))
        return G, L, D, T, scipy.linalg.cho_factor(G)


def build_fluid_algebra(N: int, aug: Augmentation = Augmentation(), strict: bool = True) -> FluidAlgebra:
    """Assemble V and its three forms.  A singular metric raises FluidError when
    ``strict``; otherwise the algebra is returned with ``D = None`` so that the
    degeneracy can be reported."""
    if N < 3:
        raise FluidError("the fluid algebra needs N >= 3")
    lat = lattice3(N)
    squares = build_2h_complex(N)[2]
    basis, vecs = coexact_basis(N, squares)
    nsq = len(squares)
    log.info("N=%d: %d squares, dim V = %d", N, nsq, len(basis))
    sq = [ChainD.of(s, 1, lat) for s in squares]
    stars = [star_W(c) for c in sq]
    bds = [boundary_d(c) for c in sq]

    gram_sq = [dict() for _ in range(nsq)]
    link_sq = [dict() for _ in range(nsq)]
    defect_sq = [dict() for _ in range(nsq)]
    for i in range(nsq):
        for j in range(nsq):
            g = augment(intersect_d(stars[i], sq[j]), aug)
            if g:
                gram_sq[i][j] = g
            l = augment(intersect_d(sq[i], bds[j]), aug)
            if l:
                link_sq[i][j] = l
            e = augment(boundary_d(intersect_d(sq[i], sq[j])), aug)
            if e:
                defect_sq[i][j] = e

    gram = _bilinear(vecs, gram_sq)
    linking = _bilinear(vecs, link_sq)
    defect = _bilinear(vecs, defect_sq)
    if not is_symmetric(gram):
        log.warning("metric is not symmetric")

    # triple products need one square of each orientation
    by_or = [[i for i, s in enumerate(squares) if _orientation(s) == k] for k in range(3)]
    contains = [[] for _ in range(nsq)]
    for p, v in enumerate(vecs):
        for i, a in v.items():
            contains[i].append((p, a))
    raw: dict = {}
    for i in by_or[0]:
        for j in by_or[1]:
            ij = intersect_d(sq[i], sq[j])
            if not ij:
                continue
            for k in by_or[2]:
                t = augment(intersect_d(ij, sq[k]), aug)
                if not t:
                    continue
                for p, a in contains[i]:
                    for q, b in contains[j]:
                        ab = a * b * t
                        for r, c in contains[k]:
                            key = (p, q, r)
                            raw[key] = raw.get(key, 0) + ab * c
    triple: dict = {}
    for key in {tuple(sorted(k)) for k in raw if len(set(k)) == 3}:
        acc = Fraction(0)
        for perm in permutations(range(3)):
            inv = sum(perm[a] > perm[b] for a in range(3) for b in range(a + 1, 3))
            v = raw.get((key[perm[0]], key[perm[1]], key[perm[2]]), 0)
            acc += -v if inv % 2 else v
        if acc:
            triple[key] = acc

    pos, neg, zero = inertia(gram)
    if zero:
        msg = f"metric is singular on V (inertia {pos}, {neg}, {zero})"
        if strict:
            raise FluidError(msg)
        log.warning(msg)
        return FluidAlgebra(N, aug, squares, basis, vecs, gram, linking, triple, None, defect)
    D = solve(gram, linking)
    return FluidAlgebra(N, aug, squares, basis, vecs, gram, linking, triple, D, defect)


# --- dynamics --------------------------------------------------------------------------------

def euler_rhs(F: FluidAlgebra, X: np.ndarray) -> np.ndarray:
    """Velocity of the Euler flow: solves gram . Xdot = T(X, DX, .)."""
    G, L, D, (p, q, r, v), cho = F._numeric
    X = np.asarray(X, dtype=float)
    Y = D @ X
    t = np.bincount(r, weights=v * X[p] * Y[q], minlength=F.dim)
    return scipy.linalg.cho_solve(cho, t, check_finite=False)


def energy(F: FluidAlgebra, X) -> float:
    G = F._numeric[0]
    return float(X @ G @ X)


def helicity(F: FluidAlgebra, X) -> float:
    L = F._numeric[1]
    return float(X @ L @ X)


def random_state(F: FluidAlgebra, seed: int) -> np.ndarray:
    """Seeded random coexact vector with unit metric norm."""
    X = np.random.default_rng(seed).standard_normal(F.dim)
    return X / np.sqrt(energy(F, X))


def _rk4(F, X, dt):
    k1 = euler_rhs(F, X)
    k2 = euler_rhs(F, X + 0.5 * dt * k1)
    k3 = euler_rhs(F, X + 0.5 * dt * k2)
    k4 = euler_rhs(F, X + dt * k3)
    return X + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _midpoint(F, X, dt, step, tol=1e-13, max_iter=50):
    with np.errstate(over="ignore", invalid="ignore"):
        Xn = X + dt * euler_rhs(F, X)
    for _ in range(max_iter):
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = X + dt * euler_rhs(F, 0.5 * (X + Xn)) if np.isfinite(Xn).all() else Xn
        if not np.isfinite(nxt).all():
            raise MidpointDiverged(f"implicit midpoint blew up at step {step} (dt={dt})")
        delta = np.max(np.abs(nxt - Xn))
        Xn = nxt
        if delta <= tol * max(1.0, np.max(np.abs(Xn))):
            return Xn
    raise MidpointDiverged(f"implicit midpoint did not converge at step {step} (dt={dt})")


METHODS = ("rk4", "implicit_midpoint")


def integrate(F: FluidAlgebra, X0, dt: float, steps: int, method: str = "implicit_midpoint") -> list[dict]:
    """Trajectory records {step, time, X, energy, helicity} including the initial state."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    X = np.array(X0, dtype=float)
    out = [{"step": 0, "time": 0.0, "X": X.copy(), "energy": energy(F, X), "helicity": helicity(F, X)}]
    for s in range(1, steps + 1):
        X = _rk4(F, X, dt) if method == "rk4" else _midpoint(F, X, dt, s)
        out.append({"step": s, "time": s * dt, "X": X.copy(), "energy": energy(F, X), "helicity": helicity(F, X)})
    return out


def write_run(records: list[dict], csv_path: str, json_path: str, meta: dict = None) -> None:
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "time", "energy", "helicity"])
        for r in records:
            w.writerow([r["step"], repr(r["time"]), repr(r["energy"]), repr(r["helicity"])])
    last = records[-1]
    doc = dict(meta or {})
    doc.update({"step": last["step"], "time": last["time"], "X": [float(x) for x in last["X"]],
                "energy": last["energy"], "helicity": last["helicity"]})
    with open(json_path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
