from fractions import Fraction as F
from math import sqrt

import pytest

from tia.cells import INFINITESIMAL, INTERVAL, LINE, POINT, Chain, Lattice1D, infinitesimal as inf, interval as iv, point as pt
from tia.exactnum import Poly1, integrate_definite
from tia.oracle import (Density, NotInBasis, boundary_via_integration, density_of, express_in_basis,
                        intersect_via_integration, intersect_via_integration_on, mc_estimate)
from tia.tia1d import boundary, intersect_gen
from tia.verify import gens_1d, oracle_check


def test_density_examples():
    assert density_of(pt(0)).poly == Poly1((F(1, 2),))
    assert density_of(pt(0, 1, 0)).poly == Poly1((F(1, 2), F(1, 2)))
    d = density_of(inf(0))
    assert d.kind == "simplex" and d.poly.coeffs == {(0, 0): F(1, 2)}


@pytest.mark.parametrize("g", [pt(0, 3, 1), iv(0, 2, 2, 4), inf(1, 3, 0), inf(0, 2, 2)])
def test_unit_mass(g):
    assert density_of(g).mass() == 1


def test_express_examples():
    d = Density("point", density_of(pt(2, 1, 0)).poly * F(1, 2), (2,))
    assert express_in_basis(d) == (F(1, 2), pt(2, 1, 0))
    # unnormalised (1+z)^{m+m'+1}(1-z)^n from a point at a left end
    c, g = express_in_basis(Density("point", Poly1.binomial_power(3, 2), (0,)))
    assert g == pt(0, 3, 2) and c == integrate_definite(Poly1.binomial_power(3, 2), -1, 1)
    with pytest.raises(NotInBasis):
        express_in_basis(Density("point", Poly1((1, 0, 1)), (0,)))


def test_oracle_examples():
    assert intersect_via_integration(iv(0, 1), iv(1, 2)) == Chain.of(inf(1), F(1, 2))
    for m, n, m2, n2 in [(0, 0, 0, 0), (1, 2, 3, 0), (2, 1, 0, 4)]:
        assert intersect_via_integration(iv(0, 1, m, n), iv(0, 2, m2, n2)) == Chain.of(iv(0, 1, m + m2 + 1, n))
    assert not intersect_via_integration(pt(0), pt(0))


def test_oracle_boundaries():
    assert boundary_via_integration(iv(0, 2, 1, 3)) == Chain({pt(2, 0, 3): 1, pt(0, 1, 0): -1})
    for m, n in [(0, 0), (2, 1), (0, 3)]:
        assert boundary_via_integration(inf(0, m, n)) == Chain({pt(0, m + 1, n): 1, pt(0, m, n + 1): -1})


def test_oracle_agreement_small_sweep():
    rep = oracle_check(2, 4)
    assert rep.ok, rep.lines()


def test_oracle_agreement_periodic():
    rep = oracle_check(1, 0, period=3)
    assert rep.ok, rep.lines()
    lat = Lattice1D(period=3)
    assert intersect_via_integration_on(iv(0, 2), iv(1, 3), lat) == intersect_gen(iv(0, 2), iv(1, 3), lat)


def test_oracle_mass_at_most_one():
    for g in gens_1d(1, 3):
        for h in gens_1d(1, 3):
            x = intersect_via_integration(g, h)
            assert sum(x.terms.values(), F(0)) <= 1


def test_mc_half():
    n = 10 ** 6
    est = mc_estimate(iv(0, 1), iv(1, 2), n, seed=1)
    p = est.get((INFINITESIMAL, 1), 0)
    assert abs(p - 0.5) < 3 * sqrt(0.25 / n)


def test_mc_disjoint_and_deterministic():
    assert mc_estimate(pt(0), iv(2, 3), 1000, seed=0) == {}
    assert mc_estimate(pt(0), iv(0, 1), 5000, seed=3) == mc_estimate(pt(0), iv(0, 1), 5000, seed=3)
    with pytest.raises(ValueError):
        mc_estimate(pt(0), iv(0, 1), 0, seed=0)
