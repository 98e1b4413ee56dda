from fractions import Fraction as F

import pytest

from tia.cells import LINE, Chain, Lattice1D, LatticeMismatch, infinitesimal as inf, interval as iv, point as pt
from tia.tia1d import boundary, in_ideal, intersect, intersect_gen, truncate


def C(*pairs, lattice=LINE):
    return Chain({g: F(c) for c, g in pairs}, lattice)


def test_boundary_examples():
    assert boundary(C((1, iv(0, 2, 1, 3)))) == C((1, pt(2, 0, 3)), (-1, pt(0, 1, 0)))
    assert boundary(C((1, inf(0)))) == C((1, pt(0, 1, 0)), (-1, pt(0, 0, 1)))
    assert not boundary(C((1, pt(0, 2, 5))))


@pytest.mark.parametrize("g, h, want", [
    (pt(1), iv(0, 2), C((1, pt(1)))),
    (pt(0), iv(0, 1), C(("1/2", pt(0, 1, 0)))),
    (pt(1), iv(0, 1), C(("1/2", pt(1, 0, 1)))),
    (iv(0, 1), iv(1, 2), C(("1/2", inf(1)))),
    (iv(0, 1), iv(0, 1), C((1, iv(0, 1, 1, 1)))),
    (pt(0, 1, 0), iv(0, 1), C(("2/3", pt(0, 2, 0)))),
    (pt(0, 0, 1), iv(0, 1), C(("1/3", pt(0, 1, 1)))),
    (pt(1, 1, 0), iv(0, 1), C(("1/3", pt(1, 1, 1)))),
    (pt(1, 0, 1), iv(0, 1), C(("2/3", pt(1, 0, 2)))),
    (pt(0), iv(0, 1, 1, 3), C(("1/3", pt(0, 2, 0)))),
    (pt(0), inf(0), C(("1/3", pt(0, 1, 1)))),
    (pt(0, 1, 1), inf(0, 2, 3), C(("1/6", pt(0, 4, 5)))),
    (pt(0), pt(5), C()),
    (pt(0), pt(0), C()),
    (pt(0), inf(1), C()),
    (inf(0), iv(1, 2), C()),
])
def test_product_table(g, h, want):
    assert intersect_gen(g, h) == want
    assert intersect_gen(h, g) == want


def test_overlap_cases():
    # shared left end, different right ends: the shorter interval survives
    assert intersect_gen(iv(0, 1, 1, 2), iv(0, 2, 3, 4)) == C((1, iv(0, 1, 5, 2)))
    assert intersect_gen(iv(0, 3, 1, 2), iv(1, 2, 3, 4)) == C((1, iv(1, 2, 3, 4)))
    assert intersect_gen(iv(0, 2, 1, 2), iv(1, 3, 3, 4)) == C((1, iv(1, 2, 3, 2)))
    assert intersect_gen(iv(0, 2), iv(3, 4)) == C()


def test_infinitesimal_pair_hand_value():
    # C(m+n+2,m+1) C(m'+n'+2,m'+1) / C(m+n+m'+n'+4, m+m'+2) at (0,0),(0,0): 2*2/6
    assert intersect_gen(inf(0), inf(0)) == C(("2/3", inf(0, 1, 1)))


def test_bilinear():
    a, b, c = C((2, pt(0)), ("1/2", iv(0, 1))), C((1, iv(0, 2))), C((1, iv(0, 1)), (3, inf(1)))
    assert intersect(a + b, c) == intersect(a, c) + intersect(b, c)
    assert not intersect(C(), c)


def test_periodic_double_contact():
    lat = Lattice1D(period=3)
    got = intersect(C((1, iv(0, 2)), lattice=lat), C((1, iv(1, 3)), lattice=lat))
    # one translate overlaps on [1,2]; the other shares only the site 0 == 3
    assert got == C((1, iv(1, 2)), ("1/2", inf(0)), lattice=lat)


def test_lattice_mismatch():
    with pytest.raises(LatticeMismatch):
        intersect(C((1, pt(0))), C((1, pt(0)), lattice=Lattice1D(period=4)))


def test_truncate_examples():
    assert truncate(C((1, pt(0, 2, 2)), (1, pt(0, 0, 3))), 2) == C((1, pt(0, 0, 3)))
    assert not truncate(C((1, pt(0, 1, 0)), (1, iv(0, 3))), 0)
    sq = intersect(C((1, iv(0, 1, 1, 1))), C((1, iv(0, 1, 1, 1))))
    assert sq == C((1, iv(0, 1, 3, 3)))
    assert not truncate(sq, 3)
    with pytest.raises(ValueError):
        truncate(sq, -1)


def test_ideal_witness_boundary_leaves():
    for K in range(1, 5):
        g = iv(0, 1, K, K)
        assert in_ideal(g, K)
        assert any(not in_ideal(t, K) for t in boundary(C((1, g))).terms)
