from fractions import Fraction

import pytest

from tia.cells import (LINE, Chain, ChainFormatError, Lattice1D, LatticeMismatch, chain_add, chain_from_json,
                       chain_scale, chain_to_json, codim, decoration_total, infinitesimal, interval, point)


def test_chain_add_scale():
    x = Chain.of(point(0), 2) + Chain.of(interval(0, 1, 1, 0), Fraction(-1, 3))
    assert chain_add(x, Chain.zero()) == x
    assert not chain_add(x, chain_scale(-1, x))
    half = chain_scale(Fraction(1, 2), Chain.of(point(0)))
    assert chain_add(half, half) == Chain.of(point(0))


def test_lattice_mismatch():
    with pytest.raises(LatticeMismatch):
        chain_add(Chain.of(point(0)), Chain.of(point(0), 1, Lattice1D(period=5)))


def test_codim_and_total():
    assert codim(point(0, 2, 3)) == 1
    assert codim(interval(0, 1)) == 0
    assert codim(infinitesimal(0, 1, 1)) == 0
    assert decoration_total(point(0, 1, 1)) == 2
    assert decoration_total(interval(0, 2, 3, 0)) == 3
    assert decoration_total(point(0)) == 0


def test_generator_validation():
    with pytest.raises(ValueError):
        interval(2, 1)
    with pytest.raises(ValueError):
        point(0, -1, 0)
    with pytest.raises(ValueError):
        Lattice1D(period=2)


def test_periodic_canonical():
    lat = Lattice1D(period=5)
    x = Chain.of(interval(4, 6), 1, lat) + Chain.of(interval(-1, 1), 1, lat) + Chain.of(point(7), 1, lat)
    assert x == Chain({interval(4, 6): 2, point(2): 1}, lat)
    with pytest.raises(ValueError):
        Chain.of(interval(0, 5), 1, lat)


def test_json_roundtrip_spec_shape():
    doc = {"lattice": {"h": "1", "period": 8},
           "terms": [{"coeff": "-1/6", "gen": {"kind": "interval", "a": 0, "b": 2, "m": 1, "n": 0}}]}
    x = chain_from_json(doc)
    assert x.coeff(interval(0, 2, 1, 0)) == Fraction(-1, 6)
    assert chain_from_json(chain_to_json(x)) == x
    y = Chain({point(0, 1, 2): Fraction(3, 7), infinitesimal(1): 1}, LINE)
    assert chain_from_json(chain_to_json(y)) == y


@pytest.mark.parametrize("doc, field", [
    ({"lattice": {"h": "1"}, "terms": [{"coeff": "0.5", "gen": {"kind": "point", "a": 0}}]}, "terms[0].coeff"),
    ({"lattice": {"h": "1"}, "terms": [{"coeff": "1", "gen": {"kind": "blob", "a": 0}}]}, "terms[0].gen"),
    ({"lattice": {"h": "1", "period": 2}, "terms": []}, "lattice"),
    ({"lattice": {"h": "1", "period": 1.5}, "terms": []}, "lattice.period"),
    ({"lattice": {"h": "1"}, "terms": [{"coeff": "1", "gen": {"kind": "interval", "a": 0}}]}, "terms[0].gen.b"),
])
def test_json_errors_name_field(doc, field):
    with pytest.raises(ChainFormatError, match=field.replace("[", r"\[").replace("]", r"\]")):
        chain_from_json(doc)


def test_missing_lattice_means_line():
    assert chain_from_json({"terms": []}).lattice == LINE
