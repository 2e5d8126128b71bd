import random

import pytest

from skewps import FqSeries, Matrix, ParseError, Product, Zp
from skewps.reparam import random_series
from skewps.samples import config_twist, iso_context
from skewps.serialize import (context_from_json, dumps, element_from_json, iso_context_from_json,
                              loads, parse_ring, ring_from_json, series_from_json,
                              series_to_json, twist_from_json)


RINGS = [Zp(2, 8), Zp(3, 5), FqSeries(4, 6), FqSeries(9, 4), Matrix(2, Zp(2, 6)),
         Matrix(2, FqSeries(4, 4)), Product((Zp(2, 4), FqSeries(4, 4)))]


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_ring_round_trip(R):
    assert ring_from_json(R.describe()) == R
    assert parse_ring(dumps(R.describe())) == R


def test_compact_ring_forms():
    assert parse_ring("Matrix(2,Zp(2,8))") == Matrix(2, Zp(2, 8))
    assert parse_ring(" FqSeries(4, 8) ") == FqSeries(4, 8)
    assert parse_ring("Product(Zp(2,4),Zp(2,4))") == Product((Zp(2, 4), Zp(2, 4)))


@pytest.mark.parametrize("text, pos", [
    ("Zq(2,8)", 0),
    ("Matrix(2,Zp(2,8)", 16),
    ("Zp(2,8) x", 7),
    ("Zp(4,8)", 0),
])
def test_compact_ring_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_ring(text)
    assert info.value.pos == pos


def test_malformed_json_position():
    with pytest.raises(ParseError) as info:
        loads('{"ring": "Zp(2,8)", ')
    assert info.value.pos == 20


def test_shape_errors_carry_path():
    with pytest.raises(ParseError, match=r"\$\.inner\.kind"):
        ring_from_json({"kind": "Matrix", "n": 2, "inner": {"kind": "Zq"}})
    with pytest.raises(ParseError, match=r"\$\.coeffs\[1\]"):
        series_from_json({"ring": "Zp(2,8)", "coeffs": [1, "two"]})
    with pytest.raises(ParseError, match="unknown automorphism"):
        twist_from_json(Zp(2, 8), {"sigma": [{"spin": 1}]})
    with pytest.raises(ParseError, match="without a ring context"):
        series_from_json({"coeffs": [1]})


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_element_round_trip(R):
    rng = random.Random(0)
    for i in range(20):
        e = R.random(rng, prec=R.N - i % R.N)
        back = element_from_json(R, loads(dumps(e.to_json())))
        assert back == e and back.prec == e.prec


def test_integer_scalars_in_matrix_rings():
    M = Matrix(2, Zp(2, 8))
    assert element_from_json(M, 3) == M.element([[3, 0], [0, 3]])
    assert element_from_json(M, 0).is_zero()


@pytest.mark.parametrize("R", [Zp(2, 8), FqSeries(4, 6), Matrix(2, FqSeries(4, 4)),
                               Matrix(2, Zp(2, 6))], ids=str)
def test_series_and_twist_round_trip(R):
    rng = random.Random(1)
    for _ in range(5):
        tw = config_twist(R, rng)
        s = random_series(R, tw, R.N, rng)
        text = dumps(series_to_json(s, with_context=True))
        back = series_from_json(loads(text))
        assert back == s
        assert dumps(back.twist.to_json()) == dumps(tw.to_json())
        # canonical form is stable
        assert dumps(series_to_json(back, with_context=True)) == text


def test_context_defaults():
    ctx = context_from_json({"ring": "Zp(2,8)"})
    assert ctx.cap == 8
    assert ctx.twist.sigma.is_identity and ctx.twist.delta.is_zero
    s = series_from_json({"coeffs": [1, 2]}, ctx)
    assert s.cap == 8 and s.coeffs[1].data == 2


def test_iso_context_round_trip():
    rng = random.Random(2)
    ctx = iso_context(Zp(2, 8), rng)
    text = dumps(ctx.to_json())
    back = iso_context_from_json(loads(text))
    assert dumps(back.to_json()) == text
    with pytest.raises(ParseError, match="matrix ring"):
        iso_context_from_json({"ring": "Zp(2,8)", "a": 1, "tau": [], "u": 0})
