import pytest
from hypothesis import given
from hypothesis import strategies as st

from artinres.laurent import ONE, T, LaurentPoly

polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5).map(LaurentPoly)


def test_parse_and_print():
    f = LaurentPoly.parse("1 - 2*t + t^-1")
    assert f.terms == {-1: 1, 0: 1, 1: -2}
    assert str(f) == "t^-1 + 1 - 2*t"
    assert LaurentPoly.parse(str(f)) == f
    assert str(LaurentPoly()) == "0"
    with pytest.raises(ValueError):
        LaurentPoly.parse("x + 1")
    with pytest.raises(ValueError):
        LaurentPoly.parse("t/2")


@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == LaurentPoly()
    assert f * ONE == f


@given(polys)
def test_roundtrip(f):
    assert LaurentPoly.parse(str(f)) == f
    assert LaurentPoly({int(k): v for k, v in f.to_dict().items()}) == f


@given(polys, polys)
def test_divides_products(f, g):
    if not f.is_zero():
        assert f.divides(f * g)
        assert f.divides(f * g * T.shift(-3))


def test_divides_examples():
    t2 = LaurentPoly.parse("t^2 - 1")
    assert LaurentPoly.parse("t - 1").divides(t2)
    assert LaurentPoly.parse("t^-1 - 1").divides(t2)
    assert not LaurentPoly.parse("2*t - 1").divides(t2)
    assert not LaurentPoly.parse("t - 2").divides(t2)
