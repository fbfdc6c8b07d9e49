import numpy as np
import pytest
from hypothesis import given, strategies as st

from bidcodes.field_core import (
    ALPHA,
    ALPHA_SQ,
    dft,
    f4_add,
    f4_mul,
    hamming_weight,
    index_to_trits,
    trit_dot,
    trit_weight,
    trits_to_index,
)

f4 = st.integers(0, 3)


def test_f4_basic_identities():
    assert f4_mul(ALPHA, ALPHA) == ALPHA_SQ
    assert f4_mul(ALPHA, ALPHA_SQ) == 1
    assert f4_add(ALPHA, ALPHA_SQ) == 1
    assert f4_add(1, ALPHA) == ALPHA_SQ
    for x in range(4):
        assert f4_add(x, x) == 0
        assert f4_mul(x, 1) == x
        assert f4_mul(x, 0) == 0


@given(f4, f4, f4)
def test_f4_field_axioms(x, y, z):
    assert f4_mul(x, y) == f4_mul(y, x)
    assert f4_mul(x, f4_mul(y, z)) == f4_mul(f4_mul(x, y), z)
    assert f4_mul(x, f4_add(y, z)) == f4_add(f4_mul(x, y), f4_mul(x, z))


@given(st.integers(1, 6), st.data())
def test_trit_roundtrip(m, data):
    idx = data.draw(st.integers(0, 3**m - 1))
    t = index_to_trits(idx, m)
    assert len(t) == m
    assert trits_to_index(t) == idx


def test_trit_examples():
    assert index_to_trits(5, 2) == (2, 1)   # 5 = 2 + 1*3
    assert trits_to_index((2, 1)) == 5
    assert trit_weight((2, 0, 1)) == 2
    assert trit_dot((1, 2), (2, 2)) == (2 + 4) % 3


def test_trit_errors():
    with pytest.raises(ValueError):
        index_to_trits(9, 2)
    with pytest.raises(ValueError):
        index_to_trits(-1, 2)
    with pytest.raises(ValueError):
        trit_dot((1, 2), (1,))


@given(st.integers(1, 4), st.data())
def test_trit_dot_symmetric_linear(m, data):
    ints = st.integers(0, 3**m - 1)
    a, b, c = data.draw(ints), data.draw(ints), data.draw(ints)
    ta, tb, tc = (index_to_trits(x, m) for x in (a, b, c))
    assert trit_dot(ta, tb) == trit_dot(tb, ta)
    tsum = tuple((x + y) % 3 for x, y in zip(tb, tc))
    assert trit_dot(ta, tsum) == (trit_dot(ta, tb) + trit_dot(ta, tc)) % 3


def test_dft_delta_and_allones():
    m = 2
    delta = np.zeros(9, dtype=np.uint8)
    delta[0] = 1
    assert (dft(delta) == 1).all()
    ones = np.ones(9, dtype=np.uint8)
    spec = dft(ones)
    assert spec[0] == 1 and not spec[1:].any()


@given(st.integers(1, 3), st.data())
def test_dft_additive(m, data):
    n = 3**m
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    a = np.array(data.draw(bits), dtype=np.uint8)
    b = np.array(data.draw(bits), dtype=np.uint8)
    assert (dft(a ^ b) == (dft(a) ^ dft(b))).all()


def test_dft_rejects_bad_length():
    with pytest.raises(ValueError):
        dft(np.ones(10, dtype=np.uint8))


def test_hamming_weight_polymorphic():
    assert hamming_weight(0b1011) == 3
    assert hamming_weight([1, 0, 1, 1, 0]) == 3
    assert hamming_weight(0) == 0
