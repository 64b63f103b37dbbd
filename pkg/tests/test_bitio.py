import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnersys.bitio import expected_length, parse_bitmask, serialize_bitmask


def test_evens_window_byte():
    bits = [n % 2 == 0 for n in range(1, 9)]
    data = serialize_bitmask("Z", 1, 9, bits)
    assert data == b"FBM1 Z 1 9\n\xaa"


def test_empty_window():
    data = serialize_bitmask("Z", 5, 5, [])
    assert data == b"FBM1 Z 5 5\n"
    group, lo, hi, bits = parse_bitmask(data)
    assert (group, lo, hi) == ("Z", 5, 5) and len(bits) == 0


def test_multicoordinate_bounds():
    data = serialize_bitmask("Zd", (0, 0), (2, 3), [1, 0, 1, 0, 1, 0])
    group, lo, hi, bits = parse_bitmask(data)
    assert group == "Zd" and lo == (0, 0) and hi == (2, 3)
    np.testing.assert_array_equal(bits, [1, 0, 1, 0, 1, 0])


def test_length_mismatch():
    with pytest.raises(ValueError):
        serialize_bitmask("Z", 0, 4, [1, 0])
    assert expected_length((0, 0, 0), (2, 2, 4)) == 16


def test_bad_header_and_pad_bits():
    with pytest.raises(ValueError, match="bad bitmask header"):
        parse_bitmask(b"XXXX Z 0 1\n\x01")
    with pytest.raises(ValueError, match="payload length"):
        parse_bitmask(b"FBM1 Z 0 9\n\x00")
    with pytest.raises(ValueError, match="pad bits"):
        parse_bitmask(b"FBM1 Z 0 3\n\xff")


@settings(max_examples=1000, deadline=None)
@given(lo=st.integers(-1000, 1000), bits=st.lists(st.booleans(), max_size=80))
def test_roundtrip_property(lo, bits):
    data = serialize_bitmask("Z", lo, lo + len(bits), bits)
    group, plo, phi, pbits = parse_bitmask(data)
    assert group == "Z" and plo == lo and phi == lo + len(bits)
    assert [bool(b) for b in pbits] == [bool(b) for b in bits]
