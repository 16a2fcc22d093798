import pytest
from hypothesis import given
from hypothesis import strategies as st

from nmmkit.snnmm import MAX_ID, canonical_nmm_id, is_nmm_id, nmm_id_decode, nmm_id_encode

ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def oracle_value(digits):
    # positional base 36, written out by hand
    return sum(ALPHABET.index(c) * 36 ** (3 - i) for i, c in enumerate(digits))


def test_extremes():
    assert nmm_id_decode("NMM-ZZZZ") == 1_679_615 == MAX_ID
    assert nmm_id_encode(1) == "NMM-0001"
    assert nmm_id_encode(MAX_ID) == "NMM-ZZZZ"


@pytest.mark.parametrize("code,value", [("NMM-0006", 6), ("NMM-000B", 11), ("NMM-000G", 16), ("NMM-000T", 29), ("NMM-0010", 36)])
def test_known_codes(code, value):
    assert nmm_id_decode(code) == value
    assert nmm_id_encode(value) == code


def test_lowercase_and_whitespace_accepted():
    assert nmm_id_decode(" nmm-000b ") == 11
    assert canonical_nmm_id("nmm-000g") == "NMM-000G"


@pytest.mark.parametrize("bad", ["NMM-0000", "NMM-12345", "NMX-0001", "0001", "NMM-00_1"])
def test_rejects_malformed(bad):
    assert not is_nmm_id(bad)
    with pytest.raises(ValueError):
        nmm_id_decode(bad)


@pytest.mark.parametrize("bad", [0, -1, MAX_ID + 1])
def test_encode_range(bad):
    with pytest.raises(ValueError):
        nmm_id_encode(bad)


def test_encode_type():
    with pytest.raises(TypeError):
        nmm_id_encode("12")
    with pytest.raises(TypeError):
        nmm_id_encode(True)


@given(st.text(alphabet=ALPHABET, min_size=4, max_size=4).filter(lambda s: s != "0000"))
def test_decode_matches_positional_oracle(digits):
    assert nmm_id_decode("NMM-" + digits) == oracle_value(digits)


@given(st.integers(min_value=1, max_value=MAX_ID))
def test_roundtrip(n):
    code = nmm_id_encode(n)
    assert len(code) == 8 and code.startswith("NMM-")
    assert nmm_id_decode(code) == n


def test_ordering_preserved():
    codes = [nmm_id_encode(n) for n in range(1, 2000, 7)]
    assert codes == sorted(codes)


def test_letter_o_is_a_digit_not_zero():
    # "O" is base-36 digit 24, so a misprinted "NMM-ooo6" names another material
    assert nmm_id_decode("NMM-ooo6") == 24 * 36**3 + 24 * 36**2 + 24 * 36 + 6
    assert nmm_id_decode("NMM-ooo6") != nmm_id_decode("NMM-0006")
