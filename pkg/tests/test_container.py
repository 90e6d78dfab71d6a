import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eahn.adaptive_code import BYTES
from eahn.codec import eahn_encode
from eahn.container import (
    ENVELOPE_SIZE,
    MAGIC,
    ONLINE,
    RAW,
    V1,
    V2,
    compress,
    decode_codeword_fixed,
    decompress,
    encode_codeword_fixed,
    inspect_container,
    parse_v1,
    parse_v2,
    read_envelope,
    serialize_v1,
    serialize_v2,
)
from eahn.errors import CorruptStreamError, FormatError
from oracles import sliding_tally


def expected_v1_widths(x: bytes) -> list[int]:
    tally = sliding_tally(list(x), 1)
    ctxs = {c for c, _ in tally}
    fols = {s for _, s in tally}
    per_ctx = {}
    for (c, s), f in tally.items():
        per_ctx.setdefault(c, []).append(f)
    leny = sum(len(v) for v in per_ctx.values() if len(v) > 1)
    return [8, None, 8, 8, 256, 256, len(ctxs) * len(fols), leny, None]


@pytest.mark.parametrize("x", [b"abracadabra", b"aaaa", b"baabbabab", bytes(range(256)) * 3])
def test_v1_field_widths(x):
    out = eahn_encode(x, 1, BYTES)
    env, fields = inspect_container(serialize_v1(out))
    assert env == read_envelope(serialize_v1(out))
    assert [f.name for f in fields] == [f"Z{i}" for i in range(1, 10)]
    widths = [f.width for f in fields]
    exp = expected_v1_widths(x)
    for i in (0, 2, 3, 4, 5, 6):
        assert widths[i] == exp[i], fields[i].name
    assert widths[7] == exp[7] * (out.maxlc + 1)
    assert widths[8] == out.z.length
    assert widths[1] == int(fields[0].value)
    assert sum(widths) % 8 == 0
    # offsets are contiguous
    assert all(a.offset + a.width == b.offset for a, b in zip(fields, fields[1:]))


def test_v1_golden_bytes():
    blob = serialize_v1(eahn_encode(b"abracadabra", 1, BYTES))
    assert blob.hex() == (
        "ea4801010b00000000000000"
        "00" "61" "02"
        "0000000000000000000000007800200000000000000000000000000000000000"
        "0000000000000000000000007800200000000000000000000000000000000000"
        "7061082dd6"
    )


def test_v2_baab_fields():
    blob = serialize_v2(eahn_encode(b"baabbabab", 2, BYTES))
    env, fields = inspect_container(blob)
    assert (env.version, env.order, env.length) == (V2, 2, 9)
    by = {f.name: f for f in fields}
    assert by["prefix"].value == "6261"
    assert by["contexts"].value == "4"
    assert by["context keys"].width == 4 * 16
    assert by["follower bitmaps"].width == 4 * 256
    assert by["MAXLC"].value == "1"
    assert by["codewords"].width == 4 * 2
    assert by["payload"].width == 5
    assert parse_v2(blob) == eahn_encode(b"baabbabab", 2, BYTES)


def test_fixed_codeword_exhaustive():
    for maxlc in range(1, 7):
        seen = set()
        for n in range(1, maxlc + 1):
            for bits in itertools.product("01", repeat=n):
                cw = "".join(bits)
                enc = encode_codeword_fixed(cw, maxlc)
                assert len(enc) == maxlc + 1
                assert decode_codeword_fixed(enc) == cw
                seen.add(enc)
        assert len(seen) == 2 ** (maxlc + 1) - 2


def test_fixed_codeword_errors():
    with pytest.raises(ValueError):
        encode_codeword_fixed("", 3)
    with pytest.raises(ValueError):
        encode_codeword_fixed("0101", 3)


@pytest.mark.parametrize("mode", ["offline", "online"])
@pytest.mark.parametrize("fmt", ["auto", "v1", "v2", "raw"])
@pytest.mark.parametrize("order", [1, 2, 3])
def test_roundtrip_modes(english, mode, fmt, order):
    x = english[:3000]
    blob = compress(x, order, mode=mode, fmt=fmt)
    assert decompress(blob) == x
    version = read_envelope(blob).version
    if fmt == "raw":
        assert version == RAW
    elif mode == "online":
        assert version in (ONLINE, RAW)
    elif order == 1 and fmt != "v2":
        assert version in (V1, RAW)
    else:
        assert version in (V2, RAW)


@settings(max_examples=40, deadline=None)
@given(st.binary(max_size=500), st.integers(1, 3), st.sampled_from(["offline", "online"]))
def test_roundtrip_property(x, order, mode):
    blob = compress(x, order, mode=mode)
    assert decompress(blob) == x
    assert len(blob) <= ENVELOPE_SIZE + len(x)


def test_empty_and_short_inputs_are_raw():
    for x, n in [(b"", 1), (b"a", 2)]:
        blob = compress(x, n)
        assert read_envelope(blob).version == RAW
        assert decompress(blob) == x


def test_identical_bytes_tiny_container():
    blob = compress(b"\x00" * 10**6, 1)
    assert read_envelope(blob).version == V1
    assert parse_v1(blob).z.length == 0
    assert len(blob) < 100


def test_random_bytes_fall_back_to_raw():
    x = np.random.default_rng(0).integers(0, 256, 20000, dtype=np.uint8).tobytes()
    blob = compress(x, 1)
    assert len(blob) == len(x) + ENVELOPE_SIZE
    assert decompress(blob) == x


def test_bad_envelopes():
    good = compress(b"hello hello hello", 1)
    with pytest.raises(FormatError):
        decompress(b"PK" + good[2:])
    with pytest.raises(FormatError):
        decompress(MAGIC + b"\x09" + good[3:])
    with pytest.raises(CorruptStreamError):
        decompress(good[:7])
    with pytest.raises(CorruptStreamError):
        decompress(good[:-1])
    with pytest.raises(FormatError):
        parse_v2(good if read_envelope(good).version == V1 else serialize_v1(eahn_encode(b"ab", 1, BYTES)))


def test_nonzero_padding_rejected():
    blob = bytearray(serialize_v2(eahn_encode(b"baabbabab", 2, BYTES)))
    # body starts with pad count 3 then three zero bits
    blob[ENVELOPE_SIZE + 1] |= 0x80
    with pytest.raises(CorruptStreamError):
        decompress(bytes(blob))


def test_flipped_bits_never_crash(english):
    rng = np.random.default_rng(11)
    for trial in range(200):
        x = english[trial * 50 : trial * 50 + 200]
        blob = bytearray(compress(x, 1 + trial % 2, mode=("offline", "online")[trial % 3 == 0]))
        i = int(rng.integers(ENVELOPE_SIZE, len(blob)))
        blob[i] ^= 1 << int(rng.integers(8))
        try:
            decompress(bytes(blob))
        except (CorruptStreamError, FormatError):
            pass


def test_v1_v2_equivalent_and_reparse():
    rng = np.random.default_rng(300)
    for k in range(300):
        x = rng.integers(0, 2 + k % 30, int(rng.integers(1, 400)), dtype=np.uint8).tobytes()
        out = eahn_encode(x, 1, BYTES)
        b1, b2 = serialize_v1(out), serialize_v2(out)
        assert serialize_v1(out) == b1
        assert parse_v1(b1) == out and parse_v2(b2) == out
        assert decompress(b1) == decompress(b2) == x


def test_fixed_codeword_examples():
    assert encode_codeword_fixed("010", 3) == "0010"
    assert encode_codeword_fixed("1", 3) == "1001"
    assert encode_codeword_fixed("01", 2) == "001"
    assert decode_codeword_fixed("0010") == "010"
    assert decode_codeword_fixed("1001") == "1"
