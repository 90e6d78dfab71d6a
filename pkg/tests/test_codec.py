import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eahn.adaptive_code import BYTES, Alphabet, verify_prefix_contexts
from eahn.codec import EahnOutput, build_codebook, eahn_decode, eahn_encode, scan_frequencies
from eahn.bitio import Bits
from eahn.errors import CorruptStreamError
from oracles import sliding_tally

EX5 = "baabbabab"


def test_baab_order2_tuple():
    out = eahn_encode(EX5, 2)
    assert out.prefix == "ba"
    assert out.y == ("0", "1", "0", "1")
    assert str(out.z) == "01101"
    assert out.length == 9
    occ = out.occurrence()
    b = {(s, c): occ.get((s, tuple(c)), 0) for s in "ab" for c in ("aa", "ab", "ba", "bb")}
    assert b == {
        ("a", "aa"): 0, ("a", "ab"): 1, ("a", "ba"): 1, ("a", "bb"): 1,
        ("b", "aa"): 1, ("b", "ab"): 1, ("b", "ba"): 1, ("b", "bb"): 0,
    }


def test_baab_frequencies_and_codewords():
    model = scan_frequencies(EX5, 2)
    freq = {(s, c): model.count(s, c) for s in "ab" for c in ("aa", "ab", "ba", "bb")}
    assert freq == {
        ("a", "aa"): 0, ("a", "ab"): 1, ("a", "ba"): 1, ("a", "bb"): 1,
        ("b", "aa"): 1, ("b", "ab"): 1, ("b", "ba"): 2, ("b", "bb"): 0,
    }
    book = build_codebook(model)
    words = {(s, c): book.codeword(s, c) for s, c in freq if freq[(s, c)]}
    assert words == {
        ("a", "ab"): "0", ("b", "ab"): "1", ("a", "ba"): "0", ("b", "ba"): "1",
        ("a", "bb"): "", ("b", "aa"): "",
    }
    assert eahn_decode(eahn_encode(EX5, 2)) == EX5


@given(st.text(alphabet="xyz", max_size=60), st.integers(1, 3))
def test_scan_matches_sliding_tally(x, n):
    if len(x) < n:
        return
    model = scan_frequencies(x, n, Alphabet(tuple("xyz")))
    tally = sliding_tally(x, n)
    got = {}
    for ctx, followers, freqs in model.groups():
        for s, f in zip(followers, freqs):
            got[(ctx, s)] = f
    assert got == dict(tally)


def test_scan_sparse_path_matches_tally():
    # order 4 over bytes exceeds the dense limit, so the unique-based scan runs
    rng = np.random.default_rng(5)
    x = rng.integers(0, 6, 3000, dtype=np.uint8).tobytes()
    model = scan_frequencies(x, 4)
    tally = sliding_tally(list(x), 4)
    assert model.total == sum(tally.values())
    for (ctx, s), f in list(tally.items())[:200]:
        assert model.count(s, ctx) == f


def test_codebook_per_context_prefix():
    x = b"abracadabra, abracadabra, said the magician"
    table = build_codebook(scan_frequencies(x, 1)).table()
    assert verify_prefix_contexts(table)


@pytest.mark.parametrize(
    "x, n",
    [(b"a", 1), (b"aaaa", 1), (b"ab", 2), (b"abcabcabc", 3), ("banana", 1), ([1, 2, 1, 2, 3], 2)],
)
def test_roundtrip_small(x, n):
    out = eahn_encode(x, n)
    back = eahn_decode(out)
    assert back == x


def test_single_follower_costs_nothing():
    out = eahn_encode(b"a" * 1000, 1)
    assert out.z.length == 0
    assert out.y == ()


@settings(max_examples=60, deadline=None)
@given(st.binary(max_size=400), st.integers(1, 3))
def test_roundtrip_bytes(x, n):
    if len(x) < n:
        with pytest.raises(ValueError):
            eahn_encode(x, n)
        return
    assert eahn_decode(eahn_encode(x, n)) == x


def test_order_limits():
    with pytest.raises(ValueError):
        eahn_encode(b"abcdefgh", 7)
    with pytest.raises(ValueError):
        eahn_encode(b"abc", 0)


def _replace(out: EahnOutput, **kw) -> EahnOutput:
    fields = dict(order=out.order, alphabet=out.alphabet, prefix=out.prefix, pairs=out.pairs,
                  y=out.y, z=out.z, length=out.length)
    fields.update(kw)
    return EahnOutput(**fields)


def test_corrupt_streams_detected():
    out = eahn_encode(b"abracadabra abracadabra", 1, BYTES)
    with pytest.raises(CorruptStreamError):
        eahn_decode(_replace(out, z=out.z + Bits.from_str("1")))  # trailing bits
    with pytest.raises(CorruptStreamError):
        eahn_decode(_replace(out, z=Bits.from_str(str(out.z)[:-3])))  # exhausted
    with pytest.raises(CorruptStreamError):
        eahn_decode(_replace(out, y=out.y[:-1]))
    with pytest.raises(CorruptStreamError):
        eahn_decode(_replace(out, y=("0",) * len(out.y)))  # not a prefix code
    with pytest.raises(CorruptStreamError):
        eahn_decode(_replace(out, y=out.y + ("1",)))


def test_output_equality():
    a = eahn_encode(b"hello world", 1)
    assert a == eahn_encode(b"hello world", 1)
    assert a != eahn_encode(b"hello world!", 1)
    assert a.maxlc == max(map(len, a.y))


def test_payload_size_recomputed_independently():
    import random

    rng = random.Random(200)
    for _ in range(200):
        x = "".join(rng.choice("abc") for _ in range(rng.randint(1, 80)))
        model = scan_frequencies(x, 1, Alphabet(tuple("abc")))
        book = build_codebook(model)
        expected = sum(f * len(book.codeword(s, ctx)) for ctx, fol, freqs in model.groups() for s, f in zip(fol, freqs))
        assert eahn_encode(x, 1, Alphabet(tuple("abc"))).z.length == expected


def test_many_random_roundtrips():
    rng = np.random.default_rng(500)
    for k in range(500):
        n = 1 + k % 3
        x = rng.integers(0, 1 + k % 7, rng.integers(n, 300), dtype=np.uint8).tobytes()
        assert eahn_decode(eahn_encode(x, n, BYTES)) == x


def test_total_count_mass():
    x = np.random.default_rng(9).integers(0, 4, 1000).tolist()
    for n in (1, 2, 3):
        assert scan_frequencies(x, n, Alphabet((0, 1, 2, 3))).total == 1000 - n


def test_aaaaa_from_tuple():
    out = eahn_encode("aaaaa", 1)
    assert (out.prefix, out.y, out.z.length, out.length) == ("a", (), 0, 5)
    assert eahn_decode(out) == "aaaaa"
