import random

import pytest

from eahn.adaptive_code import (
    AdaptiveCodeTable,
    Alphabet,
    check_injectivity_bruteforce,
    encode_extension,
    format_table,
    load_table,
    parse_table,
    verify_prefix_contexts,
)
from eahn.errors import MissingCodewordError
from strategies import random_table


@pytest.fixture
def order1_code(fixtures):
    return load_table(fixtures / "order1_code.txt")


@pytest.fixture
def order2_code(fixtures):
    return load_table(fixtures / "order2_code.txt")


def test_order1_code_shape(order1_code):
    assert order1_code.order == 1
    assert order1_code.alphabet.symbols == ("a", "b", "c")
    assert order1_code.codeword("a", ()) == "11"
    assert order1_code.codeword("c", ("b",)) == "11"
    assert order1_code.is_total()


def test_order1_encoding_from_entries(order1_code):
    # c(a,λ) c(b,a) c(b,b) c(a,b) c(b,a) c(a,b) read off the fixture by hand
    assert encode_extension(order1_code, "abbaba") == "11" "011" "01" "10" "011" "10"


def test_order2_encoding(order2_code):
    assert encode_extension(order2_code, "ababba") == "001011110100100"


def test_printed_tables_are_adaptive_codes(order1_code, order2_code):
    for t in (order1_code, order2_code):
        assert verify_prefix_contexts(t)
        assert check_injectivity_bruteforce(t, 6)


def test_missing_codeword():
    t = AdaptiveCodeTable(1, Alphabet(("a", "b")), {("a", ()): "0"})
    with pytest.raises(MissingCodewordError) as err:
        encode_extension(t, "ab")
    assert err.value.symbol == "b"
    assert err.value.context == ("a",)
    assert isinstance(err.value, KeyError)


def test_prefix_check_detects_duplicates_and_prefixes():
    a = Alphabet(("a", "b"))
    dup = AdaptiveCodeTable(1, a, {("a", ()): "0", ("b", ()): "0"})
    pre = AdaptiveCodeTable(1, a, {("a", ()): "0", ("b", ()): "01"})
    ok = AdaptiveCodeTable(1, a, {("a", ()): "0", ("b", ()): "10"})
    assert not verify_prefix_contexts(dup)
    assert not verify_prefix_contexts(pre)
    assert verify_prefix_contexts(ok)
    assert not check_injectivity_bruteforce(dup, 2)


def test_non_prefix_can_still_be_injective():
    # suffix code {0, 01}: not prefix but uniquely decodable
    a = Alphabet(("a", "b"))
    entries = {("a", ()): "0", ("b", ()): "01", ("a", ("a",)): "0", ("b", ("a",)): "01",
               ("a", ("b",)): "0", ("b", ("b",)): "01"}
    t = AdaptiveCodeTable(1, a, entries)
    assert not verify_prefix_contexts(t)
    assert check_injectivity_bruteforce(t, 7)


def test_bruteforce_limit():
    t = AdaptiveCodeTable(1, Alphabet(tuple("abcdefgh")), {})
    with pytest.raises(ValueError):
        check_injectivity_bruteforce(t, 20)


def test_format_parse_roundtrip(order1_code, order2_code):
    for t in (order1_code, order2_code):
        again = parse_table(format_table(t))
        assert again.entries == t.entries
        assert again.order == t.order


def test_alphabet_validation():
    assert Alphabet(("b", "a")).symbols == ("a", "b")
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(())
    assert Alphabet.of("banana").symbols == ("a", "b", "n")


def test_random_tables_prefix_implies_injective():
    rng = random.Random(7)
    positives = 0
    for _ in range(150):
        t = random_table(rng)
        if verify_prefix_contexts(t):
            positives += 1
            assert check_injectivity_bruteforce(t, 6)
    assert positives > 30
