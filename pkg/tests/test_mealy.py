"""Machines, the AUT format, and simulation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abmealy import (
    AutomatonError,
    FormatError,
    MealyAutomaton,
    NotInvertibleError,
    Parity,
    UnknownStateError,
    find_isomorphism,
    parse_automaton,
    serialize_automaton,
)

from conftest import A32_TEXT


# -- parsing -----------------------------------------------------------------


def test_parse_basic(a32):
    assert a32.name == "a32"
    assert a32.states == ("f", "f0", "f1")
    assert a32.step("f", 0) == ("f0", 1)
    assert a32.step("f", 1) == ("f1", 0)
    assert a32.step("f1", 1) == ("f0", 1)


def test_parse_copy_expands(identity_machine):
    assert identity_machine.step("I", 0) == ("I", 0)
    assert identity_machine.step("I", 1) == ("I", 1)


def test_parse_comments_and_blanks():
    text = """
    # leading comment
    aut m   # trailing comment
    states a

    trans a 0 1 a
    trans a 1 0 a
    """
    m = parse_automaton(text)
    assert m.name == "m"
    assert m.states == ("a",)


def test_parse_errors_carry_line_numbers():
    bad = "aut m\nstates a\ntrans a 0 1 b\ntrans a 1 0 a\n"
    with pytest.raises(FormatError) as exc:
        parse_automaton(bad)
    assert "line 3" in str(exc.value)


@pytest.mark.parametrize(
    "text, needle",
    [
        ("", "empty"),
        ("states a\n", "aut"),
        ("aut m\ntrans a 0 1 a\n", "states"),
        ("aut m\nstates a a\n", "duplicate"),
        ("aut m\nstates a?\ntrans a? 0 0 a?\ntrans a? 1 1 a?", "label"),
        ("aut m\nstates a\ntrans a 0 1 a\ntrans a 0 0 a\ntrans a 1 0 a", "duplicate"),
        ("aut m\nstates a\ntrans a 2 1 a\ntrans a 1 0 a", "bit"),
        ("aut m\nstates a\ntrans a 0 1\ntrans a 1 0 a", "trans"),
        ("aut m\nstates a\ntrans a 0 1 a\n", "input 1"),
        ("aut m\nstates a\nfrobnicate a\n", "frobnicate"),
        ("aut m\nstates a b\ncopy a b\ncopy b q\n", "q"),
    ],
)
def test_parse_rejects(text, needle):
    with pytest.raises(FormatError) as exc:
        parse_automaton(text)
    assert needle in str(exc.value)


def test_constructor_validation():
    with pytest.raises(AutomatonError):
        MealyAutomaton({})
    with pytest.raises(AutomatonError):
        MealyAutomaton({("a", 0): ("a", 0)})  # missing input 1
    with pytest.raises(AutomatonError):
        MealyAutomaton(
            {("a", 0): ("b", 0), ("a", 1): ("a", 1)}, states=["a"]
        )  # b undeclared


def test_serialize_roundtrip_and_canonical_form(a32):
    text = a32.serialize()
    assert parse_automaton(text) == a32
    assert text.splitlines()[0] == "aut a32"
    assert text.splitlines()[1] == "states f f0 f1"
    # serialization always writes explicit trans lines, two per state
    assert text.count("trans ") == 6
    assert "copy" not in text


def test_serialize_expands_copy(identity_machine):
    text = serialize_automaton(identity_machine)
    assert "copy" not in text
    assert "trans I 0 0 I" in text
    assert "trans I 1 1 I" in text
    assert parse_automaton(text) == identity_machine


def test_equality_includes_name(a32):
    other = parse_automaton(A32_TEXT.replace("aut a32", "aut other"))
    assert other != a32
    same = parse_automaton(A32_TEXT)
    assert same == a32
    assert hash(same) == hash(a32)


# -- simulation --------------------------------------------------------------


def test_transduce_values(a32, xyz, lamplighter):
    assert a32.transduce("f", "0110") == "1100"
    assert xyz.transduce("x", "0110") == "1100"
    assert xyz.step("x", 0) == ("z", 1)
    assert lamplighter.transduce("alpha", "00") == "10"
    assert a32.transduce("f", "") == ""


def test_transduce_rejects_bad_words(a32):
    with pytest.raises(FormatError):
        a32.transduce("f", "012")
    with pytest.raises(UnknownStateError):
        a32.transduce("nope", "0")
    with pytest.raises(UnknownStateError):
        a32.step("nope", 0)


def test_output_and_residual(a32):
    assert a32.output("f", 0) == 1
    assert a32.residual("f", 0) == "f0"


# -- invertibility and parity ---------------------------------------------------


def test_parity(a32):
    assert a32.is_invertible()
    assert a32.state_parity("f") is Parity.ODD
    assert a32.state_parity("f0") is Parity.EVEN
    assert a32.state_parity("f1") is Parity.EVEN


def test_not_invertible():
    m = MealyAutomaton({("a", 0): ("a", 0), ("a", 1): ("a", 0)})
    assert not m.is_invertible()
    with pytest.raises(NotInvertibleError):
        m.state_parity("a")


# -- isomorphism -----------------------------------------------------------------


def test_find_isomorphism_relabel(a32):
    relabeled = parse_automaton(
        A32_TEXT.replace("f0", "q0").replace("f1", "q1").replace("f ", "q ")
        .replace(" f\n", " q\n")
    )
    iso = find_isomorphism(a32, relabeled)
    assert iso == {"f": "q", "f0": "q0", "f1": "q1"}


def test_find_isomorphism_none(a32, lamplighter, xyz):
    assert find_isomorphism(a32, lamplighter) is None
    assert find_isomorphism(a32, xyz) is None  # same shape, different wiring


def test_find_isomorphism_identity_map(principal_figure):
    iso = find_isomorphism(principal_figure, principal_figure)
    assert iso == {s: s for s in principal_figure.states}


# -- property tests ----------------------------------------------------------------


@st.composite
def machines(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    labels = [f"s{i}" for i in range(n)]
    transitions = {}
    for s in labels:
        for bit in (0, 1):
            dst = draw(st.sampled_from(labels))
            out = draw(st.integers(min_value=0, max_value=1))
            transitions[(s, bit)] = (dst, out)
    return MealyAutomaton(transitions, name="rand")


@given(machines())
@settings(max_examples=60, deadline=None)
def test_serialize_parse_roundtrip(m):
    assert parse_automaton(m.serialize()) == m


@given(machines(), st.text(alphabet="01", max_size=24))
@settings(max_examples=60, deadline=None)
def test_transduction_is_length_preserving_and_causal(m, word):
    s = m.states[0]
    out = m.transduce(s, word)
    assert len(out) == len(word)
    # prefix property: the output of a prefix is the prefix of the output
    for k in range(len(word)):
        assert m.transduce(s, word[:k]) == out[:k]
