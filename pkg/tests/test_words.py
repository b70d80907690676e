import pytest
from hypothesis import given, strategies as st

from covertower.errors import MalformedWordError, ParameterError
from covertower.fpcore import (
    Presentation,
    cyclic_reduce,
    format_presentation,
    free_reduce,
    invert_word,
    parse_presentation,
    word_power,
)

letters = st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0)
words = st.lists(letters, max_size=30)


def test_free_reduce_examples():
    assert free_reduce([1, -1]) == ()
    assert free_reduce([1, 2, -2, -1]) == ()
    assert free_reduce([1, 1, 2]) == (1, 1, 2)


def test_free_reduce_errors():
    with pytest.raises(MalformedWordError):
        free_reduce([0])
    with pytest.raises(MalformedWordError):
        free_reduce([1, 5], ngens=4)


@given(words)
def test_free_reduce_idempotent_and_shorter(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)


@given(words)
def test_reduced_word_has_no_cancelling_pair(w):
    r = free_reduce(w)
    assert all(a != -b for a, b in zip(r, r[1:]))


@given(words)
def test_word_inverse_cancels(w):
    assert free_reduce(tuple(w) + invert_word(w)) == ()


def test_word_power_signs():
    assert word_power((1, 2), -1) == (-2, -1)
    assert word_power((1,), 3) == (1, 1, 1)


def test_cyclic_reduce():
    assert cyclic_reduce((1, 2, -1)) == (2,)
    assert cyclic_reduce((1, 2)) == (1, 2)


def test_presentation_drops_empty_relators():
    p = Presentation(2, [(1, -1), (1, 2)])
    assert p.relators == ((1, 2),)


def test_presentation_validates():
    with pytest.raises(ParameterError):
        Presentation(0, [])
    with pytest.raises(MalformedWordError):
        Presentation(1, [(2,)])


def test_exponent_matrix():
    p = Presentation(2, [(1, 1, 1, 1), (2, 2, 2, 2), (1, -2)])
    assert p.exponent_matrix() == [[4, 0], [0, 4], [1, -1]]


def test_text_format_round_trip():
    text = "2\naaaa\nbbbb\naB\n"
    p = parse_presentation(text)
    assert p.ngens == 2
    assert p.relators == ((1, 1, 1, 1), (2, 2, 2, 2), (1, -2))
    assert format_presentation(p) == text
    assert parse_presentation(format_presentation(p)) == p


def test_text_format_comments_and_blanks():
    p = parse_presentation("2\n# comment\n\nab\n")
    assert p.relators == ((1, 2),)


def test_text_format_rejects_bad_input():
    with pytest.raises(ParameterError):
        parse_presentation("0\n")
    with pytest.raises(MalformedWordError):
        parse_presentation("1\nab\n")  # b exceeds 1 generator
    with pytest.raises(MalformedWordError):
        parse_presentation("2\na b\n")
    with pytest.raises(MalformedWordError):
        parse_presentation("2\na1\n")
