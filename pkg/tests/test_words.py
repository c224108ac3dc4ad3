import pytest

from errors import InputError
from series.words import (concat, enumerate_words, letter, make_word, transpose, word_to_text,
                          words_of_length)


def test_concat_examples():
    assert concat((1, 2), (1,)) == (1, 2, 1)
    assert concat((), (2, 1)) == (2, 1)
    assert concat((2, 1), ()) == (2, 1)
    assert concat((2,), (2,)) == (2, 2)


def test_transpose_examples():
    assert transpose((1, 2, 3)) == (3, 2, 1)
    assert transpose(()) == ()
    assert transpose((1,)) == (1,)


def test_enumerate_examples():
    assert enumerate_words(2, 1) == [(), (1,), (2,)]
    assert enumerate_words(2, 2) == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert enumerate_words(1, 3) == [(), (1,), (1, 1), (1, 1, 1)]


@pytest.mark.parametrize('n_vars, degree', [(1, 5), (2, 4), (3, 3)])
def test_enumerate_count_and_prefix(n_vars, degree):
    words = enumerate_words(n_vars, degree)
    assert len(words) == sum(n_vars ** k for k in range(degree + 1))
    assert len(set(words)) == len(words)
    assert enumerate_words(n_vars, degree + 1)[:len(words)] == words
    assert words_of_length(n_vars, degree) == [w for w in words if len(w) == degree]


def test_laws_on_random_words(rng):
    for _ in range(100):
        w, v, u = (tuple(int(x) for x in rng.integers(1, 4, size=rng.integers(0, 5)))
                   for _ in range(3))
        assert concat(concat(w, v), u) == concat(w, concat(v, u))
        assert concat((), w) == w == concat(w, ())
        assert transpose(concat(w, v)) == concat(transpose(v), transpose(w))
        assert transpose(transpose(w)) == w


def test_make_word_rejects_out_of_range_letters():
    assert make_word([1, 2, 1], 2) == (1, 2, 1)
    with pytest.raises(InputError):
        make_word([0], 2)
    with pytest.raises(InputError):
        make_word([3], 2)


def test_display_form():
    assert word_to_text(()) == '∅'
    assert word_to_text(letter(2) + letter(1)) == 'g2g1'
