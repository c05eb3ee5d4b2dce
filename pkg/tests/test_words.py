import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppqkd.words import (
    Word,
    hamming_distance,
    hamming_distance_count,
    loss_aware_distance,
    relative_hamming_weight,
    vacuum_symbol,
)


def w(text, d=2):
    return Word.parse(text, d)


class TestWord:
    def test_parse_and_vacuum(self):
        word = w("0v1", d=2)
        assert word.symbols == (0, 2, 1)
        assert word.has_vacuum
        assert vacuum_symbol(2) == 2

    def test_rejects_out_of_range_symbol(self):
        with pytest.raises(ValueError):
            Word((0, 3), d=2)

    def test_rejects_tiny_alphabet(self):
        with pytest.raises(ValueError):
            Word((0,), d=1)

    def test_take_drop(self):
        word = w("0123", d=4)
        assert word.take([1, 3]).symbols == (1, 3)
        assert word.drop([1, 3]).symbols == (0, 2)


class TestRelativeWeight:
    def test_all_zero(self):
        assert relative_hamming_weight(w("0000")) == 0

    def test_half(self):
        assert relative_hamming_weight(w("0101")) == Fraction(1, 2)

    def test_no_zero_ternary(self):
        assert relative_hamming_weight(w("122", d=3)) == 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            relative_hamming_weight(Word((), 2))

    def test_vacuum_rejected(self):
        with pytest.raises(ValueError):
            relative_hamming_weight(w("0v"))


class TestHammingDistance:
    def test_identical(self):
        assert hamming_distance(w("000"), w("000")) == 0

    def test_one_mismatch_ternary(self):
        assert hamming_distance(w("012", d=3), w("010", d=3)) == Fraction(1, 3)

    def test_all_mismatch(self):
        assert hamming_distance(w("01"), w("10")) == 1

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            hamming_distance(w("01"), w("011"))

    def test_vacuum_rejected(self):
        with pytest.raises(ValueError):
            hamming_distance(w("0v"), w("00"))

    @pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
    def test_metric_axioms_exhaustive(self, n, d):
        words = [Word(s, d) for s in itertools.product(range(d), repeat=n)]
        dist = {}
        for a in words:
            for b in words:
                dist[a.symbols, b.symbols] = hamming_distance_count(a, b)
        for a in words:
            for b in words:
                ab = dist[a.symbols, b.symbols]
                assert ab == dist[b.symbols, a.symbols]
                assert (ab == 0) == (a.symbols == b.symbols)
        for a in words:
            for b in words:
                ab = dist[a.symbols, b.symbols]
                for c in words:
                    assert ab <= dist[a.symbols, c.symbols] + dist[c.symbols, b.symbols]


class TestLossAwareDistance:
    def test_single_vacuum(self):
        assert loss_aware_distance(w("0v1", d=2), w("001", d=2)) == Fraction(1, 3)

    def test_vacuum_counts_even_when_equal(self):
        assert loss_aware_distance(w("vv"), w("vv")) == 1

    def test_no_vacuum_no_mismatch(self):
        assert loss_aware_distance(w("01"), w("01")) == 0

    def test_dominates_any_vacuum_substitution(self):
        # Replacing vacuums by arbitrary digits can only reduce the distance.
        d = 2
        alphabet = list(range(d + 1))  # digits plus the vacuum sentinel
        for n in (1, 2, 3):
            for xs in itertools.product(alphabet, repeat=n):
                for ys in itertools.product(alphabet, repeat=n):
                    x, y = Word(xs, d), Word(ys, d)
                    lossy = loss_aware_distance(x, y)
                    for sub_x in _substitutions(xs, d):
                        for sub_y in _substitutions(ys, d):
                            plain = hamming_distance(Word(sub_x, d), Word(sub_y, d))
                            assert lossy >= plain


def _substitutions(symbols, d):
    slots = [range(d) if s == d else (s,) for s in symbols]
    return itertools.product(*slots)


@given(st.integers(2, 5), st.lists(st.integers(0, 10), min_size=1, max_size=20))
def test_distance_symmetry_random(d, raw):
    xs = tuple(v % d for v in raw)
    ys = tuple((v * 7 + 3) % d for v in raw)
    x, y = Word(xs, d), Word(ys, d)
    assert hamming_distance(x, y) == hamming_distance(y, x)
    assert 0 <= hamming_distance(x, y) <= 1
