"""Multi-index arithmetic and the graded enumeration order."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from revser.multiindex import (
    SeriesContext,
    add,
    all_of_weight,
    binomial,
    compare,
    count_weight,
    divides,
    enumerate_weight,
    factorial,
    iter_weights,
    rank_in_weight,
    rank_table,
    sort_key,
    sub,
    unit_index,
    unrank,
    weight,
)

indexes = st.lists(st.integers(0, 6), min_size=1, max_size=4).map(tuple)


def paired(draw_len=st.integers(1, 4)):
    return draw_len.flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(0, 6), min_size=n, max_size=n).map(tuple),
            st.lists(st.integers(0, 6), min_size=n, max_size=n).map(tuple),
        )
    )


class TestContext:
    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            SeriesContext(0, 4)
        with pytest.raises(ValueError):
            SeriesContext(2, 0)
        with pytest.raises(ValueError):
            SeriesContext(-1, -1)

    def test_is_hashable_value(self):
        assert SeriesContext(2, 4) == SeriesContext(2, 4)
        assert len({SeriesContext(2, 4), SeriesContext(2, 4)}) == 1

    def test_iter_weights(self):
        assert list(iter_weights(SeriesContext(3, 5))) == [1, 2, 3, 4, 5]


class TestEnumerationOrder:
    def test_two_vars_weight_two_golden(self):
        ctx = SeriesContext(2, 4)
        assert enumerate_weight(ctx, 2) == ((2, 0), (1, 1), (0, 2))

    def test_three_vars_weight_two_golden(self):
        got = all_of_weight(3, 2)
        assert got == (
            (2, 0, 0),
            (1, 1, 0),
            (1, 0, 1),
            (0, 2, 0),
            (0, 1, 1),
            (0, 0, 2),
        )

    def test_weight_zero_is_the_origin(self):
        assert all_of_weight(3, 0) == ((0, 0, 0),)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            enumerate_weight(SeriesContext(2, 4), -1)
        with pytest.raises(ValueError):
            all_of_weight(2, -2)

    @pytest.mark.parametrize("nvars,p", [(1, 5), (2, 3), (3, 4), (4, 2)])
    def test_count_matches_enumeration(self, nvars, p):
        assert len(all_of_weight(nvars, p)) == count_weight(nvars, p)
        assert count_weight(nvars, p) == math.comb(p + nvars - 1, nvars - 1)

    def test_count_weight_negative_is_zero(self):
        assert count_weight(3, -1) == 0

    @pytest.mark.parametrize("nvars,p", [(2, 4), (3, 3)])
    def test_enumeration_is_sorted_by_key(self, nvars, p):
        got = all_of_weight(nvars, p)
        assert list(got) == sorted(got, key=sort_key)

    @given(paired())
    def test_compare_agrees_with_sort_key(self, pair):
        a, b = pair
        c = compare(a, b)
        if c == 0:
            assert a == b
        elif c < 0:
            assert sort_key(a) < sort_key(b)
        else:
            assert sort_key(a) > sort_key(b)

    def test_compare_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            compare((1, 0), (1, 0, 0))

    @pytest.mark.parametrize("nvars,p", [(1, 4), (2, 5), (3, 3), (4, 2)])
    def test_rank_unrank_round_trip(self, nvars, p):
        ctx = SeriesContext(nvars, max(p, 1))
        for r, alpha in enumerate(all_of_weight(nvars, p)):
            assert rank_in_weight(alpha) == r
            assert unrank(ctx, p, r) == alpha
        assert rank_table(nvars, p) == {
            a: i for i, a in enumerate(all_of_weight(nvars, p))
        }

    def test_unrank_range_checked(self):
        ctx = SeriesContext(2, 4)
        with pytest.raises(ValueError):
            unrank(ctx, 2, 3)
        with pytest.raises(ValueError):
            unrank(ctx, 2, -1)

    def test_rank_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            rank_in_weight((1, -1))


class TestPointwiseOps:
    @given(indexes)
    def test_weight(self, a):
        assert weight(a) == sum(a)

    def test_unit_index(self):
        assert unit_index(3, 0) == (1, 0, 0)
        assert unit_index(3, 2) == (0, 0, 1)

    @given(paired())
    def test_add_sub_round_trip(self, pair):
        a, b = pair
        s = add(a, b)
        assert sub(s, b) == a
        assert divides(b, s)

    def test_sub_requires_divisibility(self):
        with pytest.raises(ValueError):
            sub((1, 0), (0, 1))

    def test_divides_golden(self):
        assert divides((1, 0), (2, 1))
        assert not divides((3, 0), (2, 1))

    def test_factorial_golden(self):
        assert factorial((3, 2, 0)) == 12
        assert factorial((0, 0)) == 1

    def test_binomial_golden(self):
        assert binomial((4, 2), (2, 1)) == math.comb(4, 2) * math.comb(2, 1)
        with pytest.raises(ValueError):
            binomial((1, 0), (2, 0))

    @given(paired())
    def test_binomial_factorial_identity(self, pair):
        # binom(a + b, a) * a! * b! == (a + b)!
        a, b = pair
        s = add(a, b)
        assert binomial(s, a) * factorial(a) * factorial(b) == factorial(s)
