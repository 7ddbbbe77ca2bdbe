import numpy as np
import pytest
from hypothesis import given, strategies as st

from randcover.errors import InvalidInputError, StreamExhaustedError
from randcover.rng import MAX_INDEX, XiStream, check_seed, philox_at, substreams


@given(st.integers(0, 2**64 - 1), st.integers(1, 3), st.integers(1, 500), st.integers(0, 40))
def test_block_is_position_independent(seed, d, start, count):
    s = XiStream(seed, d)
    whole = s.block(1, start + count)
    assert np.array_equal(s.block(start, start + count), whole[start - 1 :])


@given(st.integers(0, 2**32), st.integers(1, 3), st.integers(1, 3000), st.integers(1, 700))
def test_chunks_concatenate_to_block(seed, d, stop, size):
    s = XiStream(seed, d)
    parts = [b for _, b in s.chunks(1, stop + 1, size=size)]
    assert np.array_equal(np.concatenate(parts), s.block(1, stop + 1))


def test_philox_offset_matches_sequential_draws():
    ref = np.random.Generator(np.random.Philox(key=[9, 0])).random(23)
    for pos in range(23):
        assert philox_at(9, pos).random() == ref[pos]


def test_values_in_unit_cube_and_seeds_differ():
    a = XiStream(1, 2).block(1, 1001)
    b = XiStream(2, 2).block(1, 1001)
    assert a.min() >= 0 and a.max() < 1
    assert not np.array_equal(a, b)


def test_seed_validation():
    for bad in (-1, 2**64, 1.5, True, "3"):
        with pytest.raises(InvalidInputError):
            check_seed(bad)
    assert check_seed(np.uint64(5)) == 5


def test_stream_capacity():
    with pytest.raises(StreamExhaustedError):
        XiStream(0, 1).block(MAX_INDEX, MAX_INDEX + 2)
    with pytest.raises(InvalidInputError):
        XiStream(0, 1).block(0, 3)


def test_substreams_are_reproducible_and_distinct():
    a = [g.random(4) for g in substreams(3, 3)]
    b = [g.random(4) for g in substreams(3, 3)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])


def test_large_seeds_stay_distinct():
    top = 2**64 - 1
    a, b = XiStream(top, 1).block(1, 5), XiStream(top - 1, 1).block(1, 5)
    assert not np.array_equal(a, b)
