import pytest

from wqet.simulator import RngStream
from wqet.simulator.rng import MAX_SEED


def test_same_stream_same_numbers():
    assert [RngStream(5, 3).random() for _ in range(3)] == [RngStream(5, 3).random() for _ in range(3)]


def test_streams_are_independent_of_creation_order():
    first = RngStream(5, 1).random()
    RngStream(5, 0).random()
    assert RngStream(5, 1).random() == first


def test_distinct_streams_differ():
    assert RngStream(5, 0).random() != RngStream(5, 1).random()
    assert RngStream(5, 0).substream(1).random() == RngStream(5, 1).random()


@pytest.mark.parametrize(("seed", "index"), [(-1, 0), (MAX_SEED + 1, 0), (0, -1)])
def test_invalid_seed(seed, index):
    with pytest.raises(ValueError):
        RngStream(seed, index)


def test_values_in_unit_interval():
    stream = RngStream(MAX_SEED)
    assert all(0 <= stream.random() < 1 for _ in range(1000))
