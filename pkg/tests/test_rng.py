import numpy as np
import pytest

from xicor import _rng


def test_stream_is_reproducible():
    a = _rng.stream(42, 3, 7).random(5)
    b = _rng.stream(42, 3, 7).random(5)
    np.testing.assert_array_equal(a, b)


def test_distinct_paths_give_distinct_streams():
    a = _rng.stream(42, 3, 7).random(5)
    b = _rng.stream(42, 3, 8).random(5)
    c = _rng.stream(43, 3, 7).random(5)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_stream_uses_philox():
    assert isinstance(_rng.stream(1).bit_generator, np.random.Philox)


def test_frozen_stream_values():
    # pins the derivation scheme: changing it silently would break every
    # recorded seed
    assert _rng.derive_seed(0) == 15793235383387715774
    assert _rng.stream(0).integers(0, 2**32, 3).tolist() == [582496169, 60417458, 4027530181]


@pytest.mark.parametrize("bad", [-1, 2**64, 1.5, "7", True])
def test_check_seed_rejects(bad):
    with pytest.raises((TypeError, ValueError)):
        _rng.check_seed(bad)


def test_full_64_bit_range_accepted():
    assert _rng.check_seed(2**64 - 1) == 2**64 - 1
    assert 0 <= _rng.random_seed() < 2**64
