import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from clocus.rng import SplitMix64, derive_seed

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def numpy_splitmix(seed, count):
    # Independent reimplementation in uint64 wrapping arithmetic.
    state = np.uint64(seed)
    out = []
    with np.errstate(over="ignore"):
        for _ in range(count):
            state = state + np.uint64(0x9E3779B97F4A7C15)
            z = state
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            out.append(int(z ^ (z >> np.uint64(31))))
    return out


def test_reference_vector_seed_zero():
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF


@given(seed=seeds)
def test_matches_numpy_reimplementation(seed):
    rng = SplitMix64(seed)
    assert [rng.next_u64() for _ in range(5)] == numpy_splitmix(seed, 5)


@given(seed=seeds, n=st.integers(1, 10**6))
def test_below_in_range(seed, n):
    rng = SplitMix64(seed)
    assert all(0 <= rng.below(n) < n for _ in range(10))


@given(seed=seeds)
def test_fork_is_pure_and_label_sensitive(seed):
    rng = SplitMix64(seed)
    before = rng.state
    a = rng.fork(1, 2).next_u64()
    assert rng.state == before
    assert SplitMix64(seed).fork(1, 2).next_u64() == a
    assert SplitMix64(seed).fork(2, 1).next_u64() != a
    assert derive_seed(seed, 1, 2) == SplitMix64(seed).fork(1, 2).state


def test_below_is_roughly_uniform():
    rng = SplitMix64(7)
    counts = np.bincount([rng.below(6) for _ in range(6000)], minlength=6)
    assert counts.min() > 850 and counts.max() < 1150
