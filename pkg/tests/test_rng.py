"""Generator determinism, state handling, and distribution sanity."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sketchbench.rng import MASK64, Xoroshiro128Plus, fmix64, splitmix64

# Published splitmix64 outputs for seed 0; any change to the seeding path
# breaks every frozen stream in this suite, so pin them hard.
SPLITMIX64_SEED0 = (0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F)


def test_splitmix64_known_answers():
    state = 0
    outputs = []
    for _ in range(3):
        out, state = splitmix64(state)
        outputs.append(out)
    assert tuple(outputs) == SPLITMIX64_SEED0


def test_fmix64_fixes_zero():
    assert fmix64(0) == 0


@given(st.integers(min_value=0, max_value=MASK64))
def test_fmix64_stays_in_range(z):
    assert 0 <= fmix64(z) <= MASK64


def test_fmix64_is_injective_on_sample():
    seen = {fmix64(z) for z in range(10_000)}
    assert len(seen) == 10_000


def test_seeding_uses_two_splitmix_steps():
    rng = Xoroshiro128Plus(0)
    assert rng.state == SPLITMIX64_SEED0[:2]


def test_first_output_is_sum_of_state_words():
    rng = Xoroshiro128Plus(0)
    s0, s1 = rng.state
    assert rng.next_u64() == (s0 + s1) & MASK64


@given(st.integers(min_value=0, max_value=MASK64))
def test_same_seed_same_stream(seed):
    a = Xoroshiro128Plus(seed)
    b = Xoroshiro128Plus(seed)
    assert [a.next_u64() for _ in range(20)] == [b.next_u64() for _ in range(20)]


def test_outputs_are_64_bit():
    rng = Xoroshiro128Plus(12345)
    for _ in range(1000):
        assert 0 <= rng.next_u64() <= MASK64


def test_floats_live_in_unit_interval():
    rng = Xoroshiro128Plus(7)
    draws = [rng.next_float() for _ in range(10_000)]
    assert all(0.0 <= x < 1.0 for x in draws)


def test_float_mean_is_roughly_half():
    rng = Xoroshiro128Plus(99)
    n = 50_000
    mean = sum(rng.next_float() for _ in range(n)) / n
    # std of the mean is 1/sqrt(12 n) ~ 0.0013; allow 5 sigma
    assert abs(mean - 0.5) < 5 / math.sqrt(12 * n)


def test_state_roundtrip_resumes_stream():
    rng = Xoroshiro128Plus(2024)
    for _ in range(17):
        rng.next_u64()
    clone = Xoroshiro128Plus.from_state(*rng.state)
    assert [rng.next_u64() for _ in range(50)] == [clone.next_u64() for _ in range(50)]


def test_all_zero_state_is_rejected():
    with pytest.raises(ValueError):
        Xoroshiro128Plus.from_state(0, 0)


def test_seeding_never_yields_all_zero_state():
    # the remap path is unreachable for any sane seed; spot-check a range
    for seed in range(2000):
        assert Xoroshiro128Plus(seed).state != (0, 0)


def test_distinct_seeds_decorrelate():
    a = Xoroshiro128Plus(1)
    b = Xoroshiro128Plus(2)
    matches = sum(a.next_u64() == b.next_u64() for _ in range(1000))
    assert matches == 0
