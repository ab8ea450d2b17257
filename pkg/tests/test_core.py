"""Math-kernel tests: exact examples, domain errors, and randomized identities."""

import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdrrdps import (
    BINOM_MAX_N,
    DomainError,
    binom,
    dit_entropy,
    entropy_term,
    sift_probability,
    weight_entropy,
)

# Independent literal evaluation used as the oracle for weight_entropy:
# -sum w log2 w + (sum w) log2 (sum w), with 0 log 0 = 0.


def zeta_literal(weights):
    s = math.fsum(weights)
    if s == 0.0:
        return 0.0
    return math.fsum(-w * math.log2(w) for w in weights if w > 0.0) + s * math.log2(s)


class TestBinom:
    @pytest.mark.parametrize(
        "n,k,expected", [(5, 2, 10), (4, 0, 1), (2, 3, 0), (0, 0, 1), (128, 64, math.comb(128, 64))]
    )
    def test_values(self, n, k, expected):
        assert binom(n, k) == expected

    def test_exact_across_cap_range(self):
        for n in range(0, BINOM_MAX_N + 1, 16):
            for k in range(0, n + 1, 7):
                assert binom(n, k) == math.comb(n, k)

    def test_overflow_beyond_cap(self):
        with pytest.raises(OverflowError):
            binom(BINOM_MAX_N + 1, 2)

    @pytest.mark.parametrize("n,k", [(-1, 0), (3, -2)])
    def test_negative_rejected(self, n, k):
        with pytest.raises(DomainError):
            binom(n, k)

    def test_non_integer_rejected(self):
        with pytest.raises(DomainError):
            binom(3.5, 1)


class TestEntropyTerm:
    def test_endpoints_exact(self):
        assert entropy_term(0.0) == 0.0
        assert entropy_term(1.0) == 0.0

    def test_half(self):
        assert entropy_term(0.5) == 0.5

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            entropy_term(-1e-12)


class TestWeightEntropy:
    def test_single_nonzero_weight_is_zero(self):
        assert weight_entropy([1.0, 0.0, 0.0]) == 0.0
        assert weight_entropy([7.25]) == 0.0

    def test_two_equal_halves(self):
        assert weight_entropy([0.5, 0.5]) == pytest.approx(1.0, abs=1e-15)

    def test_two_equal_twos_and_homogeneity_vs_halves(self):
        assert weight_entropy([2.0, 2.0]) == pytest.approx(4.0, abs=1e-12)
        assert weight_entropy([2.0, 2.0]) == pytest.approx(4.0 * weight_entropy([0.5, 0.5]), rel=1e-12)

    def test_zero_vector(self):
        assert weight_entropy([0.0, 0.0]) == 0.0

    def test_matches_literal_form(self):
        rng = np.random.default_rng(123)
        for _ in range(200):
            w = rng.random(rng.integers(1, 9)) * rng.choice([1e-3, 1.0, 1e3])
            assert weight_entropy(w) == pytest.approx(zeta_literal(w.tolist()), rel=1e-10, abs=1e-12)

    def test_negative_entry_rejected(self):
        with pytest.raises(DomainError):
            weight_entropy([0.5, -0.1])

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            weight_entropy([])

    def test_non_negative_always(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            w = rng.random(rng.integers(1, 12))
            assert weight_entropy(w) >= 0.0

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(
        w=st.lists(st.floats(0.0, 100.0, allow_nan=False), min_size=1, max_size=8),
        a=st.floats(1e-3, 1e3, allow_nan=False),
    )
    def test_homogeneity(self, w, a):
        base = weight_entropy(w)
        scaled = weight_entropy([a * x for x in w])
        assert scaled == pytest.approx(a * base, rel=1e-12, abs=1e-12)

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(
        pair=st.integers(0, 2**32 - 1),
        t=st.floats(0.0, 1.0, allow_nan=False),
        size=st.integers(1, 8),
    )
    def test_concavity_spot(self, pair, t, size):
        rng = np.random.default_rng(pair)
        x = rng.random(size)
        y = rng.random(size)
        mixed = weight_entropy(t * x + (1.0 - t) * y)
        assert mixed >= t * weight_entropy(x) + (1.0 - t) * weight_entropy(y) - 1e-9

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(a=st.floats(1e-6, 1e6, allow_nan=False), d=st.integers(2, 8))
    def test_equal_weight_identity(self, a, d):
        assert weight_entropy([a] * d) == pytest.approx(d * a * math.log2(d), rel=1e-12)


class TestDitEntropy:
    def test_zero_error(self):
        assert dit_entropy(0.0, 2) == 0.0
        assert dit_entropy(0.0, 7) == 0.0

    def test_binary_entropy_at_half(self):
        assert dit_entropy(0.5, 2) == pytest.approx(1.0, abs=1e-15)

    def test_maximum_at_cap(self):
        assert dit_entropy(0.75, 4) == pytest.approx(2.0, abs=1e-12)
        for d in range(2, 9):
            assert dit_entropy((d - 1) / d, d) == pytest.approx(math.log2(d), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 8])
    def test_monotone_and_within_range(self, d):
        cap = (d - 1) / d
        grid = np.linspace(0.0, cap, 400)
        values = [dit_entropy(float(e), d) for e in grid]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= math.log2(d) + 1e-12 for v in values)
        # log2 d attained only at the endpoint
        assert values[-1] == pytest.approx(math.log2(d), abs=1e-12)
        assert values[-2] < math.log2(d) - 1e-9

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            dit_entropy(-1e-12, 2)
        with pytest.raises(DomainError):
            dit_entropy(0.51, 2)
        with pytest.raises(DomainError):
            dit_entropy(0.1, 1)


class TestSiftProbability:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_matches_exhaustive_enumeration(self, d):
        # Oracle: count phase tuples equal to (c + m*n) mod d for some (c, m).
        matching = 0
        for ks in product(range(d), repeat=d):
            for c in range(d):
                for m in range(d):
                    if all(ks[n] == (c + m * n) % d for n in range(d)):
                        matching += 1
        assert matching == d * d  # the d^2 tuples are distinct
        assert sift_probability(d) == matching / d**d

    def test_d2_keeps_everything(self):
        assert sift_probability(2) == 1.0

    def test_rejects_small_d(self):
        with pytest.raises(DomainError):
            sift_probability(1)
