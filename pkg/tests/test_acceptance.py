"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criteria 3b and 4b-unmonitored assert the stated universal claims
faithfully; they fail in the small-packet regime where the literal published
information bound exceeds log2 d (see the decisions ledger), and the failure
messages list the exact offending parameter pairs.
"""

import math
import os
import subprocess
import sys
import time
from itertools import combinations, product

import numpy as np
import pytest

from hdrrdps import (
    AttackSplit,
    NoiseModel,
    ProtocolParams,
    detection_yield,
    dit_entropy,
    error_lower_bound,
    iae_bound,
    overall_error,
    overall_iae,
    qber,
    random_attack,
    rate_curve,
    rate_monitor,
    rate_no_monitor,
    run,
    sift_probability,
    threshold,
    weight_entropy,
    wilson_interval,
    xsplit,
)

ATTACK_COMBOS = [(3, 2), (4, 2), (4, 3), (5, 3)]
ATTACK_TRIALS = 1000
FULL_GRID = [(L, d) for L in range(3, 65) for d in range(2, L)]
THRESHOLD_GRID = [(L, d) for d in (2, 3, 4) for L in range(d + 1, 65)]
FIG5_NOISE = dict(p_d=1e-4, e_mis=0.05)
MC_ROUNDS = 1_000_000


def report(criterion, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status}{' — ' + detail if detail else ''}")
    return ok


@pytest.fixture(scope="module")
def threshold_table():
    """All thresholds on the criterion-4 grid at two bisection tolerances."""
    t0 = time.time()
    table = {}
    for L, d in THRESHOLD_GRID:
        params = ProtocolParams(L, d)
        for monitored in (False, True):
            table[(L, d, monitored)] = (
                threshold(params, monitored, 1e-6).value,
                threshold(params, monitored, 1e-9).value,
            )
    elapsed = time.time() - t0
    assert report("4-runtime", elapsed < 120.0, f"threshold grid in {elapsed:.1f}s (< 120s)")
    return table


class TestCriterion1AttackBounds:
    def test_seeded_random_attacks_respect_both_bounds(self):
        t0 = time.time()
        failures = []
        for L, d in ATTACK_COMBOS:
            params = ProtocolParams(L, d)
            bias_rng = np.random.default_rng([L, d, 2024])
            for trial in range(ATTACK_TRIALS):
                attack = random_attack(L, trial, float(bias_rng.random()))
                split = xsplit(attack)
                iae_num = overall_iae(attack, d)
                iae_lim = iae_bound(params, split)
                err_num = overall_error(attack, d)
                err_lim = error_lower_bound(params, split)
                if not (iae_num <= iae_lim + 1e-9 and err_num >= err_lim - 1e-9):
                    failures.append((L, d, trial))
        elapsed = time.time() - t0
        ok = not failures and elapsed < 300.0
        assert report(
            "1",
            ok,
            f"{len(ATTACK_COMBOS) * ATTACK_TRIALS} attacks, "
            f"{len(failures)} violations, {elapsed:.1f}s (< 300s)",
        )


class TestCriterion2DimensionTwoReduction:
    def test_general_formula_reduces_exactly(self):
        splits = [AttackSplit(x, 1.0 - x) for x in (0.0, 0.25, 0.3, 0.9, 1.0)]
        mismatches = []
        for L in range(3, 65):
            params = ProtocolParams(L, 2)
            for split in splits:
                general = error_lower_bound(params, split)
                reduced = ((2 - 1) / 2) * ((L - 2) / (L - 1)) * (split.x2 / (split.x1 + split.x2))
                if general != reduced:
                    mismatches.append((L, split.x1))
        assert report("2", not mismatches, f"L in 3..64, {len(splits)} splits, exact equality")


class TestCriterion3NullErrorRates:
    def test_monitored_rate_is_exactly_log2d(self):
        bad = [
            (L, d)
            for L, d in FULL_GRID
            if rate_monitor(ProtocolParams(L, d), 0.0).rate_bits != math.log2(d)
        ]
        assert report("3a", not bad, f"rate_monitor(0) == log2(d) on {len(FULL_GRID)} pairs")

    def test_unmonitored_rate_positive_and_below_log2d(self):
        bad = []
        for L, d in FULL_GRID:
            value = rate_no_monitor(ProtocolParams(L, d), 0.0).rate_bits
            if not 0.0 < value < math.log2(d):
                bad.append((L, d))
        ok = not bad
        detail = (
            f"all {len(FULL_GRID)} pairs in range"
            if ok
            else (
                f"{len(bad)}/{len(FULL_GRID)} pairs violate 0 < R(0) < log2(d), "
                f"first {bad[:6]}: the literal information bound reaches log2 d whenever "
                "(d-1)^2 >= L-1, so R(0) <= 0 there; see decisions ledger"
            )
        )
        assert report("3b", ok, detail)

    def test_unmonitored_rate_increases_with_packet_size(self):
        bad = []
        for d in range(2, 64):
            values = [
                rate_no_monitor(ProtocolParams(L, d), 0.0).rate_bits for L in range(d + 1, 65)
            ]
            for i, (a, b) in enumerate(zip(values, values[1:])):
                if not b > a - 1e-9:
                    bad.append((d, d + 1 + i))
        assert report("3c", not bad, "R(0) increases with L at fixed d (tol 1e-9)")


class TestCriterion4Thresholds:
    def test_monitoring_never_lowers_threshold(self, threshold_table):
        bad = [
            (L, d)
            for L, d in THRESHOLD_GRID
            if threshold_table[(L, d, True)][1] < threshold_table[(L, d, False)][1] - 1e-12
        ]
        assert report("4a", not bad, f"monitored >= unmonitored on {len(THRESHOLD_GRID)} pairs")

    def test_monitored_threshold_increases_with_packet_size(self, threshold_table):
        bad = []
        for d in (2, 3, 4):
            values = [threshold_table[(L, d, True)][1] for L in range(d + 1, 65)]
            bad.extend(
                (d, L) for L, (a, b) in enumerate(zip(values, values[1:]), start=d + 2) if b <= a
            )
        assert report("4b-monitored", not bad, "strict increase with L for d in {2,3,4}")

    def test_unmonitored_threshold_increases_with_packet_size(self, threshold_table):
        bad = []
        for d in (2, 3, 4):
            values = [threshold_table[(L, d, False)][1] for L in range(d + 1, 65)]
            bad.extend(
                (d, L) for L, (a, b) in enumerate(zip(values, values[1:]), start=d + 2) if b <= a
            )
        ok = not bad
        detail = (
            "strict increase with L for d in {2,3,4}"
            if ok
            else (
                f"violations at (d, L): {bad}: thresholds tie at 0 while (d-1)^2 >= L-1 "
                "keeps the unmonitored rate non-positive; see decisions ledger"
            )
        )
        assert report("4b-unmonitored", ok, detail)

    def test_bisection_tolerance_stability(self, threshold_table):
        bad = [
            key
            for key, (coarse, fine) in threshold_table.items()
            if abs(coarse - fine) > 2e-6
        ]
        assert report("4c", not bad, "|E*(1e-6) - E*(1e-9)| <= 2e-6 on the whole grid")


class TestCriterion5MonteCarloVsClosedForm:
    def test_simulated_statistics_match_closed_form(self):
        t0 = time.time()
        failures = []
        for (L, d), loss in product([(8, 3), (16, 4)], [0.0, 10.0, 20.0]):
            params = ProtocolParams(L, d)
            noise = NoiseModel(loss, **FIG5_NOISE)
            stats = run(params, noise, MC_ROUNDS, seed=20_000 + int(loss) + L)
            y_expected = detection_yield(params, noise)
            e_expected = qber(params, noise)
            y_low, y_high = wilson_interval(stats.detected, stats.rounds, 0.99)
            e_low, e_high = wilson_interval(stats.errors, stats.sifted, 0.99)
            if not y_low <= y_expected <= y_high:
                failures.append((L, d, loss, "yield", y_expected, (y_low, y_high)))
            if not e_low <= e_expected <= e_high:
                failures.append((L, d, loss, "qber", e_expected, (e_low, e_high)))
        elapsed = time.time() - t0
        ok = not failures and elapsed < 180.0
        assert report("5", ok, f"6 parameter points at 1e6 rounds, {elapsed:.1f}s (< 180s); {failures}")

    def test_noiseless_sift_rate_matches_enumeration(self):
        failures = []
        for L, d in [(8, 3), (16, 4)]:
            stats = run(ProtocolParams(L, d), NoiseModel(0.0, 0.0, 0.0), MC_ROUNDS, seed=31 + d)
            expected = sift_probability(d)
            margin = 4.0 * math.sqrt(expected * (1.0 - expected) / stats.detected)
            if abs(stats.sift_rate - expected) > margin:
                failures.append((L, d, stats.sift_rate, expected))
            if stats.qber != 0.0:
                failures.append((L, d, "qber", stats.qber))
        assert report("5-sift", not failures, f"sift rate within 4 sigma of d^(2-d); {failures}")


class TestCriterion6FigureShape:
    def test_rate_grows_with_dimension_at_low_loss(self):
        rates = {}
        for d in (2, 3, 4):
            params = ProtocolParams(16, d)
            noise = NoiseModel(0.0, **FIG5_NOISE)
            point = rate_curve(params, noise, [0.0], monitored=True)[0]
            rates[d] = point.rate_per_sifted
        ok = rates[2] < rates[3] < rates[4]
        assert report("6-dimension", ok, f"monitored rate at L=16, 0 dB: {rates}")

    def test_curves_non_increasing_and_terminating(self):
        grid = [0.5 * i for i in range(121)]
        bad = []
        for d, monitored in product((2, 3, 4), (False, True)):
            params = ProtocolParams(16, d)
            noise = NoiseModel(0.0, **FIG5_NOISE)
            points = rate_curve(params, noise, grid, monitored)
            values = [p.rate_per_sifted for p in points]
            if any(b > a + 1e-12 for a, b in zip(values, values[1:])):
                bad.append((d, monitored, "non-monotone"))
            if values[-1] != 0.0:
                bad.append((d, monitored, "no finite cutoff"))
        assert report("6-loss", not bad, "all 6 curves non-increasing, zero by 60 dB")


class TestCriterion7KernelIdentities:
    def test_randomized_identities(self):
        rng = np.random.default_rng(2718)
        bad = []
        for _ in range(2000):
            d = int(rng.integers(2, 9))
            a = float(rng.random() * 10 + 1e-6)
            expected = d * a * math.log2(d)
            got = weight_entropy([a] * d)
            if abs(got - expected) > 1e-9 * max(1.0, abs(expected)):
                bad.append(("equal-weight", d, a))
            w = rng.random(d) * 10
            scale = float(rng.random() * 99 + 0.01)
            lhs = weight_entropy(scale * w)
            rhs = scale * weight_entropy(w)
            if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
                bad.append(("homogeneity", d))
            x, y = rng.random(d), rng.random(d)
            t = float(rng.random())
            if weight_entropy(t * x + (1 - t) * y) < t * weight_entropy(x) + (1 - t) * weight_entropy(y) - 1e-9:
                bad.append(("concavity", d))
            e = float(rng.random()) * (d - 1) / d
            h = dit_entropy(e, d)
            if not -1e-12 <= h <= math.log2(d) + 1e-12:
                bad.append(("entropy-range", d, e))
        assert report("7", not bad, f"2000 randomized identity draws; {bad[:5]}")


class TestCriterion8Determinism:
    COMMANDS = {
        "simulate": [
            "simulate", "--L", "8", "--d", "3", "--rounds", "100000", "--seed", "42",
            "--loss", "3", "--pd", "1e-4", "--e-mis", "0.05",
        ],
        "verify-bound": [
            "verify-bound", "--L", "5", "--d", "3", "--trials", "100", "--seed", "7",
        ],
    }

    def _run(self, argv, threads):
        env = dict(os.environ)
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            env[var] = str(threads)
        proc = subprocess.run(
            [sys.executable, "-m", "hdrrdps", *argv],
            capture_output=True,
            env=env,
            check=False,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        return proc.stdout

    @pytest.mark.parametrize("name", ["simulate", "verify-bound"])
    def test_byte_identical_across_runs_and_thread_counts(self, name):
        argv = self.COMMANDS[name]
        single = self._run(argv, 1)
        repeat = self._run(argv, 1)
        threaded = self._run(argv, 4)
        ok = single == repeat == threaded and len(single) > 0
        assert report(f"8-{name}", ok, f"{len(single)} output bytes, identical across 3 runs")
