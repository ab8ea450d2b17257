"""Monte Carlo round simulation against the closed-form detector model.

Runs the full per-round simulation (phase packets, subset choice, Fourier
measurement, loss, mode mismatch, dark counts, sifting) and compares the
tallies with the analytic yield and error-rate expressions at several loss
values.  Agreement is judged by 99% Wilson intervals.

Run:  python demos/monte_carlo_vs_closed_form.py
"""

from hdrrdps import (
    NoiseModel,
    ProtocolParams,
    detection_yield,
    qber,
    run,
    sift_probability,
    wilson_interval,
)

ROUNDS = 300_000
CONFIGS = [(8, 3), (16, 4)]
LOSSES = [0.0, 10.0, 20.0]
NOISE = dict(p_d=1e-4, e_mis=0.05)


def main():
    print(f"{ROUNDS} rounds per point;  e_mis = {NOISE['e_mis']}, p_d = {NOISE['p_d']}")
    header = (
        f"{'L':>3} {'d':>2} {'loss':>5} | {'yield MC':>9} {'yield':>9} {'ok':>3} "
        f"| {'qber MC':>8} {'qber':>8} {'ok':>3}"
    )
    print(header)
    print("-" * len(header))
    for L, d in CONFIGS:
        params = ProtocolParams(L, d)
        for loss in LOSSES:
            noise = NoiseModel(loss, **NOISE)
            stats = run(params, noise, ROUNDS, seed=int(loss) + 100 * d)
            y, e = detection_yield(params, noise), qber(params, noise)
            y_lo, y_hi = wilson_interval(stats.detected, stats.rounds, 0.99)
            e_lo, e_hi = wilson_interval(stats.errors, stats.sifted, 0.99)
            print(
                f"{L:>3} {d:>2} {loss:>5.0f} | {stats.detected / stats.rounds:>9.5f} "
                f"{y:>9.5f} {'yes' if y_lo <= y <= y_hi else 'NO':>3} "
                f"| {stats.qber:>8.5f} {e:>8.5f} {'yes' if e_lo <= e <= e_hi else 'NO':>3}"
            )
        clean = run(params, NoiseModel(0.0, 0.0, 0.0), ROUNDS, seed=7)
        print(
            f"{L:>3} {d:>2} clean | sift rate {clean.sift_rate:.5f} "
            f"vs d^(2-d) = {sift_probability(d):.5f}, errors = {clean.errors}"
        )


if __name__ == "__main__":
    main()
