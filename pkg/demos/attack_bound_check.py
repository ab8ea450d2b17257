"""Brute-force check of the collective-attack bounds on random attacks.

For small packets we can build the eavesdropper's ancilla states explicitly,
compute her exact Holevo information per receiver subset, and compare the
yield-weighted average against the closed-form bound evaluated at the
attack's diagonal/off-diagonal weight split.  Every random attack must land
on or below the information bound and on or above the error floor.

Run:  python demos/attack_bound_check.py
"""

from pathlib import Path

import numpy as np

from hdrrdps import (
    ProtocolParams,
    born_error_mc,
    error_lower_bound,
    iae_bound,
    overall_error,
    overall_iae,
    random_attack,
    xsplit,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

COMBOS = [(4, 2), (5, 3)]
TRIALS = 300
OUT = Path(__file__).parent / "output"


def main():
    records = {}
    for L, d in COMBOS:
        params = ProtocolParams(L, d)
        bias_rng = np.random.default_rng([L, d])
        rows = []
        for trial in range(TRIALS):
            attack = random_attack(L, trial, float(bias_rng.random()))
            split = xsplit(attack)
            rows.append(
                (
                    split.x1,
                    overall_iae(attack, d),
                    iae_bound(params, split),
                    overall_error(attack, d),
                    error_lower_bound(params, split),
                )
            )
        records[(L, d)] = rows
        slack = min(bound - value for _, value, bound, _, _ in rows)
        margin = min(err - floor for _, _, _, err, floor in rows)
        holds = all(v <= b + 1e-9 and e >= f - 1e-9 for _, v, b, e, f in rows)
        print(f"L={L} d={d}: {TRIALS} attacks, bounds hold: {holds}, "
              f"min info slack {slack:.4f} bits, min error margin {margin:.4f}")

    identity = random_attack(5, 0, 1.0)
    print(
        "identity attack sanity: exact info", overall_iae(identity, 3),
        "| literal error", f"{overall_error(identity, 3):.4f}",
        "| Born-rule error", born_error_mc(identity, 3, trials=500, seed=1),
    )

    if not HAVE_MPL:
        print("matplotlib not installed; skipping the figure")
        return
    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(1, len(COMBOS), figsize=(5 * len(COMBOS), 4))
    for ax, (L, d) in zip(np.atleast_1d(axes), COMBOS):
        rows = records[(L, d)]
        x1 = [r[0] for r in rows]
        ax.scatter(x1, [r[1] for r in rows], s=8, label="exact Holevo average")
        ax.scatter(x1, [r[2] for r in rows], s=8, marker="x", label="closed-form bound")
        ax.set_title(f"L = {L}, d = {d}")
        ax.set_xlabel("diagonal weight x1")
        ax.grid(alpha=0.3)
    np.atleast_1d(axes)[0].set_ylabel("eavesdropper information (bits)")
    np.atleast_1d(axes)[0].legend()
    fig.tight_layout()
    target = OUT / "attack_bound_check.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
