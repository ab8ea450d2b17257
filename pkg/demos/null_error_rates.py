"""Best-case key rates: secret bits per sifted detection at zero error.

With monitoring, a clean channel certifies a purely diagonal attack split and
the rate is exactly log2(d) bits per sifted detection.  Without monitoring the
eavesdropper term must be maximized over all splits, which costs rate -- and
for small packets the bound saturates: the unmonitored rate is positive only
when (d-1)^2 < L - 1, so each dimension needs a large enough packet to pay off.

Run:  python demos/null_error_rates.py
"""

import math
from pathlib import Path

from hdrrdps import ProtocolParams, rate_monitor, rate_no_monitor

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

DIMS = (2, 3, 4, 8)
OUT = Path(__file__).parent / "output"


def main():
    print("zero-error key rates, bits per sifted detection")
    print(f"{'L':>4} {'d':>3} {'monitored':>10} {'unmonitored':>12} {'min L for R>0':>14}")
    curves = {}
    for d in DIMS:
        min_L = (d - 1) ** 2 + 2  # smallest packet with a positive unmonitored rate
        xs, mon, unmon = [], [], []
        for L in range(d + 1, 65):
            p = ProtocolParams(L, d)
            xs.append(L)
            mon.append(rate_monitor(p, 0.0).rate_bits)
            unmon.append(max(0.0, rate_no_monitor(p, 0.0).rate_bits))
        curves[d] = (xs, mon, unmon)
        for L in (16, 64):
            p = ProtocolParams(L, d)
            print(
                f"{L:>4} {d:>3} {rate_monitor(p, 0.0).rate_bits:>10.4f} "
                f"{rate_no_monitor(p, 0.0).rate_bits:>12.4f} {min_L:>14}"
            )
    print("\nmonitored rates equal log2(d) exactly:",
          all(rate_monitor(ProtocolParams(24, d), 0.0).rate_bits == math.log2(d) for d in DIMS))

    if not HAVE_MPL:
        print("matplotlib not installed; skipping the figure")
        return
    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for d in DIMS:
        xs, mon, unmon = curves[d]
        axes[0].plot(xs, unmon, label=f"d = {d}")
        axes[1].plot(xs, mon, label=f"d = {d}")
    axes[0].set_title("without monitoring (clamped at 0)")
    axes[1].set_title("with monitoring")
    for ax in axes:
        ax.set_xlabel("packet size L")
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("secret bits per sifted detection")
    axes[1].legend()
    fig.tight_layout()
    target = OUT / "null_error_rates.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
