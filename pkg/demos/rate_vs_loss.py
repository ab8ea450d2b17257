"""Key rate versus channel loss with realistic detectors.

Fixes the detector model at a mode mismatch of 0.05 and a dark-count
probability of 1e-4 per gate, then sweeps channel loss for several encoding
dimensions at L = 16.  At low loss, larger d carries more secret bits per
detection; at high loss the dark counts dominate the error budget and every
curve dies at a finite loss.  Both normalizations are reported: per sifted
detection and per transmitted packet (the latter folds in the d^(2-d)
sifting probability and the yield).

Run:  python demos/rate_vs_loss.py
"""

from pathlib import Path

from hdrrdps import NoiseModel, ProtocolParams, rate_curve

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

L = 16
DIMS = (2, 3, 4)
NOISE = NoiseModel(loss_db=0.0, p_d=1e-4, e_mis=0.05)
GRID = [0.5 * i for i in range(121)]
OUT = Path(__file__).parent / "output"


def cutoff(points):
    for p in points:
        if p.rate_per_sifted == 0.0:
            return p.loss_db
    return float("nan")


def main():
    print(f"L = {L}, e_mis = {NOISE.e_mis}, p_d = {NOISE.p_d}")
    print(f"{'d':>3} {'rate@0dB (monitored)':>22} {'rate@0dB (plain)':>18} {'cutoff dB (mon)':>16}")
    curves = {}
    for d in DIMS:
        params = ProtocolParams(L, d)
        monitored = rate_curve(params, NOISE, GRID, monitored=True)
        plain = rate_curve(params, NOISE, GRID, monitored=False)
        curves[d] = (monitored, plain)
        print(
            f"{d:>3} {monitored[0].rate_per_sifted:>22.4f} "
            f"{plain[0].rate_per_sifted:>18.4f} {cutoff(monitored):>16.1f}"
        )

    if not HAVE_MPL:
        print("matplotlib not installed; skipping the figure")
        return
    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    for d in DIMS:
        monitored, plain = curves[d]
        axes[0, 0].plot(GRID, [p.rate_per_sifted for p in plain], label=f"d = {d}")
        axes[0, 1].plot(GRID, [p.rate_per_sifted for p in monitored], label=f"d = {d}")
        axes[1, 0].semilogy(GRID, [max(p.rate_per_packet, 1e-12) for p in plain])
        axes[1, 1].semilogy(GRID, [max(p.rate_per_packet, 1e-12) for p in monitored])
    axes[0, 0].set_title("per sifted detection, without monitoring")
    axes[0, 1].set_title("per sifted detection, with monitoring")
    axes[1, 0].set_title("per transmitted packet (log)")
    axes[1, 1].set_title("per transmitted packet (log)")
    for ax in axes.flat:
        ax.grid(alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel("channel loss (dB)")
        ax.set_ylim(1e-9, 1)
    axes[0, 0].set_ylabel("secret bits")
    axes[1, 0].set_ylabel("secret bits")
    axes[0, 1].legend()
    fig.tight_layout()
    target = OUT / "rate_vs_loss.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
