"""Error-threshold landscape: how much noise the protocol tolerates.

Sweeps the largest tolerable error rate over packet sizes L for encoding
dimensions d = 2, 3, 4, with and without signal-disturbance monitoring.
Monitoring always helps; for d = 2 the monitored threshold climbs toward 1/2
as packets grow, because the observed error rate pins the attack split ever
more tightly.

Run:  python demos/error_thresholds.py
Writes demos/output/error_thresholds.png when matplotlib is available.
"""

from pathlib import Path

from hdrrdps import ProtocolParams, threshold

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

DIMS = (2, 3, 4)
PACKETS = range(3, 65)
OUT = Path(__file__).parent / "output"


def sweep():
    curves = {}
    for d in DIMS:
        for monitored in (False, True):
            xs, ys = [], []
            for L in PACKETS:
                if L <= d:
                    continue
                xs.append(L)
                ys.append(threshold(ProtocolParams(L, d), monitored, 1e-9).value)
            curves[(d, monitored)] = (xs, ys)
    return curves


def main():
    curves = sweep()
    print("largest tolerable error rate (monitored / unmonitored)")
    print(f"{'L':>4} " + " ".join(f"{'d=' + str(d):>17}" for d in DIMS))
    for L in (8, 16, 32, 64):
        cells = []
        for d in DIMS:
            mon = dict(zip(*curves[(d, True)]))[L]
            unmon = dict(zip(*curves[(d, False)]))[L]
            cells.append(f"{mon:8.4f}/{unmon:8.4f}")
        print(f"{L:>4} " + " ".join(cells))

    if not HAVE_MPL:
        print("\nmatplotlib not installed; skipping the figure")
        return
    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, monitored, title in zip(axes, (False, True), ("without monitoring", "with monitoring")):
        for d in DIMS:
            xs, ys = curves[(d, monitored)]
            ax.plot(xs, ys, label=f"d = {d}")
        ax.set_title(title)
        ax.set_xlabel("packet size L")
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("error threshold")
    axes[0].legend()
    fig.tight_layout()
    target = OUT / "error_thresholds.png"
    fig.savefig(target, dpi=150)
    print(f"\nwrote {target}")


if __name__ == "__main__":
    main()
