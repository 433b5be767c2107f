#!/usr/bin/env python3
"""Plot SER-vs-SNR waterfall curves from a sweep CSV.

One figure per (sf, waveform) pair, one curve per delta_s, log-scaled SER
with Wilson 95% bands. matplotlib is required only by this script, not by
the package:

    python scripts/plot_ser_curves.py ser_results.csv -o plots/
"""

import argparse
import csv
import os
import sys
from collections import defaultdict


def load_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            {
                "sf": int(row["sf"]),
                "waveform": row["waveform"],
                "delta_s": float(row["delta_s"]),
                "snr_db": float(row["snr_db"]),
                "ser": float(row["ser"]),
                "ci_low": float(row["ci_low"]),
                "ci_high": float(row["ci_high"]),
            }
            for row in csv.DictReader(fh)
        ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_path", help="sweep output CSV")
    parser.add_argument("-o", "--out-dir", default="plots", help="directory for PNG files")
    parser.add_argument("--floor", type=float, default=1e-6, help="lower SER axis limit")
    args = parser.parse_args(argv)

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is not installed; pip install matplotlib", file=sys.stderr)
        return 1

    rows = load_rows(args.csv_path)
    if not rows:
        print("no rows in input", file=sys.stderr)
        return 1
    os.makedirs(args.out_dir, exist_ok=True)

    panels = defaultdict(lambda: defaultdict(list))
    for row in rows:
        panels[(row["sf"], row["waveform"])][row["delta_s"]].append(row)

    for (sf, waveform), by_delta in sorted(panels.items()):
        fig, ax = plt.subplots(figsize=(6.0, 4.5))
        for delta_s, pts in sorted(by_delta.items()):
            pts.sort(key=lambda r: r["snr_db"])
            snr = [p["snr_db"] for p in pts]
            ser = [max(p["ser"], args.floor) for p in pts]
            lo = [max(p["ci_low"], args.floor) for p in pts]
            hi = [max(p["ci_high"], args.floor) for p in pts]
            (line,) = ax.semilogy(snr, ser, marker="o", ms=3, label=f"$\\Delta_s$={delta_s:g}")
            ax.fill_between(snr, lo, hi, alpha=0.2, color=line.get_color(), lw=0)
        ax.set_xlabel("SNR (dB)")
        ax.set_ylabel("SER")
        ax.set_ylim(bottom=args.floor)
        ax.set_title(f"sf={sf}, {waveform} chip waveform")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        out = os.path.join(args.out_dir, f"ser_sf{sf}_{waveform}.png")
        fig.tight_layout()
        fig.savefig(out, dpi=150)
        plt.close(fig)
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
