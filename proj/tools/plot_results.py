#!/usr/bin/env python3
"""Plot the CSV reports produced by `pmms all`.

Usage: tools/plot_results.py <out_dir> [plot_dir]

Produces per-path accuracy comparisons, frequency-rank histograms, per-path
delay components, drop comparisons, load distributions and the RSSI trace.
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def plot_accuracy(out_dir, plot_dir):
    rows = read_rows(out_dir / "accuracy_paths.csv")
    series = defaultdict(dict)
    for row in rows:
        series[row["predictor"]][int(row["path_id"])] = float(row["accuracy_pct"])
    plt.figure(figsize=(10, 4))
    n_show = 30  # line graph over a small sample of paths
    for name in ("ltdmps_partial", "ltdmps_full", "lt_only", "tm", "ip"):
        if name not in series:
            continue
        ids = sorted(series[name])[:n_show]
        plt.plot(ids, [series[name][i] for i in ids], marker=".", label=name)
    plt.xlabel("mobile path")
    plt.ylabel("prediction accuracy (%)")
    plt.ylim(-5, 105)
    plt.legend(fontsize=8)
    plt.tight_layout()
    plt.savefig(plot_dir / "accuracy_paths.png", dpi=120)
    plt.close()


def plot_ranks(out_dir, plot_dir):
    rows = read_rows(out_dir / "rank_histogram.csv")
    per = defaultdict(dict)
    for row in rows:
        if row["rank"] == "absent":
            continue
        per[row["predictor"]][int(row["rank"])] = int(row["count"])
    for name, hist in per.items():
        plt.figure(figsize=(5, 3))
        ranks = sorted(hist)
        plt.bar(ranks, [hist[r] for r in ranks])
        plt.xlabel("frequency rank of the actual AP")
        plt.ylabel("transitions")
        plt.title(name)
        plt.tight_layout()
        plt.savefig(plot_dir / f"rank_{name}.png", dpi=120)
        plt.close()


def plot_delays(out_dir, plot_dir):
    rows = read_rows(out_dir / "delay_paths.csv")
    ids = [int(r["path_id"]) for r in rows][:30]
    for col, label in (
        ("scan_ms", "probe/scan delay (ms)"),
        ("auth_ms", "authentication delay (ms)"),
        ("reassoc_ms", "reassociation delay (ms)"),
        ("total_ms", "total handoff delay (ms)"),
    ):
        plt.figure(figsize=(8, 3))
        plt.plot(ids, [float(r[col]) for r in rows[: len(ids)]], marker="o")
        plt.xlabel("mobile path")
        plt.ylabel(label)
        plt.tight_layout()
        plt.savefig(plot_dir / f"delay_{col}.png", dpi=120)
        plt.close()


def plot_drops(out_dir, plot_dir):
    rows = read_rows(out_dir / "drops.csv")[:30]
    ids = [int(r["path_id"]) for r in rows]
    plt.figure(figsize=(8, 3))
    plt.plot(ids, [int(r["with_reservation_bits"]) for r in rows], marker="o",
             label="with reservation")
    plt.plot(ids, [int(r["without_reservation_bits"]) for r in rows], marker="x",
             label="without reservation")
    plt.xlabel("mobile path")
    plt.ylabel("bits dropped")
    plt.legend(fontsize=8)
    plt.tight_layout()
    plt.savefig(plot_dir / "drops.png", dpi=120)
    plt.close()


def plot_load(out_dir, plot_dir):
    rows = read_rows(out_dir / "delay_paths.csv")[:30]
    ids = [int(r["path_id"]) for r in rows]
    plt.figure(figsize=(8, 3))
    bottom = [0] * len(rows)
    for col in ("low", "medium", "high"):
        vals = [int(r[col]) for r in rows]
        plt.bar(ids, vals, bottom=bottom, label=col)
        bottom = [b + v for b, v in zip(bottom, vals)]
    plt.xlabel("mobile path")
    plt.ylabel("events by load class")
    plt.legend(fontsize=8)
    plt.tight_layout()
    plt.savefig(plot_dir / "load_distribution.png", dpi=120)
    plt.close()


def plot_trace(out_dir, plot_dir):
    rows = read_rows(out_dir / "rssi_trace.csv")
    plt.figure(figsize=(8, 3))
    x = range(1, len(rows) + 1)
    plt.plot(x, [float(r["current_mw"]) for r in rows], marker=".", label="current AP")
    plt.plot(x, [float(r["next_mw"]) for r in rows], marker=".", label="next AP")
    for i, r in enumerate(rows):
        if r["event"] == "warning":
            plt.axvline(i + 1, color="orange", alpha=0.2)
        if r["event"] == "handoff_ready":
            plt.axvline(i + 1, color="red", alpha=0.3)
    plt.xlabel("RSSI sample")
    plt.ylabel("RSSI (mW)")
    plt.legend(fontsize=8)
    plt.tight_layout()
    plt.savefig(plot_dir / "rssi_trace.png", dpi=120)
    plt.close()


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    out_dir = Path(sys.argv[1])
    plot_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else out_dir / "plots"
    plot_dir.mkdir(parents=True, exist_ok=True)
    plot_accuracy(out_dir, plot_dir)
    plot_ranks(out_dir, plot_dir)
    plot_delays(out_dir, plot_dir)
    plot_drops(out_dir, plot_dir)
    plot_load(out_dir, plot_dir)
    plot_trace(out_dir, plot_dir)
    print(f"plots written to {plot_dir}")


if __name__ == "__main__":
    main()
