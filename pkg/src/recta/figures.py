"""Figure rendering for stats and bench reports.

Every renderer takes data plus an output directory, writes one PNG, and
returns its path. Rendering is optional everywhere; the delimited text
output stays the primary record.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .alphabet import ALPHABET
from .stats import CHI2_PAIRWISE_THRESHOLD, CHI2_UNIFORM_THRESHOLD, StatReport, letter_counts


def _finish(fig, outdir, name: str) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def frequency_figure(text, outdir, name: str = "letter_frequencies.png") -> Path:
    table = letter_counts(text)
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.bar(range(26), table.counts, color="#4878a8")
    ax.axhline(table.length / 26, color="#c44e52", linestyle="--", label="uniform")
    ax.set_xticks(range(26))
    ax.set_xticklabels(ALPHABET)
    ax.set_ylabel("count")
    ax.set_title(f"Letter frequencies over {table.length} letters")
    ax.legend()
    return _finish(fig, outdir, name)


def report_figure(report: StatReport, outdir, name: str = "chi2_battery.png") -> Path:
    distances = [r.distance for r in report.chi2_pairwise]
    stats = [r.statistic for r in report.chi2_pairwise]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax1.bar([0], [report.chi2_uniform.statistic], color="#4878a8")
    ax1.axhline(CHI2_UNIFORM_THRESHOLD, color="#c44e52", linestyle="--",
                label=f"threshold {CHI2_UNIFORM_THRESHOLD}")
    ax1.set_xticks([0])
    ax1.set_xticklabels(["uniformity"])
    ax1.set_ylabel("chi-squared")
    ax1.legend()
    ax2.bar(distances, stats, color="#4878a8")
    ax2.axhline(CHI2_PAIRWISE_THRESHOLD, color="#c44e52", linestyle="--",
                label=f"threshold {CHI2_PAIRWISE_THRESHOLD:g}")
    ax2.set_xlabel("distance d")
    ax2.set_ylabel("pairwise chi-squared")
    ax2.legend()
    fig.suptitle(f"Randomness battery: {report.verdict}")
    return _finish(fig, outdir, name)


def birthday_figure(results: dict, outdir, name: str = "birthday_repeats.png") -> Path:
    fig, ax = plt.subplots(figsize=(7, 3.2))
    labels = []
    means = []
    medians = []
    for key in ("gram2", "gram3", "gram4"):
        if key in results:
            labels.append(f"{key[-1]}-gram")
            means.append(results[key]["mean"])
            medians.append(results[key]["median"])
    x = np.arange(len(labels))
    ax.bar(x - 0.2, means, width=0.4, label="mean", color="#4878a8")
    ax.bar(x + 0.2, medians, width=0.4, label="median", color="#6aa84f")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_yscale("log")
    ax.set_ylabel("first repeat position")
    ax.set_title(f"First n-gram repeats over {results['trials']} keystreams")
    ax.legend()
    return _finish(fig, outdir, name)


def separation_figure(results: dict, outdir, name: str = "separation.png") -> Path:
    stats = results.get("three_text_uniform_statistics", [])
    fig, ax = plt.subplots(figsize=(7, 3.2))
    if stats:
        ax.hist(stats, bins=30, color="#4878a8")
    ax.axvline(CHI2_UNIFORM_THRESHOLD, color="#c44e52", linestyle="--",
               label=f"threshold {CHI2_UNIFORM_THRESHOLD}")
    ax.set_xlabel("uniformity chi-squared of 3-text sums")
    ax.set_ylabel("samples")
    ax.set_title(
        f"3-text sums at length {results['length']}: "
        f"pass rate {results['three_text_uniform_pass_rate']:.2f}"
    )
    ax.legend()
    return _finish(fig, outdir, name)
