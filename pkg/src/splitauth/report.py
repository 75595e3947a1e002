"""Report rendering: delimited tables plus matplotlib figures on disk.

Verdict arithmetic stays exact everywhere else; figures are presentation, so
fractions are converted to floats only at the plotting boundary and every bar
is annotated with its exact value.
"""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .codes import AuthCode
from .designs import VerificationReport
from .security import DeceptionProfile


def write_profile_csv(profile: DeceptionProfile, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["order", "probability", "bound", "meets_bound", "acceptance_only"]
        )
        for row in profile.orders:
            writer.writerow(
                [
                    row.order,
                    str(row.probability),
                    str(row.bound),
                    "yes" if row.meets_bound else "no",
                    str(row.acceptance_probability),
                ]
            )


def write_profile_figure(profile: DeceptionProfile, code: AuthCode, path: Path) -> None:
    orders = [row.order for row in profile.orders]
    probs = [float(row.probability) for row in profile.orders]
    bounds = [float(row.bound) for row in profile.orders]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    width = 0.38
    bars_p = ax.bar([i - width / 2 for i in orders], probs, width, label="achieved")
    bars_b = ax.bar([i + width / 2 for i in orders], bounds, width, label="bound")
    for bar, row in zip(bars_p, profile.orders):
        ax.annotate(
            str(row.probability),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    for bar, row in zip(bars_b, profile.orders):
        ax.annotate(
            str(row.bound),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax.set_xticks(orders)
    ax.set_xlabel("attack order")
    ax.set_ylabel("deception probability")
    ax.set_title(
        f"{code.num_rules} rules, {code.num_sources} sources, "
        f"{code.num_messages} messages (security order {profile.security_order})"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_verification_csv(report: VerificationReport, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["coverage_count", "subsets"])
        for count, subsets in sorted(report.histogram.items()):
            writer.writerow([count, subsets])


def write_verification_figure(report: VerificationReport, path: Path) -> None:
    counts = sorted(report.histogram)
    heights = [report.histogram[k] for k in counts]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    bars = ax.bar([str(k) for k in counts], heights)
    for bar, height in zip(bars, heights):
        ax.annotate(
            str(height),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    verdict = "pass" if report.passed else "fail"
    ax.set_xlabel(f"blocks properly covering a {report.strength}-subset")
    ax.set_ylabel("subsets")
    ax.set_title(
        f"coverage histogram, target {report.coverage} ({verdict})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_profile_report(
    profile: DeceptionProfile, code: AuthCode, outdir: str | Path
) -> list[Path]:
    """Write deception-profile.csv and .png into outdir; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "deception-profile.csv"
    fig_path = outdir / "deception-profile.png"
    write_profile_csv(profile, csv_path)
    write_profile_figure(profile, code, fig_path)
    return [csv_path, fig_path]


def render_verification_report(
    report: VerificationReport, outdir: str | Path
) -> list[Path]:
    """Write coverage-histogram.csv and .png into outdir; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "coverage-histogram.csv"
    fig_path = outdir / "coverage-histogram.png"
    write_verification_csv(report, csv_path)
    write_verification_figure(report, fig_path)
    return [csv_path, fig_path]
