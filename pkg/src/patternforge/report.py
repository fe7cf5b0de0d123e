"""Simulation report rendering: a delimited step table plus figure files.

The CSV holds one row per simulation step (step 0 is the post-shuffle rank
before any fill); alongside it two PNG figures are written, a rank
trajectory per goal and an MRR bar chart, so a run can be eyeballed without
further tooling.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .session import SimulationReport  # noqa: E402

CSV_COLUMNS = [
    "pattern_id",
    "goal",
    "seed",
    "step",
    "group_id",
    "goal_rank",
    "answer_bucket_rank",
    "response_ms",
    "final_rank",
    "mrr",
]


def write_csv(reports: list[SimulationReport], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            base = [report.pattern_id, report.goal_example_id, report.seed]
            writer.writerow(
                base
                + [0, "", report.initial_rank, "", "", report.final_rank, f"{report.mrr:.6f}"]
            )
            for i, group_id in enumerate(report.group_ids):
                writer.writerow(
                    base
                    + [
                        i + 1,
                        group_id,
                        report.trajectory[i],
                        report.bucket_ranks[i] if report.bucket_ranks[i] is not None else "absent",
                        f"{report.response_ms[i]:.3f}",
                        report.final_rank,
                        f"{report.mrr:.6f}",
                    ]
                )


def plot_trajectories(reports: list[SimulationReport], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for report in reports:
        steps = list(range(len(report.trajectory) + 1))
        ranks = [report.initial_rank, *report.trajectory]
        ax.plot(steps, ranks, marker="o", label=report.goal_example_id)
    ax.set_xlabel("holes filled")
    ax.set_ylabel("goal example rank")
    ax.set_title("Rank promotion per fill")
    ax.invert_yaxis()
    ax.grid(True, alpha=0.3)
    if len(reports) <= 12:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_mrr(reports: list[SimulationReport], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = [r.goal_example_id for r in reports]
    values = [r.mrr for r in reports]
    ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize="small")
    ax.set_ylabel("MRR")
    ax.set_ylim(0, 1.05)
    ax.set_title("Mean reciprocal rank per goal")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(reports: list[SimulationReport], report_path: str | Path) -> list[Path]:
    """CSV at report_path plus PNG figures next to it; returns written paths."""
    report_path = Path(report_path)
    if report_path.suffix == "":
        report_path = report_path.with_suffix(".csv")
    report_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(reports, report_path)
    stem = report_path.with_suffix("")
    trajectory_png = Path(f"{stem}-trajectory.png")
    mrr_png = Path(f"{stem}-mrr.png")
    plot_trajectories(reports, trajectory_png)
    plot_mrr(reports, mrr_png)
    return [report_path, trajectory_png, mrr_png]
