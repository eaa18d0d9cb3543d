"""
This module contains the functions that plot experiment results. Figures are derived from the
CSV files only, and saved as SVG.
"""

import os
from typing import Dict, List, Sequence
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position
import data_processing  # pylint: disable=wrong-import-position
import report  # pylint: disable=wrong-import-position
from data_types import InvalidInputError  # pylint: disable=wrong-import-position


def plot_throughput(run_csv: str, out_path: str) -> str:
    """
    This function plots the objective and every user's throughput against the epoch.
    :param run_csv: a per-run CSV.
    :param out_path: SVG file to write.
    :return: out_path.
    """
    series = report.read_run_csv(run_csv)
    if not series.objective:
        raise InvalidInputError(f"No epoch in {run_csv}.")

    figure, axes = plt.subplots()
    axes.plot(series.objective, label="total")
    for name, values in series.users.items():
        axes.plot(values, label=name[: -len("_mbps")].replace("_", " "), linewidth=0.8)
    axes.set_xlabel(f"epoch ({series.epoch_ms:g} ms)")
    axes.set_ylabel("throughput (Mbps)")
    axes.set_title(f"{series.scheme}, seed {series.seed}")
    axes.legend(loc="lower right")
    figure.savefig(out_path, format="svg")
    plt.close(figure)
    return out_path


def plot_cdf(runs_csv: str, out_path: str, schemes: Sequence[str] = ()) -> str:
    """
    This function plots, per scheme, the empirical CDF of the steady-state per-user throughput
    over the runs listed in runs.csv.
    :param runs_csv: a runs.csv file.
    :param out_path: SVG file to write.
    :param schemes: schemes to draw, in legend order; every scheme in the file by default.
    :return: out_path.
    """
    values: Dict[str, List[float]] = {}
    for row in report.read_runs(runs_csv):
        values.setdefault(row["scheme"], []).append(
            float(row["steady_state_per_user_mbps"])
        )
    if not values:
        raise InvalidInputError(f"No run in {runs_csv}.")

    figure, axes = plt.subplots()
    for scheme in schemes or sorted(values):
        if scheme not in values:
            raise InvalidInputError(f"No run of scheme {scheme} in {runs_csv}.")
        points, fractions = data_processing.empirical_cdf(values[scheme])
        axes.step(points, fractions, where="post", label=scheme)
    axes.set_xlabel("steady-state throughput per user (Mbps)")
    axes.set_ylabel("CDF")
    axes.set_ylim(0.0, 1.0)
    axes.legend(loc="lower right")
    figure.savefig(out_path, format="svg")
    plt.close(figure)
    return out_path


def plot_directory(out_dir: str) -> List[str]:
    """
    This function plots every per-run CSV of a directory and, if present, the CDF of runs.csv.
    :return: the SVG files written.
    """
    written: List[str] = []
    for name in sorted(os.listdir(out_dir)):
        stem, extension = os.path.splitext(name)
        if extension != ".csv" or "_seed" not in stem or stem.endswith("_actions"):
            continue
        written.append(
            plot_throughput(
                os.path.join(out_dir, name), os.path.join(out_dir, stem + ".svg")
            )
        )
    runs_csv: str = os.path.join(out_dir, "runs.csv")
    if os.path.exists(runs_csv):
        written.append(plot_cdf(runs_csv, os.path.join(out_dir, "cdf.svg")))
    return written
