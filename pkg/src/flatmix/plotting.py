"""Matplotlib figure rendering for the CLI report paths.

Figures are written to files next to the delimited outputs; the Agg backend
keeps everything headless.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_tracker_figure(trace, path):
    steps = [s["step"] for s in trace.steps]
    dists = [max(s["distance"], 1e-16) for s in trace.steps]
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.semilogy(steps, dists, marker="o", lw=1.0, ms=3)
    ax.set_xlabel("accelerated induction step")
    ax.set_ylabel("distance to integer lattice")
    ax.set_title(f"virtual-eigenvalue tracker, alpha = {trace.alpha:g}")
    ax.grid(True, which="both", alpha=0.3)
    for s in trace.steps:
        if s["excursion"]:
            ax.axvline(s["step"], color="red", alpha=0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_exclusion_figure(report, path):
    fig, ax = plt.subplots(figsize=(7, 4.2))
    lo, hi = report.window
    for i, (a, b, idx) in enumerate(report.excluded):
        ax.broken_barh([(a, b - a)], (0.6, 0.8),
                       color=plt.cm.viridis(idx / max(1, len(report.configs_used))))
    for (a, b) in report.survivors:
        ax.broken_barh([(a, b - a)], (1.8, 0.8), color="crimson")
    ax.set_xlim(lo, hi)
    ax.set_yticks([1.0, 2.2])
    ax.set_yticklabels(["excluded", "survivors"])
    ax.set_xlabel("candidate eigenvalue alpha")
    ax.set_title(
        f"rigidity exclusion scan, eps = {report.epsilon:g}, "
        f"{len(report.configs_used)} configurations"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_correlation_figure(curve, path):
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.errorbar(curve.T_values, curve.cesaro_values, yerr=curve.stderrs,
                marker="o", lw=1.0, capsize=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("Cesaro average of |correlation|")
    title = f"correlations: f={curve.f_spec}, g={curve.g_spec}, seed={curve.seed}"
    if curve.nonergodic_suspected:
        title += "  [NONERGODIC_SUSPECTED]"
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_rigidity_figure(cfg, report, path):
    fig, ax = plt.subplots(figsize=(7, 4.2))
    names = ["V / L", "H * L", "sigma normalized"]
    vals = [cfg.constants["V_over_L"], cfg.constants["H_times_L"],
            cfg.constants["sigma_normalized"]]
    bars = ax.bar(names, vals, color=["#4878d0", "#ee854a", "#6acc64"])
    for bar, v in zip(bars, vals):
        ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(),
                f"{v:.4g}", ha="center", va="bottom")
    status = "verified" if report.get("passed") else "FAILED VERIFICATION"
    ax.set_title(f"rigidity configuration, case {cfg.case}, L = {cfg.L} ({status})")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_corpus_figure(rows, path):
    fig, ax = plt.subplots(figsize=(8, 0.42 * len(rows) + 1.2))
    ax.axis("off")
    colors = {"True": "#d3f0d3", "False": "#f5d3d3"}
    table = ax.table(
        cellText=[[r["name"], r["type"], str(r["k"]), str(r["weakly_mixing"]),
                   r["reason"]] for r in rows],
        colLabels=["input", "type", "k", "weakly mixing", "reason"],
        cellColours=[[colors[str(r["weakly_mixing"])]] * 5 for r in rows],
        loc="center",
    )
    table.scale(1, 1.3)
    ax.set_title("weak-mixing verdicts for the built-in corpus")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
