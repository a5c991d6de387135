"""Optional SVG plots (requires the 'plots' extra: matplotlib)."""

from __future__ import annotations

from .errors import McsimError


def _pyplot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise McsimError(
            "plots require matplotlib (pip install 'mcsim[plots]')"
        ) from exc
    return plt


def plot_timeseries(result, path) -> None:
    """Angles, vertical acceleration, strokes and valve commands over time."""
    plt = _pyplot()
    fig, axes = plt.subplots(4, 1, sharex=True, figsize=(8, 9))
    axes[0].plot(result.t, result.phi, label="roll")
    axes[0].plot(result.t, result.theta, label="pitch")
    axes[0].set_ylabel("angle (rad)")
    axes[0].legend(loc="upper right")
    axes[1].plot(result.t, result.az)
    axes[1].set_ylabel("A_z (m/s^2)")
    corners = ("fl", "fr", "rl", "rr")
    for i, name in enumerate(corners):
        axes[2].plot(result.t, result.strokes[i] * 1e3, label=name)
        axes[3].step(result.t, result.valves[i], where="post", label=name)
    axes[2].set_ylabel("stroke (mm)")
    axes[2].legend(loc="upper right", ncol=4)
    axes[3].set_ylabel("valve (1=open)")
    axes[3].set_xlabel("t (s)")
    axes[0].set_title(f"{result.scenario_name} / {result.mode}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_compare_bars(report, path) -> None:
    """Fig.-10-style normalized index bars (hard = 1.0)."""
    plt = _pyplot()
    keys = sorted({(r["metric"], r["key"]) for r in report.rows})
    modes = list(report.runs)
    fig, ax = plt.subplots(figsize=(max(6, 1.6 * len(keys)), 4))
    width = 0.8 / len(modes)
    for j, mode in enumerate(modes):
        vals = []
        for metric, key in keys:
            match = [r for r in report.rows
                     if r["mode"] == mode and r["metric"] == metric and r["key"] == key]
            vals.append(match[0]["ratio_vs_hard"] if match else float("nan"))
        xs = [i + j * width for i in range(len(keys))]
        ax.bar(xs, vals, width=width, label=mode)
    ax.axhline(1.0, color="k", lw=0.8, ls="--")
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(keys))])
    ax.set_xticklabels([f"{m}\n{k}" for m, k in keys], fontsize=8)
    ax.set_ylabel("index / hard")
    ax.set_title(f"normalized indexes: {report.scenario_name}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_maps(params, static_load, path, close_stroke: float = 0.02) -> None:
    """Soft, hard and shifted-hard stroke-force maps."""
    from .airspring import export_elastic_map

    plt = _pyplot()
    soft = export_elastic_map(params, "soft", static_load=static_load)
    hard = export_elastic_map(params, "hard", static_load=static_load)
    shifted = export_elastic_map(
        params, "soft", event_sequence=[("close", close_stroke)], static_load=static_load
    )
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(soft[:, 0] * 1e3, soft[:, 1], label="soft (open)")
    ax.plot(hard[:, 0] * 1e3, hard[:, 1], label="hard (closed at 0)")
    ax.plot(shifted[:, 0] * 1e3, shifted[:, 1], "--",
            label=f"hard shifted (closed at {close_stroke * 1e3:.0f} mm)")
    ax.set_xlabel("stroke (mm)")
    ax.set_ylabel("elastic force (N)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


__all__ = ["plot_timeseries", "plot_compare_bars", "plot_maps"]
