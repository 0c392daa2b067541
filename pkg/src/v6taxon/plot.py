"""MRA plot rendering (SVG through matplotlib)."""

from __future__ import annotations

STYLE = {
    1: dict(color="tab:blue", label="single bits", linewidth=1.0),
    4: dict(color="black", label="nybbles", linewidth=1.5, drawstyle="steps-post"),
    8: dict(color="tab:green", label="bytes", linewidth=1.5, drawstyle="steps-post"),
    16: dict(color="tab:red", label="16-bit segments", linewidth=2.0, drawstyle="steps-post"),
}


def mra_svg(series_list, path, title=None):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed salt keeps generated element ids stable between runs
    matplotlib.rcParams["svg.hashsalt"] = "v6taxon"

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for series in series_list:
        pts = series.floats()
        xs = [p for p, _ in pts] + [128]
        ys = [r for _, r in pts] + [pts[-1][1]]
        ax.plot(xs, ys, **STYLE[series.k])
    ax.set_yscale("log", base=2)
    ax.set_ylim(1, 2**16)
    ax.set_xlim(0, 128)
    ax.set_xticks(range(0, 129, 16))
    ax.set_xlabel("prefix length p")
    ax.set_ylabel("MRA count ratio n[p+k] / n[p]")
    ax.grid(True, which="major", alpha=0.3)
    ax.legend(loc="upper right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    # no timestamp metadata, so identical input gives identical bytes
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
