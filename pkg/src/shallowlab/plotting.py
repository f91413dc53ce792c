"""Figures for experiment reports and instances (matplotlib, Agg backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "shallowlab",
    "svg.fonttype": "none",
}

# stripped from saved files so that reruns are byte-identical
_METADATA = {"svg": {"Date": None}, "png": {}, "pdf": {"CreationDate": None}}


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_METADATA.get(fmt, {}), bbox_inches="tight")
    plt.close(fig)


def plot_experiment(rows, path):
    """Measured crossing, lower bound and log(n/k) reference against n/k."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        good = sorted((r for r in rows if r.get("status", "ok") == "ok"),
                      key=lambda r: (r["n"] / r["k"], r["n"], r["k"]))
        x = [r["n"] / r["k"] for r in good]
        ax.plot(x, [r["measured_crossing"] for r in good], "o-", label="baseline crossing")
        ax.plot(x, [r["lower_bound"] for r in good], "s--", label="slice lower bound")
        ax.plot(x, [float(r["upper_ref"]) for r in good], ":", color="0.4", label="log2(n/k)")
        if x:
            ax.set_xscale("log", base=2)
        ax.set_xlabel("n / k")
        ax.set_ylabel("triangles crossed")
        ax.legend(frameon=False)
        _save(fig, path)


def plot_instance(instance, path, partition=None, level=None):
    """Dual view (chain, lines, level hull) next to the primal point set."""
    with plt.rc_context(STYLE):
        fig, (dual, primal) = plt.subplots(1, 2, figsize=(8.0, 3.6))
        xs = [float(v.x) for v in instance.chain]
        lo, hi = xs[0] - 0.5, xs[-1] + 0.5
        for ln in instance.lines:
            dual.plot([lo, hi], [float(ln.at(lo)), float(ln.at(hi))], color="0.75", lw=0.5)
        dual.plot(xs, [float(v.y) for v in instance.chain], "ko-", ms=3, label="chain")
        if level is not None:
            hull = [(float(p.x), float(p.y)) for p in level.hull if lo <= p.x <= hi]
            if hull:
                dual.plot(*zip(*hull), "r.-", ms=4, label=f"{level.k}-level hull")
        ys = [float(v.y) for v in instance.chain]
        pad = (max(ys) - min(ys)) * 0.3 + 1
        dual.set_ylim(min(ys) - pad, max(ys) + pad)
        dual.set_title("dual")
        dual.legend(frameon=False)

        pts = instance.points
        primal.plot([float(p.x) for p in pts], [float(p.y) for p in pts], "b.", ms=4, label="instance")
        if instance.padding:
            primal.plot([float(p.x) for p in instance.padding], [float(p.y) for p in instance.padding],
                        "g.", ms=4, label="padding")
        if partition is not None:
            for tri in partition.triangles:
                cx = [float(v.x) for v in tri] + [float(tri[0].x)]
                cy = [float(v.y) for v in tri] + [float(tri[0].y)]
                primal.plot(cx, cy, color="0.5", lw=0.6)
        primal.set_title("primal")
        primal.legend(frameon=False)
        _save(fig, path)
