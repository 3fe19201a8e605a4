"""Static figures for reports (matplotlib, Agg backend).

SVG output is made reproducible by fixing the hash salt and dropping the
date metadata, so reruns write identical files.
"""
from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "kinets"


def _save(fig, path):
    meta = {"Date": None} if str(path).endswith(".svg") else {}
    fig.savefig(path, metadata=meta, bbox_inches="tight")
    plt.close(fig)


def plot_static(P, path, point=None, simplex=None, title=""):
    """Planar point set with an optional marked point and triangle."""
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [float(p[0]) for p in P.points]
    ys = [float(p[1]) for p in P.points]
    ax.scatter(xs, ys, s=14, color="0.3", label="P")
    if simplex:
        tri = [P.by_id(pid) for pid in simplex]
        tx = [float(p[0]) for p in tri] + [float(tri[0][0])]
        ty = [float(p[1]) for p in tri] + [float(tri[0][1])]
        ax.plot(tx, ty, color="tab:blue", lw=1.2, label="simplex")
    if point is not None:
        ax.scatter([float(point[0])], [float(point[1])], s=60, marker="*", color="tab:red", label="selected point")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title, fontsize=10)
    _save(fig, path)


def plot_kinetic_1d(M, path, horizon=2, events=(), net=(), samples=400, title=""):
    """Trajectories t -> p(t) on [0, horizon] with event times and net members marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    H = float(horizon)
    ts = [H * k / samples for k in range(samples + 1)]
    net = set(net)
    for pid, f in M.points:
        vals = []
        for t in ts:
            v = f(Fraction(t))
            vals.append(float("nan") if v is None or abs(v) > 1e6 else float(v))
        style = {"lw": 2.0} if pid in net else {"lw": 1.0, "alpha": 0.8}
        ax.plot(ts, vals, label=pid, **style)
    for e in events:
        if 0 <= e <= H:
            ax.axvline(e, color="0.6", ls=":", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("position")
    if len(M) <= 12:
        ax.legend(loc="best", fontsize=7)
    ax.set_title(title, fontsize=10)
    _save(fig, path)


def plot_weak_net(P, net, t, path, title=""):
    """P(t), N(t) and the moving vertical lines of the net at time t."""
    t = Fraction(t)
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = P.at(t)
    ax.scatter([float(x) for x, _ in pts], [float(y) for _, y in pts], s=14, color="0.25", label="P(t)", zorder=3)
    npts = net.points_at(P, t)
    if not net.fallback:
        for line in net.lines:
            ax.axvline(float(line.abscissa(t)), color="tab:blue", lw=0.5, alpha=0.5)
    if npts:
        ax.scatter([float(x) for x, _ in npts], [float(y) for _, y in npts], s=8, marker="x",
                   color="tab:red", label="N(t)", zorder=2)
    ys = [float(y) for _, y in pts]
    if ys:
        pad = (max(ys) - min(ys)) * 0.25 + 1
        ax.set_ylim(min(ys) - pad, max(ys) + pad)
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title or f"t = {t}", fontsize=10)
    _save(fig, path)
