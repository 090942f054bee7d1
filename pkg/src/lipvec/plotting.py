"""SVG figures of planar balanced sets and chain levels."""
from __future__ import annotations

import io
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .numkernel import DimensionError, smul  # noqa: E402
from .sets import BalancedPolytope, CircledSet, as_circled, scale  # noqa: E402

RC = {
    "svg.hashsalt": "lipvec",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.linewidth": 0.6,
    "lines.linewidth": 1.0,
}
COLORS = ("#1f4e79", "#c55a11", "#548235", "#7030a0", "#bf9000", "#2e75b6", "#843c0c", "#385723")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points):
    """Exact convex hull (monotone chain), counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def piece_outline(piece: BalancedPolytope):
    pts = list(piece.generators) + [smul(-1, g) for g in piece.generators]
    return hull_2d(pts)


def _draw_set(ax, S: CircledSet, color, label, fill_alpha):
    for i, piece in enumerate(S.pieces):
        hull = [(float(a), float(b)) for a, b in piece_outline(piece)]
        lab = label if i == 0 else None
        if len(hull) >= 3:
            ax.add_patch(Polygon(hull, closed=True, facecolor=color, alpha=fill_alpha,
                                 edgecolor="none"))
            ax.add_patch(Polygon(hull, closed=True, fill=False, edgecolor=color, label=lab))
        elif len(hull) == 2:
            ax.plot(*zip(*hull), color=color, label=lab)
        else:
            ax.plot([0.0], [0.0], marker="o", color=color, label=lab)


def render_svg(layers, title=""):
    """Render ``[(label, CircledSet), ...]`` as an SVG document string.

    Each piece is drawn as its own polygon; unions are never convexified.
    """
    for _, S in layers:
        if as_circled(S).dim != 2:
            raise DimensionError("plots need dimension 2")
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        extent = 0.0
        for k, (label, S) in enumerate(layers):
            S = as_circled(S)
            _draw_set(ax, S, COLORS[k % len(COLORS)], label, 0.12)
            for p in S.pieces:
                for g in p.generators:
                    extent = max(extent, abs(float(g[0])), abs(float(g[1])))
        extent = 1.1 * extent if extent > 0 else 1.0
        ax.set_xlim(-extent, extent)
        ax.set_ylim(-extent, extent)
        ax.set_aspect("equal")
        ax.axhline(0, color="0.75", lw=0.4, zorder=0)
        ax.axvline(0, color="0.75", lw=0.4, zorder=0)
        if title:
            ax.set_title(title)
        if len(layers) > 1:
            ax.legend(loc="upper right", frameon=False, fontsize=7)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": "lipvec"})
        plt.close(fig)
    return buf.getvalue()


def plot_ball(target, levels=None, title=""):
    """SVG of a set, a gauge's sublevel sets, or chain levels.

    ``target`` may be a :class:`CircledSet`, a gauge (levels ``n`` draw
    ``{p <= 2^-n}``) or a chain (levels ``n`` draw ``V_n``).
    """
    from .gauge import GaugeFunctional
    from .metrization import CircledChain

    if isinstance(target, CircledChain):
        ns = levels or list(range(1, target.depth + 1))
        layers = [(f"V_{n}", target.level(n)) for n in ns]
    elif isinstance(target, GaugeFunctional):
        layers = [("p <= 1", target.base)]
        for n in levels or ():
            layers.append((f"p <= 1/{2 ** n}", scale(target.base, Fraction(1, 2 ** n))))
    else:
        layers = [("set", as_circled(target))]
    return render_svg(layers, title)
