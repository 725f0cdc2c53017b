"""Hasse-diagram figures rendered with matplotlib.

The CLI report path writes these next to its delimited text output; the
layout is deterministic (layer by rank, barycenter ordering within a
layer), so identical inputs give identical figures.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bitset import bit_indices

_GROUP_COLORS = {
    "doubled": "#9ecae7",
    "lifted": "#fdae6b",
    "jir": "#a1d99b",
    "new": "#c7e9c0",
}
_NODE_COLOR = "white"
_EDGE_COLOR = "0.45"


def hasse_layout(lat):
    """Deterministic (x, y) positions: y is the rank, x comes from two
    barycenter passes over the cover relation."""
    ranks = lat.ranks()
    height = lat.length()
    levels = [[] for _ in range(height + 1)]
    for v in range(lat.n):
        levels[ranks[v]].append(v)
    xpos = {}
    for level in levels:
        for i, v in enumerate(level):
            xpos[v] = float(i)
    for sweep_levels in (levels, list(reversed(levels))):
        for level in sweep_levels:
            scored = []
            for v in level:
                neighbors = list(bit_indices(lat.order.lower_covers(v)))
                neighbors += list(bit_indices(lat.order.upper_covers(v)))
                score = sum(xpos[w] for w in neighbors) / len(neighbors) if neighbors else xpos[v]
                scored.append((score, v))
            scored.sort()
            for i, (_, v) in enumerate(scored):
                xpos[v] = float(i)
    width = max((len(level) for level in levels), default=1)
    pos = {}
    for level in levels:
        m = len(level)
        for v in level:
            # spread each layer symmetrically around the diagram's middle
            pos[v] = (xpos[v] - (m - 1) / 2.0 + (width - 1) / 2.0, float(ranks[v]))
    return pos


def render_hasse(lat, path=None, highlight=None, names=None, title=None, ax=None):
    """Draw the Hasse diagram; write it to ``path`` when given.

    ``highlight`` maps a group label to element indices; known groups get
    fixed colors so the doubled/lifted sets of a lowering are readable.
    """
    created = ax is None
    if created:
        height = max(2.0, 0.9 * (lat.length() + 1))
        width = max(2.5, 0.9 * lat.n / (lat.length() + 1) + 2)
        fig, ax = plt.subplots(figsize=(width, height))
    pos = hasse_layout(lat)
    for x, y in lat.covers():
        (x0, y0), (x1, y1) = pos[x], pos[y]
        ax.plot([x0, x1], [y0, y1], color=_EDGE_COLOR, linewidth=1.0, zorder=1)
    colors = {}
    if highlight:
        for group in sorted(highlight):
            color = _GROUP_COLORS.get(group, "#d9d9d9")
            for v in highlight[group]:
                colors.setdefault(v, color)
    for v in range(lat.n):
        x, y = pos[v]
        ax.scatter([x], [y], s=340, zorder=2, facecolor=colors.get(v, _NODE_COLOR),
                   edgecolor="black", linewidth=0.8)
        label = names[v] if names else str(v)
        ax.annotate(label, (x, y), ha="center", va="center", fontsize=8, zorder=3)
    if title:
        ax.set_title(title)
    ax.set_axis_off()
    ax.margins(0.12)
    if created:
        fig.tight_layout()
        if path is not None:
            fig.savefig(path, dpi=150)
            plt.close(fig)
            return path
        return fig
    return ax
