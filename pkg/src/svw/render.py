"""Drawings of normal dotted diagrams: ASCII, TikZ and (optionally) PNG.

All three formats follow the canonical word of the diagram, one layer per
generator.  Strands at a level are packed left; columns shift between levels
when a cap or cup opens or closes.
"""

from __future__ import annotations

from typing import List, Tuple

from .diagrams import DottedDiagram, canonical_word
from .words import GenWord

Prim = Tuple  # ("line", x1, y1, x2, y2) | ("arc", cx, cy, r, t1, t2) | ("dot", x, y)


def _layer_moves(g, below: int):
    """(straight moves [(x_below, x_above)], cap-or-cup position or None)."""
    kind, j = g
    if kind == "s":
        return [(x, j + 1 if x == j else j if x == j + 1 else x) for x in range(1, below + 1)], None
    if kind == "y":
        return [(x, x) for x in range(1, below + 1)], None
    if kind == "b":
        return [(x, x if x < j else x - 2) for x in range(1, below + 1) if x not in (j, j + 1)], j
    return [(x, x if x < j else x + 2) for x in range(1, below + 1)], j


# ---------------------------------------------------------------------- ASCII

def render_ascii(d: DottedDiagram) -> str:
    w = canonical_word(d)
    ar = w.arities()
    rows: List[str] = []  # built bottom-up

    def level_row(n, dot=None):
        cells = [" "] * max(2 * n - 1, 0)
        for x in range(1, n + 1):
            cells[2 * (x - 1)] = "o" if x == dot else "|"
        return "".join(cells)

    rows.append(level_row(ar[-1]))
    for k in range(len(w.gens), 0, -1):
        g = w.gens[k - 1]
        below, above = ar[k], ar[k - 1]
        kind, j = g
        if kind == "y":
            rows.append(level_row(below, dot=j))
            rows.append(level_row(above))
            continue
        moves, turn = _layer_moves(g, below)
        disp = max((abs(2 * (xa - xb)) for xb, xa in moves), default=0)
        h = max(2, disp)
        width = 2 * max(below, above) + 2
        block = [[" "] * width for _ in range(h - 1)]
        for xb, xa in moves:
            cb, ca = 2 * (xb - 1), 2 * (xa - 1)
            step = (ca > cb) - (ca < cb)
            for r in range(1, h):
                c = cb + step * min(r, abs(ca - cb)) if step else cb
                if step and r >= abs(ca - cb):
                    ch = "|"
                elif step:
                    ch = "/" if step > 0 else "\\"
                else:
                    ch = "|"
                cell = block[r - 1][c]
                block[r - 1][c] = "X" if cell in "/\\" and ch in "/\\" and cell != ch else ch
        if kind == "b":
            c = 2 * (turn - 1)
            block[0][c : c + 3] = list(".-.")
        elif kind == "bs":
            c = 2 * (turn - 1)
            block[-1][c : c + 3] = list("'-'")
        rows.extend("".join(r) for r in block)
        rows.append(level_row(above))
    out = [r.rstrip() for r in reversed(rows)]
    while out and not out[0]:
        out.pop(0)
    while out and not out[-1]:
        out.pop()
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ shared geometry

def primitives(d: DottedDiagram) -> List[Prim]:
    """Geometry in unit coordinates: positions x = 1.., level k at height L - k."""
    w: GenWord = canonical_word(d)
    ar = w.arities()
    L = len(w.gens)
    out: List[Prim] = []
    for k in range(1, L + 1):
        g = w.gens[k - 1]
        ylo, yhi = L - k, L - k + 1
        moves, turn = _layer_moves(g, ar[k])
        for xb, xa in moves:
            out.append(("line", float(xb), float(ylo), float(xa), float(yhi)))
        if g[0] == "y":
            out.append(("dot", float(g[1]), ylo + 0.5))
        elif g[0] == "b":
            out.append(("arc", turn + 0.5, float(ylo), 0.5, 0, 180))
        elif g[0] == "bs":
            out.append(("arc", turn + 0.5, float(yhi), 0.5, 180, 360))
    if L == 0:
        for x in range(1, d.a + 1):
            out.append(("line", float(x), 0.0, float(x), 1.0))
    return out


def _f(x: float) -> str:
    return f"{x:g}"


def render_tikz(d: DottedDiagram) -> str:
    lines = [
        r"\documentclass[tikz]{standalone}",
        r"\begin{document}",
        r"\begin{tikzpicture}[thick]",
    ]
    dots = []
    for p in primitives(d):
        if p[0] == "line":
            _, x1, y1, x2, y2 = p
            lines.append(rf"\draw ({_f(x1)},{_f(y1)}) -- ({_f(x2)},{_f(y2)});")
        elif p[0] == "arc":
            _, cx, cy, r, t1, t2 = p
            # start at the left foot and sweep over (cap) or under (cup)
            end = 0 if t1 == 0 else 360
            lines.append(rf"\draw ({_f(cx - r)},{_f(cy)}) arc (180:{end}:{_f(r)});")
        else:
            dots.append(p)
    for _, x, y in dots:
        lines.append(rf"\node[circle,fill,inner sep=1.5pt] at ({_f(x)},{_f(y)}) {{}};")
    lines += [r"\end{tikzpicture}", r"\end{document}"]
    return "\n".join(l for l in lines if l) + "\n"


def render_png(d: DottedDiagram, path: str) -> None:
    """Write a PNG drawing; needs matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Arc

    prims = primitives(d)
    fig, ax = plt.subplots(figsize=(1 + 0.6 * max(d.a, d.b, 1), 1 + 0.4 * max(len(prims), 1) ** 0.5 * 2))
    for p in prims:
        if p[0] == "line":
            _, x1, y1, x2, y2 = p
            ax.plot([x1, x2], [y1, y2], color="black", lw=1.8)
        elif p[0] == "arc":
            _, cx, cy, r, t1, t2 = p
            ax.add_patch(Arc((cx, cy), 2 * r, 2 * r, theta1=t1, theta2=t2, color="black", lw=1.8))
        else:
            ax.plot([p[1]], [p[2]], "o", color="black", ms=6)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.margins(0.15)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
