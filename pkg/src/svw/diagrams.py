"""Connectors, normal dotted diagrams and their enumeration.

Boundary points of a diagram in Hom(a, b) are numbered 1..a along the bottom
and a+1..a+b along the top, both left to right.  A string is stored as a
sorted pair (p, q) with p < q; its canonical dot position is always p (the
bottom end of a through string, the left end of a cap or cup).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterator, Mapping, Sequence, Tuple

from .strands import trace, word_sign
from .words import GenWord, Generator

Pair = Tuple[int, int]
Connector = Tuple[Pair, ...]


class DiagramError(ValueError):
    pass


def string_kind(a: int, pair: Pair) -> str:
    p, q = pair
    if q <= a:
        return "cap"
    if p > a:
        return "cup"
    return "through"


@dataclass(frozen=True, order=True)
class DottedDiagram:
    a: int
    b: int
    pairs: Connector
    dots: Tuple[int, ...]

    def __post_init__(self):
        if len(self.dots) != len(self.pairs):
            raise DiagramError("dots must align with pairs")

    @classmethod
    def make(cls, a: int, b: int, pairs, dots: Mapping[Pair, int] | None = None) -> "DottedDiagram":
        norm = tuple(sorted(tuple(sorted(p)) for p in pairs))
        validate_connector(a, b, norm)
        dots = dots or {}
        counts = []
        for pr in norm:
            c = dots.get(pr, dots.get((pr[1], pr[0]), 0))
            if c < 0:
                raise DiagramError("negative dot count")
            counts.append(int(c))
        extra = {tuple(sorted(k)) for k in dots} - set(norm)
        if extra:
            raise DiagramError(f"dots on unknown strings {sorted(extra)}")
        return cls(a, b, norm, tuple(counts))

    @property
    def total_dots(self) -> int:
        return sum(self.dots)

    @property
    def dot_map(self) -> Dict[Pair, int]:
        return {p: c for p, c in zip(self.pairs, self.dots) if c}

    def kinds(self) -> list[str]:
        return [string_kind(self.a, p) for p in self.pairs]

    @property
    def n_cups(self) -> int:
        return sum(1 for p in self.pairs if p[0] > self.a)

    @property
    def n_caps(self) -> int:
        return sum(1 for p in self.pairs if p[1] <= self.a)

    @property
    def parity(self) -> int:
        return (self.n_cups + self.n_caps) % 2

    def undotted(self) -> "DottedDiagram":
        return DottedDiagram(self.a, self.b, self.pairs, (0,) * len(self.pairs))

    def with_dots(self, dots: Sequence[int]) -> "DottedDiagram":
        return DottedDiagram(self.a, self.b, self.pairs, tuple(dots))

    def to_json_obj(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "pairs": [list(p) for p in self.pairs],
            "dots": [[list(p), c] for p, c in zip(self.pairs, self.dots) if c],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    def __str__(self):
        def name(pt):
            return f"B{pt}" if pt <= self.a else f"T{pt - self.a}"

        parts = []
        for (p, q), c in zip(self.pairs, self.dots):
            s = f"{name(p)}-{name(q)}"
            if c:
                s += f"^{c}"
            parts.append(s)
        return f"[{self.a}->{self.b}: " + " ".join(parts) + "]"


def validate_connector(a: int, b: int, pairs: Connector) -> None:
    if a < 0 or b < 0:
        raise DiagramError("negative arity")
    seen: list[int] = []
    for pr in pairs:
        if len(pr) != 2 or pr[0] == pr[1]:
            raise DiagramError(f"bad pair {pr}")
        seen.extend(pr)
    if sorted(seen) != list(range(1, a + b + 1)):
        raise DiagramError("not a perfect matching")


def diagram_from_json(obj) -> DottedDiagram:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        a, b = int(obj["a"]), int(obj["b"])
        pairs = [tuple(int(x) for x in p) for p in obj["pairs"]]
        dots = {}
        for entry in obj.get("dots", []):
            pr, c = entry
            key = tuple(sorted(int(x) for x in pr))
            dots[key] = dots.get(key, 0) + int(c)
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"schema violation: {exc}") from None
    for p in pairs:
        if len(p) != 2:
            raise DiagramError(f"pair {list(p)} must have two points")
    return DottedDiagram.make(a, b, pairs, dots)


# ---------------------------------------------------------------- enumeration

def _matchings(points: Tuple[int, ...]) -> Iterator[Connector]:
    if not points:
        yield ()
        return
    p = points[0]
    for idx in range(1, len(points)):
        q = points[idx]
        rest = points[1:idx] + points[idx + 1:]
        for tail in _matchings(rest):
            yield ((p, q),) + tail


@lru_cache(maxsize=None)
def enumerate_connectors(a: int, b: int) -> Tuple[Connector, ...]:
    """All perfect matchings of the a+b boundary points, lexicographic."""
    if a < 0 or b < 0:
        raise DiagramError("negative arity")
    if (a + b) % 2:
        return ()
    return tuple(_matchings(tuple(range(1, a + b + 1))))


def string_order(a: int, pairs: Connector) -> list[Pair]:
    """Caps by left end, then through strings by bottom end, then cups by right end, right to left."""
    caps = sorted(p for p in pairs if p[1] <= a)
    through = sorted(p for p in pairs if p[0] <= a < p[1])
    cups = sorted((p for p in pairs if p[0] > a), key=lambda p: -p[1])
    return caps + through + cups


def _compositions(k: int, m: int) -> list[Tuple[int, ...]]:
    if m == 0:
        return [()] if k == 0 else []
    out = []
    for bars in combinations(range(k + m - 1), m - 1):
        prev, parts = -1, []
        for bar in bars:
            parts.append(bar - prev - 1)
            prev = bar
        parts.append(k + m - 2 - prev)
        out.append(tuple(parts))
    out.sort(key=lambda t: t[::-1])
    return out


def enumerate_basis(a: int, b: int, k: int) -> list[DottedDiagram]:
    """All normal dotted diagrams in Hom(a, b) with exactly k dots."""
    if k < 0:
        raise DiagramError("negative dot count")
    out = []
    for pairs in enumerate_connectors(a, b):
        order = string_order(a, pairs)
        pos = {p: i for i, p in enumerate(pairs)}
        for comp in _compositions(k, len(order)):
            dots = [0] * len(pairs)
            for pr, c in zip(order, comp):
                dots[pos[pr]] = c
            out.append(DottedDiagram(a, b, pairs, tuple(dots)))
    return out


def enumerate_basis_upto(a: int, b: int, kmax: int) -> list[DottedDiagram]:
    out = []
    for k in range(kmax + 1):
        out.extend(enumerate_basis(a, b, k))
    return out


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def count_basis(a: int, b: int, k: int) -> int:
    if a < 0 or b < 0 or k < 0:
        raise DiagramError("negative argument")
    if (a - b) % 2:
        return 0
    m = (a + b) // 2
    if m == 0:
        return 1 if k == 0 else 0
    return comb(m + k - 1, k) * double_factorial(a + b - 1)


# ------------------------------------------------------------ normal drawings

def _circle_pos(a: int, b: int, pt: int) -> int:
    # bottom left to right, then top right to left
    return pt if pt <= a else a + (b - (pt - a) + 1)


def crossing_count(a: int, b: int, pairs: Connector) -> int:
    """Number of string pairs whose endpoints interleave on the boundary circle."""
    chords = [tuple(sorted((_circle_pos(a, b, p), _circle_pos(a, b, q)))) for p, q in pairs]
    n = 0
    for (p1, q1), (p2, q2) in combinations(chords, 2):
        if (p1 < p2 < q1) != (p1 < q2 < q1):
            n += 1
    return n


def _move_left(cur: list[int], ip: int, iq: int, out: list[Generator]) -> None:
    while iq > ip + 1:
        out.append(("s", iq))  # swaps 1-based positions iq and iq+1
        cur[iq - 1], cur[iq] = cur[iq], cur[iq - 1]
        iq -= 1


@lru_cache(maxsize=None)
def normal_word(a: int, b: int, pairs: Connector) -> GenWord:
    """A fixed normal drawing of the connector as an undotted word.

    Caps are closed bottom-up in decreasing order of their left ends, cups
    opened top-down in decreasing order of their left ends, and the through
    strings are connected by a bubble-sort (reduced) permutation.
    """
    caps = [p for p in pairs if p[1] <= a]
    cups = [p for p in pairs if p[0] > a]
    through_top = {p: q for p, q in pairs if p <= a < q}

    cur = list(range(1, a + 1))
    cap_up: list[Generator] = []
    for p, q in sorted(caps, key=lambda c: -c[0]):
        ip, iq = cur.index(p), cur.index(q)
        _move_left(cur, ip, iq, cap_up)
        cap_up.append(("b", ip + 1))
        del cur[ip:ip + 2]

    top = list(range(a + 1, a + b + 1))
    cup_down: list[Generator] = []
    for p, q in sorted(cups, key=lambda c: -c[0]):
        ip, iq = top.index(p), top.index(q)
        _move_left(top, ip, iq, cup_down)
        cup_down.append(("bs", ip + 1))
        del top[ip:ip + 2]

    rank = {t: i for i, t in enumerate(top)}
    seq = [rank[through_top[x]] for x in cur]
    perm_up: list[Generator] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                perm_up.append(("s", i + 1))
                changed = True
    gens = tuple(cup_down) + tuple(reversed(perm_up)) + tuple(reversed(cap_up))
    w = GenWord(a, gens)
    tr = trace(w)
    if tr.pairs != pairs or tr.loops:
        raise AssertionError("normal drawing does not realise the connector")
    return w


@lru_cache(maxsize=None)
def normal_sign(a: int, b: int, pairs: Connector) -> int:
    return word_sign(normal_word(a, b, pairs))


def canonical_word(d: DottedDiagram) -> GenWord:
    """Word whose value is the basis element d: top dots, normal drawing, bottom dots."""
    w = normal_word(d.a, d.b, d.pairs)
    top: list[Generator] = []
    bottom: list[Generator] = []
    for (p, _q), c in sorted(zip(d.pairs, d.dots)):
        if not c:
            continue
        if p > d.a:
            top.extend([("y", p - d.a)] * c)
        else:
            bottom.extend([("y", p)] * c)
    return GenWord(d.a, tuple(top) + w.gens + tuple(bottom))


# -------------------------------------------------------------------- flipping

def flip_points(a: int, b: int, pt: int) -> int:
    """Point id after turning a Hom(a, b) diagram upside down (into Hom(b, a))."""
    return pt - a if pt > a else b + pt


def flip_connector(a: int, b: int, pairs: Connector) -> Connector:
    return tuple(sorted(tuple(sorted((flip_points(a, b, p), flip_points(a, b, q)))) for p, q in pairs))


def flip_basis(d: DottedDiagram) -> tuple[int, DottedDiagram]:
    """Leading term of the flip of a basis element: (sign, upside-down diagram)."""
    from .words import flip_word

    w = normal_word(d.a, d.b, d.pairs)
    iota_sign, fw = flip_word(w)
    fpairs = flip_connector(d.a, d.b, d.pairs)
    rel = word_sign(fw) * normal_sign(d.b, d.a, fpairs)
    sign = iota_sign * rel * (-1) ** d.total_dots
    moved = {}
    for (p, q), c in zip(d.pairs, d.dots):
        moved[tuple(sorted((flip_points(d.a, d.b, p), flip_points(d.a, d.b, q))))] = c
    return sign, DottedDiagram(d.b, d.a, fpairs, tuple(moved[p] for p in fpairs))


def flip_sign_formula(d: DottedDiagram) -> int:
    """(-1)^(crossings + cups + dots), the closed form of flip_basis's sign."""
    return (-1) ** (crossing_count(d.a, d.b, d.pairs) + d.n_cups + d.total_dots)


def identity(a: int) -> DottedDiagram:
    return DottedDiagram(a, a, tuple((i, a + i) for i in range(1, a + 1)), (0,) * a)


def render(d: DottedDiagram, fmt: str = "ascii") -> str:
    from .render import render_ascii, render_tikz

    if fmt == "ascii":
        return render_ascii(d)
    if fmt == "tikz":
        return render_tikz(d)
    raise DiagramError(f"unsupported format {fmt!r}")
