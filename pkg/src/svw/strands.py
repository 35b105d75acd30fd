"""Strand tracing and the sign of an undotted word.

Every loop-free undotted word W with connector c equals +-1 times any other
such word with the same connector.  The sign is read off from a single
matrix coefficient of the p(n) tensor representation: give every string its
own label, make a string's left (smaller) end even, flip parity at each turn,
and push the resulting pure tensor through W.  Swaps, caps and cups each act
on such a tensor by a sign, so the coefficient is a product of local signs.
Comparing the coefficients of two words with the same connector gives their
relative sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .words import GenWord

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Trace:
    a: int
    b: int
    pairs: Tuple[Pair, ...]          # sorted (p, q) with p < q
    loops: int
    # parity[level][pos-1] for every slot; meaningless on loop slots
    parity: Tuple[Tuple[int, ...], ...]
    # string id (index into pairs, or -1 on loops) for every slot
    owner: Tuple[Tuple[int, ...], ...]


def _layer_edges(g, rb):
    """Edges through one layer: list of ((below_pos, above_pos)) plus turn edges.

    Returns (straight, turn_below, turn_above) where straight maps below
    positions to above positions, and turn_* hold at most one adjacent pair.
    """
    kind, j = g
    straight = []
    turn_below = turn_above = None
    if kind == "s":
        for x in range(1, rb + 1):
            straight.append((x, j + 1 if x == j else j if x == j + 1 else x))
    elif kind == "y":
        straight = [(x, x) for x in range(1, rb + 1)]
    elif kind == "b":
        for x in range(1, rb + 1):
            if x < j:
                straight.append((x, x))
            elif x > j + 1:
                straight.append((x, x - 2))
        turn_below = (j, j + 1)
    else:  # cup
        for x in range(1, rb + 1):
            straight.append((x, x if x < j else x + 2))
        turn_above = (j, j + 1)
    return straight, turn_below, turn_above


def trace(w: GenWord) -> Trace:
    ar = w.arities()
    L = len(w.gens)
    base = [0]
    for r in ar:
        base.append(base[-1] + r)
    nslots = base[-1]

    def sid(level, pos):
        return base[level] + pos - 1

    nbr: list[list[tuple[int, int]]] = [[] for _ in range(nslots)]  # (other, is_turn)
    for k in range(1, L + 1):
        straight, tb, ta = _layer_edges(w.gens[k - 1], ar[k])
        for x, x2 in straight:
            u, v = sid(k, x), sid(k - 1, x2)
            nbr[u].append((v, 0))
            nbr[v].append((u, 0))
        if tb:
            u, v = sid(k, tb[0]), sid(k, tb[1])
            nbr[u].append((v, 1))
            nbr[v].append((u, 1))
        if ta:
            u, v = sid(k - 1, ta[0]), sid(k - 1, ta[1])
            nbr[u].append((v, 1))
            nbr[v].append((u, 1))

    a, b = w.source, w.target
    # boundary point ids: bottom pos x -> x, top pos t -> a + t
    point_slot = {}
    for x in range(1, a + 1):
        point_slot[x] = sid(L, x)
    for t in range(1, b + 1):
        point_slot[a + t] = sid(0, t)
    slot_point = {s: p for p, s in point_slot.items()}

    par = [-1] * nslots
    own = [-1] * nslots
    pairs = []
    for p in range(1, a + b + 1):
        start = point_slot[p]
        if par[start] >= 0:
            continue
        sidx = len(pairs)
        prev, cur, parity = -1, start, 0
        while True:
            par[cur] = parity
            own[cur] = sidx
            step = None
            for v, turn in nbr[cur]:
                if v != prev:
                    step = (v, turn)
                    break
            if step is None:
                break
            prev, cur = cur, step[0]
            parity ^= step[1]
        pairs.append((p, slot_point[cur]))
    loops = 0
    seen = [par[i] >= 0 for i in range(nslots)]
    for s0 in range(nslots):
        if seen[s0]:
            continue
        loops += 1
        stack = [s0]
        while stack:
            u = stack.pop()
            if seen[u]:
                continue
            seen[u] = True
            stack.extend(v for v, _ in nbr[u] if not seen[v])

    # renumber strings by sorted pair order
    order = sorted(range(len(pairs)), key=lambda i: pairs[i])
    remap = {old: new for new, old in enumerate(order)}
    pairs_sorted = tuple(pairs[i] for i in order)
    parity = tuple(tuple(par[sid(l, x)] for x in range(1, ar[l] + 1)) for l in range(L + 1))
    owner = tuple(tuple(remap.get(own[sid(l, x)], -1) for x in range(1, ar[l] + 1)) for l in range(L + 1))
    return Trace(a, b, pairs_sorted, loops, parity, owner)


def word_sign(w: GenWord, tr: Optional[Trace] = None) -> int:
    """Coefficient of the labelled boundary tensors under the word (0 if it has a loop)."""
    if tr is None:
        tr = trace(w)
    if tr.loops:
        return 0
    sign = 1
    L = len(w.gens)
    for k in range(L, 0, -1):
        kind, j = w.gens[k - 1]
        below = tr.parity[k]
        if kind == "s":
            if below[j - 1] and below[j]:
                sign = -sign
        elif kind == "b":
            if sum(below[: j - 1]) % 2:
                sign = -sign
        elif kind == "bs":
            if sum(below[: j - 1]) % 2:
                sign = -sign
            above = tr.parity[k - 1]
            if above[j - 1] == 1:
                sign = -sign
    return sign


def connector_of(w: GenWord) -> tuple[Tuple[Pair, ...], int]:
    tr = trace(w)
    return tr.pairs, tr.loops
