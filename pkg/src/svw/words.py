"""Generator words: parsing, arity checking and the word-level flip.

A word is read left to right as top to bottom, so the rightmost generator
is applied first.  Generators are pairs (kind, index) with kind one of
's', 'y', 'b' (cap, removes two strands) and 'bs' (cup, adds two strands).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Tuple

Generator = Tuple[str, int]

KINDS = ("s", "y", "b", "bs")
PARITY = {"s": 0, "y": 0, "b": 1, "bs": 1}


class WordError(ValueError):
    """Syntax or arity problem in a generator word."""


def gen_name(g: Generator) -> str:
    kind, i = g
    return f"b{i}*" if kind == "bs" else f"{kind}{i}"


def step_arity(g: Generator, below: int) -> int:
    """Arity above g given the arity below it; raises WordError if g does not fit."""
    kind, i = g
    if kind == "s":
        ok, above = 1 <= i <= below - 1, below
    elif kind == "y":
        ok, above = 1 <= i <= below, below
    elif kind == "b":
        ok, above = 1 <= i <= below - 1, below - 2
    elif kind == "bs":
        ok, above = 1 <= i <= below + 1, below + 2
    else:
        raise WordError(f"unknown generator kind {kind!r}")
    if not ok:
        raise WordError(f"{gen_name(g)} does not fit on {below} strands")
    return above


@dataclass(frozen=True)
class GenWord:
    source: int
    gens: Tuple[Generator, ...]

    def __post_init__(self):
        below = self.source
        if below < 0:
            raise WordError("negative source arity")
        for stage, g in enumerate(reversed(self.gens)):
            try:
                below = step_arity(g, below)
            except WordError as exc:
                pos = len(self.gens) - 1 - stage
                raise WordError(f"stage {stage} (token {pos}): {exc}") from None
        object.__setattr__(self, "_target", below)

    @property
    def target(self) -> int:
        return self._target  # type: ignore[attr-defined]

    @property
    def total_dots(self) -> int:
        return sum(1 for k, _ in self.gens if k == "y")

    @property
    def parity(self) -> int:
        return sum(PARITY[k] for k, _ in self.gens) % 2

    def arities(self) -> list[int]:
        """Arity at every level, top (index 0) to bottom (index len)."""
        out = [self.source]
        for g in reversed(self.gens):
            out.append(step_arity(g, out[-1]))
        return out[::-1]

    def __str__(self):
        return " ".join(gen_name(g) for g in self.gens)

    def then_below(self, other: "GenWord") -> "GenWord":
        """The composite self o other (other applied first)."""
        if other.target != self.source:
            raise WordError(f"cannot stack: {other.target} strands below {self.source}")
        return GenWord(other.source, self.gens + other.gens)


_TOKEN = re.compile(r"^(s|y|b|e)(\d+)(\*?)(?:\^(\d+))?$")


def parse_word(text: str, source: int) -> GenWord:
    """Parse e.g. 'b1 s2 y2^3 e1 b1*'; 'e<i>' expands to 'b<i>* b<i>'."""
    gens: list[Generator] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"syntax error at token {tok!r}")
        letter, idx, star, power = m.groups()
        i = int(idx)
        if i < 1:
            raise WordError(f"index must be positive in {tok!r}")
        if star and letter != "b":
            raise WordError(f"'*' only allowed on b in {tok!r}")
        reps = int(power) if power is not None else 1
        if letter == "e":
            unit = [("bs", i), ("b", i)]
        elif letter == "b":
            unit = [("bs" if star else "b", i)]
        else:
            unit = [(letter, i)]
        gens.extend(unit * reps)
    return GenWord(source, tuple(gens))


def word(source: int, gens: Sequence[Generator]) -> GenWord:
    return GenWord(source, tuple(gens))


# iota on generators: s -> -s, b -> b*, b* -> -b, y -> -y
_IOTA = {"s": (-1, "s"), "b": (1, "bs"), "bs": (-1, "b"), "y": (-1, "y")}


def flip_word(w: GenWord) -> tuple[int, GenWord]:
    """Apply iota: reverse the word and map generators; returns (sign, word)."""
    sign = 1
    gens = []
    for kind, i in reversed(w.gens):
        s, k2 = _IOTA[kind]
        sign *= s
        gens.append((k2, i))
    return sign, GenWord(w.target, tuple(gens))


def shift_word(w: GenWord, offset: int, extra_right: int = 0) -> GenWord:
    """Word acting on strands offset+1.. inside a wider identity."""
    return GenWord(w.source + offset + extra_right, tuple((k, i + offset) for k, i in w.gens))
