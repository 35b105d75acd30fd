"""Normal forms in the affine VW supercategory over Q[h].

A basis element d (connector c with dots) is, by definition, the value of
canonical_word(d): dots at the top on cup left ends, the fixed normal
drawing w_c of c, dots at the bottom on through-string bottoms and cap left
ends.  Morphisms are finite Q[h]-combinations of basis elements.

Composition is built from absorb_bottom(d, g) = d o g for a single
generator g.  Undotted rewriting is never done relation by relation: any
loop-free undotted word equals +-w_c, and the sign comes from
strands.word_sign.  Dots are moved with the homogenised local relations

    s_i y_i = y_{i+1} s_i - h - h e_i      s_i y_{i+1} = y_i s_i + h - h e_i
    b_i y_{i+1} = b_i y_i + h b_i          y_{i+1} b_i* = y_i b_i* - h b_i*

(and the variants obtained by multiplying through by s_i), where
e_i = b_i* b_i.  A dotted loop made of a crossing-free cap and a cup is 0.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .diagrams import (
    Connector,
    DottedDiagram,
    canonical_word,
    diagram_from_json,
    identity,
    normal_sign,
    normal_word,
)
from .hbar import HbarPoly, parse_hbar
from .strands import trace, word_sign
from .words import GenWord, Generator, WordError, flip_word, parse_word, step_arity

__all__ = [
    "Morphism",
    "parse_word",
    "absorb_bottom",
    "normal_form",
    "compose",
    "tensor",
    "flip",
    "specialize",
    "basis_morphism",
    "word_morphism",
]

# Internal linear combinations: {(diagram, power of h): rational}
Lin = Dict[Tuple[DottedDiagram, int], Fraction]
DotKey = Tuple[Tuple[int, int], ...]  # sorted (point, count), counts > 0


def _acc(target: Lin, source: Lin, coeff: Fraction = Fraction(1), shift: int = 0) -> None:
    for (d, e), c in source.items():
        key = (d, e + shift)
        v = target.get(key, 0) + coeff * c
        if v:
            target[key] = v
        else:
            target.pop(key, None)


def _dotkey(m: Mapping[int, int]) -> DotKey:
    return tuple(sorted((p, c) for p, c in m.items() if c))


# ------------------------------------------------------------ walking a dot

def _with_layer(w: GenWord, k: int, repl: Tuple[Generator, ...]) -> GenWord:
    return GenWord(w.source, w.gens[: k - 1] + repl + w.gens[k:])


def _evaluate_undotted(w: GenWord) -> Optional[Tuple[Connector, int]]:
    tr = trace(w)
    if tr.loops:
        return None
    return tr.pairs, word_sign(w, tr) * normal_sign(w.source, w.target, tr.pairs)


@lru_cache(maxsize=None)
def walk(a: int, b: int, pairs: Connector, p: int) -> Tuple[int, Tuple[Tuple[Connector, Fraction], ...]]:
    """Slide one dot along its string in w_c from endpoint p to the other end q.

    Returns (q, corrections) with
        (dot at p) = (dot at q) + h * sum(coeff * basis(c_r))
    where basis(c_r) is the undotted basis element of connector c_r.
    """
    w = normal_word(a, b, pairs)
    gens = w.gens
    L = len(gens)
    corr: Dict[Connector, Fraction] = defaultdict(Fraction)

    def add_word(k, repl, coeff):
        res = _evaluate_undotted(_with_layer(w, k, repl))
        if res is not None:
            corr[res[0]] += coeff * res[1]

    if p <= a:
        level, pos, up = L, p, True
    else:
        level, pos, up = 0, p - a, False
    while True:
        if up:
            if level == 0:
                q = a + pos
                break
            k = level
            kind, j = gens[k - 1]
            if kind == "s":
                if pos == j:
                    add_word(k, (), Fraction(-1))
                    add_word(k, (("bs", j), ("b", j)), Fraction(-1))
                    pos = j + 1
                elif pos == j + 1:
                    add_word(k, (), Fraction(1))
                    add_word(k, (("bs", j), ("b", j)), Fraction(-1))
                    pos = j
                level -= 1
            elif kind == "b":
                if pos < j:
                    level -= 1
                elif pos > j + 1:
                    pos -= 2
                    level -= 1
                else:
                    corr[pairs] += -1 if pos == j else 1
                    pos = j + 1 if pos == j else j
                    up = False
            elif kind == "bs":
                if pos >= j:
                    pos += 2
                level -= 1
            else:
                raise AssertionError("dotted normal word")
        else:
            if level == L:
                q = pos
                break
            k = level + 1
            kind, j = gens[k - 1]
            if kind == "s":
                if pos == j + 1:
                    add_word(k, (), Fraction(1))
                    add_word(k, (("bs", j), ("b", j)), Fraction(1))
                    pos = j
                elif pos == j:
                    add_word(k, (), Fraction(-1))
                    add_word(k, (("bs", j), ("b", j)), Fraction(1))
                    pos = j + 1
                level += 1
            elif kind == "bs":
                if pos < j:
                    level += 1
                elif pos > j + 1:
                    pos -= 2
                    level += 1
                else:
                    corr[pairs] += -1 if pos == j + 1 else 1
                    pos = j if pos == j + 1 else j + 1
                    up = True
            elif kind == "b":
                if pos >= j:
                    pos += 2
                level += 1
            else:
                raise AssertionError("dotted normal word")
    return q, tuple((c, v) for c, v in sorted(corr.items()) if v)


# ------------------------------------------------- boundary dots to normal form

@lru_cache(maxsize=None)
def _settle(a: int, b: int, pairs: Connector, dots: DotKey) -> Lin:
    """Basis expansion of Ytop o w_c o Ybot with dots at arbitrary boundary points."""
    canon = {p for p, _ in pairs}
    for p, c in dots:
        if p not in canon:
            break
    else:
        per = dict(dots)
        d = DottedDiagram(a, b, pairs, tuple(per.get(p, 0) for p, _ in pairs))
        return {(d, 0): Fraction(1)}
    q, corrections = walk(a, b, pairs, p)
    rest = dict(dots)
    rest[p] -= 1
    out: Lin = {}
    moved = dict(rest)
    moved[q] = moved.get(q, 0) + 1
    _acc(out, _settle(a, b, pairs, _dotkey(moved)))
    rk = _dotkey(rest)
    for cr, coeff in corrections:
        _acc(out, _settle(a, b, cr, rk), coeff, 1)
    return out


def _dots_by_point(d: DottedDiagram) -> Dict[int, int]:
    return {p: c for (p, _), c in zip(d.pairs, d.dots) if c}


def _remap(dots: Mapping[int, int], f) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for p, c in dots.items():
        if c:
            np_ = f(p)
            out[np_] = out.get(np_, 0) + c
    return out


def _compose_undotted(a: int, b: int, pairs: Connector, g: Generator):
    """w_c o g as (sign, new connector, new source), or None if a loop appears."""
    w = normal_word(a, b, pairs)
    new_source = _source_below(a, g)
    ww = GenWord(new_source, w.gens + (g,))
    res = _evaluate_undotted(ww)
    if res is None:
        return None
    return res[1], res[0], new_source


def _source_below(a: int, g: Generator) -> int:
    kind, i = g
    if kind == "b":
        below = a + 2
    elif kind == "bs":
        below = a - 2
    else:
        below = a
    if below < 0 or step_arity(g, below) != a:
        raise WordError(f"generator does not fit below {a} strands")
    return below


@lru_cache(maxsize=None)
def _cup_junction(a: int, b: int, pairs: Connector, dots: DotKey, m: int, i: int) -> Lin:
    """Ytop o w_c o Ybot o y_i^m o b_i*, with no Ybot dots at i or i+1."""
    if m == 0:
        res = _compose_undotted(a, b, pairs, ("bs", i))
        if res is None:
            return {}
        sign, newpairs, na = res

        def f(p):
            if p <= a:
                return p if p < i else p - 2
            return p - 2

        out: Lin = {}
        _acc(out, _settle(na, b, newpairs, _dotkey(_remap(dict(dots), f))), Fraction(sign))
        return out
    if (i, i + 1) in pairs:
        return {}
    q, corrections = walk(a, b, pairs, i)
    base = dict(dots)
    moved = dict(base)
    moved[q] = moved.get(q, 0) + 1
    out = {}
    _acc(out, _cup_junction(a, b, pairs, _dotkey(moved), m - 1, i))
    for cr, coeff in corrections:
        _acc(out, _cup_junction(a, b, cr, dots, m - 1, i), coeff, 1)
    return out


@lru_cache(maxsize=None)
def _absorb(d: DottedDiagram, g: Generator) -> Lin:
    kind, i = g
    a, b = d.a, d.b
    dots = _dots_by_point(d)
    if kind == "y":
        if not 1 <= i <= a:
            raise WordError(f"y{i} does not fit below {a} strands")
        dots[i] = dots.get(i, 0) + 1
        return _settle(a, b, d.pairs, _dotkey(dots))
    if kind == "b":
        res = _compose_undotted(a, b, d.pairs, g)
        sign, newpairs, na = res  # caps never create loops

        def f(p):
            return p if p < i else p + 2

        out: Lin = {}
        _acc(out, _settle(na, b, newpairs, _dotkey(_remap(dots, f))), Fraction(sign))
        return out
    if kind == "s":
        if not 1 <= i <= a - 1:
            raise WordError(f"s{i} does not fit below {a} strands")
        x = i if dots.get(i) else (i + 1 if dots.get(i + 1) else None)
        if x is None:
            sign, newpairs, _ = _compose_undotted(a, b, d.pairs, g)

            def f(p):
                return i + 1 if p == i else i if p == i + 1 else p

            out = {}
            _acc(out, _settle(a, b, newpairs, _dotkey(_remap(dots, f))), Fraction(sign))
            return out
        # peel one dot: d = d_minus o y_x
        dots[x] -= 1
        d_minus = _diagram_from_points(a, b, d.pairs, dots)
        other = i + 1 if x == i else i
        const = Fraction(-1) if x == i else Fraction(1)
        out = {}
        _acc(out, _absorb_lin(_absorb(d_minus, g), ("y", other)))
        out_minus: Lin = {(d_minus, 0): Fraction(1)}
        _acc(out, out_minus, const, 1)
        _acc(out, _absorb_lin(_absorb(d_minus, ("bs", i)), ("b", i)), Fraction(1), 1)
        return out
    if kind == "bs":
        if not 1 <= i <= a - 1:
            raise WordError(f"b{i}* does not fit below {a} strands")
        p_i = dots.pop(i, 0)
        q_i = dots.pop(i + 1, 0)
        out = {}
        rest = _dotkey(dots)
        # y_{i+1}^q b* = sum_j C(q,j) (-h)^(q-j) y_i^j b*
        for j in range(q_i + 1):
            coeff = Fraction(comb(q_i, j) * (-1) ** (q_i - j))
            _acc(out, _cup_junction(a, b, d.pairs, rest, p_i + j, i), coeff, q_i - j)
        return out
    raise WordError(f"unknown generator {g}")


def _diagram_from_points(a, b, pairs, dots: Mapping[int, int]) -> DottedDiagram:
    return DottedDiagram(a, b, pairs, tuple(dots.get(p, 0) for p, _ in pairs))


def _absorb_lin(x: Lin, g: Generator) -> Lin:
    out: Lin = {}
    for (d, e), c in x.items():
        _acc(out, _absorb(d, g), c, e)
    return out


def _fold(x: Lin, gens: Iterable[Generator]) -> Lin:
    for g in gens:
        x = _absorb_lin(x, g)
    return x


def clear_caches() -> None:
    for fn in (walk, _settle, _cup_junction, _absorb):
        fn.cache_clear()


# ------------------------------------------------------------------ Morphism

@dataclass(frozen=True)
class Morphism:
    """Finite Q[h]-combination of normal dotted diagrams in Hom(a, b).

    hbar is None while h is symbolic, or the rational value it was
    specialised to.
    """

    a: int
    b: int
    terms: Mapping[DottedDiagram, HbarPoly] = field(default_factory=dict)
    hbar: Optional[Fraction] = None

    def __post_init__(self):
        clean = {}
        for d, c in self.terms.items():
            c = HbarPoly.coerce(c)
            if (d.a, d.b) != (self.a, self.b):
                raise ValueError(f"diagram {d} is not in Hom({self.a},{self.b})")
            if c:
                clean[d] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_lin(cls, a: int, b: int, x: Lin, hbar: Optional[Fraction] = None) -> "Morphism":
        acc: Dict[DottedDiagram, HbarPoly] = {}
        for (d, e), c in x.items():
            acc[d] = acc.get(d, HbarPoly()) + HbarPoly.monomial(c, e)
        m = cls(a, b, acc)
        return m if hbar is None else specialize(m, hbar)

    def to_lin(self) -> Lin:
        out: Lin = {}
        for d, c in self.terms.items():
            for e, v in c.terms():
                out[(d, e)] = v
        return out

    @classmethod
    def zero(cls, a: int, b: int, hbar=None) -> "Morphism":
        return cls(a, b, {}, hbar)

    @classmethod
    def identity(cls, a: int, hbar=None) -> "Morphism":
        return cls(a, a, {identity(a): HbarPoly.const(1)}, hbar)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.a, self.b, self.terms, self.hbar) == (other.a, other.b, other.terms, other.hbar)

    def __hash__(self):
        return hash((self.a, self.b, tuple(self.terms.items()), self.hbar))

    def _check(self, other: "Morphism"):
        if (self.a, self.b) != (other.a, other.b):
            raise ValueError("arity mismatch")
        return _common_hbar(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        t = self._check(other)
        acc = dict(self.terms)
        for d, c in other.terms.items():
            acc[d] = acc.get(d, HbarPoly()) + c
        return Morphism(self.a, self.b, acc, t)

    def __neg__(self):
        return Morphism(self.a, self.b, {d: -c for d, c in self.terms.items()}, self.hbar)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c) -> "Morphism":
        c = HbarPoly.coerce(c)
        m = Morphism(self.a, self.b, {d: v * c for d, v in self.terms.items()})
        return m if self.hbar is None else specialize(m, self.hbar)

    def __rmul__(self, c):
        return self.scale(c)

    def coefficient(self, d: DottedDiagram) -> HbarPoly:
        return self.terms.get(d, HbarPoly())

    def max_dots(self) -> int:
        return max((d.total_dots for d in self.terms), default=-1)

    def to_json_obj(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "hbar": "symbolic" if self.hbar is None else _num(self.hbar),
            "terms": [{"coeff": c.to_string(), "diagram": d.to_json_obj()} for d, c in self.terms.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{d}" for d, c in self.terms.items())


def _num(t: Fraction):
    t = Fraction(t)
    return int(t) if t.denominator == 1 else str(t)


def morphism_from_json(obj) -> Morphism:
    if isinstance(obj, str):
        obj = json.loads(obj)
    hb = obj.get("hbar", "symbolic")
    hbar = None if hb == "symbolic" else Fraction(str(hb))
    terms: Dict[DottedDiagram, HbarPoly] = {}
    for t in obj["terms"]:
        d = diagram_from_json(t["diagram"])
        terms[d] = terms.get(d, HbarPoly()) + parse_hbar(str(t["coeff"]))
    return Morphism(int(obj["a"]), int(obj["b"]), terms, hbar)


def _common_hbar(*ms: Morphism) -> Optional[Fraction]:
    vals = {m.hbar for m in ms if m.hbar is not None}
    if len(vals) > 1:
        raise ValueError("morphisms specialised at different values of h")
    return vals.pop() if vals else None


# ---------------------------------------------------------------- operations

def absorb_bottom(d: DottedDiagram, g: Generator) -> Morphism:
    """Normal form of d o g (g attached below d)."""
    x = _absorb(d, g)
    return Morphism.from_lin(_source_below(d.a, g), d.b, x)


def normal_form(w: GenWord, hbar: Optional[Fraction] = None) -> Morphism:
    """Basis expansion of a word; hbar=None keeps h symbolic."""
    x: Lin = {(identity(w.target), 0): Fraction(1)}
    x = _fold(x, w.gens)
    return Morphism.from_lin(w.source, w.target, x, None if hbar is None else Fraction(hbar))


def word_morphism(text: str, source: int, hbar=None) -> Morphism:
    return normal_form(parse_word(text, source), hbar)


def basis_morphism(d: DottedDiagram, hbar=None) -> Morphism:
    m = Morphism(d.a, d.b, {d: HbarPoly.const(1)})
    return m if hbar is None else specialize(m, hbar)


def specialize(f: Morphism, t) -> Morphism:
    t = Fraction(t)
    terms = {d: HbarPoly.const(c.evaluate(t)) for d, c in f.terms.items()}
    return Morphism(f.a, f.b, terms, t)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """f o g (g first)."""
    if f.a != g.b:
        raise ValueError(f"cannot compose: source {f.a} != target {g.b}")
    t = _common_hbar(f, g)
    acc: Dict[DottedDiagram, HbarPoly] = {}
    for dg, cg in g.terms.items():
        gens = canonical_word(dg).gens
        for df, cf in f.terms.items():
            x = _fold({(df, 0): Fraction(1)}, gens)
            coeff = cf * cg
            for (d, e), v in x.items():
                acc[d] = acc.get(d, HbarPoly()) + coeff * HbarPoly.monomial(v, e)
    m = Morphism(g.a, f.b, acc)
    return m if t is None else specialize(m, t)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """f (x) g = (f (x) 1) o (1 (x) g), extended bilinearly."""
    t = _common_hbar(f, g)
    acc: Dict[DottedDiagram, HbarPoly] = {}
    for df, cf in f.terms.items():
        wf = canonical_word(df)
        for dg, cg in g.terms.items():
            wg = canonical_word(dg)
            gens = wf.gens + tuple((k, i + f.a) for k, i in wg.gens)
            w = GenWord(f.a + g.a, gens)
            x = _fold({(identity(w.target), 0): Fraction(1)}, w.gens)
            coeff = cf * cg
            for (d, e), v in x.items():
                acc[d] = acc.get(d, HbarPoly()) + coeff * HbarPoly.monomial(v, e)
    m = Morphism(f.a + g.a, f.b + g.b, acc)
    return m if t is None else specialize(m, t)


def flip_word_morphism(w: GenWord, hbar=None) -> Morphism:
    sign, fw = flip_word(w)
    return normal_form(fw, hbar).scale(sign)


def flip(f: Morphism) -> Morphism:
    """Image under the upside-down flip, computed on canonical words."""
    acc: Dict[DottedDiagram, HbarPoly] = {}
    for d, c in f.terms.items():
        sign, fw = flip_word(canonical_word(d))
        x = _fold({(identity(fw.target), 0): Fraction(1)}, fw.gens)
        for (dd, e), v in x.items():
            acc[dd] = acc.get(dd, HbarPoly()) + c * HbarPoly.monomial(sign * v, e)
    m = Morphism(f.b, f.a, acc)
    return m if f.hbar is None else specialize(m, f.hbar)
