"""The endomorphism algebra A_h = End(a): presentation checks, the deformed
Vandermonde element D_h and exact centralizer computations.

Polynomials in y_1..y_a are morphisms whose diagrams all have the identity
connector; the dot count on strand i is the exponent of y_i.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .diagrams import DottedDiagram, enumerate_basis_upto, identity
from .engine import Morphism, compose, specialize, word_morphism
from .hbar import HbarPoly
from .superlin import nullspace_rows
from .verify import Side, VerificationReport, side_morphism
from .words import parse_word

Exponents = Tuple[int, ...]


def _ident_pairs(a: int):
    return identity(a).pairs


def poly_morphism(a: int, poly: Dict[Exponents, HbarPoly], hbar=None) -> Morphism:
    pairs = _ident_pairs(a)
    m = Morphism(a, a, {DottedDiagram(a, a, pairs, tuple(e)): HbarPoly.coerce(c) for e, c in poly.items()})
    return m if hbar is None else specialize(m, hbar)


def is_polynomial(f: Morphism) -> bool:
    ident = _ident_pairs(f.a)
    return f.a == f.b and all(d.pairs == ident for d in f.terms)


def as_poly(f: Morphism) -> Dict[Exponents, HbarPoly]:
    if not is_polynomial(f):
        raise ValueError("not a polynomial in the dots")
    return {d.dots: c for d, c in f.terms.items()}


def _pmul(p: Dict[Exponents, HbarPoly], q: Dict[Exponents, HbarPoly]) -> Dict[Exponents, HbarPoly]:
    out: Dict[Exponents, HbarPoly] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, HbarPoly()) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _unit(a: int, i: int) -> Exponents:
    return tuple(1 if j == i else 0 for j in range(a))


def vandermonde_poly(a: int) -> Dict[Exponents, HbarPoly]:
    if a < 2:
        raise ValueError("the Vandermonde element needs a >= 2")
    zero = (0,) * a
    out = {zero: HbarPoly.const(1)}
    h2 = HbarPoly.monomial(1, 2)
    for i, j in itertools.combinations(range(a), 2):
        ei, ej = _unit(a, i), _unit(a, j)
        two_i = tuple(2 * x for x in ei)
        two_j = tuple(2 * x for x in ej)
        mixed = tuple(x + y for x, y in zip(ei, ej))
        factor = {two_i: HbarPoly.const(1), two_j: HbarPoly.const(1), mixed: HbarPoly.const(-2), zero: -h2}
        out = _pmul(out, factor)
    return out


def vandermonde(a: int, hbar=None) -> Morphism:
    """D_h = prod_{i<j} ((y_i - y_j)^2 - h^2)."""
    return poly_morphism(a, vandermonde_poly(a), hbar)


def permute_poly(f: Morphism, perm: Sequence[int]) -> Morphism:
    """Rename y_i -> y_{perm[i]} (0-based) in a polynomial morphism."""
    out = {}
    for e, c in as_poly(f).items():
        ne = [0] * f.a
        for i, x in enumerate(e):
            ne[perm[i]] = x
        out[tuple(ne)] = c
    return poly_morphism(f.a, out, f.hbar)


def is_symmetric(f: Morphism) -> bool:
    return all(permute_poly(f, p) == f for p in itertools.permutations(range(f.a)))


def commutator(f: Morphism, g: Morphism) -> Morphism:
    if (f.a, f.b) != (g.a, g.b) or f.a != f.b:
        raise ValueError("commutator needs two endomorphisms of the same object")
    return compose(f, g) - compose(g, f)


def generators(a: int, hbar=None) -> List[Tuple[str, Morphism]]:
    names = [f"s{i}" for i in range(1, a)] + [f"e{i}" for i in range(1, a)] + [f"y{j}" for j in range(1, a + 1)]
    return [(nm, word_morphism(nm, a, hbar)) for nm in names]


def is_central(f: Morphism, a: Optional[int] = None) -> Tuple[bool, Optional[Tuple[str, Morphism]]]:
    """(True, None), or (False, (name of g, [g, f])) for the first generator g that fails."""
    a = f.a if a is None else a
    for name, g in generators(a, f.hbar):
        c = commutator(g, f)
        if not c.is_zero():
            return False, (name, c)
    return True, None


# ----------------------------------------------------------- centralizers

def _partitions_at_most(d: int, parts: int) -> int:
    @lru_cache(maxsize=None)
    def p(n, k, m):
        # partitions of n into at most k parts, each <= m
        if n == 0:
            return 1
        if k == 0:
            return 0
        return sum(p(n - x, k - 1, x) for x in range(1, min(n, m) + 1))

    return p(d, parts, d)


def predicted_centre_dim(a: int, D: int) -> int:
    if a < 2:
        raise ValueError("a >= 2 required")
    top = D - a * (a - 1)
    return 1 + sum(_partitions_at_most(d, a) for d in range(top + 1)) if top >= 0 else 1


def centralizer_basis(a: int, D: int, t) -> List[Morphism]:
    """Basis (reduced echelon) of the centralizer of A_t inside span S^{<=D}_{a,a}."""
    t = Fraction(t)
    basis = enumerate_basis_upto(a, a, D)
    gens = generators(a, t)
    rows: Dict[Tuple[str, DottedDiagram], Dict[DottedDiagram, Fraction]] = {}
    for x in basis:
        xm = Morphism(a, a, {x: HbarPoly.const(1)}, t)
        for name, g in gens:
            c = commutator(xm, g)
            for d, v in c.terms.items():
                val = v.evaluate(t)
                if val:
                    rows.setdefault((name, d), {})[x] = val
    # order columns so that pivots prefer high-degree diagrams; the
    # free columns are then the low-degree ones, giving readable elements
    cols = sorted(basis, key=lambda d: (-d.total_dots, d))
    sols = nullspace_rows(rows.values(), cols)
    out = []
    for s in sols:
        out.append(Morphism(a, a, {d: HbarPoly.const(v) for d, v in s.items()}, t))
    out.sort(key=lambda m: (m.max_dots(), sorted(m.terms)))
    return out


# ---------------------------------------------------------- decomposition

def _sympy_poly(f: Morphism, ys, hsym=None):
    expr = 0
    for d, c in f.terms.items():
        coeff = sum(sympy.Rational(v.numerator, v.denominator) * (hsym ** e if hsym is not None else 1)
                    for e, v in c.terms()) if f.hbar is None else sympy.Rational(c.evaluate(f.hbar).numerator, c.evaluate(f.hbar).denominator)
        mono = 1
        for y, x in zip(ys, d.dots):
            mono *= y ** x
        expr += coeff * mono
    return expr


def decompose(f: Morphism, t) -> Optional[Tuple[Morphism, Fraction]]:
    """(f~, c) with f = D_t f~ + c and f~ symmetric, or None if impossible."""
    if not is_polynomial(f):
        return None
    t = Fraction(t)
    a = f.a
    ys = sympy.symbols(f"y1:{a + 1}")
    fs = sympy.Poly(_sympy_poly(specialize(f, t) if f.hbar is None else f, ys), *ys, domain="QQ")
    Ds = sympy.Poly(_sympy_poly(vandermonde(a, t), ys), *ys, domain="QQ")
    q, r = fs.div(Ds)
    if r.total_degree() > 0:
        return None
    c = Fraction(str(r.as_expr())) if not r.is_zero else Fraction(0)
    ftilde = {}
    for monom, coeff in q.terms():
        ftilde[tuple(monom)] = HbarPoly.const(Fraction(str(coeff)))
    ft = poly_morphism(a, ftilde, t)
    if not is_symmetric(ft):
        return None
    return ft, c


def centre_report(a: int, D: int, t) -> dict:
    elems = centralizer_basis(a, D, t)
    return {
        "a": a,
        "degreeCap": D,
        "hbar": int(t) if Fraction(t).denominator == 1 else str(Fraction(t)),
        "dimension": len(elems),
        "predicted": predicted_centre_dim(a, D),
        "elements": [e.to_json_obj() for e in elems],
    }


def check_centre(a: int = 2, D_max: int = 4, ts=(0, 1), a_max_identities: int = 3, extended: bool = False) -> VerificationReport:
    rep = VerificationReport("centre")
    for a_ in range(2, a_max_identities + 1):
        Dh = vandermonde(a_)
        rep.add(f"D_h symmetric a={a_}", is_symmetric(Dh))
        for i in range(1, a_):
            e = word_morphism(f"e{i}", a_)
            s = word_morphism(f"s{i}", a_)
            z1 = compose(e, Dh)
            z2 = compose(Dh, e)
            rep.add(f"e{i} D_h = 0 a={a_}", z1.is_zero(), None if z1.is_zero() else str(z1))
            rep.add(f"D_h e{i} = 0 a={a_}", z2.is_zero(), None if z2.is_zero() else str(z2))
            c = commutator(Dh, s)
            rep.add(f"[D_h, s{i}] = 0 a={a_}", c.is_zero(), None if c.is_zero() else str(c))
    configs = [(a, D, t) for t in ts for D in range(D_max + 1)]
    if extended:
        configs.append((3, 6, 1))
    for a_, D, t in configs:
        elems = centralizer_basis(a_, D, t)
        want = predicted_centre_dim(a_, D)
        rep.add(f"dim centre a={a_} D={D} t={t} = {want}", len(elems) == want, f"got {len(elems)}")
        for k, el in enumerate(elems):
            ok_poly = is_polynomial(el)
            dec = decompose(el, t) if ok_poly else None
            rep.add(f"element {k} a={a_} D={D} t={t} = D_t f~ + c", dec is not None, None if dec else str(el))
            if dec is not None:
                ft, c = dec
                recon = compose(vandermonde(a_, t), ft) + Morphism.identity(a_, Fraction(t)).scale(c)
                rep.add(f"element {k} a={a_} D={D} t={t} reconstructs", recon == el, None if recon == el else str(recon))
    return rep


# ------------------------------------------------------------ presentation

def presentation_relations(a: int, k_max: int = 3) -> List[Tuple[str, str, Side]]:
    """(name, lhs word, rhs side) for every relation instance of A_h on a strands."""
    one = Fraction(1)
    rels: List[Tuple[str, str, Side]] = []
    rng = range(1, a)
    for i in rng:
        rels.append((f"involution s{i}^2=1", f"s{i} s{i}", [(one, 0, "")]))
    for i in rng:
        for j in rng:
            if abs(i - j) > 1:
                rels.append((f"commute s{i}e{j}", f"s{i} e{j}", [(one, 0, f"e{j} s{i}")]))
                rels.append((f"commute e{i}e{j}", f"e{i} e{j}", [(one, 0, f"e{j} e{i}")]))
                rels.append((f"commute s{i}s{j}", f"s{i} s{j}", [(one, 0, f"s{j} s{i}")]))
    for i in rng:
        for j in range(1, a + 1):
            if j not in (i, i + 1):
                rels.append((f"commute e{i}y{j}", f"e{i} y{j}", [(one, 0, f"y{j} e{i}")]))
                rels.append((f"commute s{i}y{j}", f"s{i} y{j}", [(one, 0, f"y{j} s{i}")]))
    for i in range(1, a + 1):
        for j in range(1, a + 1):
            if i != j:
                rels.append((f"commute y{i}y{j}", f"y{i} y{j}", [(one, 0, f"y{j} y{i}")]))
    for i in range(1, a - 1):
        j = i + 1
        rels.append((f"braid s{i}s{j}s{i}", f"s{i} s{j} s{i}", [(one, 0, f"s{j} s{i} s{j}")]))
        rels.append((f"snake e{j}e{i}e{j}", f"e{j} e{i} e{j}", [(-one, 0, f"e{j}")]))
        rels.append((f"snake e{i}e{j}e{i}", f"e{i} e{j} e{i}", [(-one, 0, f"e{i}")]))
        rels.append((f"tangle s{i}e{j}e{i}", f"s{i} e{j} e{i}", [(one, 0, f"s{j} e{i}")]))
        rels.append((f"tangle s{j}e{i}e{j}", f"s{j} e{i} e{j}", [(-one, 0, f"s{i} e{j}")]))
        rels.append((f"tangle e{j}e{i}s{j}", f"e{j} e{i} s{j}", [(one, 0, f"e{j} s{i}")]))
        rels.append((f"tangle e{i}e{j}s{i}", f"e{i} e{j} s{i}", [(-one, 0, f"e{i} s{j}")]))
    for i in rng:
        rels.append((f"untwist e{i}s{i}", f"e{i} s{i}", [(one, 0, f"e{i}")]))
        rels.append((f"untwist s{i}e{i}", f"s{i} e{i}", [(-one, 0, f"e{i}")]))
        rels.append((f"nilpotent e{i}^2", f"e{i} e{i}", []))
        j = i + 1
        rels.append((f"skein s{i}y{i}", f"s{i} y{i}", [(one, 0, f"y{j} s{i}"), (-one, 1, f"e{i}"), (-one, 1, "")]))
        rels.append((f"skein y{i}s{i}", f"y{i} s{i}", [(one, 0, f"s{i} y{j}"), (one, 1, f"e{i}"), (-one, 1, "")]))
        rels.append((f"antisymmetry e{i}y{j}", f"e{i} y{j}", [(one, 0, f"e{i} y{i}"), (one, 1, f"e{i}")]))
        rels.append((f"antisymmetry y{j}e{i}", f"y{j} e{i}", [(one, 0, f"y{i} e{i}"), (-one, 1, f"e{i}")]))
    if a >= 2:
        for k in range(1, k_max + 1):
            rels.append((f"unwrap e1 y1^{k} e1", " ".join(["e1"] + ["y1"] * k + ["e1"]), []))
    return rels


def check_presentation(a_max: int = 3, k_max: int = 3) -> VerificationReport:
    rep = VerificationReport("presentation")
    for a in range(2, a_max + 1):
        for name, lhs, rhs in presentation_relations(a, k_max):
            l = word_morphism(lhs, a)
            r = side_morphism(rhs, a, a)
            diff = l - r
            rep.add(f"a={a}: {name}", diff.is_zero(), None if diff.is_zero() else f"lhs-rhs = {diff}")
    return rep
