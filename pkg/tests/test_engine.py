import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from svw.diagrams import DottedDiagram, canonical_word, enumerate_basis, identity
from svw.engine import (
    Morphism,
    absorb_bottom,
    basis_morphism,
    compose,
    flip,
    morphism_from_json,
    normal_form,
    specialize,
    tensor,
    word_morphism,
)
from svw.hbar import H, ONE, HbarPoly
from svw.pn_rep import psi_tensor
from svw.superlin import op_tensor
from svw.verify import random_word
from svw.words import WordError, parse_word

CAP = DottedDiagram.make(2, 0, [(1, 2)])
CAP1 = DottedDiagram.make(2, 0, [(1, 2)], {(1, 2): 1})
CUP = DottedDiagram.make(0, 2, [(1, 2)])
E1 = DottedDiagram.make(2, 2, [(1, 2), (3, 4)])
SWAP = DottedDiagram.make(2, 2, [(1, 4), (2, 3)])
SWAP_DOT = DottedDiagram.make(2, 2, [(1, 4), (2, 3)], {(1, 4): 1})


def M(terms, a, b, hbar=None):
    return Morphism(a, b, {d: HbarPoly.coerce(c) for d, c in terms.items()}, hbar)


def test_absorb_examples():
    assert absorb_bottom(CAP, ("y", 1)) == M({CAP1: 1}, 2, 0)
    assert absorb_bottom(CAP, ("y", 2)) == M({CAP1: 1, CAP: H}, 2, 0)
    assert absorb_bottom(CAP, ("s", 1)) == M({CAP: 1}, 2, 0)
    assert absorb_bottom(E1, ("bs", 1)).b == 2
    assert compose(basis_morphism(E1), basis_morphism(E1)).is_zero()


def test_absorb_arity_error():
    with pytest.raises(WordError):
        absorb_bottom(CAP, ("s", 3))


def test_normal_form_examples():
    assert word_morphism("s1 s1", 2) == Morphism.identity(2)
    assert word_morphism("y2 s1", 2) == M({SWAP_DOT: 1, identity(2): H, E1: H}, 2, 2)
    assert word_morphism("b1 s2 y2 s2 b1*", 1, 1) == Morphism.identity(1, 1).scale(2)
    assert word_morphism("b1 y1^2 y2 b1*", 0).is_zero()


def test_named_identities():
    assert word_morphism("s1 s2 s1", 3) == word_morphism("s2 s1 s2", 3)
    assert word_morphism("b2 b1*", 1) == Morphism.identity(1)
    assert word_morphism("b1 b2*", 1) == -Morphism.identity(1)
    assert word_morphism("s1 b1*", 0) == M({CUP: -1}, 0, 2)
    assert word_morphism("b1 s1", 2) == M({CAP: 1}, 2, 0)


def test_compose_examples():
    i2 = Morphism.identity(2)
    assert compose(i2, i2) == i2
    assert compose(word_morphism("b2", 3), word_morphism("b1*", 1)) == Morphism.identity(1)
    assert compose(word_morphism("b1", 3), word_morphism("b2*", 1)) == -Morphism.identity(1)


def test_compose_arity_mismatch():
    with pytest.raises(ValueError):
        compose(Morphism.identity(2), Morphism.identity(3))


def test_tensor_examples():
    i1 = Morphism.identity(1)
    assert tensor(i1, i1) == Morphism.identity(2)
    cap = basis_morphism(CAP)
    # height move: b (b (x) 1 (x) 1) = -(b (x) b)
    lhs = compose(cap, tensor(cap, Morphism.identity(2)))
    assert lhs == -tensor(cap, cap)


def test_tensor_cap_cup_against_psi():
    # the juxtaposition cap (x) cup is -1 times the normal drawing (cup above cap);
    # Psi, built with the Koszul rule on operators, is the referee
    t = tensor(basis_morphism(CAP), basis_morphism(CUP))
    assert t == M({E1: -1}, 2, 2)
    n = 2
    lhs = psi_tensor(specialize(t, 1), n, 0)
    rhs = op_tensor(psi_tensor(parse_word("b1", 2), n, 0), psi_tensor(parse_word("b1*", 0), n, 0))
    assert lhs.equals(rhs) is None


def test_flip_examples():
    assert flip(Morphism.identity(3)) == Morphism.identity(3)
    assert flip(basis_morphism(SWAP)) == -basis_morphism(SWAP)
    dot = DottedDiagram.make(1, 1, [(1, 2)], {(1, 2): 1})
    assert flip(basis_morphism(dot)) == -basis_morphism(dot)
    assert flip(basis_morphism(CAP)) == basis_morphism(CUP)


def test_specialize_examples():
    f = word_morphism("y2 s1", 2)
    assert specialize(f, 0) == M({SWAP_DOT: 1}, 2, 2, Fraction(0))
    assert specialize(f, 1) == M({SWAP_DOT: 1, identity(2): 1, E1: 1}, 2, 2, Fraction(1))
    g = word_morphism("s1 b2* b1", 3)
    assert specialize(g, 7).terms == g.terms


def test_json_round_trip():
    f = word_morphism("y2 s1 y1^2", 2)
    assert morphism_from_json(f.to_json()) == f
    assert morphism_from_json(specialize(f, 1).to_json()) == specialize(f, 1)


@pytest.mark.parametrize("a,b,k", [(a, b, k) for a in range(5) for b in range(5) if (a + b) % 2 == 0 for k in range(3)])
def test_canonical_word_round_trip(a, b, k):
    for d in enumerate_basis(a, b, k):
        assert normal_form(canonical_word(d)) == basis_morphism(d)


words = st.integers(0, 10**6).map(lambda s: random_word(random.Random(s)))


@given(words)
def test_hbar_homogeneity_and_dot_bound(w):
    nf = normal_form(w)
    k = w.total_dots
    for d, c in nf.terms.items():
        assert d.total_dots <= k
        for e, _ in c.terms():
            assert e + d.total_dots == k


@given(words)
def test_leading_term_is_graded_normal_form(w):
    nf = normal_form(w)
    k = w.total_dots
    lead = {d: HbarPoly.const(c.evaluate(0)) for d, c in nf.terms.items() if d.total_dots == k}
    assert Morphism(w.source, w.target, lead, Fraction(0)) == normal_form(w, Fraction(0))


@given(words, st.integers(0, 10**6))
def test_compose_matches_concatenation(w, seed):
    if len(w.gens) < 2:
        return
    cut = random.Random(seed).randint(1, len(w.gens) - 1)
    bottom = parse_word(" ".join(_txt(g) for g in w.gens[cut:]), w.source)
    top = parse_word(" ".join(_txt(g) for g in w.gens[:cut]), bottom.target)
    assert compose(normal_form(top), normal_form(bottom)) == normal_form(w)


@given(words)
def test_flip_four_times(w):
    nf = normal_form(w)
    assert flip(flip(flip(flip(nf)))) == nf


@given(words, st.integers(0, 10**6))
def test_compose_associative(w, seed):
    if len(w.gens) < 3:
        return
    rng = random.Random(seed)
    i, j = sorted(rng.sample(range(1, len(w.gens)), 2))
    low = parse_word(" ".join(_txt(g) for g in w.gens[j:]), w.source)
    mid = parse_word(" ".join(_txt(g) for g in w.gens[i:j]), low.target)
    top = parse_word(" ".join(_txt(g) for g in w.gens[:i]), mid.target)
    f, g, h = normal_form(top), normal_form(mid), normal_form(low)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


def _txt(g):
    kind, i = g
    return {"s": f"s{i}", "y": f"y{i}", "b": f"b{i}", "bs": f"b{i}*"}[kind]
