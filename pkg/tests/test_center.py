from fractions import Fraction

import pytest
import sympy

from svw.center import (
    as_poly,
    centralizer_basis,
    check_centre,
    check_presentation,
    commutator,
    decompose,
    is_central,
    is_polynomial,
    is_symmetric,
    permute_poly,
    poly_morphism,
    predicted_centre_dim,
    presentation_relations,
    vandermonde,
)
from svw.diagrams import identity
from svw.engine import Morphism, compose, specialize, word_morphism
from svw.hbar import H, HbarPoly


def to_sympy(f, ys, h):
    expr = 0
    for e, c in as_poly(f).items():
        coeff = sum(sympy.Rational(v.numerator, v.denominator) * h ** p for p, v in c.terms())
        expr += coeff * sympy.Mul(*[y ** x for y, x in zip(ys, e)])
    return sympy.expand(expr)


@pytest.mark.parametrize("a", [2, 3, 4])
def test_vandermonde_against_sympy(a):
    ys = sympy.symbols(f"y1:{a + 1}")
    h = sympy.Symbol("h")
    want = sympy.expand(sympy.Mul(*[(ys[i] - ys[j]) ** 2 - h ** 2 for i in range(a) for j in range(i + 1, a)]))
    assert to_sympy(vandermonde(a), ys, h) == want


def test_vandermonde_examples():
    y1, y2, h = sympy.symbols("y1 y2 h")
    assert to_sympy(vandermonde(2), (y1, y2), h) == sympy.expand((y1 - y2) ** 2 - h ** 2)
    d0 = vandermonde(2, 0)
    assert {d.dots: c.evaluate(0) for d, c in d0.terms.items()} == {(2, 0): 1, (1, 1): -2, (0, 2): 1}
    d3 = vandermonde(3)
    assert d3.max_dots() == 6 and is_symmetric(d3)
    with pytest.raises(ValueError):
        vandermonde(1)


def test_commutator_examples():
    assert commutator(word_morphism("y1", 2), word_morphism("y2", 2)).is_zero()
    assert commutator(word_morphism("e1", 2), vandermonde(2)).is_zero()
    c = commutator(word_morphism("s1", 2), word_morphism("y1", 2) + word_morphism("y2", 2))
    assert c == word_morphism("e1", 2).scale(HbarPoly.monomial(-2, 1))
    with pytest.raises(ValueError):
        commutator(Morphism.identity(2), Morphism.identity(3))


def test_is_central_examples():
    assert is_central(vandermonde(2)) == (True, None)
    f = compose(vandermonde(2), word_morphism("y1", 2) + word_morphism("y2", 2)) + Morphism.identity(2).scale(5)
    assert is_central(f)[0]
    ok, (name, comm) = is_central(word_morphism("y1", 2) + word_morphism("y2", 2))
    assert not ok and name == "s1"
    assert comm == word_morphism("e1", 2).scale(HbarPoly.monomial(-2, 1))


def test_predicted_dims():
    assert predicted_centre_dim(2, 1) == 1
    assert predicted_centre_dim(2, 4) == 5
    assert predicted_centre_dim(3, 6) == 2
    assert [predicted_centre_dim(2, D) for D in range(5)] == [1, 1, 2, 3, 5]


def test_predicted_dims_bruteforce():
    # oracle: count exponent vectors sorted non-increasingly
    import itertools

    for a in (2, 3):
        for D in range(a * (a - 1), a * (a - 1) + 4):
            top = D - a * (a - 1)
            parts = {tuple(sorted(e, reverse=True)) for e in itertools.product(range(top + 1), repeat=a) if sum(e) <= top}
            assert predicted_centre_dim(a, D) == 1 + len(parts)


@pytest.mark.parametrize("D,want", [(1, 1), (2, 2), (4, 5)])
def test_centralizer_examples(D, want):
    assert len(centralizer_basis(2, D, 1)) == want


@pytest.mark.parametrize("t", [0, 1])
@pytest.mark.parametrize("D", range(5))
def test_centralizer_structure(D, t):
    elems = centralizer_basis(2, D, t)
    assert len(elems) == predicted_centre_dim(2, D)
    for el in elems:
        assert is_polynomial(el)
        const = el.coefficient(identity(2)).evaluate(t)
        rest = el - Morphism.identity(2, Fraction(t)).scale(const)
        assert is_symmetric(rest)
        ft, c = decompose(el, t)
        assert compose(vandermonde(2, t), ft) + Morphism.identity(2, Fraction(t)).scale(c) == el
        assert is_central(el)[0]


def test_decompose_rejects_non_central():
    y = word_morphism("y1", 2, 1)
    assert decompose(y, 1) is None
    assert decompose(word_morphism("e1", 2, 1), 1) is None


def test_permute_poly():
    f = poly_morphism(2, {(2, 0): HbarPoly.const(1)})
    assert as_poly(permute_poly(f, (1, 0))) == {(0, 2): HbarPoly.const(1)}


def test_presentation_examples():
    rels = {name: (lhs, rhs) for name, lhs, rhs in presentation_relations(3)}
    assert "antisymmetry e1y2" in rels and "unwrap e1 y1^3 e1" in rels and "tangle s1e2e1" in rels
    assert check_presentation(3).ok


def test_presentation_negative_control():
    lhs = word_morphism("e1 y2", 2)
    wrong = word_morphism("e1 y1", 2) - word_morphism("e1", 2).scale(H)
    assert not (lhs - wrong).is_zero()


def test_centre_suite():
    rep = check_centre()
    assert rep.ok, rep.failures()


def test_extended_a3_d6():
    elems = centralizer_basis(3, 6, 1)
    assert len(elems) == predicted_centre_dim(3, 6) == 2
    for el in elems:
        assert decompose(el, 1) is not None
