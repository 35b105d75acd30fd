import json
from fractions import Fraction

import pytest

from svw.diagrams import DottedDiagram, enumerate_basis
from svw.engine import normal_form
from svw.pn_rep import GradedElement, phi_graded
from svw.verify import (
    KeyError_,
    VerificationReport,
    check_counting,
    check_dotslide,
    check_independence,
    check_loops,
    check_relations,
    dotslide_relations,
    golden_diagram,
    graded_pairing,
    graded_pairing_unpruned,
    independence_matrix,
    key_vectors,
    side_morphism,
    tensor_str,
)
from svw.words import parse_word


def test_report_json_shape():
    rep = VerificationReport("x")
    rep.add("a", True)
    rep.add("b", False, "why")
    obj = json.loads(rep.to_json())
    assert obj == {"suite": "x", "cases": [{"id": "a", "pass": True}, {"id": "b", "pass": False, "witness": "why"}], "ok": False}


def test_key_vectors_examples():
    strand = DottedDiagram.make(1, 1, [(1, 2)], {(1, 2): 1})
    assert key_vectors(strand, 2) == ((1,), (2,))
    capcup = DottedDiagram.make(2, 2, [(1, 2), (3, 4)])
    assert key_vectors(capcup, 2) == ((1, -1), (2, -2))


def test_key_vectors_golden():
    v, w = key_vectors(golden_diagram(), 15)
    assert tensor_str(v) == "v1(x)v4(x)v3'(x)v6(x)v9(x)v10"
    assert tensor_str(w) == "v15(x)v12(x)v13'(x)v12'(x)v5(x)v11(x)v9(x)v8"
    assert golden_diagram().total_dots == 8


def test_key_vectors_n_too_small():
    with pytest.raises(KeyError_):
        key_vectors(golden_diagram(), 14)


@pytest.mark.parametrize("a,b,k", [(2, 2, 1), (1, 3, 1), (3, 1, 2), (0, 2, 2)])
def test_pruned_pairing_matches_unpruned(a, b, k):
    basis = enumerate_basis(a, b, k)
    n = (a + b) // 2 + k
    for d in basis:
        v, _ = key_vectors(d, n)
        for e in basis:
            _, w = key_vectors(e, n)
            assert graded_pairing(d, v, w, n) == graded_pairing_unpruned(d, v, w, n)


def test_independence_small_examples():
    basis, n, mat = independence_matrix(1, 1, 1)
    assert n == 2 and mat[0][0] == GradedElement.monomial(2, (), ((1, 2),))
    basis, n, mat = independence_matrix(2, 2, 0)
    assert len(basis) == 3
    for i, row in enumerate(mat):
        for j, x in enumerate(row):
            assert x.is_zero() == (i != j)
            if i == j:
                assert x.degree() == 0


def test_independence_2_2_1():
    basis, n, mat = independence_matrix(2, 2, 1)
    assert (len(basis), n) == (6, 3)
    for i, row in enumerate(mat):
        for j, x in enumerate(row):
            assert x.is_zero() == (i != j)


def test_check_independence_small():
    rep = check_independence(((1, 1, 1), (2, 2, 1)))
    assert rep.ok, rep.failures()


def test_relations_trivial_module():
    rep = check_relations(2, 0, 2)
    assert rep.ok, rep.failures()


def test_relations_negative_control():
    rep = check_relations(2, 0, 2, corrupt_sigma=True)
    assert not rep.ok
    failed = {c.id for c in rep.failures()}
    assert any("untwist s1b1*" in f for f in failed)
    assert all(c.witness for c in rep.failures())
    # sigma -> -sigma still squares to the identity, so the involution relation survives
    assert not any("involution" in f for f in failed)


def test_loops_examples():
    rep = check_loops(3, 3, n=2, m=1)
    assert rep.ok
    for k, l in [(0, 0), (3, 0), (2, 2)]:
        assert normal_form(parse_word(" ".join(["b1"] + ["y1"] * k + ["y2"] * l + ["b1*"]), 0)).is_zero()


def test_counting_examples():
    for args in [(4, 4, 3), (5, 3, 2), (2, 3, 1)]:
        assert check_counting(*args).ok


def test_dotslide_suite_and_negative_control():
    assert check_dotslide(3).ok
    # flip one binomial sign and the comparison must notice
    name, src, lhs, rhs = [r for r in dotslide_relations(3) if r[0] == "cap (a) k=2"][0]
    bad = [(c if j else -c, e, w) for j, (c, e, w) in enumerate(rhs)]
    diff = normal_form(parse_word(lhs, src)) - side_morphism(bad, src, 0)
    assert not diff.is_zero()


def test_cup_cap_binomials():
    # b1 y2^3 = sum_j C(3,j) h^{3-j} b1 y1^j
    rel = [r for r in dotslide_relations(3) if r[0] == "cap (a) k=3"][0]
    assert [c for c, _, _ in rel[3]] == [Fraction(1), Fraction(3), Fraction(3), Fraction(1)]
