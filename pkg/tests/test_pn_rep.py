import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from svw.diagrams import canonical_word, enumerate_basis
from svw.engine import word_morphism
from svw.pn_rep import (
    ONE_MONO,
    A,
    B,
    C,
    E,
    FunctorError,
    GradedElement,
    beta,
    beta_star,
    delta_op,
    dual_basis,
    gl_action,
    graded_vector,
    jm_op,
    mul_B,
    omega_op,
    omega_summands,
    pairing,
    phi_graded,
    pn_basis,
    psi_tensor,
    sigma,
    supertrace_form,
    v_sig,
)
from svw.superlin import SpaceSignature, SuperVector, apply_at, identity_op, op_compose, op_sum
from svw.words import parse_word


def dense(x, n):
    """Oracle: sympy matrix with rows/cols ordered 1..n, 1'..n'."""
    idx = {l: i for i, l in enumerate(list(range(1, n + 1)) + [-i for i in range(1, n + 1)])}
    m = sympy.zeros(2 * n, 2 * n)
    for (r, s), v in x.matrix.items():
        m[idx[r], idx[s]] = sympy.Rational(v.numerator, v.denominator)
    return m


def dense_str(m, n):
    return sum(m[i, i] for i in range(n)) - sum(m[i, i] for i in range(n, 2 * n))


def test_pn_basis_examples():
    assert len(pn_basis(2)) == 8
    a12 = A(2, 1, 2, -1)
    assert a12.matrix == {(1, 2): 1, (-2, -1): -1}
    for x in pn_basis(3):
        want = 0 if x.name.startswith("A") else 1
        assert x.parity == want
    with pytest.raises(ValueError):
        pn_basis(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pn_basis_preserves_form(n):
    # p(n) = {x : x^{st} J + J x = 0}; checked as beta(x v, w) + (-1)^{x v} beta(v, x w) = 0
    b = beta(n)
    for x in pn_basis(n):
        lhs = delta_op(x, 2)
        op = op_compose(b, lhs)
        for t in v_sig(n, 2).basis():
            assert op.image(t) == {}
    assert len(pn_basis(n)) == 2 * n * n


def test_dual_basis_examples():
    n = 2
    assert pn_basis(n)[1].name == "A-1,2"
    assert dual_basis(n)[1].matrix == A(n, 2, 1, 1).scale(Fraction(1, 2)).matrix
    idx = [x.name for x in pn_basis(n)].index("B+1,1")
    assert dual_basis(n)[idx].matrix == C(n, 1, 1, 1).scale(Fraction(-1, 4)).matrix


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dual_basis_pairing_is_identity(n):
    xs, ds = pn_basis(n), dual_basis(n)
    for i, d in enumerate(ds):
        for j, x in enumerate(xs):
            got = supertrace_form(d, x)
            assert got == (1 if i == j else 0)
            assert got == dense_str(dense(d, n) * dense(x, n), n)


def test_supertrace_examples():
    n = 3
    one = E(n, 1, 1)
    for l in list(range(2, n + 1)) + [-i for i in range(1, n + 1)]:
        one = one + E(n, l, l)
    assert dense_str(dense(one, n), n) == 0
    from svw.pn_rep import supertrace

    assert supertrace(one) == 0
    assert supertrace_form(E(n, 1, 1), E(n, 1, 1)) == 1
    assert supertrace_form(A(2, 2, 1, 1).scale(Fraction(1, 2)), A(2, 1, 2, -1)) == 1


gl3 = st.sampled_from(pn_basis(3) + dual_basis(3) + [E(3, r, s) for r in (1, -2, 3) for s in (2, -1, -3)])


@given(gl3, gl3, gl3)
def test_supertrace_form_invariant(x, y, z):
    assert supertrace_form(x.bracket(y), z) == supertrace_form(x, y.bracket(z))


def test_omega_summands():
    assert len(omega_summands(2)) == 8
    assert all(x.parity == xs.parity for x, xs, _ in omega_summands(3))


@pytest.mark.parametrize("n", [2, 3])
def test_omega_on_vv(n):
    om = omega_op(n, 2, 0, 1)
    assert om.equals(sigma(n) + op_compose(beta_star(n), beta(n))) is None
    for a, b in itertools.product(range(1, n + 1), repeat=2):
        assert om.image((a, b)) == {(b, a): 1}


def test_omega_matches_apply_at_oracle():
    n, N, f, g = 2, 3, 0, 2
    sig = v_sig(n, N)
    terms = []
    for x, xs, c in omega_summands(n):
        terms.append(op_compose(apply_at(gl_action(x), f, sig), apply_at(gl_action(xs), g, sig)).scale(c))
    ref = op_sum(terms, sig, sig)
    assert omega_op(n, N, f, g).equals(ref) is None


@pytest.mark.parametrize("n", [2, 3])
def test_fake_casimir_commutes(n):
    om = omega_op(n, 2, 0, 1)
    for x in pn_basis(n):
        dx = delta_op(x, 2)
        assert op_compose(dx, om).equals(op_compose(om, dx)) is None


def test_conjugation_identity():
    n, N = 2, 3
    s1 = apply_at(sigma(n), 1, v_sig(n, N))
    lhs = omega_op(n, N, 0, 2)
    rhs = op_compose(s1, op_compose(omega_op(n, N, 0, 1), s1))
    assert lhs.equals(rhs) is None


@pytest.mark.parametrize("m,a", [(0, 2), (0, 3), (1, 2), (1, 3)])
def test_jucys_murphy_commute(m, a):
    n = 2
    ys = [jm_op(n, m, a, i) for i in range(1, a + 1)]
    for p, q in itertools.combinations(ys, 2):
        assert op_compose(p, q).equals(op_compose(q, p)) is None


def test_psi_examples():
    s = psi_tensor(parse_word("s1", 2), 2, 0)
    assert s.image((-1, -2)) == {(-2, -1): -1}
    snake = psi_tensor(parse_word("b2 b1*", 1), 3, 0)
    assert snake.equals(identity_op(v_sig(3, 1))) is None
    y = psi_tensor(parse_word("y1", 1), 2, 1)
    assert y.equals(sigma(2) + op_compose(beta_star(2), beta(2))) is None
    assert psi_tensor(parse_word("y1", 1), 2, 0).image((1,)) == {}


def test_psi_rejects_wrong_hbar():
    with pytest.raises(FunctorError):
        psi_tensor(word_morphism("y2 s1", 2, 0), 2, 0)
    with pytest.raises(FunctorError):
        phi_graded(word_morphism("y2 s1", 2, 1), 2, 1)


@pytest.mark.parametrize("a,b", [(2, 0), (0, 2), (2, 2), (3, 1), (1, 3)])
def test_psi_parity_of_basis_diagrams(a, b):
    for d in enumerate_basis(a, b, 0):
        assert psi_tensor(canonical_word(d), 2, 0).parity == d.parity


def test_exterior_sign():
    m = (((1, 2),), ())
    assert mul_B((1, 1), m) == (1, (((1, 1), (1, 2)), ()))
    assert mul_B((2, 2), m) == (-1, (((1, 2), (2, 2)), ()))
    assert mul_B((1, 2), m) is None


def test_phi_examples():
    n = 2
    op = phi_graded(parse_word("y1", 1), n, 1)
    img = op.image((ONE_MONO, 1))
    assert img[(((), ((1, 2),)), 2)] == 1
    assert any(t[1] < 0 for t in img)  # B+ terms land on primed vectors
    s = phi_graded(parse_word("s1", 2), n, 1)
    mono = ((), ((1, 2),))
    assert s.image((mono, 1, -2)) == {(mono, -2, 1): 1}


def test_phi_dot_free_is_psi_with_trivial_module():
    n = 2
    w = parse_word("s1 b2* b1 s2", 3)
    ph = phi_graded(w, n, 0)
    ps = psi_tensor(w, n, 0)
    for t in v_sig(n, 3).basis():
        want = {(ONE_MONO,) + u: c for u, c in ps.image(t).items()}
        assert ph.image((ONE_MONO,) + t) == want


def test_pairing_examples():
    n = 2
    sig = SpaceSignature([phi_graded(parse_word("", 1), n, 0).source.factors[0], v_sig(n, 1).factors[0]])
    assert pairing((2,), SuperVector(sig, {})).is_zero()
    mono = ((), ((1, 2),))
    z = graded_vector(n, (2,), mono)
    assert pairing((2,), z) == GradedElement.monomial(n, (), ((1, 2),))
