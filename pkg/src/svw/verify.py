"""Theorem-level checks: relation suites, loops, dot sliding, flip, counting,
the key construction and the diagonality certificate for linear independence.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagrams import (
    DottedDiagram,
    canonical_word,
    count_basis,
    enumerate_basis,
    flip_basis,
    flip_sign_formula,
    string_kind,
    string_order,
)
from .engine import Morphism, basis_morphism, compose, flip, normal_form, specialize, word_morphism
from .hbar import HbarPoly
from .pn_rep import (
    ONE_MONO,
    GradedElement,
    _phi_y_op,
    beta,
    beta_star,
    delta_op,
    g_factor,
    jm_op,
    omega_op,
    phi_graded,
    pn_basis,
    psi_tensor,
    sigma,
    v_sig,
)
from .superlin import SpaceSignature, SuperOperator, apply_at, op_compose, v_factor
from .words import GenWord, Generator, parse_word, step_arity


@dataclass
class Case:
    id: str
    passed: bool
    witness: Optional[str] = None

    def to_json_obj(self) -> dict:
        out = {"id": self.id, "pass": self.passed}
        if not self.passed and self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    suite: str
    cases: List[Case] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, id: str, passed: bool, witness: Optional[str] = None) -> None:
        self.cases.append(Case(id, bool(passed), witness))

    def failures(self) -> List[Case]:
        return [c for c in self.cases if not c.passed]

    def to_json_obj(self) -> dict:
        return {"suite": self.suite, "cases": [c.to_json_obj() for c in self.cases], "ok": self.ok}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))


# --------------------------------------------------------------- relations

# A side of a relation: [(coefficient, power of h, word)]
Side = List[Tuple[Fraction, int, str]]


def _shift_text(text: str, p: int) -> str:
    if p == 0 or not text:
        return text
    w = parse_word(text, 100)  # only the indices matter here
    out = []
    for kind, i in w.gens:
        out.append(f"b{i + p}*" if kind == "bs" else f"{kind}{i + p}")
    return " ".join(out)


# (name, source arity, lhs, rhs) at symbolic h
SVW_RELATIONS: List[Tuple[str, int, str, Side]] = [
    ("involution s1s1=1", 2, "s1 s1", [(Fraction(1), 0, "")]),
    ("braid", 3, "s1 s2 s1", [(Fraction(1), 0, "s2 s1 s2")]),
    ("far commute", 4, "s1 s3", [(Fraction(1), 0, "s3 s1")]),
    ("snake b1b2*=-1", 1, "b1 b2*", [(Fraction(-1), 0, "")]),
    ("snake b2b1*=1", 1, "b2 b1*", [(Fraction(1), 0, "")]),
    ("cup slide s2b1*", 1, "s2 b1*", [(Fraction(1), 0, "s1 b2*")]),
    ("untwist s1b1*", 0, "s1 b1*", [(Fraction(-1), 0, "b1*")]),
    ("untwist b1s1", 2, "b1 s1", [(Fraction(1), 0, "b1")]),
    ("loop b1b1*=0", 0, "b1 b1*", []),
    ("dot through crossing", 2, "y2", [(Fraction(1), 0, "s1 y1 s1"), (Fraction(1), 1, "s1"), (Fraction(1), 1, "e1")]),
    ("dot on cap", 2, "b1 y2", [(Fraction(1), 0, "b1 y1"), (Fraction(1), 1, "b1")]),
    ("height move b(b x 1 x 1)", 4, "b1 b1", [(Fraction(-1), 0, "b1 b3")]),
    ("interchange y1 s2", 3, "y1 s2", [(Fraction(1), 0, "s2 y1")]),
    ("interchange y1 b2*", 1, "y1 b2*", [(Fraction(1), 0, "b2* y1")]),
    ("interchange y3 b1", 4, "y1 b1", [(Fraction(1), 0, "b1 y3")]),
]


def relation_instances(a_max: int, base=SVW_RELATIONS):
    """Each base relation padded with identity strands on the left (index shift)."""
    for name, r, lhs, rhs in base:
        for p in range(0, max(a_max - r, 0) + 1):
            if r + p > max(a_max, r) or (r > a_max and p > 0):
                continue
            if r > a_max + 1:
                continue
            yield f"{name} +{p}", r + p, _shift_text(lhs, p), [(c, e, _shift_text(w, p)) for c, e, w in rhs]


def side_morphism(side: Side, source: int, target: int, hbar=None) -> Morphism:
    acc = Morphism.zero(source, target)
    for c, e, text in side:
        acc = acc + normal_form(parse_word(text, source)).scale(HbarPoly.monomial(c, e))
    return acc if hbar is None else specialize(acc, hbar)


def _side_op(side: Side, source: int, n: int, m: int, corrupt: bool, target_sig, source_sig) -> SuperOperator:
    ops = [(c, psi_tensor(parse_word(text, source), n, m, corrupt)) for c, e, text in side]

    def fn(t):
        acc: Dict = {}
        for c, op in ops:
            for u, v in op.image(t).items():
                acc[u] = acc.get(u, 0) + c * v
        return acc

    return SuperOperator(source_sig, target_sig, 0, fn)


def check_relations(n: int = 3, m: int = 1, a_max: int = 3, corrupt_sigma: bool = False) -> VerificationReport:
    """Images under Psi (h = 1) of the defining relations, plus commutation checks."""
    rep = VerificationReport("relations")
    for name, src, lhs, rhs in relation_instances(a_max):
        lw = parse_word(lhs, src)
        lop = psi_tensor(lw, n, m, corrupt_sigma)
        rop = _side_op(rhs, src, n, m, corrupt_sigma, lop.target, lop.source)
        bad = lop.equals(rop)
        rep.add(f"psi n={n} m={m}: {name}", bad is None, None if bad is None else f"input {bad}")
    # p(n) commutes with Omega on V (x) V
    om = omega_op(n, 2, 0, 1)
    for x in pn_basis(n):
        dx = delta_op(x, 2)
        bad = op_compose(dx, om).equals(op_compose(om, dx))
        rep.add(f"[Delta({x.name}),Omega]=0", bad is None, None if bad is None else f"input {bad}")
    # Omega on V (x) V = sigma + beta* beta
    bad = om.equals(sigma(n) + op_compose(beta_star(n), beta(n)))
    rep.add("Omega on VV = sigma + beta* beta", bad is None, None if bad is None else f"input {bad}")
    # Jucys-Murphy operators commute
    for a in range(1, a_max + 1):
        ys = [jm_op(n, m, a, i) for i in range(1, a + 1)]
        for i, j in itertools.combinations(range(a), 2):
            bad = op_compose(ys[i], ys[j]).equals(op_compose(ys[j], ys[i]))
            rep.add(f"[Y{i + 1},Y{j + 1}]=0 on a={a}", bad is None, None if bad is None else f"input {bad}")
    return rep


# ------------------------------------------------------------------- loops

def check_loops(k_max: int = 3, l_max: int = 3, n: int = 3, m: int = 1) -> VerificationReport:
    rep = VerificationReport("loops")
    for k in range(k_max + 1):
        for l in range(l_max + 1):
            text = " ".join(["b1"] + ["y1"] * k + ["y2"] * l + ["b1*"])
            w = parse_word(text, 0)
            nf = normal_form(w)
            rep.add(f"nf b1 y1^{k} y2^{l} b1*", nf.is_zero(), None if nf.is_zero() else str(nf))
            op = psi_tensor(w, n, m)
            img = {t: op.image(t) for t in op.source.basis()}
            zero = all(not v for v in img.values())
            rep.add(f"psi b1 y1^{k} y2^{l} b1*", zero, None if zero else "non-zero image")
    return rep


# ------------------------------------------------------------- dot sliding

def dotslide_relations(k_max: int = 3):
    """(name, source, lhs word, rhs side) for the dot sliding lemmas at symbolic h."""
    rels = [
        ("slide (a) s1 y2", 2, "s1 y2", [(Fraction(1), 0, "y1 s1"), (Fraction(1), 1, ""), (Fraction(-1), 1, "e1")]),
        ("slide (b) s1 y1", 2, "s1 y1", [(Fraction(1), 0, "y2 s1"), (Fraction(-1), 1, ""), (Fraction(-1), 1, "e1")]),
        ("slide (c) y2 b1*", 0, "y2 b1*", [(Fraction(1), 0, "y1 b1*"), (Fraction(-1), 1, "b1*")]),
    ]
    for k in range(1, k_max + 1):
        rels.append((f"cap (a) k={k}", 2, "b1" + " y2" * k,
                     [(Fraction(comb(k, j)), k - j, "b1" + " y1" * j) for j in range(k + 1)]))
        rels.append((f"cap (b) k={k}", 2, "b1" + " y1" * k,
                     [(Fraction((-1) ** (k + j) * comb(k, j)), k - j, "b1" + " y2" * j) for j in range(k + 1)]))
        rels.append((f"cup (c) k={k}", 0, " ".join(["y1"] * k + ["b1*"]),
                     [(Fraction(comb(k, j)), k - j, " ".join(["y2"] * j + ["b1*"])) for j in range(k + 1)]))
        rels.append((f"cup (d) k={k}", 0, " ".join(["y2"] * k + ["b1*"]),
                     [(Fraction((-1) ** (k + j) * comb(k, j)), k - j, " ".join(["y1"] * j + ["b1*"])) for j in range(k + 1)]))
    for k in range(0, k_max + 1):
        rhs_a: Side = [(Fraction(1), 0, " ".join(["y1"] * k + ["s1"]))]
        rhs_b: Side = [(Fraction(1), 0, " ".join(["y2"] * k + ["s1"]))]
        for j in range(k):
            left = ["y1"] * (k - 1 - j)
            rhs_a.append((Fraction(1), 1, " ".join(left + ["y2"] * j)))
            rhs_a.append((Fraction(-1), 1, " ".join(left + ["e1"] + ["y2"] * j)))
            rhs_b.append((Fraction(-1), 1, " ".join(left + ["y2"] * j)))
            rhs_b.append((Fraction(-1), 1, " ".join(["y2"] * j + ["e1"] + left)))
        rels.append((f"generalized (a) k={k}", 2, " ".join(["s1"] + ["y2"] * k), rhs_a))
        rels.append((f"generalized (b) k={k}", 2, " ".join(["s1"] + ["y1"] * k), rhs_b))
    return rels


def check_dotslide(k_max: int = 3) -> VerificationReport:
    rep = VerificationReport("dotslide")
    for name, src, lhs, rhs in dotslide_relations(k_max):
        l = normal_form(parse_word(lhs, src))
        r = side_morphism(rhs, src, l.b)
        diff = l - r
        rep.add(name, diff.is_zero(), None if diff.is_zero() else f"lhs-rhs = {diff}")
    return rep


# ----------------------------------------------------------------- corpus

def random_word(rng: random.Random, a_max: int = 3, max_len: int = 8, max_dots: int = 3, max_width: int = 5) -> GenWord:
    """A random arity-correct word with source <= a_max, built bottom-up."""
    a = rng.randint(0, a_max)
    length = rng.randint(1, max_len)
    gens: List[Generator] = []
    cur, dots = a, 0
    for _ in range(length):
        options: List[Generator] = []
        for i in range(1, cur):
            options += [("s", i), ("b", i)]
        if cur + 2 <= max_width:
            options += [("bs", i) for i in range(1, cur + 2)]
        if dots < max_dots:
            options += [("y", i) for i in range(1, cur + 1)] * 2
        if not options:
            break
        g = rng.choice(options)
        cur = step_arity(g, cur)
        dots += g[0] == "y"
        gens.append(g)
    return GenWord(a, tuple(reversed(gens)))


def random_corpus(count: int = 200, seed: int = 20240531, **kw) -> List[GenWord]:
    rng = random.Random(seed)
    return [random_word(rng, **kw) for _ in range(count)]


def _sample_inputs(sig: SpaceSignature, k: int, rng: random.Random, prefix=()) -> List[tuple]:
    labels = [f.labels for f in sig.factors[len(prefix):]]
    total = 1
    for l in labels:
        total *= len(l)
    if total <= k:
        return [tuple(prefix) + t for t in itertools.product(*labels)]
    return [tuple(prefix) + tuple(rng.choice(l) for l in labels) for _ in range(k)]


def check_corpus(count: int = 200, seed: int = 20240531, samples: int = 6, m_values=(0, 1)) -> VerificationReport:
    """Homogeneity, functor-oracle agreement and flip laws on random words."""
    rep = VerificationReport("corpus")
    rng = random.Random(seed + 1)
    words = random_corpus(count, seed)
    for idx, w in enumerate(words):
        tag = f"w{idx} [{w}] src={w.source}"
        nf = normal_form(w)
        k = w.total_dots
        homog = all(e + d.total_dots == k for d, c in nf.terms.items() for e, _ in c.terms())
        rep.add(f"{tag}: homogeneity", homog, None if homog else str(nf))
        n = max(2, (w.source + w.target) // 2 + k)
        one = specialize(nf, 1)
        for m in m_values:
            a_op = psi_tensor(w, n, m)
            b_op = psi_tensor(one, n, m)
            inputs = _sample_inputs(a_op.source, samples, rng)
            bad = a_op.equals(b_op, inputs)
            rep.add(f"{tag}: psi n={n} m={m}", bad is None, None if bad is None else f"input {bad}")
        zero = specialize(nf, 0)
        a_op = phi_graded(w, n, k)
        b_op = phi_graded(zero, n, k)
        vsig = SpaceSignature([v_factor(n)] * w.source)
        inputs = _sample_inputs(vsig, samples, rng)
        inputs = [(ONE_MONO,) + t for t in inputs]
        bad = a_op.equals(b_op, inputs)
        rep.add(f"{tag}: phi n={n}", bad is None, None if bad is None else f"input {bad}")
        f4 = flip(flip(flip(flip(nf))))
        rep.add(f"{tag}: flip^4", f4 == nf, None if f4 == nf else str(f4))
        if len(w.gens) >= 2:
            cut = rng.randint(1, len(w.gens) - 1)
            top = GenWord(GenWord(w.source, w.gens[cut:]).target, w.gens[:cut])
            bottom = GenWord(w.source, w.gens[cut:])
            f, g = normal_form(top), normal_form(bottom)
            lhs = flip(compose(f, g))
            rhs = compose(flip(g), flip(f))
            rep.add(f"{tag}: flip anti-multiplicative", lhs == rhs, None if lhs == rhs else f"{lhs} vs {rhs}")
    return rep


# -------------------------------------------------------------------- flip

def check_flip(ab_max: int = 4, k_max: int = 2, corpus: int = 60) -> VerificationReport:
    rep = VerificationReport("flip")
    for a in range(ab_max + 1):
        for b in range(ab_max + 1):
            if (a + b) % 2:
                continue
            for k in range(k_max + 1):
                bad_formula = bad_engine = None
                for d in enumerate_basis(a, b, k):
                    s, fd = flip_basis(d)
                    if s != flip_sign_formula(d) and bad_formula is None:
                        bad_formula = str(d)
                    lead = {dd: c for dd, c in flip(basis_morphism(d)).terms.items() if dd.total_dots == k}
                    if lead != {fd: HbarPoly.const(s)} and bad_engine is None:
                        bad_engine = str(d)
                rep.add(f"flip_basis = closed formula on S^{k}_{a},{b}", bad_formula is None, bad_formula)
                rep.add(f"flip_basis = leading term of flip on S^{k}_{a},{b}", bad_engine is None, bad_engine)
    rng = random.Random(7)
    for w in random_corpus(corpus, 99):
        nf = normal_form(w)
        ok = flip(flip(flip(flip(nf)))) == nf
        rep.add(f"flip^4 [{w}]", ok)
        if len(w.gens) >= 2:
            cut = rng.randint(1, len(w.gens) - 1)
            bottom = GenWord(w.source, w.gens[cut:])
            top = GenWord(bottom.target, w.gens[:cut])
            f, g = normal_form(top), normal_form(bottom)
            ok = flip(compose(f, g)) == compose(flip(g), flip(f))
            rep.add(f"flip(fg)=flip(g)flip(f) [{w}]", ok)
    return rep


# ---------------------------------------------------------------- counting

def check_counting(a_max: int = 6, b_max: int = 6, k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("counting")
    for a in range(a_max + 1):
        for b in range(b_max + 1):
            for k in range(k_max + 1):
                got = len(enumerate_basis(a, b, k))
                want = count_basis(a, b, k)
                rep.add(f"|S^{k}_{a},{b}| = {want}", got == want, None if got == want else f"enumerated {got}")
    return rep


# -------------------------------------------------------- key construction

class KeyError_(ValueError):
    pass


def key_labels(d: DottedDiagram) -> Dict[int, int]:
    """Label (signed, negative = primed) at every boundary point, the labelling steps."""
    dots = d.dot_map
    lab: Dict[int, int] = {}
    base = 1
    for pair in string_order(d.a, d.pairs):
        p, q = pair
        l = dots.get(pair, 0)
        kind = string_kind(d.a, pair)
        if kind == "cap":
            lab[p], lab[q] = base, -(base + l)
        elif kind == "through":
            lab[p], lab[q] = base, base + l
        else:  # cup: base at the right end (primed), far label on the left end
            lab[q], lab[p] = -base, base + l
        base += l + 1
    return lab


def max_label(d: DottedDiagram) -> int:
    return max((abs(v) for v in key_labels(d).values()), default=0)


def key_vectors(d: DottedDiagram, n: Optional[int] = None) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    lab = key_labels(d)
    need = max((abs(v) for v in lab.values()), default=0)
    if n is None:
        n = max(need, 2)
    if n < need:
        raise KeyError_(f"n={n} is too small: the key construction needs n >= {need}")
    v = tuple(lab[p] for p in range(1, d.a + 1))
    w = tuple(lab[d.a + t] for t in range(1, d.b + 1))
    return v, w


def label_str(l: int) -> str:
    return f"v{l}" if l > 0 else f"v{-l}'"


def tensor_str(t: Sequence[int]) -> str:
    return "(x)".join(label_str(l) for l in t) if t else "1"


def _graded_layer(n: int, g: Generator, below: int, D: int) -> SuperOperator:
    kind, i = g
    if kind == "y":
        return _phi_y_op(n, below, i, D)
    sig = SpaceSignature([g_factor(n)] + [v_factor(n)] * below)
    local = {"s": sigma, "b": beta, "bs": beta_star}[kind](n)
    return apply_at(local, i, sig)


def graded_pairing(d: DottedDiagram, v: Sequence[int], w: Sequence[int], n: int, D: Optional[int] = None) -> GradedElement:
    """<w | Phi_n(d)(1 (x) v)>, evaluated with exact pruning.

    Labels only change under dots, and caps/cups only pair a label with its
    negative, so after a string's dots are applied its label is already
    forced by v or w.  Tensors that disagree are dropped early; this never
    changes the final coefficient.
    """
    if D is None:
        D = d.total_dots
    v, w = tuple(v), tuple(w)
    cw = canonical_word(d)
    ar = cw.arities()
    L = len(cw.gens)
    dots = d.dot_map
    n_top = sum(c for (p, _), c in zip(d.pairs, d.dots) if p > d.a)
    n_bot = d.total_dots - n_top
    required: Dict[int, int] = {}
    for (p, q), c in zip(d.pairs, d.dots):
        if p <= d.a and c:
            required[p] = w[q - d.a - 1] if q > d.a else -v[q - 1]
    dotted_tops = {p - d.a for (p, _), c in zip(d.pairs, d.dots) if p > d.a and c}
    state: Dict[tuple, Fraction] = {(ONE_MONO,) + v: Fraction(1)}
    for k in range(L, 0, -1):
        g = cw.gens[k - 1]
        op = _graded_layer(n, g, ar[k], D)
        new: Dict[tuple, Fraction] = {}
        for t, c in state.items():
            for u, x in op.image(t).items():
                new[u] = new.get(u, 0) + c * x
        state = {t: c for t, c in new.items() if c}
        pos_from_bottom = L - k  # layers already applied minus one
        if pos_from_bottom < n_bot:
            kind, i = g
            nxt = cw.gens[k - 2] if k >= 2 else None
            if nxt != g or pos_from_bottom + 1 == n_bot:
                state = {t: c for t, c in state.items() if t[i] == required[i]}
        if k - 1 == n_top:
            state = {t: c for t, c in state.items()
                     if all(t[j] == w[j - 1] for j in range(1, d.b + 1) if j not in dotted_tops)}
    return GradedElement(n, {t[0]: c for t, c in state.items() if t[1:] == w})


def graded_pairing_unpruned(d: DottedDiagram, v, w, n: int, D: Optional[int] = None) -> GradedElement:
    op = phi_graded(canonical_word(d), n, d.total_dots if D is None else D)
    img = op.image((ONE_MONO,) + tuple(v))
    return GradedElement(n, {t[0]: c for t, c in img.items() if t[1:] == tuple(w)})


def independence_matrix(a: int, b: int, k: int):
    """(basis, n, matrix) with matrix[i][j] = <w_{d_i} | Phi_n(d_j)(1 (x) v_{d_i})>."""
    if (a + b) % 2:
        raise ValueError("a and b must have the same parity")
    n = max(2, (a + b) // 2 + k)
    basis = enumerate_basis(a, b, k)
    keys = [key_vectors(d, n) for d in basis]
    mat = [[graded_pairing(dj, v, w, n, k) for dj in basis] for (v, w) in keys]
    return basis, n, mat


def check_independence(cases: Sequence[Tuple[int, int, int]] = ((1, 1, 1), (2, 2, 1), (2, 2, 2), (1, 3, 1), (3, 3, 1))) -> VerificationReport:
    rep = VerificationReport("independence")
    for a, b, k in cases:
        basis, n, mat = independence_matrix(a, b, k)
        bad = None
        for i, row in enumerate(mat):
            for j, x in enumerate(row):
                if (i == j) == x.is_zero():
                    bad = f"entry ({basis[i]}, {basis[j]}) = {x}"
                    break
            if bad:
                break
        rep.add(f"diagonal certificate S^{k}_{a},{b} (n={n}, size {len(basis)})", bad is None, bad)
    # ordering-graph monotonicity of Phi_n(y_k)
    for n in (2, 3):
        op = _phi_y_op(n, 1, 1, 1)
        rank = lambda l: l if l > 0 else 2 * n + 1 + l
        ok = True
        for l in list(range(1, n + 1)) + [-i for i in range(1, n + 1)]:
            for u in op.image((ONE_MONO, l)):
                ok &= rank(u[1]) > rank(l)
        rep.add(f"Phi(y) moves labels forward, n={n}", ok)
    # key-construction label invariants
    for a in range(5):
        for b in range(5):
            if (a + b) % 2:
                continue
            for k in range(3):
                bad = None
                for d in enumerate_basis(a, b, k):
                    lab = key_labels(d)
                    for (p, q), c in zip(d.pairs, d.dots):
                        near, far = (q, p) if string_kind(d.a, (p, q)) == "cup" else (p, q)
                        if abs(lab[far]) - abs(lab[near]) != c:
                            bad = str(d)
                    if lab and max(abs(x) for x in lab.values()) != (a + b) // 2 + k:
                        bad = str(d)
                    if bad:
                        break
                rep.add(f"key labels on S^{k}_{a},{b}", bad is None, bad)
    return rep


def golden_diagram() -> DottedDiagram:
    pairs = [(1, 3), (2, 11), (4, 14), (5, 13), (6, 12), (8, 10), (7, 9)]
    dots = {(1, 3): 2, (2, 11): 1, (4, 14): 2, (6, 12): 1, (7, 9): 2}
    return DottedDiagram.make(6, 8, pairs, dots)
