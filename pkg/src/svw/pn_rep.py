"""The periplectic side: p(n) inside gl(n|n), the fake Casimir, and the functors.

Labels of V = C^{n|n}: an integer l > 0 stands for the even vector v_l and
l < 0 for the odd vector v_{|l|'}.  Matrix units E_{rs} use the same labels.

psi_tensor realises the functor with the 0-slot module M = V^{(x)m}, treated
as m extra tensor factors.  phi_graded realises the graded functor on
G (x) V^{(x)a} where G = Lambda(g_1) (x) S(n_+), truncated at a degree cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .diagrams import canonical_word
from .superlin import (
    BasisTuple,
    Factor,
    SpaceSignature,
    SuperOperator,
    SuperVector,
    apply_at,
    identity_op,
    op_compose,
    v_factor,
)
from .words import GenWord

Half = Fraction(1, 2)


# ------------------------------------------------------------------ gl(n|n)

def _lparity(l: int) -> int:
    return 1 if l < 0 else 0


@dataclass(frozen=True)
class GlElement:
    n: int
    entries: Tuple[Tuple[Tuple[int, int], Fraction], ...]
    name: str = ""

    @classmethod
    def make(cls, n: int, entries: Dict[Tuple[int, int], Fraction], name: str = "") -> "GlElement":
        clean = {k: Fraction(v) for k, v in entries.items() if v}
        for r, s in clean:
            if not (1 <= abs(r) <= n and 1 <= abs(s) <= n):
                raise ValueError(f"E_{r},{s} outside gl({n}|{n})")
        return cls(n, tuple(sorted(clean.items())), name)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[Tuple[int, int], Fraction]], name: str = "") -> "GlElement":
        acc: Dict[Tuple[int, int], Fraction] = {}
        for k, v in terms:
            acc[k] = acc.get(k, 0) + Fraction(v)
        return cls.make(n, acc, name)

    @property
    def matrix(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self.entries)

    @property
    def parity(self) -> Optional[int]:
        ps = {_lparity(r) ^ _lparity(s) for (r, s), _ in self.entries}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def columns(self) -> Dict[int, List[Tuple[int, Fraction]]]:
        """s -> [(r, x_rs)]: the image of v_s is sum x_rs v_r."""
        cols: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, s), v in self.entries:
            cols.setdefault(s, []).append((r, v))
        return cols

    def __add__(self, other: "GlElement") -> "GlElement":
        return GlElement.from_terms(self.n, list(self.entries) + list(other.entries))

    def scale(self, c) -> "GlElement":
        return GlElement.make(self.n, {k: v * Fraction(c) for k, v in self.entries}, self.name)

    def __mul__(self, other: "GlElement") -> "GlElement":
        if self.n != other.n:
            raise ValueError("size mismatch")
        rows: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, s), v in other.entries:
            rows.setdefault(r, []).append((s, v))
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (r, s), v in self.entries:
            for t, w in rows.get(s, ()):
                acc[(r, t)] = acc.get((r, t), 0) + v * w
        return GlElement.make(self.n, acc)

    def bracket(self, other: "GlElement") -> "GlElement":
        sign = -1 if (self.parity or 0) and (other.parity or 0) else 1
        return self * other + (other * self).scale(-sign)

    def is_zero(self) -> bool:
        return not self.entries


def E(n: int, r: int, s: int) -> GlElement:
    return GlElement.make(n, {(r, s): Fraction(1)}, f"E{r},{s}")


def A(n, i, j, sign) -> GlElement:
    return GlElement.from_terms(n, [((i, j), 1), ((-j, -i), sign)], f"A{'+' if sign > 0 else '-'}{i},{j}")


def B(n, i, j, sign) -> GlElement:
    return GlElement.from_terms(n, [((i, -j), 1), ((j, -i), sign)], f"B{'+' if sign > 0 else '-'}{i},{j}")


def C(n, i, j, sign) -> GlElement:
    return GlElement.from_terms(n, [((-i, j), 1), ((-j, i), sign)], f"C{'+' if sign > 0 else '-'}{i},{j}")


def _need(n: int) -> None:
    if n < 2:
        raise ValueError("p(n) needs n >= 2")


def pn_basis(n: int) -> List[GlElement]:
    _need(n)
    out = [A(n, i, j, -1) for i in range(1, n + 1) for j in range(1, n + 1)]
    out += [B(n, i, j, 1) for i in range(1, n + 1) for j in range(i, n + 1)]
    out += [C(n, i, j, -1) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return out


def dual_basis(n: int) -> List[GlElement]:
    _need(n)
    out = [A(n, j, i, 1).scale(Half) for i in range(1, n + 1) for j in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            out.append(C(n, i, i, 1).scale(Fraction(-1, 4)) if i == j else C(n, j, i, 1).scale(-Half))
    out += [B(n, j, i, -1).scale(Half) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return out


def supertrace(x: GlElement) -> Fraction:
    return sum((v if r > 0 else -v) for (r, s), v in x.entries if r == s) or Fraction(0)


def supertrace_form(x: GlElement, y: GlElement) -> Fraction:
    if x.n != y.n:
        raise ValueError("size mismatch")
    return Fraction(supertrace(x * y))


def omega_summands(n: int) -> List[Tuple[GlElement, GlElement, Fraction]]:
    _need(n)
    out = [(A(n, i, j, -1), A(n, j, i, 1), Fraction(1)) for i in range(1, n + 1) for j in range(1, n + 1)]
    out += [(B(n, i, i, 1), C(n, i, i, 1), -Half) for i in range(1, n + 1)]
    out += [(B(n, i, j, 1), C(n, j, i, 1), Fraction(-1)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out += [(C(n, i, j, -1), B(n, j, i, -1), Fraction(1)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return out


# ---------------------------------------------------------- local operators

def v_sig(n: int, k: int) -> SpaceSignature:
    return SpaceSignature([v_factor(n)] * k)


def sigma(n: int, corrupt: bool = False) -> SuperOperator:
    """Superswap; corrupt=True flips its sign (negative control)."""
    sg = -1 if corrupt else 1
    return SuperOperator(v_sig(n, 2), v_sig(n, 2), 0,
                         lambda t: {(t[1], t[0]): sg * (-1 if t[0] < 0 and t[1] < 0 else 1)}, "sigma")


def beta(n: int) -> SuperOperator:
    return SuperOperator(v_sig(n, 2), v_sig(n, 0), 1,
                         lambda t: {(): 1} if t[0] == -t[1] else {}, "beta")


def beta_star(n: int) -> SuperOperator:
    def fn(t):
        out = {}
        for i in range(1, n + 1):
            out[(i, -i)] = 1
            out[(-i, i)] = -1
        return out

    return SuperOperator(v_sig(n, 0), v_sig(n, 2), 1, fn, "beta*")


def gl_action(x: GlElement) -> SuperOperator:
    cols = x.columns()
    p = x.parity
    if p is None:
        raise ValueError("inhomogeneous element")
    return SuperOperator(v_sig(x.n, 1), v_sig(x.n, 1), p,
                         lambda t: {(r,): v for r, v in cols.get(t[0], ())}, x.name)


def delta_op(x: GlElement, N: int) -> SuperOperator:
    """x acting diagonally on V^{(x)N}."""
    sig = v_sig(x.n, N)
    loc = gl_action(x)
    ops = [apply_at(loc, f, sig) for f in range(N)]

    def fn(t):
        acc: Dict[BasisTuple, Fraction] = {}
        for o in ops:
            for u, c in o.image(t).items():
                acc[u] = acc.get(u, 0) + c
        return acc

    return SuperOperator(sig, sig, loc.parity, fn, f"D({x.name})")


def _omega_cols(n: int):
    return [(x.columns(), xs.columns(), c, x.parity) for x, xs, c in omega_summands(n)]


def omega_pairs_op(n: int, N: int, pairs: Sequence[Tuple[int, int]], scale: Fraction = Fraction(1)) -> SuperOperator:
    """sum over (f, g) in pairs of Omega_{fg} on V^{(x)N} (0-based factors, f < g)."""
    data = _omega_cols(n)
    sig = v_sig(n, N)

    def fn(t):
        acc: Dict[BasisTuple, Fraction] = {}
        for f, g in pairs:
            mid = sum(1 for l in t[f:g] if l < 0)  # parities of factors f..g-1
            for xc, xsc, c, p in data:
                imgs = xsc.get(t[g])
                if not imgs:
                    continue
                imf = xc.get(t[f])
                if not imf:
                    continue
                sign = -1 if p and mid % 2 else 1
                for r1, v1 in imf:
                    for r2, v2 in imgs:
                        u = t[:f] + (r1,) + t[f + 1 : g] + (r2,) + t[g + 1 :]
                        acc[u] = acc.get(u, 0) + scale * sign * c * v1 * v2
        return acc

    return SuperOperator(sig, sig, 0, fn, "Omega")


def omega_op(n: int, N: int, f: int, g: int) -> SuperOperator:
    return omega_pairs_op(n, N, [(f, g)])


def jm_op(n: int, m: int, a: int, i: int) -> SuperOperator:
    """Psi(y_i) on V^{(x)(m+a)}: sum of Omega_{f, m+i-1} over f < m+i-1."""
    g = m + i - 1
    return omega_pairs_op(n, m + a, [(f, g) for f in range(g)])


# -------------------------------------------------------------------- Psi

class FunctorError(ValueError):
    pass


def _local(n: int, kind: str, corrupt_sigma: bool = False) -> SuperOperator:
    if kind == "s":
        return sigma(n, corrupt_sigma)
    if kind == "b":
        return beta(n)
    return beta_star(n)


def _word_op(w: GenWord, n: int, prefix: List[Factor], y_op, corrupt_sigma: bool = False) -> SuperOperator:
    """Layered image of a word on prefix (x) V^{(x)arity}."""
    ar = w.arities()
    off = len(prefix)
    vf = v_factor(n)
    result = identity_op(SpaceSignature(prefix + [vf] * w.source))
    for k in range(len(w.gens), 0, -1):
        kind, i = w.gens[k - 1]
        sig = SpaceSignature(prefix + [vf] * ar[k])
        if kind == "y":
            layer = y_op(ar[k], i)
        else:
            layer = apply_at(_local(n, kind, corrupt_sigma), off + i - 1, sig)
        result = op_compose(layer, result)
    return result


def _coeff_at(c, t) -> Fraction:
    return c.evaluate(t)


def _morphism_op(f, n, build, source_sig, target_sig, t_expected) -> SuperOperator:
    if f.hbar is None or f.hbar != t_expected:
        raise FunctorError(f"morphism must be specialised at h={t_expected}")
    terms = [(_coeff_at(c, t_expected), build(canonical_word(d))) for d, c in f.terms.items()]

    def fn(t):
        acc: Dict[BasisTuple, Fraction] = {}
        for c, op in terms:
            for u, v in op.image(t).items():
                acc[u] = acc.get(u, 0) + c * v
        return acc

    return SuperOperator(source_sig, target_sig, 0, fn, "Psi(f)")


def psi_tensor(w, n: int, m: int, corrupt_sigma: bool = False) -> SuperOperator:
    """Image on V^{(x)(m+a)} -> V^{(x)(m+b)} of a word or an h=1 morphism."""
    if n < 2:
        raise FunctorError("n must be at least 2")
    vf = v_factor(n)
    cache: Dict[Tuple[int, int], SuperOperator] = {}

    def y_op(arity, i):
        key = (arity, i)
        if key not in cache:
            cache[key] = jm_op(n, m, arity, i)
        return cache[key]

    def build(word: GenWord) -> SuperOperator:
        return _word_op(word, n, [vf] * m, y_op, corrupt_sigma)

    if isinstance(w, GenWord):
        return build(w)
    return _morphism_op(w, n, build, v_sig(n, m + w.a), v_sig(n, m + w.b), Fraction(1))


# ------------------------------------------------- graded module G and Phi

Monomial = Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]  # (BSet, AMultiset)

ONE_MONO: Monomial = ((), ())


def mono_degree(m: Monomial) -> int:
    return len(m[0]) + len(m[1])


def mono_parity(m: Monomial) -> int:
    return len(m[0]) % 2


def mul_B(pair: Tuple[int, int], m: Monomial) -> Optional[Tuple[int, Monomial]]:
    """B+_pair * m in exterior normal form: (sign, monomial) or None if zero."""
    bs, am = m
    if pair in bs:
        return None
    pos = sum(1 for p in bs if p < pair)
    return (-1) ** pos, (tuple(sorted(bs + (pair,))), am)


def mul_A(pair: Tuple[int, int], m: Monomial) -> Monomial:
    bs, am = m
    return bs, tuple(sorted(am + (pair,)))


def mono_str(m: Monomial) -> str:
    bs, am = m
    parts = [f"B+{i},{j}" for i, j in bs] + [f"A-{i},{j}" for i, j in am]
    return " ".join(parts) if parts else "1"


class GradedElement:
    """Element of G = Lambda(g_1) (x) S(n_+) in the monomial basis."""

    def __init__(self, n: int, coeffs: Optional[Dict[Monomial, Fraction]] = None):
        self.n = n
        self.coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, n: int, bset=(), amulti=(), c=1) -> "GradedElement":
        m = (tuple(sorted(tuple(p) for p in bset)), tuple(sorted(tuple(p) for p in amulti)))
        return cls(n, {m: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, GradedElement) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*[{mono_str(m)}]" for m, c in sorted(self.coeffs.items()))

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.coeffs), default=-1)


def g_factor(n: int) -> Factor:
    return Factor(f"G{n}", lambda m: mono_parity(m))


def _phi_y_op(n: int, arity: int, k: int, D: int) -> SuperOperator:
    """Phi_n(y_k) on G (x) V^{(x)arity}; slot 0 is G, V-slot k is factor k."""
    sig = SpaceSignature([g_factor(n)] + [v_factor(n)] * arity)
    terms = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            terms.append(("A", (i, j), A(n, j, i, 1).columns(), Fraction(1)))
    for i in range(1, n + 1):
        terms.append(("B", (i, i), C(n, i, i, 1).columns(), -Half))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            terms.append(("B", (i, j), C(n, j, i, 1).columns(), Fraction(-1)))

    def fn(t):
        m = t[0]
        if mono_degree(m) + 1 > D:
            return {}
        acc: Dict[BasisTuple, Fraction] = {}
        lab = t[k]
        before = mono_parity(m) + sum(1 for l in t[1:k] if l < 0)
        for kind, pair, cols, c in terms:
            imgs = cols.get(lab)
            if not imgs:
                continue
            if kind == "A":
                nm, sign = mul_A(pair, m), 1
            else:
                res = mul_B(pair, m)
                if res is None:
                    continue
                sign, nm = res
                if before % 2:
                    sign = -sign
            for r, v in imgs:
                u = (nm,) + t[1:k] + (r,) + t[k + 1 :]
                acc[u] = acc.get(u, 0) + sign * c * v
        return acc

    return SuperOperator(sig, sig, 0, fn, f"Phi(y{k})")


def phi_graded(w, n: int, D: Optional[int] = None) -> SuperOperator:
    """Image on G_{<=D} (x) V^{(x)a} of a word or an h=0 morphism."""
    if n < 2:
        raise FunctorError("n must be at least 2")
    if isinstance(w, GenWord):
        dots = w.total_dots
    else:
        dots = w.max_dots()
    if D is None:
        D = max(dots, 0)
    if D < dots:
        raise FunctorError(f"degree cap {D} below the {dots} dots of the input")
    gf, vf = g_factor(n), v_factor(n)
    cache: Dict[Tuple[int, int], SuperOperator] = {}

    def y_op(arity, i):
        key = (arity, i)
        if key not in cache:
            cache[key] = _phi_y_op(n, arity, i, D)
        return cache[key]

    def build(word: GenWord) -> SuperOperator:
        return _word_op(word, n, [gf], y_op)

    if isinstance(w, GenWord):
        return build(w)
    return _morphism_op(
        w, n, build,
        SpaceSignature([gf] + [vf] * w.a), SpaceSignature([gf] + [vf] * w.b), Fraction(0),
    )


def graded_vector(n: int, v_labels: Sequence[int], mono: Monomial = ONE_MONO) -> SuperVector:
    sig = SpaceSignature([g_factor(n)] + [v_factor(n)] * len(v_labels))
    return SuperVector(sig, {(mono,) + tuple(v_labels): Fraction(1)})


def pairing(w: Sequence[int], z: SuperVector) -> GradedElement:
    """G-coefficient of the basis tensor w in z."""
    w = tuple(w)
    if len(z.sig) != len(w) + 1:
        raise ValueError("signature mismatch")
    n = len(z.sig.factors[1].labels) // 2 if len(z.sig) > 1 else 0
    out = {t[0]: c for t, c in z.coeffs.items() if t[1:] == w}
    return GradedElement(n, out)
