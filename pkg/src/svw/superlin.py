"""Exact sparse linear algebra on parity-graded tensor spaces.

Vectors are sparse maps from basis tuples (one label per tensor factor) to
rationals.  Operators are lazy: an operator is a function from a basis tuple
to a sparse image, cached on first use, so huge spaces cost nothing until a
basis tensor is actually hit.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

Label = Hashable
BasisTuple = Tuple[Label, ...]
Sparse = Dict[BasisTuple, Fraction]


class SignatureError(ValueError):
    pass


class Factor:
    """One tensor factor: a parity function plus, when finite, its labels."""

    def __init__(self, name: str, parity: Callable[[Label], int], labels: Optional[Sequence[Label]] = None):
        self.name = name
        self._parity = parity
        self.labels = tuple(labels) if labels is not None else None

    def parity(self, label: Label) -> int:
        return self._parity(label)

    def __eq__(self, other):
        return isinstance(other, Factor) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


def v_factor(n: int) -> Factor:
    """V = C^{n|n}; label l > 0 is v_l (even), l < 0 is v_{|l|'} (odd)."""
    labels = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    return Factor(f"V{n}", lambda l: 1 if l < 0 else 0, labels)


def finite_factor(name: str, items: Sequence[Tuple[Label, int]]) -> Factor:
    par = dict(items)
    if len(par) != len(items):
        raise SignatureError("labels must be unique within a factor")
    return Factor(name, par.__getitem__, [l for l, _ in items])


class SpaceSignature:
    def __init__(self, factors: Iterable[Factor]):
        self.factors: Tuple[Factor, ...] = tuple(factors)

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        return isinstance(other, SpaceSignature) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "(x)".join(map(repr, self.factors)) or "k"

    def __add__(self, other: "SpaceSignature") -> "SpaceSignature":
        return SpaceSignature(self.factors + other.factors)

    def slice(self, i: int, j: int) -> "SpaceSignature":
        return SpaceSignature(self.factors[i:j])

    def parity(self, t: BasisTuple) -> int:
        return sum(f.parity(l) for f, l in zip(self.factors, t)) % 2

    def basis(self) -> Iterator[BasisTuple]:
        if any(f.labels is None for f in self.factors):
            raise SignatureError("signature has an infinite factor")
        return itertools.product(*(f.labels for f in self.factors))

    def dimension(self) -> int:
        out = 1
        for f in self.factors:
            if f.labels is None:
                raise SignatureError("signature has an infinite factor")
            out *= len(f.labels)
        return out


def _add_into(acc: Sparse, t: BasisTuple, c) -> None:
    v = acc.get(t, 0) + c
    if v:
        acc[t] = v
    else:
        acc.pop(t, None)


class SuperVector:
    def __init__(self, sig: SpaceSignature, coeffs: Optional[Dict[BasisTuple, Fraction]] = None):
        self.sig = sig
        self.coeffs: Sparse = {t: Fraction(c) for t, c in (coeffs or {}).items() if c}
        for t in self.coeffs:
            if len(t) != len(sig):
                raise SignatureError(f"tuple {t} does not match {sig}")

    @classmethod
    def basis_vector(cls, sig: SpaceSignature, t: BasisTuple) -> "SuperVector":
        return cls(sig, {tuple(t): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, SuperVector) and self.sig == other.sig and self.coeffs == other.coeffs

    def __add__(self, other: "SuperVector") -> "SuperVector":
        if self.sig != other.sig:
            raise SignatureError("signature mismatch")
        acc = dict(self.coeffs)
        for t, c in other.coeffs.items():
            _add_into(acc, t, c)
        return SuperVector(self.sig, acc)

    def scale(self, c) -> "SuperVector":
        return SuperVector(self.sig, {t: v * c for t, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> bool:
        return len({self.sig.parity(t) for t in self.coeffs}) <= 1

    def __repr__(self):
        return f"SuperVector({self.coeffs})"


class SuperOperator:
    """Lazy sparse linear map between graded tensor spaces."""

    def __init__(
        self,
        source: SpaceSignature,
        target: SpaceSignature,
        parity: int,
        fn: Callable[[BasisTuple], Dict[BasisTuple, Fraction]],
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.parity = parity % 2
        self._fn = fn
        self._cache: Dict[BasisTuple, Sparse] = {}
        self.name = name

    def image(self, t: BasisTuple) -> Sparse:
        t = tuple(t)
        got = self._cache.get(t)
        if got is None:
            got = {k: Fraction(v) for k, v in self._fn(t).items() if v}
            self._cache[t] = got
        return got

    def apply(self, v: SuperVector) -> SuperVector:
        if v.sig != self.source:
            raise SignatureError(f"cannot apply {self.name or 'operator'} on {v.sig}")
        acc: Sparse = {}
        for t, c in v.coeffs.items():
            for u, d in self.image(t).items():
                _add_into(acc, u, c * d)
        return SuperVector(self.target, acc)

    __call__ = apply

    def matrix(self, inputs: Optional[Iterable[BasisTuple]] = None) -> Dict[BasisTuple, Sparse]:
        inputs = self.source.basis() if inputs is None else inputs
        return {tuple(t): self.image(t) for t in inputs}

    def equals(self, other: "SuperOperator", inputs: Optional[Iterable[BasisTuple]] = None) -> Optional[BasisTuple]:
        """None if equal on all inputs (default: the whole basis), else a witness tuple."""
        if self.source != other.source or self.target != other.target:
            raise SignatureError("operators live on different spaces")
        for t in self.source.basis() if inputs is None else inputs:
            if self.image(t) != other.image(t):
                return tuple(t)
        return None

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        return op_add(self, other)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        return op_add(self, other.scale(-1))

    def scale(self, c) -> "SuperOperator":
        c = Fraction(c)
        return SuperOperator(self.source, self.target, self.parity,
                             lambda t: {u: c * v for u, v in self.image(t).items()}, self.name)

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        return op_compose(self, other)

    def __repr__(self):
        return f"SuperOperator({self.name}: {self.source} -> {self.target}, parity {self.parity})"


def identity_op(sig: SpaceSignature) -> SuperOperator:
    return SuperOperator(sig, sig, 0, lambda t: {t: Fraction(1)}, "id")


def zero_op(source: SpaceSignature, target: SpaceSignature, parity: int = 0) -> SuperOperator:
    return SuperOperator(source, target, parity, lambda t: {}, "0")


def op_compose(f: SuperOperator, g: SuperOperator) -> SuperOperator:
    """f o g."""
    if f.source != g.target:
        raise SignatureError(f"cannot compose: {f.source} != {g.target}")

    def fn(t):
        acc: Sparse = {}
        for u, c in g.image(t).items():
            for w, d in f.image(u).items():
                _add_into(acc, w, c * d)
        return acc

    return SuperOperator(g.source, f.target, f.parity + g.parity, fn, f"{f.name}.{g.name}")


def op_add(f: SuperOperator, g: SuperOperator) -> SuperOperator:
    if f.source != g.source or f.target != g.target:
        raise SignatureError("cannot add operators on different spaces")

    def fn(t):
        acc = dict(f.image(t))
        for u, c in g.image(t).items():
            _add_into(acc, u, c)
        return acc

    return SuperOperator(f.source, f.target, f.parity, fn, f"{f.name}+{g.name}")


def op_sum(ops: Sequence[SuperOperator], source: SpaceSignature, target: SpaceSignature) -> SuperOperator:
    ops = list(ops)

    def fn(t):
        acc: Sparse = {}
        for o in ops:
            for u, c in o.image(t).items():
                _add_into(acc, u, c)
        return acc

    parity = ops[0].parity if ops else 0
    return SuperOperator(source, target, parity, fn, "sum")


def apply_at(local: SuperOperator, position: int, sig: SpaceSignature) -> SuperOperator:
    """1^{(x)position} (x) local (x) 1^{(x)rest} with the Koszul sign."""
    j = len(local.source)
    if sig.slice(position, position + j) != local.source:
        raise SignatureError(f"{local.source} does not match factors {position}..{position + j - 1} of {sig}")
    target = sig.slice(0, position) + local.target + sig.slice(position + j, len(sig))
    prefix_sig = sig.slice(0, position)

    def fn(t):
        pre, mid, post = t[:position], t[position : position + j], t[position + j :]
        sign = -1 if local.parity and prefix_sig.parity(pre) else 1
        return {pre + u + post: sign * c for u, c in local.image(mid).items()}

    return SuperOperator(sig, target, local.parity, fn, f"{local.name}@{position}")


def op_tensor(f: SuperOperator, g: SuperOperator) -> SuperOperator:
    """f (x) g = (f (x) 1)(1 (x) g)."""
    left = apply_at(g, len(f.source), f.source + g.source)
    right = apply_at(f, 0, f.source + g.target)
    return op_compose(right, left)


# -------------------------------------------------------------- elimination

def _integer_row(row: Dict[Hashable, Fraction]) -> Dict[Hashable, int]:
    den = 1
    for v in row.values():
        den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
    out = {k: int(Fraction(v) * den) for k, v in row.items() if v}
    return _primitive(out)


def _primitive(row: Dict[Hashable, int]) -> Dict[Hashable, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _key(k):
    return (0, k) if isinstance(k, (int, Fraction)) else (1, repr(k))


def rank_rows(rows: Iterable[Dict[Hashable, Fraction]]) -> int:
    """Exact rank by fraction-free elimination (integer rows, content removed)."""
    pivots: Dict[Hashable, Dict[Hashable, int]] = {}
    for r in rows:
        row = _integer_row(r)
        while row:
            col = min(row, key=_key)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = row
                break
            a, b = prow[col], row[col]
            new: Dict[Hashable, int] = {}
            for k in set(row) | set(prow):
                v = a * row.get(k, 0) - b * prow.get(k, 0)
                if v:
                    new[k] = v
            row = _primitive(new)
    return len(pivots)


def rank(vectors: Sequence[SuperVector]) -> int:
    if not vectors:
        return 0
    sig = vectors[0].sig
    if any(v.sig != sig for v in vectors):
        raise SignatureError("vectors on different spaces")
    return rank_rows(v.coeffs for v in vectors)


def nullspace_rows(rows: Iterable[Dict[Hashable, Fraction]], columns: Sequence[Hashable]) -> List[Dict[Hashable, Fraction]]:
    """Basis of {x : row . x = 0 for every row}, in reduced echelon form over `columns`."""
    order = {c: i for i, c in enumerate(columns)}
    pivots: Dict[int, Dict[int, Fraction]] = {}
    for r in rows:
        row = {}
        for k, v in r.items():
            if v:
                if k not in order:
                    raise SignatureError(f"unknown column {k!r}")
                row[order[k]] = Fraction(v)
        # pivot rows never contain another pivot column, so one pass suffices
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if not f:
                continue
            for k, v in pivots[c].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            continue
        c = min(row)
        inv = 1 / row[c]
        row = {k: v * inv for k, v in row.items()}
        for prow in pivots.values():
            f = prow.get(c)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivots[c] = row
    free = [i for i in range(len(columns)) if i not in pivots]
    basis = []
    for fcol in free:
        vec = {columns[fcol]: Fraction(1)}
        for pc, prow in pivots.items():
            v = prow.get(fcol)
            if v:
                vec[columns[pc]] = -v
        basis.append(vec)
    return basis


def nullspace(rows: Sequence[SuperVector], columns: Optional[Sequence[BasisTuple]] = None) -> List[SuperVector]:
    """Solution basis of M x = 0, where each SuperVector is a row of M."""
    if not rows and columns is None:
        return []
    sig = rows[0].sig if rows else None
    if columns is None:
        columns = sorted({t for r in rows for t in r.coeffs}, key=_key)
        if sig is not None and all(f.labels is not None for f in sig.factors):
            columns = list(sig.basis())
    sols = nullspace_rows((r.coeffs for r in rows), list(columns))
    if sig is None:
        raise SignatureError("cannot infer signature of an empty system")
    return [SuperVector(sig, s) for s in sols]
