"""Univariate polynomials in hbar with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


class HbarPoly:
    """Immutable polynomial c0 + c1*h + c2*h^2 + ... over the rationals.

    Coefficients are stored low degree first with trailing zeros stripped,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> "HbarPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: Scalar, power: int) -> "HbarPoly":
        if power < 0:
            raise ValueError("negative power of hbar")
        return cls([0] * power + [c])

    @classmethod
    def coerce(cls, x) -> "HbarPoly":
        if isinstance(x, HbarPoly):
            return x
        return cls.const(x)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def terms(self):
        """Yield (power, coefficient) for the non-zero coefficients."""
        for p, c in enumerate(self.coeffs):
            if c:
                yield p, c

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HbarPoly.const(other)
        if not isinstance(other, HbarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __add__(self, other):
        other = HbarPoly.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return HbarPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return HbarPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-HbarPoly.coerce(other))

    def __rsub__(self, other):
        return HbarPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HbarPoly(c * other for c in self.coeffs)
        other = HbarPoly.coerce(other)
        if not self.coeffs or not other.coeffs:
            return HbarPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return HbarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = HbarPoly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, t: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __repr__(self):
        return f"HbarPoly({self.to_string()!r})"

    def to_string(self) -> str:
        """Render as e.g. '3/2*h^2-1'; highest power first, '0' for zero."""
        if not self.coeffs:
            return "0"
        parts = []
        for p in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[p]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if p == 0:
                body = str(mag)
            else:
                hp = "h" if p == 1 else f"h^{p}"
                body = hp if mag == 1 else f"{mag}*{hp}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    __str__ = to_string


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(h(?:\^(\d+))?)?")


def parse_hbar(text: str) -> HbarPoly:
    """Parse the string form produced by HbarPoly.to_string (also plain rationals)."""
    s = text.replace(" ", "").replace("ħ", "h")
    if not s:
        raise ValueError("empty coefficient")
    pos = 0
    acc = HbarPoly()
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse coefficient {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) is not None else Fraction(1)
        power = 0
        if m.group(3) is not None:
            power = int(m.group(4)) if m.group(4) is not None else 1
        acc = acc + HbarPoly.monomial(sign * c, power)
        pos = m.end()
    return acc


ZERO = HbarPoly()
ONE = HbarPoly.const(1)
H = HbarPoly.monomial(1, 1)
