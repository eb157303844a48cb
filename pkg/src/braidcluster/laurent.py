"""
Sparse multivariate Laurent polynomials with integer coefficients.

>>> t1, t4 = var("t1"), var("t4")
>>> x = t1 * t4 + 1
>>> str(x)
't1*t4 + 1'
>>> (x * (t1 - 2)).exact_divide(t1 - 2) == x
True
>>> str(t4 ** -2)
't4^-2'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[str, int], ...]


class InexactDivision(ArithmeticError):
    """The divisor does not divide the dividend in the Laurent ring."""


def var_key(name: str) -> tuple[str, int, str]:
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)(.*)", name)
    if not m:
        return (name, 0, "")
    return (m.group(1), int(m.group(2) or 0), m.group(3))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda p: var_key(p[0])))


def _mono_pow(a: Monomial, k: int) -> Monomial:
    return tuple((v, e * k) for v, e in a) if k else ()


def _mono_str(a: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in a)


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """Integer-coefficient Laurent polynomial stored as {monomial: coefficient}."""

    terms: Mapping[Monomial, int]

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: c for k, c in self.terms.items() if c})

    # construction ---------------------------------------------------------
    @staticmethod
    def const(c: int) -> "LaurentPolynomial":
        return LaurentPolynomial({(): c})

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Mapping[str, int], int]]) -> "LaurentPolynomial":
        out: dict[Monomial, int] = {}
        for exps, c in pairs:
            mono = tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda p: var_key(p[0])))
            out[mono] = out.get(mono, 0) + c
        return LaurentPolynomial(out)

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_polynomial(self) -> bool:
        return all(e >= 0 for mono in self.terms for _, e in mono)

    def variables(self) -> list[str]:
        return sorted({v for mono in self.terms for v, _ in mono}, key=var_key)

    def constant(self) -> int:
        return self.terms.get((), 0)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "Poly") -> "LaurentPolynomial":
        other = lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "LaurentPolynomial":
        return self + (-lift(other))

    def __rsub__(self, other: "Poly") -> "LaurentPolynomial":
        return lift(other) - self

    def __mul__(self, other: "Poly") -> "LaurentPolynomial":
        other = lift(other)
        out: dict[Monomial, int] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = _mono_mul(ka, kb)
                out[k] = out.get(k, 0) + ca * cb
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if not self.is_monomial():
                raise InexactDivision(f"cannot invert non-monomial {self}")
            (mono, c), = self.terms.items()
            if abs(c) != 1:
                raise InexactDivision(f"cannot invert coefficient {c}")
            return LaurentPolynomial({_mono_pow(mono, k): c ** (-k)})
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.const(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # exact division ---------------------------------------------------------
    def exact_divide(self, other: "Poly") -> "LaurentPolynomial":
        """Return q with q * other == self, or raise InexactDivision.

        >>> (var("a") ** 2 - 1).exact_divide(var("a") + 1) == var("a") - 1
        True
        >>> (var("a") + 2).exact_divide(var("a") + 1)
        Traceback (most recent call last):
        ...
        braidcluster.laurent.InexactDivision: a + 1 does not divide a + 2
        """
        other = lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return ZERO
        if other.is_monomial():
            (mono, c), = other.terms.items()
            out = {}
            for k, a in self.terms.items():
                if a % c:
                    raise InexactDivision(f"{other} does not divide {self}")
                out[_mono_mul(k, _mono_pow(mono, -1))] = a // c
            return LaurentPolynomial(out)
        names = sorted(set(self.variables()) | set(other.variables()), key=var_key)
        dense = lambda mono: tuple(dict(mono).get(v, 0) for v in names)
        a = {dense(k): c for k, c in self.terms.items()}
        b = {dense(k): c for k, c in other.terms.items()}
        # per-variable exponent box the quotient must live in
        lo = [min(e[i] for e in a) - min(e[i] for e in b) for i in range(len(names))]
        hi = [max(e[i] for e in a) - max(e[i] for e in b) for i in range(len(names))]
        lead_b = max(b)
        cb = b[lead_b]
        quot: dict[tuple[int, ...], int] = {}
        rem = dict(a)
        while rem:
            lead = max(rem)
            c = rem[lead]
            e = tuple(x - y for x, y in zip(lead, lead_b))
            if c % cb or any(not (l <= x <= h) for x, l, h in zip(e, lo, hi)):
                raise InexactDivision(f"{other} does not divide {self}")
            qc = c // cb
            quot[e] = qc
            for kb, vb in b.items():
                k = tuple(x + y for x, y in zip(e, kb))
                nv = rem.get(k, 0) - qc * vb
                if nv:
                    rem[k] = nv
                else:
                    rem.pop(k, None)
        return LaurentPolynomial({tuple((v, x) for v, x in zip(names, e) if x): c
                                  for e, c in quot.items()})

    # evaluation -------------------------------------------------------------
    def evaluate(self, values: Mapping[str, Union[int, Fraction]]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in mono:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def evaluate_mod(self, values: Mapping[str, int], p: int) -> int:
        total = 0
        for mono, c in self.terms.items():
            term = c % p
            for v, e in mono:
                term = term * pow(values[v] % p, e, p) % p
            total = (total + term) % p
        return total

    def substitute(self, mapping: Mapping[str, "LaurentPolynomial"]) -> "LaurentPolynomial":
        """Replace variables by Laurent polynomials (negative powers need monomials)."""
        total = ZERO
        for mono, c in self.terms.items():
            term = LaurentPolynomial.const(c)
            for v, e in mono:
                base = mapping.get(v, var(v))
                term = term * (base ** e)
            total = total + term
        return total

    # presentation -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        names = self.variables()
        dense = lambda mono: tuple(dict(mono).get(v, 0) for v in names)
        return sorted(self.terms.items(), key=lambda kv: dense(kv[0]), reverse=True)

    def normalized(self) -> "LaurentPolynomial":
        """Scale by -1 if needed so the lex-smallest term has positive coefficient.

        >>> str((var("t2") * var("t4") - 1).normalized())
        '-t2*t4 + 1'
        """
        if self.is_zero():
            return self
        return -self if self.sorted_terms()[-1][1] < 0 else self

    def to_json(self) -> list[list]:
        return [[dict(mono), c] for mono, c in self.sorted_terms()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            body = _mono_str(mono)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"


Poly = Union[LaurentPolynomial, int]


def lift(x: Poly) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


def var(name: str) -> LaurentPolynomial:
    return LaurentPolynomial({((name, 1),): 1})


ZERO = LaurentPolynomial({})
ONE = LaurentPolynomial({(): 1})


def parse_polynomial(text: str) -> LaurentPolynomial:
    """Parse sums of products like "t1*t4 + 1" or "t2*t4*t5 - 1".

    >>> str(parse_polynomial("t2*t4*t5 - 1"))
    't2*t4*t5 - 1'
    """
    total = ZERO
    text = text.replace(" ", "").replace("-", "+-")
    for chunk in filter(None, text.split("+")):
        sign = -1 if chunk.startswith("-") else 1
        chunk = chunk.lstrip("-")
        term = LaurentPolynomial.const(sign)
        for factor in chunk.split("*"):
            if factor.isdigit():
                term = term * int(factor)
            elif "^" in factor:
                name, e = factor.split("^")
                term = term * var(name) ** int(e)
            else:
                term = term * var(factor)
        total = total + term
    return total
