"""Sparse multivariate polynomials over F_q and a small text parser."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatch, ParseError
from .field import PrimePowerField

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class MultivariatePolynomial:
    """Terms are (exponent vector, nonzero coefficient), sorted by descending graded-lex order."""

    field: PrimePowerField
    nvars: int
    terms: tuple[tuple[Monomial, int], ...]

    @classmethod
    def from_dict(cls, field: PrimePowerField, nvars: int, coeffs: dict) -> "MultivariatePolynomial":
        terms = []
        for exps, c in coeffs.items():
            exps = tuple(exps) + (0,) * (nvars - len(exps))
            if len(exps) != nvars:
                raise DomainMismatch(f"monomial {exps} has more than {nvars} variables")
            if c:
                terms.append((exps, int(c)))
        terms.sort(key=lambda tc: (sum(tc[0]), tc[0]), reverse=True)
        return cls(field, nvars, tuple(terms))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def over(self, field: PrimePowerField) -> "MultivariatePolynomial":
        """Reinterpret prime-field coefficients in an extension of the same characteristic."""
        if field.p != self.field.p or (self.field.f != 1 and field != self.field):
            raise DomainMismatch(f"cannot move coefficients from {self.field.spec} to {field.spec}")
        return MultivariatePolynomial(field, self.nvars, self.terms)

    def evaluate(self, point) -> int:
        F = self.field
        total = 0
        for exps, c in self.terms:
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = F.mul(term, F.pow(x, e))
            total = F.add(total, term)
        return total

    def evaluate_arrays(self, coords: list[np.ndarray], cache: dict | None = None) -> np.ndarray:
        """Vectorised evaluation; ``cache`` holds per-exponent power tables of all field elements."""
        F = self.field
        if cache is None:
            cache = {}
        every = np.arange(F.q, dtype=np.int64)
        shape = coords[0].shape if coords else ()
        total = np.zeros(shape, dtype=np.int64)
        for exps, c in self.terms:
            term = np.full(shape, c, dtype=np.int64)
            for v, e in enumerate(exps):
                if e:
                    if e not in cache:
                        cache[e] = F.pow_arr(every, e)
                    term = F.mul_arr(term, cache[e][coords[v]])
            total = F.add_arr(total, term)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            parts.append(mono if c == 1 and mono else (f"{c}*{mono}" if mono else str(c)))
        return " + ".join(parts)


# -- parser -------------------------------------------------------------------

_TOKENS = re.compile(r"\s*(?:(\d+)|(x\d+(?:_\d+)?)|(t)|([-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        num, var, gen, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif var is not None:
            out.append(("var", var))
        elif gen is not None:
            out.append(("gen", gen))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    """Recursive descent over sparse dicts {monomial (sorted (var, exp) pairs): coeff}."""

    def __init__(self, field: PrimePowerField, tokens, block: int | None):
        self.F = field
        self.tokens = tokens
        self.i = 0
        self.block = block
        self.nvars = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            out[m] = self.F.add(out.get(m, 0), c)
        return {m: c for m, c in out.items() if c}

    def mul(self, a, b):
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                exps = dict(ma)
                for v, e in mb:
                    exps[v] = exps.get(v, 0) + e
                m = tuple(sorted(exps.items()))
                out[m] = self.F.add(out.get(m, 0), self.F.mul(ca, cb))
        return {m: c for m, c in out.items() if c}

    def neg(self, a):
        return {m: self.F.neg(c) for m, c in a.items()}

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        value = self.term()
        if sign < 0:
            value = self.neg(value)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = self.add(value, rhs if op == "+" else self.neg(rhs))
        return value

    def term(self):
        value = self.power()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                value = self.mul(value, self.power())
            elif tok[0] in ("num", "var", "gen") or tok == ("op", "("):
                value = self.mul(value, self.power())
            else:
                return value

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, text = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            out = {(): 1}
            for _ in range(int(text)):
                out = self.mul(out, base)
            return out
        return base

    def atom(self):
        kind, text = self.take()
        if kind == "num":
            c = self.F.from_int(int(text))
            return {(): c} if c else {}
        if kind == "gen":
            if self.F.f == 1:
                raise ParseError("t is only defined in extension fields")
            return {(): self.F.gen}
        if kind == "var":
            v = self._var_index(text)
            self.nvars = max(self.nvars, v + 1)
            return {((v, 1),): 1}
        if (kind, text) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
            return value
        raise ParseError(f"unexpected token {text!r}")

    def _var_index(self, text: str) -> int:
        body = text[1:]
        if "_" in body:
            i, j = (int(x) for x in body.split("_"))
            if self.block is None or not 1 <= j <= self.block or i < 1:
                raise ParseError(f"block variable {text} needs 1 <= j <= block size")
            return (i - 1) * self.block + (j - 1)
        i = int(body)
        if i < 1:
            raise ParseError("variables are numbered from 1")
        return i - 1


def parse_polynomial(text: str, field: PrimePowerField, nvars: int | None = None,
                     block: int | None = None) -> MultivariatePolynomial:
    """Parse e.g. ``"x1^2*x2 + 2*x1 + 1"`` or ``"(t+1)*x1"``.

    ``x<i>_<j>`` names coordinate j of block i when ``block`` (the block
    length) is given; it maps to the flat variable (i-1)*block + j.
    """
    parser = _Parser(field, _tokenize(text), block)
    if not parser.tokens:
        raise ParseError("empty polynomial")
    coeffs = parser.expr()
    if parser.i != len(parser.tokens):
        raise ParseError(f"trailing input in {text!r}")
    n = nvars if nvars is not None else parser.nvars
    if parser.nvars > n:
        raise ParseError(f"polynomial uses {parser.nvars} variables, only {n} allowed")
    dense = {}
    for m, c in coeffs.items():
        exps = [0] * n
        for v, e in m:
            exps[v] = e
        dense[tuple(exps)] = c
    return MultivariatePolynomial.from_dict(field, n, dense)
