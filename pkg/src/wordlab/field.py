"""Finite fields F_{p^f} with elements encoded as integers.

An element with coefficient vector (c_0, ..., c_{f-1}) over F_p (low-to-high,
as a polynomial in the generator ``t``) is stored as the integer
sum(c_i * p**i).  That integer order is the total order used for tie-breaking
everywhere else in the package.

Scalar operations go through polynomial arithmetic modulo the defining
polynomial.  The ``*_arr`` operations act on numpy arrays and use discrete
log/antilog tables; the two routes are cross-checked in the test-suite.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property

import numpy as np

from .errors import DegreeOutOfRange, DivisionByZero, NotPrime, ParseError, SizeBudgetExceeded

MAX_FIELD_SIZE = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, f) with q = p**f, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            f = 0
            while q % p == 0:
                q //= p
                f += 1
            return (p, f) if q == 1 else None
    return None


# -- polynomials over F_p, coefficient lists low-to-high ---------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim([x % p for x in a[:dm]])


def _monic_polys(p: int, deg: int):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    f = len(poly) - 1
    if f == 1:
        return True
    if poly[0] % p == 0:
        return False
    for deg in range(1, f // 2 + 1):
        for cand in _monic_polys(p, deg):
            if not _poly_mod(poly, cand, p):
                return False
    return True


def least_irreducible(p: int, f: int) -> list[int]:
    """Least monic irreducible of degree f, comparing (c_0, c_1, ...) lexicographically."""
    if f == 1:
        return [0, 1]
    for cand in _monic_polys(p, f):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class PrimePowerField:
    """The field F_q, q = p**f, under a fixed deterministic modulus."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise NotPrime(p)
        if f < 1:
            raise DegreeOutOfRange(f)
        if p**f > MAX_FIELD_SIZE:
            raise SizeBudgetExceeded(f"field of size {p}^{f} exceeds {MAX_FIELD_SIZE}")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = tuple(least_irreducible(p, f))

    def __repr__(self) -> str:
        return f"PrimePowerField({self.p}, {self.f})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimePowerField) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self) -> int:
        return hash((self.p, self.f))

    def __reduce__(self):
        return (make_field, (self.p, self.f))

    @property
    def spec(self) -> str:
        return f"F{self.p}" if self.f == 1 else f"F{self.p}^{self.f}"

    # -- encoding ------------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def elements(self) -> range:
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    @property
    def gen(self) -> int:
        """The class of t (equal to 0 in a prime field with modulus x)."""
        return self.p if self.f > 1 else 0

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.element([x + y for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        return self.element([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.element(_poly_mod(prod, list(self.modulus), self.p))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int, e: int = 1) -> int:
        """The p-power map applied e times."""
        for _ in range(e % self.f if self.f > 1 else 0):
            a = self.pow(a, self.p)
        return a

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    # -- table-driven vectorised arithmetic ----------------------------------

    @cached_property
    def primitive(self) -> int:
        if self.q == 2:
            return 1
        factors = prime_factors(self.q - 1)
        for g in range(2, self.q):
            if all(self.pow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        exp = np.zeros(self.q - 1, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        g = self.primitive
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g)
        return exp, log

    def _digits(self, a: np.ndarray) -> list[np.ndarray]:
        out = []
        for _ in range(self.f):
            a, r = np.divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, digits: list[np.ndarray]) -> np.ndarray:
        out = np.zeros_like(digits[0])
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def add_arr(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.f == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.f == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def sub_arr(self, a, b) -> np.ndarray:
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.f == 1:
            return a * b % self.p
        exp, log = self._tables
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_arr(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        exp, log = self._tables
        if n == 0:
            return np.ones_like(a)
        if np.any(a == 0) and n < 0:
            raise DivisionByZero("inverse of zero")
        out = exp[(log[a] * n) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def inv_arr(self, a) -> np.ndarray:
        return self.pow_arr(a, -1)

    def frobenius_arr(self, a, e: int = 1) -> np.ndarray:
        return self.pow_arr(a, self.p ** (e % self.f)) if self.f > 1 else np.asarray(a, dtype=np.int64)


_FIELD_CACHE: dict[tuple[int, int], PrimePowerField] = {}


def make_field(p: int, f: int = 1) -> PrimePowerField:
    """Return F_{p^f} with the lexicographically least irreducible modulus.

    Fields are immutable, so instances are cached per (p, f).
    """
    key = (p, f)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = PrimePowerField(p, f)
    return _FIELD_CACHE[key]


def field_for_order(q: int) -> PrimePowerField:
    pf = prime_power(q)
    if pf is None:
        raise NotPrime(q)
    return make_field(*pf)


_FIELD_SPEC = re.compile(r"^F(\d+)(?:\^(\d+))?$")


def parse_field(text: str) -> PrimePowerField:
    """Parse "Fp^f" (e.g. "F2^3", "F7")."""
    m = _FIELD_SPEC.match(text.strip())
    if not m:
        raise ParseError(f"bad field spec {text!r}")
    return make_field(int(m.group(1)), int(m.group(2) or 1))
