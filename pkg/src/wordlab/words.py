"""Words in the free group F_d and (automorphic) word maps on finite groups."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainMismatch, EmptyWord, ParseError
from .groups import Automorphism, Extension, Group

Letter = tuple[int, int]


def reduce_word(letters) -> tuple[Letter, ...]:
    """Free reduction by cancelling adjacent inverse pairs (stack based)."""
    out: list[Letter] = []
    for n, e in letters:
        if out and out[-1] == (n, -e):
            out.pop()
        else:
            out.append((n, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A reduced non-trivial word x_{n_1}^{e_1} ... x_{n_l}^{e_l}, variables 1-based."""

    letters: tuple[Letter, ...]
    d: int

    def __post_init__(self):
        if not self.letters:
            raise EmptyWord("the trivial word is not allowed")
        for (n, e), nxt in zip(self.letters, self.letters[1:] + (None,)):
            if e not in (1, -1) or not 1 <= n <= self.d:
                raise ParseError(f"bad letter {(n, e)} for d={self.d}")
            if nxt is not None and nxt == (n, -e):
                raise ParseError("word is not reduced")

    @classmethod
    def from_letters(cls, letters, d: int | None = None) -> "Word":
        letters = reduce_word((int(n), int(e)) for n, e in letters)
        if not letters:
            raise EmptyWord("word reduces to the identity")
        return cls(letters, d or max(n for n, _ in letters))

    @property
    def l(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(f"x{n}" + ("^-1" if e < 0 else "") for n, e in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((n, -e) for n, e in reversed(self.letters)), self.d)


_TOKEN = re.compile(r"x(\d+)(?:\^\(?(-?\d+)\)?)?")


def parse_word(text: str) -> Word:
    """Parse e.g. ``"x1 x2 x1^-1 x2^-1"`` or ``"d=3 x1^2"``."""
    body = text.strip()
    d = None
    m = re.match(r"d\s*=\s*(\d+)[\s;,:]*", body)
    if m:
        d = int(m.group(1))
        body = body[m.end():]
    letters: list[Letter] = []
    pos = 0
    body = body.replace("*", " ")
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        tok = _TOKEN.match(body, pos)
        if not tok:
            raise ParseError(f"cannot parse word {text!r} at {body[pos:]!r}")
        n = int(tok.group(1))
        if n < 1:
            raise ParseError("variables are numbered from 1")
        exp = int(tok.group(2)) if tok.group(2) is not None else 1
        letters.extend([(n, 1 if exp > 0 else -1)] * abs(exp))
        pos = tok.end()
    reduced = reduce_word(letters)
    if not reduced:
        raise EmptyWord(f"{text!r} reduces to the trivial word")
    top = max(n for n, _ in reduced)
    if d is not None and d < top:
        raise ParseError(f"declared d={d} but x{top} is used")
    return Word(reduced, d or top)


def _check_tuple(w_d: int, tup, order: int) -> list[np.ndarray]:
    if len(tup) != w_d:
        raise DomainMismatch(f"expected {w_d} arguments, got {len(tup)}")
    arrays = [np.asarray(t, dtype=np.int64) for t in tup]
    for a in arrays:
        if a.size and (a.min() < 0 or a.max() >= order):
            raise DomainMismatch("argument outside the group")
    return arrays


def evaluate_arrays(w: Word, G: Group, arrays) -> np.ndarray:
    """Vectorised word map: ``arrays[i]`` holds values of x_{i+1}."""
    inverses = {}
    out = None
    for n, e in w.letters:
        x = arrays[n - 1]
        if e < 0:
            if n not in inverses:
                inverses[n] = np.asarray(G.inv(x))
            x = inverses[n]
        out = x if out is None else np.asarray(G.mul(out, x))
    return np.asarray(out)


def evaluate(w: Word, G: Group, tup):
    """Left-to-right product of t_{n_i}^{e_i}."""
    arrays = _check_tuple(w.d, tup, G.order)
    out = evaluate_arrays(w, G, arrays)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class AutomorphicWordMap:
    """(t_1..t_d) -> alpha_1(t_{n_1})^{e_1} ... alpha_l(t_{n_l})^{e_l} on T^d."""

    word: Word
    automorphisms: tuple[Automorphism, ...]

    def __post_init__(self):
        if len(self.automorphisms) != self.word.l:
            raise DomainMismatch("need one automorphism per letter")

    @property
    def T(self) -> Group:
        return self.automorphisms[0].ext.T

    @cached_property
    def _letter_maps(self) -> list[np.ndarray]:
        T = self.T
        maps = []
        for (n, e), alpha in zip(self.word.letters, self.automorphisms):
            m = alpha.table
            maps.append(m if e > 0 else np.asarray(T.inv(m)))
        return maps

    def evaluate_arrays(self, arrays) -> np.ndarray:
        T = self.T
        out = None
        for (n, _), m in zip(self.word.letters, self._letter_maps):
            x = m[arrays[n - 1]]
            out = x if out is None else np.asarray(T.mul(out, x))
        return out

    def evaluate(self, tup):
        arrays = _check_tuple(self.word.d, tup, self.T.order)
        out = np.asarray(self.evaluate_arrays(arrays))
        return int(out) if out.ndim == 0 else out


def evaluate_automorphic(phi: AutomorphicWordMap, tup):
    return phi.evaluate(tup)


@dataclass(frozen=True, eq=False)
class CosetRewrite:
    """w(t_1 g_1, ..., t_d g_d) = phi(t_1..t_d) * base for all t in T^d."""

    base: int
    phi: AutomorphicWordMap
    prefixes: tuple[int, ...]

    def left_normalized(self) -> AutomorphicWordMap:
        """The map t -> w(g)^-1 w(tg) = base^-1 phi(t) base, as an automorphic word map."""
        ext = self.phi.automorphisms[0].ext
        A = ext.A
        binv = A.inv(self.base)
        autos = tuple(Automorphism.inner(ext, A.mul(binv, p)) for p in self.prefixes)
        return AutomorphicWordMap(self.phi.word, autos)


def coset_rewrite(w: Word, ext: Extension, cosets) -> CosetRewrite:
    """Rewrite w on the cosets T g_1 x ... x T g_d as an automorphic word map.

    A running prefix P (an element of the overgroup) is pushed through the
    word: for e = +1 the letter's automorphism is conjugation by P and then
    P <- P g_n; for e = -1 first P <- P g_n^-1 and then conjugation by P.
    The final prefix is w(g_1..g_d).
    """
    A = ext.A
    if len(cosets) != w.d:
        raise DomainMismatch(f"expected {w.d} coset representatives")
    cosets = [int(g) for g in cosets]
    if any(not 0 <= g < A.order for g in cosets):
        raise DomainMismatch("coset representative outside the overgroup")
    P = 0
    prefixes = []
    for n, e in w.letters:
        g = cosets[n - 1]
        if e > 0:
            prefixes.append(P)
            P = A.mul(P, g)
        else:
            P = A.mul(P, A.inv(g))
            prefixes.append(P)
    autos = tuple(Automorphism.inner(ext, p) for p in prefixes)
    return CosetRewrite(P, AutomorphicWordMap(w, autos), tuple(prefixes))


def gap_rebase(js, m: int) -> tuple[int, ...]:
    """Shift exponents j_i by a common amount mod m so all land in [0, m - ceil(m/l)].

    Sort the residues, close them up cyclically with +m, find the first
    largest gap (at least m/l by pigeonhole) and rebase at the residue just
    after it.
    """
    if m < 1 or not js:
        raise ValueError("need m >= 1 and at least one exponent")
    l = len(js)
    residues = [j % m for j in js]
    s = sorted(residues)
    ext = s + [s[0] + m]
    gaps = [ext[r + 1] - ext[r] for r in range(l)]
    r = gaps.index(max(gaps))
    shift = ext[r + 1]
    out = tuple((x - shift) % m for x in residues)
    assert max(out) <= m - math.ceil(m / l)
    return out
