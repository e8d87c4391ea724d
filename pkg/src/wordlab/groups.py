"""Concrete finite groups with canonical integer element encodings.

Every group exposes elements as integers in ``range(order)`` with the identity
at index 0.  ``mul``/``inv`` accept Python ints or numpy integer arrays and
broadcast.  Groups of order <= TABLE_LIMIT carry a full multiplication table
and use it; larger groups multiply on the fly.  Both paths go through the same
``_mul`` arithmetic, so they agree by construction (and are tested to).

Permutations act on the right and are multiplied left to right:
``(x*y)[i] == y[x[i]]``.  With that product, the coordinate action
``(sigma . b)_j = b_{sigma(j)}`` used by the wreath product is a left action,
which is what makes ``(a, s)(b, r) = (a * s.b, s*r)`` associative.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DomainMismatch,
    NonsubgroupSpec,
    NotNormal,
    NotPrime,
    NotPrimePower,
    OrderBudgetExceeded,
    ParseError,
    UnsupportedKind,
)
from .field import PrimePowerField, field_for_order

TABLE_LIMIT = 5000
ENUMERATED_LIMIT = 5000
ARITHMETIC_LIMIT = 10**7


def _as_scalar(out: np.ndarray):
    return int(out) if out.ndim == 0 else out


class Group:
    """Base class: subclasses implement vectorised ``_mul`` and ``_inv``."""

    kind: str = "abstract"

    def __init__(self, order: int, spec: str, use_table: bool | None = None):
        self.order = order
        self.spec = spec
        self.table: np.ndarray | None = None
        self._inverse: np.ndarray | None = None
        if use_table is None:
            use_table = order <= TABLE_LIMIT
        if use_table:
            self._build_table()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec} order={self.order}>"

    def __len__(self) -> int:
        return self.order

    identity = 0

    def _build_table(self) -> None:
        n = self.order
        dtype = np.int16 if n < 2**15 else np.int32
        table = np.empty((n, n), dtype=dtype)
        every = np.arange(n, dtype=np.int64)
        step = max(1, 2**20 // n)
        for start in range(0, n, step):
            rows = np.arange(start, min(n, start + step), dtype=np.int64)
            a = np.repeat(rows, n)
            b = np.tile(every, len(rows))
            table[start:start + len(rows)] = self._mul(a, b).reshape(len(rows), n)
        self.table = table
        self._inverse = self._inv(every).astype(np.int64)

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inv(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return _as_scalar(self.table[a, b].astype(np.int64))
        a, b = np.broadcast_arrays(a, b)
        out = self._mul(a.ravel(), b.ravel()).reshape(a.shape)
        return _as_scalar(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self._inverse is not None:
            return _as_scalar(self._inverse[a])
        return _as_scalar(self._inv(a.ravel()).reshape(a.shape))

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = 0
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def conj(self, h, t):
        """h t h^-1."""
        return self.mul(self.mul(h, t), self.inv(h))

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def label(self, i: int) -> str:
        return str(i)

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def with_arithmetic(self) -> "Group":
        """A table-free copy sharing the same encoding (used to test both paths)."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.table = None
        clone._inverse = None
        return clone


# -- small arithmetic groups -------------------------------------------------


class CyclicGroup(Group):
    kind = "cyclic"

    def __init__(self, n: int, use_table: bool | None = None):
        if n < 1:
            raise ParseError("cyclic order must be positive")
        if n > ARITHMETIC_LIMIT:
            raise OrderBudgetExceeded(n)
        self.n = n
        super().__init__(n, f"cyclic:{n}", use_table)

    def _mul(self, a, b):
        return (a + b) % self.n

    def _inv(self, a):
        return (-a) % self.n


class DihedralGroup(Group):
    """D_n of order 2n; index i + n*j encodes r^i s^j."""

    kind = "dihedral"

    def __init__(self, n: int, use_table: bool | None = None):
        if n < 1:
            raise ParseError("dihedral degree must be positive")
        if 2 * n > ARITHMETIC_LIMIT:
            raise OrderBudgetExceeded(2 * n)
        self.n = n
        super().__init__(2 * n, f"dihedral:{n}", use_table)

    def _mul(self, a, b):
        n = self.n
        i, j = a % n, a // n
        k, l = b % n, b // n
        sign = 1 - 2 * j
        return (i + sign * k) % n + n * ((j + l) % 2)

    def _inv(self, a):
        n = self.n
        i, j = a % n, a // n
        return np.where(j == 0, (-i) % n, a)

    def label(self, i: int) -> str:
        r, s = i % self.n, i // self.n
        return f"r^{r}" + (" s" if s else "")

    @property
    def rotations(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64)


# -- groups given by an explicit list of canonical representatives -----------


class EnumeratedGroup(Group):
    """Elements are rows of ``self.rows``; subclasses define the row product."""

    def _setup_rows(self, rows: np.ndarray, identity_row) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        keys = self._key(rows)
        order = np.argsort(keys, kind="stable")
        rows, keys = rows[order], keys[order]
        if np.any(keys[1:] == keys[:-1]):
            raise AssertionError("duplicate canonical representatives")
        id_key = self._key(np.asarray([identity_row], dtype=np.int64))[0]
        pos = int(np.searchsorted(keys, id_key))
        if pos >= len(keys) or keys[pos] != id_key:
            raise AssertionError("identity not among the elements")
        perm = np.concatenate([[pos], np.arange(pos), np.arange(pos + 1, len(keys))])
        self.rows = rows[perm]
        self._sorted_keys = keys
        to_index = np.empty(len(keys), dtype=np.int64)
        to_index[perm] = np.arange(len(keys))
        self._sorted_to_index = to_index

    def index_of_rows(self, rows: np.ndarray) -> np.ndarray:
        keys = self._key(self._canon(np.asarray(rows, dtype=np.int64)))
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if not np.array_equal(self._sorted_keys[pos], keys):
            raise DomainMismatch(f"row(s) not in {self.spec}")
        return self._sorted_to_index[pos]

    def index_of(self, row) -> int:
        return int(self.index_of_rows(np.asarray([row]))[0])

    def _canon(self, rows: np.ndarray) -> np.ndarray:
        return rows

    def _key(self, rows: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _compose(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _invert(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _mul(self, a, b):
        return self.index_of_rows(self._compose(self.rows[a], self.rows[b]))

    def _inv(self, a):
        return self.index_of_rows(self._invert(self.rows[a]))


def _cycle_string(img) -> str:
    seen, cycles = set(), []
    for start in range(len(img)):
        if start in seen or img[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = int(img[x])
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


class PermutationGroup(EnumeratedGroup):
    """A subgroup of S_n stored as image tuples (0-based), identity first."""

    kind = "permutation"

    def __init__(self, degree: int, perms, spec: str, kind: str | None = None,
                 use_table: bool | None = None):
        self.degree = degree
        if kind:
            self.kind = kind
        perms = np.asarray(list(perms), dtype=np.int64).reshape(-1, degree)
        if len(perms) > ENUMERATED_LIMIT:
            raise OrderBudgetExceeded(len(perms))
        self._setup_rows(perms, list(range(degree)))
        super().__init__(len(perms), spec, use_table)

    @classmethod
    def generated(cls, degree: int, gens, spec: str | None = None) -> "PermutationGroup":
        ident = tuple(range(degree))
        gens = [tuple(g) for g in gens]
        for g in gens:
            if sorted(g) != list(ident):
                raise NonsubgroupSpec(f"{g} is not a permutation of {degree} points")
        found = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(g[x[i]] for i in range(degree))
                    if y not in found:
                        if len(found) >= ENUMERATED_LIMIT:
                            raise OrderBudgetExceeded(f"permutation group exceeds {ENUMERATED_LIMIT}")
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        if spec is None:
            spec = ",".join(_cycle_string(g) for g in gens) or "()"
        return cls(degree, sorted(found), spec)

    def _key(self, rows):
        key = np.zeros(len(rows), dtype=np.int64)
        for i in range(self.degree):
            key = key * self.degree + rows[:, i]
        return key

    def _compose(self, x, y):
        return np.take_along_axis(y, x, axis=1)

    def _invert(self, x):
        return np.argsort(x, axis=1)

    def image(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.rows[i])

    def label(self, i: int) -> str:
        return _cycle_string(self.rows[i])

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(set(self.rows[:, 0].tolist())) == self.degree


def symmetric_group(n: int, use_table: bool | None = None) -> PermutationGroup:
    if math.factorial(n) > ENUMERATED_LIMIT:
        raise OrderBudgetExceeded(math.factorial(n))
    return PermutationGroup(n, itertools.permutations(range(n)), f"sym:{n}", "symmetric", use_table)


def _is_even(p) -> bool:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inversions % 2 == 0


def alternating_group(n: int, use_table: bool | None = None) -> PermutationGroup:
    if math.factorial(n) // 2 > ENUMERATED_LIMIT:
        raise OrderBudgetExceeded(math.factorial(n) // 2)
    perms = [p for p in itertools.permutations(range(n)) if _is_even(p)]
    return PermutationGroup(n, perms, f"alt:{n}", "alternating", use_table)


def parse_permutation(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Cycle notation, 1-based, e.g. "(1 2)(3 4)"; the empty string is the identity."""
    text = text.strip()
    cycles = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise ParseError(f"bad cycle notation {text!r}")
    pts = [[int(x) for x in re.split(r"[\s,]+", c.strip()) if x] for c in cycles]
    top = max([max(c) for c in pts if c] + [degree or 0, 1])
    if degree is not None and top > degree:
        raise ParseError(f"point {top} exceeds degree {degree}")
    img = list(range(top))
    used = set()
    for c in pts:
        if any(x < 1 for x in c) or len(set(c)) != len(c) or used & set(c):
            raise ParseError(f"bad cycle {c}")
        used |= set(c)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def split_generators(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return [g.strip() for g in out if g.strip()]


# -- 2x2 matrix groups -------------------------------------------------------


def _mat_mul(F: PrimePowerField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a, b, c, d = x.T
    e, f, g, h = y.T
    M, A = F.mul_arr, F.add_arr
    return np.stack([A(M(a, e), M(b, g)), A(M(a, f), M(b, h)),
                     A(M(c, e), M(d, g)), A(M(c, f), M(d, h))], axis=1)


def _mat_det(F: PrimePowerField, x: np.ndarray) -> np.ndarray:
    a, b, c, d = x.T
    return F.sub_arr(F.mul_arr(a, d), F.mul_arr(b, c))


def _mat_adj(F: PrimePowerField, x: np.ndarray) -> np.ndarray:
    a, b, c, d = x.T
    return np.stack([d, F.neg_arr(b), F.neg_arr(c), a], axis=1)


def _first_nonzero(x: np.ndarray) -> np.ndarray:
    return np.where(x[:, 0] != 0, x[:, 0], x[:, 1])


def _all_matrices(F: PrimePowerField) -> np.ndarray:
    q = F.q
    grid = np.indices((q, q, q, q)).reshape(4, -1).T
    return grid.astype(np.int64)


def _mat_label(F: PrimePowerField, row) -> str:
    return "[[{},{}],[{},{}]]".format(*(int(v) for v in row[:4]))


def psl2_order(q: int) -> int:
    return q * (q * q - 1) // math.gcd(2, q - 1)


def _check_q(q: int) -> PrimePowerField:
    try:
        return field_for_order(q)
    except NotPrime:
        raise NotPrimePower(q) from None


class PSL2(EnumeratedGroup):
    """PSL(2,q): det-1 matrices modulo +-I.

    Of {M, -M} the representative is the one whose first nonzero entry (row
    major) is smaller in the field's integer order.
    """

    kind = "psl2"

    def __init__(self, q: int, use_table: bool | None = None):
        self.field = F = _check_q(q)
        self.q = q
        expected = psl2_order(q)
        if expected > ENUMERATED_LIMIT:
            raise OrderBudgetExceeded(expected)
        mats = _all_matrices(F)
        mats = mats[_mat_det(F, mats) == 1]
        mats = np.unique(self._canon(mats), axis=0)
        if len(mats) != expected:
            raise AssertionError(f"PSL(2,{q}) enumerated {len(mats)} != {expected}")
        self._setup_rows(mats, [1, 0, 0, 1])
        super().__init__(len(mats), f"psl2:{q}", use_table)

    def _canon(self, rows):
        F = self.field
        v = _first_nonzero(rows)
        flip = F.neg_arr(v) < v
        return np.where(flip[:, None], F.neg_arr(rows), rows)

    def _key(self, rows):
        q = self.q
        return ((rows[:, 0] * q + rows[:, 1]) * q + rows[:, 2]) * q + rows[:, 3]

    def _compose(self, x, y):
        return _mat_mul(self.field, x, y)

    def _invert(self, x):
        return _mat_adj(self.field, x)

    def frobenius(self, t, e: int = 1):
        """Entrywise p-power map applied e times (a field automorphism of T)."""
        t = np.asarray(t, dtype=np.int64)
        rows = self.field.frobenius_arr(self.rows[t.ravel()], e)
        return _as_scalar(self.index_of_rows(rows).reshape(t.shape))

    def label(self, i: int) -> str:
        return _mat_label(self.field, self.rows[i])


class SemilinearGroup(EnumeratedGroup):
    """Pairs (m, e): m a projective 2x2 matrix, e a Frobenius power mod f.

    The pair acts on PSL(2,q) by t -> m * phi^e(t) * m^-1 (field power first,
    then conjugation); the product is composition of those maps:
    (m1, e1)(m2, e2) = (m1 * phi^e1(m2), e1 + e2).

    ``matrices="pgl"`` uses all of PGL(2,q), ``"psl"`` only PSL(2,q)
    (square determinant).  ``field=False`` restricts e to 0.
    """

    def __init__(self, q: int, matrices: str = "pgl", field: bool = True, spec: str | None = None,
                 use_table: bool | None = None):
        self.field = F = _check_q(q)
        self.q = q
        self.matrices = matrices
        self.with_field = field
        powers = F.f if field else 1
        full = q * (q * q - 1)
        expected = (full if matrices == "pgl" else psl2_order(q)) * powers
        if expected > ENUMERATED_LIMIT:
            raise OrderBudgetExceeded(expected)
        mats = _all_matrices(F)
        mats = mats[(_mat_det(F, mats) != 0) & (_first_nonzero(mats) == 1)]
        if matrices == "psl":
            det = _mat_det(F, mats)
            squares = np.zeros(q, dtype=bool)
            squares[F.mul_arr(np.arange(q), np.arange(q))] = True
            mats = mats[squares[det]]
        rows = np.concatenate([np.hstack([mats, np.full((len(mats), 1), e)]) for e in range(powers)])
        if len(rows) != expected:
            raise AssertionError(f"semilinear group enumerated {len(rows)} != {expected}")
        if field and matrices == "pgl":
            self.kind = "autpsl2"
        elif matrices == "pgl":
            self.kind = "pgl2"
        else:
            self.kind = "psl2-field"
        self._setup_rows(rows, [1, 0, 0, 1, 0])
        super().__init__(len(rows), spec or f"{self.kind}:{q}", use_table)

    def _canon(self, rows):
        F = self.field
        v = _first_nonzero(rows)
        m = F.mul_arr(rows[:, :4], F.inv_arr(v)[:, None])
        return np.hstack([m, rows[:, 4:5] % self.field.f])

    def _key(self, rows):
        q = self.q
        k = ((rows[:, 0] * q + rows[:, 1]) * q + rows[:, 2]) * q + rows[:, 3]
        return k * self.field.f + rows[:, 4]

    def _compose(self, x, y):
        F = self.field
        e1 = x[:, 4]
        ym = y[:, :4].copy()
        for e in np.unique(e1):
            sel = e1 == e
            ym[sel] = F.frobenius_arr(ym[sel], int(e))
        m = _mat_mul(F, x[:, :4], ym)
        return np.hstack([m, ((x[:, 4] + y[:, 4]) % F.f)[:, None]])

    def _invert(self, x):
        F = self.field
        m = _mat_adj(F, x[:, :4])
        e = x[:, 4]
        for v in np.unique(e):
            sel = e == v
            m[sel] = F.frobenius_arr(m[sel], (-int(v)) % F.f)
        return np.hstack([m, ((-e) % F.f)[:, None]])

    def pair(self, i: int) -> tuple[tuple[int, int, int, int], int]:
        r = self.rows[i]
        return (tuple(int(v) for v in r[:4]), int(r[4]))

    def label(self, i: int) -> str:
        m, e = self.pair(i)
        return _mat_label(self.field, m) + (f"*phi^{e}" if e else "")


class SL2Mod(EnumeratedGroup):
    """SL(2, Z/NZ)."""

    kind = "sl2"

    def __init__(self, n: int, use_table: bool | None = None):
        self.n = n
        if n < 2:
            raise ParseError("sl2 modulus must be >= 2")
        if n**4 > 2 * 10**6:
            raise OrderBudgetExceeded(f"sl2:{n} enumeration too large")
        grid = np.indices((n, n, n, n)).reshape(4, -1).T.astype(np.int64)
        a, b, c, d = grid.T
        rows = grid[(a * d - b * c) % n == 1 % n]
        if len(rows) > ARITHMETIC_LIMIT:
            raise OrderBudgetExceeded(len(rows))
        self._setup_rows(rows, [1, 0, 0, 1])
        super().__init__(len(rows), f"sl2:{n}", use_table)

    def _key(self, rows):
        n = self.n
        return ((rows[:, 0] * n + rows[:, 1]) * n + rows[:, 2]) * n + rows[:, 3]

    def _compose(self, x, y):
        n = self.n
        a, b, c, d = x.T
        e, f, g, h = y.T
        return np.stack([(a * e + b * g) % n, (a * f + b * h) % n,
                         (c * e + d * g) % n, (c * f + d * h) % n], axis=1)

    def _invert(self, x):
        n = self.n
        a, b, c, d = x.T
        return np.stack([d, (-b) % n, (-c) % n, a], axis=1)

    def label(self, i: int) -> str:
        return "[[{},{}],[{},{}]]".format(*(int(v) for v in self.rows[i]))


def reduction_map(big: SL2Mod, small: SL2Mod) -> np.ndarray:
    """Entrywise reduction SL(2, Z/NZ) -> SL(2, Z/MZ) for M | N."""
    if big.n % small.n:
        raise DomainMismatch(f"{small.n} does not divide {big.n}")
    return small.index_of_rows(big.rows % small.n)


# -- wreath products and direct powers ---------------------------------------


class WreathGroup(Group):
    """B^k x| P with elements ((b_1..b_k), sigma), encoded as
    sum(b_j |B|^j) + |B|^k * index(sigma).

    Product: (a, s)(b, r) = (a * s.b, s*r) with (s.b)_j = b_{s(j)}.
    ``socle``/``socle_embed`` describe T inside B, so T^k sits inside as
    ((t_1..t_k), id).
    """

    def __init__(self, base: Group, k: int, top: PermutationGroup, spec: str,
                 socle: Group | None = None, socle_embed: np.ndarray | None = None,
                 use_table: bool | None = None):
        if top.degree != k:
            raise NonsubgroupSpec(f"top group acts on {top.degree} points, expected {k}")
        order = base.order**k * top.order
        if order > ARITHMETIC_LIMIT:
            raise OrderBudgetExceeded(order)
        self.base = base
        self.k = k
        self.top = top
        self.socle = socle if socle is not None else base
        self.socle_embed = (socle_embed if socle_embed is not None
                            else np.arange(self.socle.order, dtype=np.int64))
        self.kind = "direct-power" if top.order == 1 else "wreath-subgroup"
        self._base_order_k = base.order**k
        super().__init__(order, spec, use_table)

    def decode(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        a = np.asarray(a, dtype=np.int64)
        s, rest = np.divmod(a, self._base_order_k)
        digits = []
        for _ in range(self.k):
            rest, r = np.divmod(rest, self.base.order)
            digits.append(r)
        return np.stack(digits, axis=-1), s

    def encode(self, digits: np.ndarray, s) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for j in reversed(range(self.k)):
            out = out * self.base.order + digits[..., j]
        return out + self._base_order_k * np.asarray(s, dtype=np.int64)

    def element(self, base_tuple, perm_index: int = 0) -> int:
        return int(self.encode(np.asarray(base_tuple), perm_index))

    def parts(self, a: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(base coordinates, permutation images) of a single element."""
        digits, s = self.decode(a)
        return tuple(int(x) for x in digits), self.top.image(int(s))

    def _act(self, s: np.ndarray, digits: np.ndarray) -> np.ndarray:
        return np.take_along_axis(digits, self.top.rows[s], axis=-1)

    def _mul(self, a, b):
        ad, sa = self.decode(a)
        bd, sb = self.decode(b)
        base = self.base.mul(ad, self._act(sa, bd))
        return self.encode(np.asarray(base), self.top.mul(sa, sb))

    def _inv(self, a):
        ad, sa = self.decode(a)
        si = np.asarray(self.top.inv(sa))
        base = np.asarray(self.base.inv(ad))
        return self.encode(self._act(si, base), si)

    def socle_elements(self) -> np.ndarray:
        """Indices of T^k inside this group."""
        emb = self.socle_embed
        grids = np.indices((self.socle.order,) * self.k).reshape(self.k, -1).T
        return self.encode(emb[grids], 0)

    def label(self, i: int) -> str:
        base, perm = self.parts(i)
        inner = ", ".join(self.base.label(b) for b in base)
        return f"(({inner}), {_cycle_string(perm)})"


def direct_power(T: Group, k: int, use_table: bool | None = None) -> WreathGroup:
    if k < 1:
        raise ParseError("power exponent must be >= 1")
    if T.order**k > ARITHMETIC_LIMIT:
        raise OrderBudgetExceeded(T.order**k)
    top = PermutationGroup(k, [tuple(range(k))], "()")
    return WreathGroup(T, k, top, f"power:{T.spec}:k={k}", use_table=use_table)


# -- normal subgroups and overgroups -----------------------------------------


@dataclass(eq=False)
class Extension:
    """T embedded as a normal subgroup of A.

    ``embed[t]`` is the A-index of t; ``back[a]`` is the T-index of a or -1.
    ``coset_reps`` is a transversal (identity first) and ``coset_of[a]`` the
    number of the coset T*a.
    """

    T: Group
    A: Group
    embed: np.ndarray
    back: np.ndarray
    coset_reps: np.ndarray
    coset_of: np.ndarray

    @property
    def index(self) -> int:
        return len(self.coset_reps)

    def coset_labels(self) -> list[str]:
        return [self.A.label(int(r)) for r in self.coset_reps]

    def in_T(self, a) -> np.ndarray | bool:
        return self.back[a] >= 0


def make_extension(T: Group, A: Group, embed, check: bool = True) -> Extension:
    embed = np.asarray(embed, dtype=np.int64)
    if embed.shape != (T.order,) or embed[0] != 0:
        raise DomainMismatch("embedding must map T onto indices of A with identity first")
    back = np.full(A.order, -1, dtype=np.int64)
    back[embed] = np.arange(T.order)
    if np.count_nonzero(back >= 0) != T.order:
        raise DomainMismatch("embedding is not injective")
    if check:
        rng = np.random.default_rng(0)
        if T.order**2 <= 10**6:
            x, y = np.divmod(np.arange(T.order**2), T.order)
        else:
            x, y = rng.integers(0, T.order, (2, 10**5))
        if not np.array_equal(A.mul(embed[x], embed[y]), embed[T.mul(x, y)]):
            raise DomainMismatch("embedding is not a homomorphism")
        conjugators = A.elements() if A.order * T.order <= 4 * 10**6 else rng.integers(0, A.order, 200)
        for a in conjugators:
            if np.any(back[A.conj(int(a), embed)] < 0):
                raise NotNormal(f"{T.spec} is not normal in {A.spec}")
    coset_of = np.full(A.order, -1, dtype=np.int64)
    reps = []
    if A.order <= ARITHMETIC_LIMIT // 10:
        for a in range(A.order):
            if coset_of[a] < 0:
                coset_of[A.mul(embed, a)] = len(reps)
                reps.append(a)
    return Extension(T, A, embed, back, np.asarray(reps, dtype=np.int64), coset_of)


def build_aut_group(T: Group) -> Extension:
    """Aut(PSL(2,q)) = PGL(2,q) x| <Frobenius>, with T embedded as inner automorphisms."""
    if not isinstance(T, PSL2):
        raise UnsupportedKind(f"automorphism group only available for psl2, got {T.kind}")
    return psl2_extension(T, "pgl", True)


def psl2_extension(T: PSL2, matrices: str, field: bool) -> Extension:
    A = _semilinear(T.q, matrices, field)
    F = T.field
    inv_lead = F.inv_arr(_first_nonzero(T.rows))
    rows = np.hstack([F.mul_arr(T.rows, inv_lead[:, None]), np.zeros((T.order, 1), dtype=np.int64)])
    return make_extension(T, A, A.index_of_rows(rows))


@lru_cache(maxsize=None)
def _semilinear(q: int, matrices: str, field: bool) -> SemilinearGroup:
    return SemilinearGroup(q, matrices, field)


def overgroup(T: Group) -> Extension:
    """A convenient group containing T as a normal subgroup.

    psl2:q -> Aut(T); alt:n -> sym:n; cyclic:n -> dihedral:n (via rotations);
    anything else -> T itself (trivial cosets only).
    """
    if isinstance(T, PSL2):
        return build_aut_group(T)
    if T.kind == "alternating":
        S = build_group(f"sym:{T.degree}")
        return make_extension(T, S, S.index_of_rows(T.rows))
    if T.kind == "cyclic":
        return make_extension(T, build_group(f"dihedral:{T.order}"), np.arange(T.order))
    return make_extension(T, T, np.arange(T.order), check=False)


def generate(G: Group, gens) -> np.ndarray:
    """Sorted element indices of the subgroup generated by gens."""
    members = np.zeros(G.order, dtype=bool)
    members[0] = True
    frontier = np.array([0], dtype=np.int64)
    gens = [int(g) for g in gens]
    while len(frontier):
        new = np.unique(np.concatenate([np.atleast_1d(G.mul(frontier, g)) for g in gens])) if gens else []
        new = np.asarray(new, dtype=np.int64)
        new = new[~members[new]]
        members[new] = True
        frontier = new
    return np.flatnonzero(members)


def is_normal(G: Group, H) -> bool:
    H = np.asarray(H, dtype=np.int64)
    members = np.zeros(G.order, dtype=bool)
    members[H] = True
    return all(members[G.conj(int(g), H)].all() for g in G.elements())


def conjugacy_classes(G: Group) -> list[np.ndarray]:
    seen = np.zeros(G.order, dtype=bool)
    out = []
    every = G.elements()
    for x in range(G.order):
        if not seen[x]:
            cls = np.unique(G.conj(every, x))
            seen[cls] = True
            out.append(cls)
    return out


def normal_subgroups(G: Group) -> list[np.ndarray]:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    closures = {tuple(generate(G, c)) for c in conjugacy_classes(G)}
    found = set(closures)
    frontier = set(closures)
    while frontier:
        nxt = set()
        for a in frontier:
            for b in closures:
                j = tuple(generate(G, a + b))
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    return [np.asarray(n, dtype=np.int64) for n in sorted(found, key=lambda s: (len(s), s))]


# -- automorphisms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Automorphism:
    """An automorphism of ext.T realised inside the overgroup ext.A.

    kind is one of ``inner`` (payload: A-index h, acts as t -> h t h^-1),
    ``diagonal`` (payload: PGL(2,q) matrix 4-tuple), ``field`` (payload:
    Frobenius power e) or ``composite`` (payload: tuple of automorphisms,
    applied right to left).
    """

    kind: str
    payload: object
    ext: Extension = field(repr=False)

    @classmethod
    def inner(cls, ext: Extension, h: int) -> "Automorphism":
        return cls("inner", int(h), ext)

    @classmethod
    def identity(cls, ext: Extension) -> "Automorphism":
        return cls("inner", 0, ext)

    @classmethod
    def diagonal(cls, ext: Extension, m) -> "Automorphism":
        return cls("diagonal", tuple(int(v) for v in m), ext)

    @classmethod
    def frobenius(cls, ext: Extension, e: int) -> "Automorphism":
        return cls("field", int(e), ext)

    @classmethod
    def composite(cls, ext: Extension, parts) -> "Automorphism":
        return cls("composite", tuple(parts), ext)

    @property
    def domain(self) -> Group:
        return self.ext.T

    def as_element(self) -> int:
        """The element of the overgroup inducing this automorphism."""
        A = self.ext.A
        if self.kind == "inner":
            return self.payload
        if self.kind == "composite":
            out = 0
            for part in self.payload:
                out = A.mul(out, part.as_element())
            return out
        if not isinstance(A, SemilinearGroup):
            raise DomainMismatch(f"{self.kind} automorphisms need a psl2 overgroup")
        if self.kind == "diagonal":
            return A.index_of(list(self.payload) + [0])
        return A.index_of([1, 0, 0, 1, self.payload])

    def apply(self, t):
        t_arr = np.asarray(t, dtype=np.int64)
        T = self.ext.T
        if t_arr.size and (t_arr.min() < 0 or t_arr.max() >= T.order):
            raise DomainMismatch("element outside the automorphism's domain")
        if self.kind == "field" and isinstance(T, PSL2):
            out = np.asarray(T.frobenius(t_arr, self.payload))
        elif self.kind == "composite":
            out = t_arr
            for part in reversed(self.payload):
                out = np.asarray(part.apply(out))
        else:
            h = self.as_element()
            out = self.ext.back[np.asarray(self.ext.A.conj(h, self.ext.embed[t_arr]))]
        return int(out) if out.ndim == 0 else out

    @cached_property
    def table(self) -> np.ndarray:
        return np.asarray(self.apply(self.ext.T.elements()))

    def decompose(self) -> tuple[int, tuple[int, int, int, int]]:
        """(Frobenius power e, projective matrix m) with action t -> m phi^e(t) m^-1."""
        A = self.ext.A
        if not isinstance(A, SemilinearGroup):
            raise DomainMismatch("decomposition needs a psl2 overgroup")
        m, e = A.pair(self.as_element())
        return e, m


def apply_automorphism(alpha: "Automorphism", t):
    return alpha.apply(t)


# -- spec grammar ------------------------------------------------------------


_SIMPLE = re.compile(r"^(cyclic|dihedral|sym|alt|psl2|pgl2|autpsl2|sl2):(\d+)$")


@lru_cache(maxsize=64)
def build_group(spec: str) -> Group:
    """Build a group from its spec string and verify the group axioms.

    Grammar::

        cyclic:n | dihedral:n | sym:n | alt:n | psl2:q | pgl2:q | autpsl2:q | sl2:N
        power:<spec>:k=<k>
        wreath:<spec>:k=<k>:top=<perm-gens>:base=<inner|diag|field|all>

    Permutation generators are cycle notation separated by commas.
    """
    G = _parse_group(spec.strip())
    verify_group(G)
    return G


def _parse_group(spec: str) -> Group:
    m = _SIMPLE.match(spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "cyclic":
            return CyclicGroup(n)
        if kind == "dihedral":
            return DihedralGroup(n)
        if kind == "sym":
            return symmetric_group(n)
        if kind == "alt":
            return alternating_group(n)
        if kind == "sl2":
            return SL2Mod(n)
        if kind == "psl2":
            return PSL2(n)
        if kind == "pgl2":
            return SemilinearGroup(n, "pgl", False)
        return SemilinearGroup(n, "pgl", True)
    for outer in ("power:", "wreath:"):
        if spec.startswith(outer):
            return _build_compound(outer[:-1], spec[len(outer):], spec)
    raise ParseError(f"cannot parse group spec {spec!r}")


def _build_compound(kind: str, body: str, spec: str) -> Group:
    parts = body.split(":")
    try:
        kpos = next(i for i, p in enumerate(parts) if p.startswith("k="))
    except StopIteration:
        raise ParseError(f"missing k= in {spec!r}") from None
    inner = ":".join(parts[:kpos])
    T = build_group(inner)
    opts = {}
    for p in parts[kpos:]:
        if "=" not in p:
            raise ParseError(f"bad option {p!r} in {spec!r}")
        key, val = p.split("=", 1)
        opts[key] = val
    try:
        k = int(opts.pop("k"))
    except ValueError:
        raise ParseError(f"bad k in {spec!r}") from None
    if kind == "power":
        if opts:
            raise ParseError(f"unexpected options {sorted(opts)} in {spec!r}")
        return direct_power(T, k)
    top_text = opts.pop("top", "")
    base_kind = opts.pop("base", "inner")
    if opts:
        raise ParseError(f"unexpected options {sorted(opts)} in {spec!r}")
    gens = [parse_permutation(g, k) for g in split_generators(top_text)]
    gens = [g + tuple(range(len(g), k)) for g in gens]
    top = PermutationGroup.generated(k, gens)
    ext = wreath_base(T, base_kind)
    return WreathGroup(ext.A, k, top, spec, socle=T, socle_embed=ext.embed)


def wreath_base(T: Group, base_kind: str) -> Extension:
    """The group B of allowed coordinate automorphisms, T <= B <= Aut(T)."""
    if base_kind == "inner":
        return make_extension(T, T, np.arange(T.order), check=False)
    if base_kind not in ("diag", "field", "all"):
        raise ParseError(f"unknown base {base_kind!r}")
    if isinstance(T, PSL2):
        matrices = "psl" if base_kind == "field" else "pgl"
        return psl2_extension(T, matrices, base_kind != "diag")
    if T.kind == "alternating" and base_kind == "all" and T.degree != 6:
        return overgroup(T)
    raise UnsupportedKind(f"base={base_kind} not available for {T.kind}")


def verify_group(G: Group, samples: int = 10**5, seed: int = 0) -> None:
    """Check the group axioms; exhaustive associativity for order <= 200."""
    every = G.elements()
    if not (np.array_equal(G.mul(0, every), every) and np.array_equal(G.mul(every, 0), every)):
        raise AssertionError(f"{G.spec}: index 0 is not the identity")
    if np.any(G.mul(every, G.inv(every)) != 0):
        raise AssertionError(f"{G.spec}: inverse failure")
    if G.order <= 200:
        a, b, c = (x.ravel() for x in np.indices((G.order,) * 3))
    else:
        a, b, c = np.random.default_rng(seed).integers(0, G.order, (3, samples))
    if not np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c))):
        raise AssertionError(f"{G.spec}: multiplication is not associative")
