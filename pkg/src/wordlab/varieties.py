"""Point counts of polynomial systems over F_q and fixed points of the twisted
Frobenius model F(c_1, ..., c_k) = (c_2, ..., c_k, c_1^q)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, CoprimalityViolation, DomainMismatch, ZeroPolynomial
from .field import PrimePowerField, make_field
from .parallel import CHUNK, count_chunks, tuple_arrays
from .polynomials import MultivariatePolynomial

DEFAULT_BUDGET = 10**7


def _grid_chunk(q: int, N: int) -> int:
    # whole slabs of the leading coordinate
    slab = q ** max(N - 1, 0)
    return slab * max(1, CHUNK // slab)


def count_affine_zeros(polys, field: PrimePowerField, N: int, budget: int = DEFAULT_BUDGET,
                       workers: int = 1) -> int:
    """|{a in F_q^N : every polynomial vanishes at a}| by exhaustive evaluation."""
    if isinstance(polys, MultivariatePolynomial):
        polys = [polys]
    for f in polys:
        if f.field != field or f.nvars != N:
            raise DomainMismatch("polynomial does not live in F_q[x_1..x_N]")
    total = field.q**N
    if total > budget:
        raise BudgetExceeded(total, budget)

    def task(start, stop):
        coords = tuple_arrays(field.q, N, start, stop)
        cache: dict = {}
        ok = np.ones(stop - start, dtype=bool)
        for f in polys:
            ok &= f.evaluate_arrays(coords, cache) == 0
        return np.array([np.count_nonzero(ok)], dtype=np.int64)

    return int(count_chunks(task, total, 1, workers, _grid_chunk(field.q, N))[0])


@dataclass(frozen=True)
class BoundCheck:
    count: int
    bound: int
    passed: bool


def hypersurface_bound_check(f: MultivariatePolynomial, field: PrimePowerField, N: int,
                             budget: int = DEFAULT_BUDGET, workers: int = 1) -> BoundCheck:
    """count <= deg(f) * q^(N-1)."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial defines all of A^N")
    count = count_affine_zeros([f], field, N, budget, workers)
    bound = f.degree * field.q ** (N - 1)
    return BoundCheck(count, bound, count <= bound)


def random_polynomial(field: PrimePowerField, N: int, max_degree: int, rng: np.random.Generator,
                      max_terms: int = 6) -> MultivariatePolynomial:
    """A nonzero polynomial of total degree <= max_degree with random sparse support."""
    while True:
        coeffs = {}
        for _ in range(int(rng.integers(1, max_terms + 1))):
            deg = int(rng.integers(0, max_degree + 1))
            exps = [0] * N
            for _ in range(deg):
                exps[int(rng.integers(0, N))] += 1
            coeffs[tuple(exps)] = int(rng.integers(1, field.q))
        f = MultivariatePolynomial.from_dict(field, N, coeffs)
        if not f.is_zero():
            return f


# -- twisted Frobenius -----------------------------------------------------------


@dataclass(frozen=True)
class TwistedFrobeniusSpec:
    """F acts on each block (a_{i1}..a_{ik}) of A^{mk} by (a_{i2}, ..., a_{ik}, a_{i1}^q), q = p^f."""

    p: int
    f: int
    k: int
    m: int
    t: int

    def __post_init__(self):
        if min(self.f, self.k, self.m, self.t) < 1:
            raise ValueError("f, k, m, t must be positive")
        if math.gcd(self.k, self.f) != 1:
            raise CoprimalityViolation(f"gcd(k={self.k}, f={self.f}) != 1")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def nvars(self) -> int:
        return self.m * self.k


def apply_twisted(spec: TwistedFrobeniusSpec, E: PrimePowerField, coords: list[np.ndarray],
                  times: int = 1) -> list[np.ndarray]:
    """F^times on points of A^{mk}(E), coordinates listed block by block."""
    k = spec.k
    coords = list(coords)
    for _ in range(times):
        out = []
        for i in range(spec.m):
            block = coords[i * k:(i + 1) * k]
            out.extend(block[1:] + [E.frobenius_arr(block[0], spec.f)])
        coords = out
    return coords


@dataclass(frozen=True)
class TwistedResult:
    fixed_count: int
    zero_fixed_count: int
    bound_value: float
    prediction_pt: int
    prediction_ptf: int

    @property
    def ratio(self) -> float:
        return self.zero_fixed_count / self.bound_value if self.bound_value else math.inf


def twisted_fixed_points(Q: MultivariatePolynomial, spec: TwistedFrobeniusSpec,
                         budget: int = DEFAULT_BUDGET, workers: int = 1) -> TwistedResult:
    """Count F^t-fixed points of A^{mk}, and those on Q = 0.

    F^k is the q-Frobenius, so F^t-fixed points have coordinates in F_{q^t};
    the enumeration runs over A^{mk}(F_{q^t}).  Q must have coefficients in F_p.
    The reported bound deg(Q) p^{(tf/k)(mk-1)} holds only up to a constant,
    and the two per-block predictions p^t and p^{tf} (raised to m) are
    reported side by side without being asserted.
    """
    if Q.nvars != spec.nvars:
        raise DomainMismatch(f"Q has {Q.nvars} variables, expected m*k = {spec.nvars}")
    E = make_field(spec.p, spec.f * spec.t)
    Qe = Q.over(E)
    N = spec.nvars
    total = E.q**N
    if total > budget:
        raise BudgetExceeded(total, budget)

    def task(start, stop):
        coords = tuple_arrays(E.q, N, start, stop)
        image = apply_twisted(spec, E, coords, spec.t)
        fixed = np.ones(stop - start, dtype=bool)
        for a, b in zip(coords, image):
            fixed &= a == b
        zero = fixed & (Qe.evaluate_arrays(coords) == 0)
        return np.array([np.count_nonzero(fixed), np.count_nonzero(zero)], dtype=np.int64)

    fixed, zero = count_chunks(task, total, 2, workers, _grid_chunk(E.q, N))
    bound = Q.degree * spec.p ** ((spec.t * spec.f / spec.k) * (N - 1))
    return TwistedResult(int(fixed), int(zero), float(bound),
                         spec.p ** (spec.t * spec.m), spec.p ** (spec.t * spec.f * spec.m))
