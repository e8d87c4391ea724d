"""Exact fiber counts of word maps, plain and restricted to cosets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, DomainMismatch, TargetNotInGroup
from .groups import Extension, Group
from .parallel import count_chunks, tuple_arrays
from .words import Word, coset_rewrite, evaluate_arrays

DEFAULT_BUDGET = 10**8


def _guard(required: int, budget: int) -> None:
    if required > budget:
        raise BudgetExceeded(required, budget)


def measured_epsilon(d: int, max_fiber: int, order: int) -> float:
    """d - ln(max_fiber) / ln(order), clamped to [0, d] against rounding."""
    if order <= 1:
        return 0.0
    eps = d - math.log(max_fiber) / math.log(order)
    return min(float(d), max(0.0, eps))


@dataclass(eq=False)
class EpsilonReport:
    max_fiber: int
    epsilon_hat: float
    argmax: tuple
    order: int
    d: int
    distribution: "FiberDistribution | None" = field(default=None, repr=False)
    seed: int | None = None
    exhaustive: bool = True
    tested: int = 1


@dataclass(eq=False)
class FiberDistribution:
    """counts[g] = |w^-1(g)| over G^d."""

    group: Group
    word: Word
    counts: np.ndarray

    @property
    def d(self) -> int:
        return self.word.d

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def total(self) -> int:
        return self.group.order**self.word.d

    def count(self, g: int) -> int:
        if not 0 <= g < self.order:
            raise TargetNotInGroup(g)
        return int(self.counts[g])

    def prob(self, g: int) -> Fraction:
        return Fraction(self.count(g), self.total)

    @property
    def max_fiber(self) -> int:
        return int(self.counts.max())

    def argmax(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.counts == self.counts.max()))

    def max_prob(self) -> Fraction:
        return Fraction(self.max_fiber, self.total)

    def epsilon(self) -> EpsilonReport:
        m = self.max_fiber
        return EpsilonReport(m, measured_epsilon(self.d, m, self.order), self.argmax(),
                             self.order, self.d, self)


def distribution(G: Group, w: Word, budget: int = DEFAULT_BUDGET, workers: int = 1) -> FiberDistribution:
    """Exact fiber sizes of w on G^d by exhaustive enumeration."""
    total = G.order**w.d
    _guard(total, budget)

    def task(start, stop):
        values = evaluate_arrays(w, G, tuple_arrays(G.order, w.d, start, stop))
        return np.bincount(values, minlength=G.order)

    counts = count_chunks(task, total, G.order, workers)
    assert counts.sum() == total
    return FiberDistribution(G, w, counts)


def fiber_count(G: Group, w: Word, g: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    if not 0 <= g < G.order:
        raise TargetNotInGroup(g)
    return distribution(G, w, budget, workers).count(g)


def prob(G: Group, w: Word, g: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> Fraction:
    """p_{w,G}(g) as an exact fraction in lowest terms."""
    return Fraction(fiber_count(G, w, g, budget, workers), G.order**w.d)


def epsilon_hat(G: Group, w: Word, budget: int = DEFAULT_BUDGET, workers: int = 1) -> EpsilonReport:
    return distribution(G, w, budget, workers).epsilon()


# -- coset-restricted counting -----------------------------------------------


def _check_cosets(ext: Extension, w: Word, cosets) -> list[int]:
    if len(cosets) != w.d:
        raise DomainMismatch(f"expected {w.d} cosets, got {len(cosets)}")
    out = [int(g) for g in cosets]
    if any(not 0 <= g < ext.A.order for g in out):
        raise DomainMismatch("coset representative outside the overgroup")
    return out


def coset_phi_counts(ext: Extension, w: Word, cosets, budget: int = DEFAULT_BUDGET,
                     workers: int = 1) -> tuple[int, np.ndarray]:
    """(base, counts) where counts[u] = #{t in T^d : phi(t) = u} from the coset rewrite."""
    cosets = _check_cosets(ext, w, cosets)
    T = ext.T
    total = T.order**w.d
    _guard(total, budget)
    rw = coset_rewrite(w, ext, cosets)
    phi = rw.phi

    def task(start, stop):
        values = phi.evaluate_arrays(tuple_arrays(T.order, w.d, start, stop))
        return np.bincount(values, minlength=T.order)

    return rw.base, count_chunks(task, total, T.order, workers)


def coset_counts_over_A(ext: Extension, w: Word, cosets, budget: int = DEFAULT_BUDGET,
                        workers: int = 1) -> np.ndarray:
    """counts[g] = #{t : w(t_1 g_1, ..., t_d g_d) = g} for every g in A, via the rewrite."""
    base, phi_counts = coset_phi_counts(ext, w, cosets, budget, workers)
    out = np.zeros(ext.A.order, dtype=np.int64)
    out[np.asarray(ext.A.mul(ext.embed, base))] = phi_counts
    return out


def coset_counts_direct(ext: Extension, w: Word, cosets, budget: int = DEFAULT_BUDGET,
                        workers: int = 1) -> np.ndarray:
    """Definitional oracle: evaluate w(t_1 g_1, ..., t_d g_d) in A directly."""
    cosets = _check_cosets(ext, w, cosets)
    T, A = ext.T, ext.A
    total = T.order**w.d
    _guard(total, budget)
    shifted = [np.asarray(A.mul(ext.embed, g)) for g in cosets]

    def task(start, stop):
        ts = tuple_arrays(T.order, w.d, start, stop)
        values = evaluate_arrays(w, A, [shifted[i][t] for i, t in enumerate(ts)])
        return np.bincount(values, minlength=A.order)

    return count_chunks(task, total, A.order, workers)


def coset_fiber_count(ext: Extension, w: Word, cosets, target: int,
                      budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """|{t in T^d : w(t_1 g_1, ..., t_d g_d) = target}|."""
    if not 0 <= target < ext.A.order:
        raise TargetNotInGroup(target)
    base, phi_counts = coset_phi_counts(ext, w, cosets, budget, workers)
    u = ext.back[ext.A.mul(target, ext.A.inv(base))]
    return int(phi_counts[u]) if u >= 0 else 0


def coset_fiber_count_direct(ext: Extension, w: Word, cosets, target: int,
                             budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    if not 0 <= target < ext.A.order:
        raise TargetNotInGroup(target)
    return int(coset_counts_direct(ext, w, cosets, budget, workers)[target])


def coset_image_size(ext: Extension, w: Word, cosets, budget: int = DEFAULT_BUDGET,
                     workers: int = 1) -> int:
    _, phi_counts = coset_phi_counts(ext, w, cosets, budget, workers)
    return int(np.count_nonzero(phi_counts))


def coset_tuples(ext: Extension, d: int, max_exhaustive: int = 256, samples: int = 64,
                 seed: int = 0) -> tuple[list[tuple[int, ...]], bool]:
    """Coset representative tuples: all of them, or a seeded sample when there are too many."""
    reps = [int(r) for r in ext.coset_reps]
    if len(reps) ** d <= max_exhaustive:
        return list(itertools.product(reps, repeat=d)), True
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(reps), size=(samples, d))
    chosen = sorted({tuple(reps[i] for i in row) for row in picks})
    return chosen, False


def coset_epsilon(ext: Extension, w: Word, budget: int = DEFAULT_BUDGET, seed: int = 0,
                  workers: int = 1, max_exhaustive: int = 256, samples: int = 64) -> EpsilonReport:
    """Worst fiber over coset tuples and targets; epsilon_hat = d - ln(max)/ln|T|."""
    tuples, exhaustive = coset_tuples(ext, w.d, max_exhaustive, samples, seed)
    best, where = -1, ()
    for cosets in tuples:
        base, counts = coset_phi_counts(ext, w, cosets, budget, workers)
        m = int(counts.max())
        if m > best:
            u = int(np.argmax(counts))
            best = m
            where = (cosets, int(ext.A.mul(ext.embed[u], base)))
    return EpsilonReport(best, measured_epsilon(w.d, best, ext.T.order), where, ext.T.order, w.d,
                         seed=None if exhaustive else seed, exhaustive=exhaustive, tested=len(tuples))
