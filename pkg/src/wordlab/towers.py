"""Per-quotient Hausdorff-dimension ratios of word-map fibers.

The liminf over all finite-index normal subgroups is not computable; a tower
here is a finite sampled family of quotients, and the profile it produces is
an upper-bound proxy for the true dimension, not an estimate of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatch, NotNormal, ParseError, TargetNotInGroup
from .fibers import DEFAULT_BUDGET, distribution, _guard
from .groups import Group, build_group, is_normal, reduction_map
from .parallel import tuple_arrays
from .words import Word, evaluate_arrays

FAMILIES = ("dihedral", "psl2", "sl2-mod-p", "custom")


@dataclass(eq=False)
class QuotientTower:
    family: str
    levels: list
    quotients: list[Group]
    surjections: list[np.ndarray] | None = None

    def __post_init__(self):
        orders = [Q.order for Q in self.quotients]
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise DomainMismatch("tower orders must strictly increase")
        if self.surjections is not None:
            for big, small, pi in zip(self.quotients[1:], self.quotients, self.surjections):
                _check_surjection(big, small, pi)


def _check_surjection(big: Group, small: Group, pi: np.ndarray) -> None:
    if len(np.unique(pi)) != small.order:
        raise DomainMismatch(f"{big.spec} -> {small.spec} is not onto")
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, big.order, (2, 20000))
    if not np.array_equal(pi[big.mul(a, b)], small.mul(pi[a], pi[b])):
        raise DomainMismatch(f"{big.spec} -> {small.spec} is not a homomorphism")


def make_tower(family: str, levels, p: int | None = None) -> QuotientTower:
    """Build a tower.

    dihedral: levels are n (D_n); psl2: levels are q, reordered by |PSL(2,q)|; sl2-mod-p: levels are
    exponents n for SL(2, Z/p^n Z) with reduction maps; custom: group specs.
    """
    levels = list(levels)
    if family == "dihedral":
        groups = [build_group(f"dihedral:{int(n)}") for n in levels]
    elif family in ("psl2", "psl2-family"):
        family = "psl2"
        # |PSL(2,8)| > |PSL(2,9)|, so list levels by group order
        groups = sorted((build_group(f"psl2:{int(q)}") for q in levels), key=lambda G: G.order)
        levels = [G.q for G in groups]
    elif family == "sl2-mod-p":
        if p is None:
            raise ParseError("sl2-mod-p needs a prime p")
        groups = [build_group(f"sl2:{p ** int(n)}") for n in levels]
        surj = [reduction_map(big, small) for big, small in zip(groups[1:], groups)]
        return QuotientTower(family, levels, groups, surj)
    elif family == "custom":
        groups = [build_group(str(s)) for s in levels]
    else:
        raise ParseError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return QuotientTower(family, levels, groups)


def _ratio(fiber: int, order: int) -> float:
    if fiber <= 1 or order <= 1:
        return 0.0
    return math.log(fiber) / math.log(order)


def quotient_fiber_ratio(Q: Group, w: Word, g: int = 0, d: int | None = None,
                         budget: int = DEFAULT_BUDGET, workers: int = 1) -> float:
    """ln|w_Q^-1(g)| / ln|Q|, with w regarded as a word in d >= w.d variables.

    Empty fibers report 0.
    """
    if not 0 <= g < Q.order:
        raise TargetNotInGroup(g)
    d = d or w.d
    if d < w.d:
        raise DomainMismatch(f"d={d} is smaller than the word's arity {w.d}")
    fiber = distribution(Q, w, budget, workers).count(g) * Q.order ** (d - w.d)
    return _ratio(fiber, Q.order)


def coset_labels(G: Group, N) -> np.ndarray:
    """label[x] = smallest element index in the coset x N."""
    N = np.asarray(N, dtype=np.int64)
    label = np.full(G.order, -1, dtype=np.int64)
    for x in range(G.order):
        if label[x] < 0:
            label[np.asarray(G.mul(x, N))] = x
    return label


def image_fiber_ratio(G: Group, N, w: Word, g: int = 0, d: int | None = None,
                      budget: int = DEFAULT_BUDGET) -> float:
    """ln|S N^d / N^d| / ln|G/N| for S = w^-1(g) in G^d.

    A quotient by N = G is a single coset and reports 0.
    """
    N = np.unique(np.asarray(N, dtype=np.int64))
    if not 0 <= g < G.order:
        raise TargetNotInGroup(g)
    if N[0] != 0 or not is_normal(G, N):
        raise NotNormal("N is not a normal subgroup")
    d = d or w.d
    index = G.order // len(N)
    if index == 1:
        return 0.0
    total = G.order**w.d
    _guard(total, budget)
    label = coset_labels(G, N)
    rank = np.unique(label, return_inverse=True)[1]
    ts = tuple_arrays(G.order, w.d, 0, total)
    hit = evaluate_arrays(w, G, ts) == g
    code = np.zeros(np.count_nonzero(hit), dtype=np.int64)
    for t in ts:
        code = code * index + rank[t[hit]]
    images = len(np.unique(code)) * index ** (d - w.d)
    return _ratio(images, index)


@dataclass(frozen=True)
class LevelRecord:
    level: object
    group: str
    order: int
    fiber: int
    ratio: float
    running_min: float


@dataclass(eq=False)
class HdimProfile:
    family: str
    word: str
    selector: str
    d: int
    records: list[LevelRecord] = field(default_factory=list)

    @property
    def running_min(self) -> float:
        return self.records[-1].running_min if self.records else math.inf


def hdim_profile(tower: QuotientTower, w: Word, selector: str = "identity", d: int | None = None,
                 budget: int = DEFAULT_BUDGET, workers: int = 1) -> HdimProfile:
    """Per-level fiber ratios with running minimum.

    selector ``identity`` measures the fiber over 1, ``max`` the largest fiber.
    """
    if selector not in ("identity", "max"):
        raise ParseError(f"selector must be identity or max, not {selector!r}")
    d = d or w.d
    profile = HdimProfile(tower.family, str(w), selector, d)
    running = math.inf
    for level, Q in zip(tower.levels, tower.quotients):
        dist = distribution(Q, w, budget, workers)
        fiber = (dist.count(0) if selector == "identity" else dist.max_fiber) * Q.order ** (d - w.d)
        r = _ratio(fiber, Q.order)
        running = min(running, r)
        profile.records.append(LevelRecord(level, Q.spec, Q.order, fiber, r, running))
    return profile
