"""Word equations in subgroups of Aut(T) wr S_k: pushing permutations to the right,
splitting into per-coordinate equations, and the disjoint-equation bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainMismatch, PreconditionViolation, ReducednessViolation
from .fibers import DEFAULT_BUDGET, coset_epsilon, distribution
from .groups import WreathGroup, _cycle_string, make_extension
from .words import Word, evaluate_arrays

Perm = tuple[int, ...]


def perm_compose(s: Perm, r: Perm) -> Perm:
    """s then r, matching the wreath top-group product."""
    return tuple(r[x] for x in s)


def perm_inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, x in enumerate(s):
        out[x] = i
    return tuple(out)


def perm_act(s: Perm, vec):
    """(s . v)_j = v_{s(j)}."""
    return tuple(vec[x] for x in s)


@dataclass(frozen=True)
class WreathCosetSpec:
    """g_i = (h_{i1}, ..., h_{ik}) . sigma_i for i = 1..d (0-based coordinates internally)."""

    group: WreathGroup
    h: tuple[tuple[int, ...], ...]
    sigmas: tuple[Perm, ...]

    @classmethod
    def from_elements(cls, G: WreathGroup, cosets) -> "WreathCosetSpec":
        parts = [G.parts(int(g)) for g in cosets]
        return cls(G, tuple(p[0] for p in parts), tuple(p[1] for p in parts))

    @property
    def k(self) -> int:
        return self.group.k

    @property
    def d(self) -> int:
        return len(self.sigmas)

    def elements(self) -> list[int]:
        G = self.group
        return [G.element(h, G.top.index_of(list(s))) for h, s in zip(self.h, self.sigmas)]


@dataclass(frozen=True)
class PushRightResult:
    taus: tuple[Perm, ...]
    sigma: Perm

    def as_dict(self) -> dict:
        return {"sigma": _cycle_string(self.sigma), "taus": [_cycle_string(t) for t in self.taus]}


def push_right(w: Word, spec: WreathCosetSpec) -> PushRightResult:
    """Move every sigma_{n_i} to the right end of the product.

    With prefix P_i = sigma_{n_1}^{e_1} ... sigma_{n_{i-1}}^{e_{i-1}}, letter i
    contributes tau_i(u_{n_i})^{e_i} where tau_i = P_i for e_i = +1 and
    tau_i = P_{i+1} for e_i = -1; sigma = P_{l+1}.
    """
    if spec.d != w.d:
        raise DomainMismatch(f"word has d={w.d}, coset spec has {spec.d}")
    prefix: Perm = tuple(range(spec.k))
    taus = []
    for n, e in w.letters:
        s = spec.sigmas[n - 1]
        if e > 0:
            taus.append(prefix)
            prefix = perm_compose(prefix, s)
        else:
            prefix = perm_compose(prefix, perm_inverse(s))
            taus.append(prefix)
    return PushRightResult(tuple(taus), prefix)


def evaluate_pushed(w: Word, spec: WreathCosetSpec, result: PushRightResult, socle_tuples) -> np.ndarray:
    """Evaluate tau_1(u_{n_1})^{e_1} ... tau_l(u_{n_l})^{e_l} sigma with u_i = s_i h_i.

    ``socle_tuples[i]`` is an (N, k) array of T-indices for variable i+1.
    Returns G-indices.
    """
    G = spec.group
    B = G.base
    emb = G.socle_embed
    us = []
    for i in range(spec.d):
        t = np.asarray(socle_tuples[i], dtype=np.int64)
        us.append(np.asarray(B.mul(emb[t], np.asarray(spec.h[i])[None, :])))
    base = None
    for (n, e), tau in zip(w.letters, result.taus):
        u = us[n - 1]
        if e < 0:
            u = np.asarray(B.inv(u))
        x = u[:, list(tau)]
        base = x if base is None else np.asarray(B.mul(base, x))
    return G.encode(base, G.top.index_of(list(result.sigma)))


def evaluate_direct(w: Word, spec: WreathCosetSpec, socle_tuples) -> np.ndarray:
    """w(s_1 g_1, ..., s_d g_d) evaluated with the wreath product itself."""
    G = spec.group
    emb = G.socle_embed
    xs = []
    for i, g in enumerate(spec.elements()):
        s = G.encode(emb[np.asarray(socle_tuples[i], dtype=np.int64)], 0)
        xs.append(np.asarray(G.mul(s, g)))
    return evaluate_arrays(w, G, xs)


@dataclass(frozen=True)
class ComponentEquation:
    """Coordinate j (1-based): prod_i (t_{n_i, tau_i(j)} h_{n_i, tau_i(j)})^{e_i} = c_j.

    letters: ((variable, coordinate), exponent, h) with 1-based variable pairs.
    """

    coordinate: int
    letters: tuple[tuple[tuple[int, int], int, int], ...]
    target: int

    @property
    def variables(self) -> frozenset[tuple[int, int]]:
        return frozenset(v for v, _, _ in self.letters)


def component_equations(w: Word, spec: WreathCosetSpec, target: int) -> tuple[bool, list[ComponentEquation]]:
    """Split w(s_1 g_1, ..., s_d g_d) = target into k equations over T-cosets."""
    G = spec.group
    res = push_right(w, spec)
    c, perm = G.parts(int(target))
    if perm != res.sigma:
        return False, []
    eqs = []
    for j in range(spec.k):
        letters = []
        for (n, e), tau in zip(w.letters, res.taus):
            col = tau[j]
            letters.append(((n, col + 1), e, spec.h[n - 1][col]))
        for (v1, e1, _), (v2, e2, _) in zip(letters, letters[1:]):
            if v1 == v2 and e1 != e2:
                raise ReducednessViolation(f"coordinate {j + 1}: {v1} cancels")
        eqs.append(ComponentEquation(j + 1, tuple(letters), c[j]))
    occurrences: dict[tuple[int, int], int] = {}
    for eq in eqs:
        for v in eq.variables:
            occurrences[v] = occurrences.get(v, 0) + 1
    if any(n > w.l for n in occurrences.values()):
        raise ReducednessViolation("a variable occurs in more than l equations")
    return True, eqs


def disjoint_bound(k: int, l: int) -> int:
    return math.ceil(k / (l * l - l + 1))


def select_disjoint(sets, l: int) -> list[int]:
    """First-fit: take the first remaining set, drop every set meeting it, repeat.

    Each pick removes at most l(l-1) other sets, so at least
    ceil(k / (l^2 - l + 1)) sets are selected.
    """
    sets = [frozenset(s) for s in sets]
    counts: dict = {}
    for s in sets:
        if len(s) > l:
            raise PreconditionViolation(f"set of size {len(s)} exceeds l={l}")
        for v in s:
            counts[v] = counts.get(v, 0) + 1
    if any(n > l for n in counts.values()):
        raise PreconditionViolation(f"a variable occurs in more than l={l} sets")
    chosen, used = [], set()
    for i, s in enumerate(sets):
        if not (s & used):
            chosen.append(i)
            used |= s
    return chosen


@dataclass
class SemisimpleReport:
    group: str
    T: str
    k: int
    word: str
    sigma_taus: dict
    num_components: int
    num_disjoint: int
    bound_m: int
    max_prob: float
    max_prob_exact: str | None
    delta_hat: float
    epsilon_pred: float
    passed: bool
    seed: int
    budget: int
    sampled: bool

    def as_dict(self) -> dict:
        return {
            "group": self.group, "T": self.T, "k": self.k, "word": self.word,
            "sigma_taus": self.sigma_taus, "num_components": self.num_components,
            "num_disjoint": self.num_disjoint, "bound_m": self.bound_m,
            "max_prob": self.max_prob, "max_prob_exact": self.max_prob_exact,
            "delta_hat": self.delta_hat, "epsilon_pred": self.epsilon_pred, "pass": self.passed,
            "sampled": self.sampled, "seed": self.seed, "budget": self.budget,
        }


def sampled_max_prob(G, w: Word, samples: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    xs = [rng.integers(0, G.order, samples) for _ in range(w.d)]
    counts = np.bincount(evaluate_arrays(w, G, xs), minlength=G.order)
    return counts.max() / samples


def semisimple_prob_check(G: WreathGroup, w: Word, budget: int = DEFAULT_BUDGET, seed: int = 0,
                          workers: int = 1, samples: int = 10**6) -> SemisimpleReport:
    """Compare max_g p_{w,G}(g) with |T^k|^(-delta_hat/(l^2-l+1)).

    delta_hat is the coset exponent measured on T inside the coordinate
    automorphism group; the comparison is empirical, not a proof.
    """
    if not isinstance(G, WreathGroup):
        raise DomainMismatch("semisimple check needs a wreath or power group")
    T, k, l = G.socle, G.k, w.l
    if G.order**w.d <= budget:
        dist = distribution(G, w, budget, workers)
        exact = dist.max_prob()
        max_prob, exact_text, sampled = float(exact), f"{exact.numerator}/{exact.denominator}", False
    else:
        max_prob = sampled_max_prob(G, w, min(samples, budget), seed)
        exact_text, sampled = None, True
    ext = make_extension(T, G.base, G.socle_embed, check=False)
    delta = coset_epsilon(ext, w, budget, seed, workers).epsilon_hat
    eps_pred = delta / (l * l - l + 1)
    rng = np.random.default_rng(seed)
    cosets = [int(x) for x in rng.integers(0, G.order, w.d)]
    spec = WreathCosetSpec.from_elements(G, cosets)
    res = push_right(w, spec)
    target = int(evaluate_arrays(w, G, [np.asarray(g) for g in cosets]))
    _, eqs = component_equations(w, spec, target)
    chosen = select_disjoint([e.variables for e in eqs], l)
    bound = (T.order**k) ** (-eps_pred)
    return SemisimpleReport(
        group=G.spec, T=T.spec, k=k, word=str(w), sigma_taus=res.as_dict(), num_components=len(eqs),
        num_disjoint=len(chosen), bound_m=disjoint_bound(k, l), max_prob=max_prob,
        max_prob_exact=exact_text, delta_hat=delta, epsilon_pred=eps_pred, passed=bool(max_prob <= bound),
        seed=seed, budget=budget, sampled=sampled,
    )


def exact_max_prob(G, w: Word, budget: int = DEFAULT_BUDGET, workers: int = 1) -> Fraction:
    return distribution(G, w, budget, workers).max_prob()
