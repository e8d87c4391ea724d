import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from wordlab.errors import BudgetExceeded, TargetNotInGroup
from wordlab.fibers import (
    coset_counts_direct,
    coset_counts_over_A,
    coset_epsilon,
    coset_fiber_count,
    coset_fiber_count_direct,
    coset_image_size,
    distribution,
    epsilon_hat,
    fiber_count,
    prob,
)
from wordlab.groups import build_aut_group, build_group, conjugacy_classes, overgroup
from wordlab.parallel import count_chunks, tuple_arrays
from wordlab.words import parse_word

COMM = parse_word("x1 x2 x1^-1 x2^-1")
SQ = parse_word("x1^2")


def brute_counts(G, w):
    """Scalar, one tuple at a time."""
    out = Counter()
    for tup in itertools.product(range(G.order), repeat=w.d):
        x = 0
        for n, e in w.letters:
            t = tup[n - 1]
            x = G.mul(x, t if e > 0 else G.inv(t))
        out[int(x)] += 1
    return out


def test_commuting_pairs_s3():
    G = build_group("sym:3")
    dist = distribution(G, COMM)
    assert dist.count(0) == 18 and dist.total == 36
    # sum of centraliser orders = |G| * number of classes
    assert dist.count(0) == G.order * len(conjugacy_classes(G))


def test_square_roots_of_identity_d5():
    assert fiber_count(build_group("dihedral:5"), SQ, 0) == 6


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13, 15])
def test_dihedral_square_probability(n):
    assert prob(build_group(f"dihedral:{n}"), SQ, 0) == Fraction(n + 1, 2 * n)


def test_identity_word_is_uniform():
    G = build_group("alt:4")
    dist = distribution(G, parse_word("x1"))
    assert np.all(dist.counts == 1)
    assert epsilon_hat(G, parse_word("x1")).epsilon_hat == 1.0


def test_psl2_5_involutions():
    G = build_group("psl2:5")
    assert prob(G, SQ, 0) == Fraction(4, 15)
    invol = sum(1 for x in range(1, G.order) if G.element_order(x) == 2)
    assert invol + 1 == 16


def test_c2_square():
    G = build_group("cyclic:2")
    assert prob(G, SQ, 0) == 1
    assert epsilon_hat(G, SQ).epsilon_hat == 0.0


def test_a5_square_on_order_three():
    G = build_group("alt:5")
    dist = distribution(G, SQ)
    threes = [x for x in range(G.order) if G.element_order(x) == 3]
    assert len(threes) == 20
    assert all(dist.count(x) == 1 for x in threes)


def test_a5_square_epsilon():
    rep = epsilon_hat(build_group("alt:5"), SQ)
    assert rep.max_fiber == 16 and rep.argmax == (0,)
    assert rep.epsilon_hat == pytest.approx(1 - math.log(16) / math.log(60))
    assert rep.epsilon_hat == pytest.approx(0.3228, abs=1e-4)


@pytest.mark.parametrize("spec,word", [
    ("sym:3", "x1 x2 x1^-1 x2^-1"), ("dihedral:4", "x1^2 x2"), ("alt:4", "x1 x2^-1 x1"),
    ("cyclic:6", "x1^3"), ("sym:4", "x1^-1 x2^2"),
])
def test_distribution_matches_brute_force(spec, word):
    G = build_group(spec)
    w = parse_word(word)
    dist = distribution(G, w)
    brute = brute_counts(G, w)
    assert all(dist.count(g) == brute.get(g, 0) for g in range(G.order))
    assert dist.counts.sum() == G.order**w.d


def test_parallel_determinism():
    G = build_group("psl2:13")
    w = parse_word("x1 x2^-1 x1")
    one = distribution(G, w, workers=1).counts
    four = distribution(G, w, workers=4).counts
    assert G.order**2 > 2**18  # more than one chunk
    assert np.array_equal(one, four)


def test_count_chunks_independent_of_chunking():
    def task(start, stop):
        a, b = tuple_arrays(50, 2, start, stop)
        return np.bincount((a * b) % 7, minlength=7)

    ref = count_chunks(task, 2500, 7, 1, 2500)
    for workers, chunk in [(1, 7), (3, 100), (4, 333)]:
        assert np.array_equal(count_chunks(task, 2500, 7, workers, chunk), ref)


def test_budget_guard():
    with pytest.raises(BudgetExceeded) as err:
        distribution(build_group("alt:5"), COMM, budget=1000)
    assert err.value.required == 3600
    with pytest.raises(TargetNotInGroup):
        fiber_count(build_group("alt:5"), SQ, 60)


def test_decay_x1_squared_and_commutator():
    for w in (SQ, COMM):
        small = distribution(build_group("psl2:5"), w).max_prob()
        large = distribution(build_group("psl2:11"), w).max_prob()
        assert large < small


# -- cosets ------------------------------------------------------------------


def test_trivial_cosets_match_fiber_count():
    ext = overgroup(build_group("alt:5"))
    for w in (SQ, COMM):
        assert coset_fiber_count(ext, w, [0] * w.d, 0) == fiber_count(ext.T, w, 0)


def test_odd_involutions_of_s5():
    ext = overgroup(build_group("alt:5"))
    S5 = ext.A
    transposition = S5.index_of((1, 0, 2, 3, 4))
    assert coset_fiber_count(ext, SQ, [transposition], 0) == 10
    assert coset_fiber_count_direct(ext, SQ, [transposition], 0) == 10
    assert coset_image_size(ext, SQ, [transposition]) > 1
    # targets outside T * w(g) get nothing
    assert coset_fiber_count(ext, SQ, [transposition], transposition) == 0


def test_image_sizes():
    ext = build_aut_group(build_group("psl2:7"))
    assert coset_image_size(ext, parse_word("x1"), [int(ext.coset_reps[1])]) == ext.T.order
    assert coset_image_size(ext, COMM, [0, 0]) > 1


@pytest.mark.parametrize("spec", ["alt:4", "alt:5", "psl2:5", "psl2:8", "cyclic:7"])
def test_rewrite_counts_equal_direct(spec):
    ext = overgroup(build_group(spec))
    rng = np.random.default_rng(11)
    for word in ["x1^2", "x1 x2 x1^-1 x2^-1", "x1 x2^-1 x2^-1", "x2 x1 x1 x2"]:
        w = parse_word(word)
        for _ in range(4):
            cosets = [int(x) for x in rng.integers(0, ext.A.order, w.d)]
            assert np.array_equal(coset_counts_over_A(ext, w, cosets), coset_counts_direct(ext, w, cosets))


def test_coset_epsilon_psl2_5_exhaustive():
    ext = build_aut_group(build_group("psl2:5"))
    rep = coset_epsilon(ext, SQ)
    assert rep.exhaustive and rep.tested == 2
    # oracle: square roots counted per coset directly in Aut(T)
    best = max(coset_counts_direct(ext, SQ, [int(g)]).max() for g in ext.coset_reps)
    assert rep.max_fiber == best


def test_coset_epsilon_psl2_8():
    ext = build_aut_group(build_group("psl2:8"))
    rep = coset_epsilon(ext, SQ)
    assert rep.tested == 3
    assert rep.epsilon_hat > 0


def test_coset_epsilon_sampling_reproducible():
    ext = build_aut_group(build_group("psl2:8"))
    a = coset_epsilon(ext, COMM, seed=4, max_exhaustive=4, samples=5)
    b = coset_epsilon(ext, COMM, seed=4, max_exhaustive=4, samples=5)
    assert not a.exhaustive and a.seed == 4
    assert (a.max_fiber, a.argmax, a.tested) == (b.max_fiber, b.argmax, b.tested)
