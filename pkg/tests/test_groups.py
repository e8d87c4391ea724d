import itertools
import math

import numpy as np
import pytest

from wordlab.errors import DomainMismatch, NotPrimePower, OrderBudgetExceeded, ParseError, UnsupportedKind
from wordlab.field import field_for_order
from wordlab.groups import (
    Automorphism,
    apply_automorphism,
    build_aut_group,
    build_group,
    conjugacy_classes,
    direct_power,
    is_normal,
    normal_subgroups,
    overgroup,
    psl2_order,
    verify_group,
)


def brute_psl2_order(q):
    # scalar field arithmetic only: collect {M, -M} classes of det-1 matrices
    F = field_for_order(q)
    classes = set()
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) == 1:
            m = (a, b, c, d)
            classes.add(frozenset([m, tuple(F.neg(x) for x in m)]))
    return len(classes)


@pytest.mark.parametrize("spec,order", [
    ("cyclic:7", 7), ("dihedral:5", 10), ("sym:4", 24), ("alt:5", 60),
    ("pgl2:5", 120), ("autpsl2:4", 120), ("power:alt:5:k=2", 3600), ("power:dihedral:3:k=3", 216),
])
def test_orders(spec, order):
    assert build_group(spec).order == order


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13])
def test_psl2_order_formula(q):
    G = build_group(f"psl2:{q}")
    assert G.order == q * (q * q - 1) // math.gcd(2, q - 1) == psl2_order(q)


@pytest.mark.parametrize("q", [4, 5, 7])
def test_psl2_order_by_brute_force(q):
    assert build_group(f"psl2:{q}").order == brute_psl2_order(q)


@pytest.mark.parametrize("q", [5, 8, 9])
def test_psl2_canonical_representatives(q):
    G = build_group(f"psl2:{q}")
    F = G.field
    for row in G.rows:
        lead = next(int(x) for x in row if x)
        assert lead <= F.neg(lead)
    assert np.array_equal(G.index_of_rows(G.rows), np.arange(G.order))


def test_parse_errors():
    with pytest.raises(ParseError):
        build_group("quaternion:8")
    with pytest.raises(NotPrimePower):
        build_group("psl2:6")
    with pytest.raises(OrderBudgetExceeded):
        build_group("sym:8")
    with pytest.raises(OrderBudgetExceeded):
        build_group("power:alt:5:k=5")
    with pytest.raises(ParseError):
        build_group("power:alt:5")


@pytest.mark.parametrize("spec", ["dihedral:7", "sym:4", "psl2:8", "autpsl2:5", "power:cyclic:3:k=3",
                                  "wreath:dihedral:3:k=2:top=(1 2):base=inner"])
def test_table_and_arithmetic_agree(spec):
    G = build_group(spec)
    assert G.table is not None
    H = G.with_arithmetic()
    a, b = (x.ravel() for x in np.indices((G.order, G.order)))
    assert np.array_equal(G.mul(a, b), H.mul(a, b))
    assert np.array_equal(G.inv(G.elements()), H.inv(G.elements()))


def test_large_group_axioms_random():
    # above the table limit the arithmetic path is the only one
    G = build_group("power:alt:5:k=3")
    assert G.table is None
    verify_group(G, samples=20000, seed=3)


def _action_table(ext):
    """Row a = the permutation of T induced by a in A."""
    A, T = ext.A, ext.T
    h = np.repeat(A.elements(), T.order)
    t = np.tile(ext.embed, A.order)
    return ext.back[A.conj(h, t)].reshape(A.order, T.order)


@pytest.mark.parametrize("q,order", [(5, 120), (7, 336), (9, 1440)])
def test_aut_orders(q, order):
    ext = build_aut_group(build_group(f"psl2:{q}"))
    assert ext.A.order == order
    assert ext.index == order // ext.T.order


@pytest.mark.parametrize("q", [5, 8])
def test_aut_action_faithful_homomorphism(q):
    ext = build_aut_group(build_group(f"psl2:{q}"))
    act = _action_table(ext)
    assert np.all(act >= 0)
    assert all(len(set(row)) == ext.T.order for row in act)
    assert len({tuple(row) for row in act}) == ext.A.order
    rng = np.random.default_rng(q)
    for a, b in rng.integers(0, ext.A.order, (300, 2)):
        assert np.array_equal(act[ext.A.mul(a, b)], act[a][act[b]])


def test_inner_automorphisms_are_conjugation():
    T = build_group("psl2:7")
    ext = build_aut_group(T)
    every = T.elements()
    for h in (1, 17, 100):
        alpha = Automorphism.inner(ext, int(ext.embed[h]))
        assert np.array_equal(alpha.apply(every), T.conj(h, every))


def test_aut_requires_psl2():
    with pytest.raises(UnsupportedKind):
        build_aut_group(build_group("alt:5"))


def test_inner_identity_is_identity_map():
    T = build_group("psl2:5")
    ext = build_aut_group(T)
    assert np.array_equal(Automorphism.inner(ext, 0).table, T.elements())
    assert np.array_equal(Automorphism.identity(ext).table, T.elements())


def test_field_automorphism_on_diagonal_f9():
    T = build_group("psl2:9")
    F = T.field
    t = F.gen
    diag = T.index_of([t, 0, 0, F.inv(t)])
    ext = build_aut_group(T)
    image = apply_automorphism(Automorphism.frobenius(ext, 1), diag)
    t3 = F.pow(t, 3)
    assert image == T.index_of([t3, 0, 0, F.inv(t3)])


def test_automorphisms_are_homomorphisms_psl2_8():
    T = build_group("psl2:8")
    ext = build_aut_group(T)
    F = T.field
    g = F.gen
    autos = [
        Automorphism.frobenius(ext, 1),
        Automorphism.frobenius(ext, 2),
        Automorphism.diagonal(ext, [1, 0, 0, g]),
        Automorphism.composite(ext, [Automorphism.diagonal(ext, [1, 1, 0, g]), Automorphism.frobenius(ext, 1)]),
    ]
    rng = np.random.default_rng(8)
    x, y = rng.integers(0, T.order, (2, 1000))
    for alpha in autos:
        assert len(np.unique(alpha.table)) == T.order
        assert np.array_equal(alpha.apply(T.mul(x, y)), T.mul(alpha.apply(x), alpha.apply(y)))


def test_composite_order_field_then_conjugation():
    T = build_group("psl2:8")
    ext = build_aut_group(T)
    m = Automorphism.diagonal(ext, [1, 1, 0, 1])
    phi = Automorphism.frobenius(ext, 1)
    both = Automorphism.composite(ext, [m, phi])
    every = T.elements()
    assert np.array_equal(both.table, m.apply(phi.apply(every)))
    assert both.decompose() == (1, (1, 1, 0, 1))


def test_automorphism_domain_check():
    ext = build_aut_group(build_group("psl2:5"))
    with pytest.raises(DomainMismatch):
        Automorphism.frobenius(ext, 0).apply(60)


def test_direct_power_identity_and_codec():
    G = direct_power(build_group("alt:5"), 2)
    assert G.order == 3600
    assert G.element((0, 0)) == 0
    digits, s = G.decode(G.elements())
    assert np.array_equal(G.encode(digits, s), G.elements())
    # componentwise product
    a, b = G.element((3, 7)), G.element((11, 2))
    T = G.base
    assert G.parts(G.mul(a, b))[0] == (T.mul(3, 11), T.mul(7, 2))


def test_wreath_conjugation_swaps_coordinates():
    G = build_group("wreath:dihedral:3:k=2:top=(1 2):base=inner")
    assert G.order == 6 * 6 * 2
    swap = G.top.index_of((1, 0))
    s = G.element((0, 0), swap)
    for x, y in [(1, 4), (2, 5), (3, 3)]:
        a = G.element((x, y))
        assert G.conj(s, a) == G.element((y, x))
    assert G.mul(G.element((1, 2)), G.element((4, 5))) == G.element((G.base.mul(1, 4), G.base.mul(2, 5)))


def test_wreath_socle_normal_small():
    G = build_group("wreath:dihedral:3:k=2:top=(1 2):base=inner")
    socle = G.socle_elements()
    assert len(socle) == 36
    assert is_normal(G, socle)


@pytest.mark.parametrize("spec,out_order", [
    ("wreath:psl2:5:k=2:top=(1 2):base=all", 2),
    ("wreath:psl2:8:k=2:top=(1 2):base=field", 3),
    ("wreath:alt:5:k=2:top=(1 2):base=all", 2),
])
def test_wreath_socle_normal_and_index(spec, out_order):
    G = build_group(spec)
    socle = G.socle_elements()
    T = G.socle
    assert len(socle) == T.order**G.k
    k = G.k
    assert (out_order**k * math.factorial(k)) % (G.order // len(socle)) == 0
    members = np.zeros(G.order, dtype=bool)
    members[socle] = True
    rng = np.random.default_rng(0)
    for g in rng.integers(0, G.order, 40):
        assert members[G.conj(int(g), socle)].all()


def test_wreath_top_generators_checked():
    with pytest.raises(ParseError):
        build_group("wreath:alt:5:k=2:top=(1 3):base=inner")


def test_overgroups():
    assert overgroup(build_group("alt:5")).A.order == 120
    assert overgroup(build_group("cyclic:5")).A.order == 10
    assert overgroup(build_group("psl2:4")).A.order == 120


def test_normal_subgroups_small():
    S4 = build_group("sym:4")
    assert sorted(len(N) for N in normal_subgroups(S4)) == [1, 4, 12, 24]
    D6 = build_group("dihedral:6")
    assert all(is_normal(D6, N) for N in normal_subgroups(D6))
    # class sizes of S_4: 1, 3, 6, 6, 8
    assert sorted(len(c) for c in conjugacy_classes(S4)) == [1, 3, 6, 6, 8]


def test_dihedral_relations():
    n = 7
    G = build_group(f"dihedral:{n}")
    r, s = 1, n
    assert G.element_order(r) == n
    assert G.element_order(s) == 2
    assert G.mul(G.mul(s, r), s) == G.inv(r)
