"""Cayley tables, subgroup checks, double-coset schemes, and coset convolution."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from hypergroups.errors import InvalidCayleyTable, NotASubgroup, ParseError
from hypergroups.groups import (
    check_subgroup,
    cyclic_group,
    group_from_table,
    hecke_convolution,
    scheme_from_group_quotient,
    symmetric_group,
)
from hypergroups.hypergroup import hypergroup_from_scheme
from hypergroups.schemes import is_commutative


def test_cyclic_group_structure():
    g = cyclic_group(6)
    assert g.order == 6
    assert g.identity == 0
    for i in range(6):
        for j in range(6):
            assert g.mul[i, j] == (i + j) % 6
        assert g.inverse[i] == (-i) % 6


def test_symmetric_group_structure():
    g = symmetric_group(3)
    assert g.order == 6
    assert g.elements[g.identity] == (0, 1, 2)
    # composition matches applying the right permutation first
    for p, q in itertools.product(g.elements, repeat=2):
        composed = tuple(p[q[i]] for i in range(3))
        assert g.elements[g.mul[g.index(p), g.index(q)]] == composed


def test_group_from_table_accepts_labels_and_indices():
    table_idx = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    table_lbl = [["abc"[(i + j) % 3] for j in range(3)] for i in range(3)]
    g1 = group_from_table([0, 1, 2], table_idx)
    g2 = group_from_table(["a", "b", "c"], table_lbl)
    assert np.array_equal(g1.mul, g2.mul)


def test_non_latin_table_rejected():
    with pytest.raises(InvalidCayleyTable):
        group_from_table([0, 1], [[0, 0], [1, 1]])


def test_no_identity_rejected():
    # x * y = x - y mod 3 is a latin square with no two-sided identity
    table = [[(i - j) % 3 for j in range(3)] for i in range(3)]
    with pytest.raises(InvalidCayleyTable):
        group_from_table([0, 1, 2], table)


def test_nonassociative_loop_rejected():
    # smallest nonassociative loop (order 5); verify nonassociativity
    # by brute force before asserting the builder refuses it
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 3, 4, 0, 1],
        [3, 4, 1, 2, 0],
        [4, 2, 0, 1, 3],
    ]
    t = np.array(table)
    assert all(sorted(t[i]) == list(range(5)) for i in range(5))
    assert all(sorted(t[:, i]) == list(range(5)) for i in range(5))
    assert not all(
        t[t[i, j], k] == t[i, t[j, k]]
        for i, j, k in itertools.product(range(5), repeat=3)
    )
    with pytest.raises(InvalidCayleyTable):
        group_from_table([0, 1, 2, 3, 4], table)


def test_check_subgroup_accepts_and_rejects():
    g = symmetric_group(3)
    sub = check_subgroup(g, [(0, 1, 2), (1, 0, 2)])
    assert len(sub) == 2
    # A3 as indices
    a3 = check_subgroup(g, [g.index(p) for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]])
    assert len(a3) == 3
    with pytest.raises(NotASubgroup):
        check_subgroup(g, [(1, 0, 2)])  # not closed: square escapes... is identity
    with pytest.raises(NotASubgroup):
        check_subgroup(g, [(0, 1, 2), (1, 0, 2), (0, 2, 1)])  # products escape
    with pytest.raises(ParseError):
        check_subgroup(g, [(9, 9, 9)])


def test_quotient_scheme_against_brute_force():
    """Double-coset partition recomputed with raw set algebra."""
    g = symmetric_group(3)
    h = [(0, 1, 2), (1, 0, 2)]
    s = scheme_from_group_quotient(g, h)

    elements = list(g.elements)
    hset = set(h)

    def mul(p, q):
        return tuple(p[q[i]] for i in range(3))

    def inv(p):
        out = [0] * 3
        for i, v in enumerate(p):
            out[v] = i
        return tuple(out)

    cosets = []
    seen = set()
    for x in elements:
        cs = frozenset(mul(x, hh) for hh in hset)
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    assert s.n_points == len(cosets) == 3

    def double_coset(x):
        return frozenset(mul(mul(h1, x), h2) for h1 in hset for h2 in hset)

    doubles = {double_coset(x) for x in elements}
    assert s.n_classes == len(doubles) == 2

    # align local coset order with the scheme's point labels
    reps = [sorted(c) for c in cosets]
    order = [s.points.index(f"{min(c)}H") for c in cosets]

    # the class of a pair (xH, yH) must be a function of the double coset
    # of x^-1 y: same double coset <=> same class, for every representative
    def pair_class(i, j):
        return s.relation[order[i], order[j]]

    for ci, cj in itertools.product(range(len(cosets)), repeat=2):
        for ck, cl in itertools.product(range(len(cosets)), repeat=2):
            for x, y, u, v in itertools.product(reps[ci], reps[cj], reps[ck], reps[cl]):
                same_dc = double_coset(mul(inv(x), y)) == double_coset(mul(inv(u), v))
                assert same_dc == (pair_class(ci, cj) == pair_class(ck, cl))

    # valency of each class = number of left cosets in its double coset
    for k, _ in enumerate(s.classes):
        ci, cj = next(
            (i, j)
            for i in range(len(cosets))
            for j in range(len(cosets))
            if pair_class(i, j) == k
        )
        dc = double_coset(mul(inv(reps[ci][0]), reps[cj][0]))
        assert s.valencies[k] == len(dc) // len(hset)


def test_gelfand_pair_examples():
    assert is_commutative(catalog_scheme_s3_h())
    assert is_commutative(catalog_scheme_s4_s3())


def catalog_scheme_s3_h():
    g = symmetric_group(3)
    return scheme_from_group_quotient(g, [(0, 1, 2), (1, 0, 2)])


def catalog_scheme_s4_s3():
    g = symmetric_group(4)
    return scheme_from_group_quotient(g, [p for p in g.elements if p[3] == 3])


def test_regular_scheme_of_nonabelian_group_not_commutative():
    g = symmetric_group(3)
    s = scheme_from_group_quotient(g, [g.identity])
    assert s.n_points == 6
    assert s.n_classes == 6
    assert not is_commutative(s)


def test_regular_scheme_of_abelian_group_commutative():
    g = cyclic_group(6)
    s = scheme_from_group_quotient(g, [0])
    assert is_commutative(s)
    assert s.n_classes == 6


@pytest.mark.parametrize(
    "build_group,subgroup",
    [
        (lambda: symmetric_group(3), [(0, 1, 2), (1, 0, 2)]),
        (lambda: symmetric_group(4), "stabilizer"),
        (lambda: cyclic_group(6), [0, 3]),
        (lambda: cyclic_group(4), [0]),
    ],
)
def test_coset_convolution_equals_scheme_convolution(build_group, subgroup):
    """Counting products of coset representatives reproduces the exact
    rational convolution of the quotient scheme."""
    g = build_group()
    if subgroup == "stabilizer":
        subgroup = [p for p in g.elements if p[3] == 3]
    s = scheme_from_group_quotient(g, subgroup)
    h = hypergroup_from_scheme(s)
    d = s.n_classes
    for a in range(d):
        for b in range(d):
            measured = hecke_convolution(g, subgroup, a, b)
            for k in range(d):
                expected = Fraction(h.conv[a, b, k])
                assert measured.get(s.classes[k], Fraction(0)) == expected, (a, b, k)


def test_hecke_weights_are_probabilities():
    g = symmetric_group(4)
    sub = [p for p in g.elements if p[3] == 3]
    out = hecke_convolution(g, sub, 1, 1)
    assert sum(out.values()) == 1
    assert all(v >= 0 for v in out.values())
