import time
from fractions import Fraction
from math import gcd, lcm

import pytest
from sympy import primerange

from levelraise.congruence import dual_annihilators
from levelraise.exact import char_poly
from levelraise.level.instance import classes_for
from levelraise.quaternion.algebra import build_algebra, hilbert_symbol
from levelraise.quaternion.brandt import (
    brandt_matrices,
    brandt_matrix,
    divisor_sum_prime_to,
    eisenstein_system,
    neighbor_brandt,
    weighted_pairing,
)
from levelraise.quaternion.ideals import ideal_classes
from levelraise.quaternion.order import maximal_order

NMAX = 50


@pytest.fixture(scope="module", params=[11, 23])
def brandt(request):
    p = request.param
    classes = classes_for(p)
    return classes, brandt_matrices(classes, NMAX)


# ---------------------------------------------------------------- algebra and order

@pytest.mark.parametrize("p, ab", [(11, (-1, -11)), (2, (-1, -1)), (13, (-2, -13)), (17, (-3, -17))])
def test_algebra_parameters(p, ab):
    alg = build_algebra(p)
    assert (alg.a, alg.b) == ab
    assert alg.is_definite()
    assert alg.ramified_primes() == [p]


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 29, 41, 73, 89])
def test_ramified_exactly_at_p(p):
    alg = build_algebra(p)
    for v in [None, 2, 3, 5, 7, 11, 13, 17, p]:
        assert (hilbert_symbol(alg.a, alg.b, v) == -1) == (v in (None, p))


def test_build_algebra_rejects_composite():
    with pytest.raises(ValueError):
        build_algebra(15)


def _quat(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.mark.parametrize("p, basis", [
    (11, [_quat(1, 0, 0, 0), _quat(0, 1, 0, 0), _quat(0, "1/2", "1/2", 0), _quat("1/2", 0, 0, "1/2")]),
    (2, [_quat(1, 0, 0, 0), _quat(0, 1, 0, 0), _quat(0, 0, 1, 0), _quat("1/2", "1/2", "1/2", "1/2")]),
])
def test_maximal_order_basis(p, basis):
    order = maximal_order(build_algebra(p))
    assert list(order.basis) == basis
    assert order.discriminant_square == p * p


@pytest.mark.parametrize("p", [2, 3, 5, 11, 13, 17, 23, 31, 41])
def test_maximal_order_certificates(p):
    order = maximal_order(build_algebra(p))
    assert order.is_maximal()
    assert order.integrality_ok()
    assert all(isinstance(t, int) for t in order.trd_basis)


# ---------------------------------------------------------------- ideal classes

def test_p11_classes_within_one_second():
    start = time.perf_counter()
    classes = ideal_classes(maximal_order(build_algebra(11)))
    assert time.perf_counter() - start < 1.0
    assert classes.h == 2
    assert sorted(classes.weights) == [4, 6]
    assert classes.mass() == Fraction(5, 12)


def test_hurwitz_order_has_one_class():
    classes = ideal_classes(maximal_order(build_algebra(2)))
    assert classes.h == 1
    assert classes.weights == [24]
    assert classes.mass() == Fraction(1, 24)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41])
def test_mass_formula(p):
    assert classes_for(p).mass() == Fraction(p - 1, 24)


def test_classes_sorted_by_weight():
    for p in (17, 23, 31):
        ws = classes_for(p).weights
        assert ws == sorted(ws)


# ---------------------------------------------------------------- Brandt matrices

def test_b1_is_identity(brandt):
    classes, B = brandt
    assert B[1].tolist() == [[int(i == j) for j in range(classes.h)] for i in range(classes.h)]


def test_p11_b2():
    classes = classes_for(11)
    b2 = brandt_matrix(classes, 2).matrix
    assert b2.tolist() == [[1, 2], [3, 0]]
    assert char_poly(b2) == [1, -1, -6]  # (x - 3)(x + 2)


def test_brandt_matrix_rejects_multiples_of_p():
    with pytest.raises(ValueError):
        brandt_matrix(classes_for(11), 22)


def test_theta_counts_match_neighbor_counts(brandt):
    classes, B = brandt
    for r in (2, 3, 5):
        assert neighbor_brandt(classes, r) == B[r]


def test_row_sums_are_divisor_sums(brandt):
    classes, B = brandt
    for n, m in B.items():
        assert {sum(row) for row in m.rows} == {divisor_sum_prime_to(n, classes.p)}


def test_commutation(brandt):
    _, B = brandt
    ns = sorted(B)
    for a in ns:
        for b in ns:
            assert B[a] @ B[b] == B[b] @ B[a]


def test_coprime_multiplicativity(brandt):
    _, B = brandt
    for a in B:
        for b in B:
            if a * b <= NMAX and gcd(a, b) == 1:
                assert B[a] @ B[b] == B[a * b]


def test_prime_power_recursion(brandt):
    classes, B = brandt
    for r in primerange(2, NMAX + 1):
        if r == classes.p:
            continue
        k = 1
        while r ** (k + 1) <= NMAX:
            assert B[r ** (k + 1)] == B[r] @ B[r ** k] - B[r ** (k - 1)].scale(r)
            k += 1


def test_self_adjoint_for_weights(brandt):
    classes, B = brandt
    W = classes.weights
    for m in B.values():
        assert all(W[j] * m[i, j] == W[i] * m[j, i] for i in range(classes.h) for j in range(classes.h))


# ---------------------------------------------------------------- pairing and Eisenstein system

def test_weighted_pairing_p11():
    L = weighted_pairing(classes_for(11))
    assert L.gram.entries() == [[Fraction(1, 4), 0], [0, Fraction(1, 6)]]
    assert dual_annihilators(L) == (12, 1)


def test_weighted_pairing_p2():
    L = weighted_pairing(ideal_classes(maximal_order(build_algebra(2))))
    assert L.gram.entries() == [[Fraction(1, 24)]]


@pytest.mark.parametrize("p", [11, 23, 29])
def test_dual_annihilators_of_weighted_pairing(p):
    classes = classes_for(p)
    assert dual_annihilators(weighted_pairing(classes)) == (lcm(*classes.weights), 1)


def test_eisenstein_system_values():
    classes = classes_for(11)
    labels = [r for r in primerange(2, NMAX + 1) if r != 11]
    eis = eisenstein_system(classes, labels)
    assert eis[2] == 3 and eis[3] == 4
    assert all(eis[r] == 1 + r for r in labels)


def test_eisenstein_system_rejects_p():
    with pytest.raises(ValueError):
        eisenstein_system(classes_for(11), [2, 11])
