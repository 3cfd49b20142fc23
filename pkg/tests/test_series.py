from fractions import Fraction
from math import comb

import pytest

from polyred.couplings import CouplingTensor
from polyred.gaussian import Q
from polyred.poly import Polynomial, PolySystem
from polyred.samples import random_couplings
from polyred.series import (
    GradedPoly,
    enumerate_trees,
    formal_inverse_fixed_point,
    inversion_defect,
    log_partition_function,
    theta_homogeneity_check,
    tree_amplitude,
    tree_oracle_inverse,
    z_det_identity_check,
)

P = Polynomial


def catalan(r):
    return comb(2 * r, r) // (r + 1)


W_CATALAN = CouplingTensor(1, 2, {(2, 0, (0, 0)): Q(1)})


def test_fixed_point_catalan_grades():
    # Independent oracle: one-variable series reversion gives Catalan numbers.
    G = formal_inverse_fixed_point(W_CATALAN, 5)
    for r in range(6):
        assert G[0].grade(r) == P.monomial((r + 1,), catalan(r))


def test_fixed_point_zero_couplings():
    w = CouplingTensor(2, 3)
    G = formal_inverse_fixed_point(w, 4)
    for i in range(2):
        assert G[i].grade(0) == P.variable(i, 2)
        for r in range(1, 5):
            assert G[i].grade(r).is_zero()


def test_fixed_point_terminates_on_triangular():
    z1, z2 = P.variable(0, 2), P.variable(1, 2)
    w = CouplingTensor.from_system(PolySystem([z1 - z2 * z2, z2]))
    G = formal_inverse_fixed_point(w, 5)
    assert G[0].grade(1) == P.monomial((0, 2), 1)
    assert G[1].grade(0) == z2
    for r in range(2, 6):
        assert G[0].grade(r).is_zero()
        assert G[1].grade(r).is_zero()


def test_defect_vanishes(rng):
    for _ in range(10):
        w = random_couplings(rng, rng.choice((1, 2)), rng.choice((2, 3, 4)))
        G = formal_inverse_fixed_point(w, 5)
        assert inversion_defect(w, G).is_zero()


def test_tree_counts():
    def count(d, weight):
        return sum(1 for t in enumerate_trees(d, weight) if t.theta_weight == weight)

    assert count(2, 1) == 1
    assert count(2, 2) == 2            # one extra vertex in either child slot
    assert count(3, 1) == 1
    assert count(3, 2) == 3            # one ternary vertex, or stacked binaries x2
    assert sum(1 for _ in enumerate_trees(3, 2)) == 4
    # binary plane trees of weight r are counted by Catalan numbers
    for r in range(1, 6):
        assert count(2, r) == catalan(r)


def test_tree_validation():
    with pytest.raises(ValueError):
        list(enumerate_trees(1, 2))
    with pytest.raises(ValueError):
        list(enumerate_trees(2, 0))


def test_single_vertex_amplitude():
    tree = next(iter(enumerate_trees(2, 1)))
    amp = tree_amplitude(tree, W_CATALAN)
    assert amp[0] == P.monomial((2,), 1)


def test_stacked_binary_amplitudes_sum():
    trees = [t for t in enumerate_trees(2, 2) if t.theta_weight == 2]
    acc = P.zero(1)
    for t in trees:
        a = tree_amplitude(t, W_CATALAN)[0]
        assert a == P.monomial((3,), 1)
        acc = acc + a
    assert acc == P.monomial((3,), 2)  # matches the grade-2 Catalan coefficient


def test_amplitude_contracts_mixed_indices():
    # one binary vertex, n = 2, coupling monomial u1*u2 with coefficient 3:
    # the contraction must reproduce exactly 3*u1*u2.
    w = CouplingTensor(2, 2, {(2, 0, (0, 1)): Q(3)})
    tree = next(iter(enumerate_trees(2, 1)))
    amp = tree_amplitude(tree, w)
    assert amp[0] == P.monomial((1, 1), 3)
    assert amp[1].is_zero()


def test_oracle_equals_fixed_point(rng):
    assert tree_oracle_inverse(W_CATALAN, 5) == formal_inverse_fixed_point(W_CATALAN, 5)
    for _ in range(6):
        n, d = rng.choice(((1, 2), (1, 3), (2, 2), (2, 3), (2, 4)))
        w = random_couplings(rng, n, d)
        assert tree_oracle_inverse(w, 4) == formal_inverse_fixed_point(w, 4)


def test_log_partition_low_grades():
    # F = u - w u^2: ln Z = -ln(1 - 2 w G) = 2w u + 4 w^2 u^2 + ... (here w = 1)
    lnZ = log_partition_function(W_CATALAN, 3)
    assert lnZ.grade(0).is_zero()
    assert lnZ.grade(1) == P.monomial((1,), 2)
    assert lnZ.grade(2) == P.monomial((2,), 4)
    # F = u - w u^3, w = 1: the first contribution is 3 u^2 at grade 2.
    w3 = CouplingTensor(1, 3, {(3, 0, (0, 0, 0)): Q(1)})
    lnZ3 = log_partition_function(w3, 4)
    assert lnZ3.grade(1).is_zero()
    assert lnZ3.grade(2) == P.monomial((2,), 3)


def test_z_det_identity(rng):
    ok, _ = z_det_identity_check(W_CATALAN, 5)
    assert ok
    for _ in range(6):
        w = random_couplings(rng, rng.choice((1, 2)), rng.choice((2, 3)))
        ok, residual = z_det_identity_check(w, 4)
        assert ok, residual


def test_zero_couplings_partition():
    w = CouplingTensor(2, 2)
    lnZ = log_partition_function(w, 3)
    assert all(lnZ.grade(r).is_zero() for r in range(4))
    ok, _ = z_det_identity_check(w, 3)
    assert ok


def test_theta_homogeneity():
    assert theta_homogeneity_check(W_CATALAN, 4, Q(1))
    assert theta_homogeneity_check(W_CATALAN, 4, Q(2))
    assert theta_homogeneity_check(W_CATALAN, 4, Q(Fraction(3, 2)))
    assert theta_homogeneity_check(W_CATALAN, 4, Q(-1))
    with pytest.raises(ValueError):
        theta_homogeneity_check(W_CATALAN, 3, Q(0))


def test_theta_homogeneity_random(rng):
    for _ in range(4):
        w = random_couplings(rng, 2, rng.choice((2, 3)))
        assert theta_homogeneity_check(w, 4, Q(Fraction(3, 2)))


def test_graded_poly_arithmetic():
    a = GradedPoly.of_poly(P.variable(0, 1), 3, grade=1)
    b = GradedPoly.of_poly(P.one(1), 3, grade=0)
    prod = a * (a + b)
    assert prod.grade(1) == P.variable(0, 1)
    assert prod.grade(2) == P.monomial((2,), 1)
    assert prod.grade(3).is_zero()
    assert a.shift(2).grade(3) == P.variable(0, 1)
    with pytest.raises(ValueError):
        b.exp()  # nonzero grade-0 part
    e = a.exp()
    assert e.grade(0) == P.one(1)
    assert e.grade(2) == P.monomial((2,), Q("1/2"))
