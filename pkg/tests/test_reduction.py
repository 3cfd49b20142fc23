from fractions import Fraction

import pytest

from polyred.couplings import CouplingTensor
from polyred.gaussian import Q
from polyred.poly import Polynomial, PolySystem
from polyred.reduction import (
    ALGEBRAIC,
    QFT,
    aux_index,
    h_recovery_check,
    is_in_image_of_phi,
    phi_algebraic,
    phi_qft,
    phi_qft_system,
    reduce_to_quadratic,
    reduced_inverse_check,
    transport_determinant_check,
    verify_theorem_main,
)
from polyred.samples import (
    random_couplings,
    random_normalized_system,
    random_zero_constant_system,
)
from polyred.series import compose_poly, formal_inverse_fixed_point

P = Polynomial


def test_aux_index_layout():
    assert aux_index(1, 0, 0) == 1
    assert aux_index(2, 0, 0) == 2
    assert aux_index(2, 1, 1) == 5
    with pytest.raises(IndexError):
        aux_index(2, 2, 0)


def test_phi_algebraic_cubic_one_variable():
    z = P.variable(0, 1)
    F = PolySystem([z - (z ** 3).scale(5)], degree_bound=3)
    rs = phi_algebraic(F)
    v0, v1 = P.variable(0, 2), P.variable(1, 2)
    assert rs.system == PolySystem([v1 * v0, v1 - 1 + (v0 ** 2).scale(5)])
    assert rs.system.degree_bound == 2
    assert rs.variant == ALGEBRAIC


def test_phi_algebraic_identity_source():
    z = P.variable(0, 1)
    rs = phi_algebraic(PolySystem([z], degree_bound=3))
    v0, v1 = P.variable(0, 2), P.variable(1, 2)
    assert rs.system == PolySystem([v1 * v0, v1 - 1])


def test_phi_algebraic_preconditions():
    z = P.variable(0, 1)
    with pytest.raises(ValueError):
        phi_algebraic(PolySystem([z], degree_bound=2))
    with pytest.raises(ValueError):
        phi_algebraic(PolySystem([z + 1], degree_bound=3))


def test_phi_qft_cubic_one_variable():
    w = CouplingTensor(1, 3, {(3, 0, (0, 0, 0)): Q(7)})
    rs = phi_qft_system(w.to_system())
    v0, v1 = P.variable(0, 2), P.variable(1, 2)
    assert rs.system == PolySystem([v0 - v0 * v1, v1 - (v0 ** 2).scale(7)])


def test_phi_qft_zero_couplings():
    wt = phi_qft(CouplingTensor(1, 3))
    assert wt.entries == {(2, 0, (0, 1)): Q(1)}
    wt2 = phi_qft(CouplingTensor(2, 3))
    assert set(wt2.entries) == {(2, i, tuple(sorted((j, aux_index(2, i, j)))))
                                for i in range(2) for j in range(2)}


def test_phi_qft_rejects_quadratic_couplings():
    w = CouplingTensor(1, 3, {(2, 0, (0, 0)): Q(1)})
    with pytest.raises(ValueError):
        phi_qft(w)


def test_phi_qft_middle_degrees_copied():
    w = CouplingTensor(1, 5, {(3, 0, (0, 0, 0)): Q(2), (4, 0, (0,) * 4): Q(3),
                              (5, 0, (0,) * 5): Q(1)})
    wt = phi_qft(w)
    assert wt.entries[(3, 0, (0, 0, 0))] == Q(2)
    assert wt.entries[(4, 0, (0,) * 4)] == Q(3)        # k = d-1 copy rule
    assert wt.entries[(4, 1, (0,) * 4)] == Q(1)        # relocated top coupling
    assert (5, 0, (0,) * 5) not in wt.entries
    assert wt.max_degree == 4


def test_image_degree_and_block_shape(rng):
    for d in (3, 4):
        F = random_zero_constant_system(rng, 2, d)
        rs = phi_algebraic(F)
        assert rs.system.degree() <= d - 1
        n = 2
        for i in range(n):
            for j in range(n):
                comp = rs.system.components[aux_index(n, i, j)]
                # affine in the auxiliary block with identity linear part
                aux_part = comp - P.variable(aux_index(n, i, j), rs.system.nvars)
                assert all(not any(e[n:]) for e in aux_part.terms)


def test_round_trip_algebraic(rng):
    for d in (3, 4, 5):
        for n in (1, 2):
            F = random_zero_constant_system(rng, n, d)
            rs = phi_algebraic(F)
            chk = is_in_image_of_phi(rs.system, n, ALGEBRAIC)
            assert chk.in_image
            assert chk.preimage == F


def test_round_trip_qft(rng):
    for d in (3, 4):
        for n in (1, 2):
            w = random_couplings(rng, n, d, quadratic_free=True)
            rs = phi_qft_system(w.to_system(d))
            chk = is_in_image_of_phi(rs.system, n, QFT)
            assert chk.in_image
            assert chk.couplings == w or chk.preimage == w.to_system(d)


def test_not_in_image():
    assert not is_in_image_of_phi(PolySystem.identity(2), 1, ALGEBRAIC).in_image
    assert not is_in_image_of_phi(PolySystem.identity(2), 1, QFT).in_image
    with pytest.raises(ValueError):
        is_in_image_of_phi(PolySystem.identity(3), 1, ALGEBRAIC)
    # tamper with the bilinear block
    z = P.variable(0, 1)
    rs = phi_algebraic(PolySystem([z - z ** 3], degree_bound=3))
    comps = list(rs.system.components)
    comps[0] = comps[0] + P.variable(0, 2)
    assert not is_in_image_of_phi(PolySystem(comps, nvars=2), 1, ALGEBRAIC).in_image
    # tamper with the gradient structure (n = 2 so integrability can fail)
    F2 = PolySystem([P.variable(0, 2) - P.monomial((0, 3), 1), P.variable(1, 2)],
                    degree_bound=3)
    rs2 = phi_algebraic(F2)
    comps2 = list(rs2.system.components)
    comps2[aux_index(2, 0, 0)] = comps2[aux_index(2, 0, 0)] + P.monomial(
        (0, 2, 0, 0, 0, 0), 1)
    assert not is_in_image_of_phi(PolySystem(comps2, nvars=6), 2, ALGEBRAIC).in_image


def test_h_recovery_both_variants(rng):
    for n, d in ((1, 3), (2, 3), (2, 4)):
        F = random_zero_constant_system(rng, n, d)
        assert h_recovery_check(F, ALGEBRAIC)
        w = random_couplings(rng, n, d, quadratic_free=True)
        assert h_recovery_check(w.to_system(d), QFT)


def test_cross_variant_h_coincidence(rng):
    # same quadratic-free source: both images eliminate back to the source
    w = random_couplings(rng, 2, 3, quadratic_free=True)
    F = w.to_system(3)
    assert h_recovery_check(F, ALGEBRAIC)
    assert h_recovery_check(F, QFT)
    # the images themselves differ (different constant shift in the aux block)
    assert phi_algebraic(F).system != phi_qft_system(F).system


def test_transport_determinant_constant_is_one(rng):
    for _ in range(3):
        F = random_zero_constant_system(rng, 2, 3)
        rep = transport_determinant_check(F, ALGEBRAIC)
        assert rep["equal"] and rep["constant_factor"] == "1"
        w = random_couplings(rng, 2, 3, quadratic_free=True)
        rep2 = transport_determinant_check(w.to_system(3), QFT)
        assert rep2["equal"] and rep2["constant_factor"] == "1"


def test_verify_theorem_main_examples():
    z1, z2 = P.variable(0, 2), P.variable(1, 2)
    member = PolySystem([z1 - z2 ** 3, z2], degree_bound=3)
    assert verify_theorem_main(member, ALGEBRAIC)["passed"]
    assert verify_theorem_main(member, QFT)["passed"]
    nonmember = PolySystem([z1 ** 3, z2], degree_bound=3)
    rep = verify_theorem_main(nonmember, ALGEBRAIC)
    assert rep["passed"] and rep["lin_source"] == "non_member"
    padded_identity = PolySystem([z1, z2], degree_bound=3)
    assert verify_theorem_main(padded_identity, ALGEBRAIC)["passed"]
    assert verify_theorem_main(padded_identity, QFT)["passed"]


def test_reduced_inverse_check_closed_form():
    c = Q(1)
    w = CouplingTensor(1, 3, {(3, 0, (0, 0, 0)): c})
    rep = reduced_inverse_check(w, 5)
    assert rep["passed"]
    # explicit auxiliary grades: Gt_aux = shift(1, c * G^2)
    G = formal_inverse_fixed_point(w, 5)
    wt = phi_qft(w)
    Gt = formal_inverse_fixed_point(wt, 5, [P.variable(0, 1), P.zero(1)])
    Gsq = compose_poly(P.monomial((2,), 1, nvars=1), [G[0]], 5)
    assert Gt[1] == Gsq.shift(1)
    assert Gt[1].grade(1) == P.monomial((2,), 1)
    assert Gt[1].grade(3) == P.monomial((4,), 2)


def test_reduced_inverse_check_zero_couplings():
    rep = reduced_inverse_check(CouplingTensor(1, 3), 4)
    assert rep["passed"]


def test_reduced_inverse_check_two_vars(rng):
    w = random_couplings(rng, 2, 4, quadratic_free=True)
    assert reduced_inverse_check(w, 4)["passed"]


def test_reduce_to_quadratic_driver():
    z = P.variable(0, 1)
    F = PolySystem([z - z ** 4], degree_bound=4)
    stages = reduce_to_quadratic(F)
    assert [s.system.degree_bound for s in stages] == [3, 2]
    assert stages[-1].system.nvars == 6  # 1 -> 2 -> 6
