"""Tests for the validated Frobenius structure on the primary chart."""

import math
from fractions import Fraction

import pytest

from bigphase import ANTIHOL, HOL, EulerData, FrobeniusModel, ModelError, SeriesRing
from bigphase.frobenius import euler_integrate, matrix_residual, residual_of


def cubic_ring(d_max=6):
    return SeriesRing(1, 2, d_max)


def cubic_prepotential(ring):
    t = ring.small_var(1)
    return (t * t * t).scale(Fraction(1, 6))


def cubic_model(ring=None, **kwargs):
    ring = ring or cubic_ring()
    return FrobeniusModel(ring, [[1]], cubic_prepotential(ring), **kwargs)


def a2_model(d_max=5, **kwargs):
    ring = SeriesRing(2, 1, d_max)
    t1, t2 = ring.small_var(1), ring.small_var(2)
    prepot = (t1 * t1 * t2).scale(Fraction(1, 2)) + (t2 ** 4).scale(Fraction(1, 72))
    kwargs.setdefault("euler", EulerData([[1, 0], [0, Fraction(2, 3)]], [0, 0]))
    kwargs.setdefault("weight", Fraction(-5, 3))
    return FrobeniusModel(ring, [[0, 1], [1, 0]], prepot, **kwargs)


# ---------------------------------------------------------------------------
# admission gates
# ---------------------------------------------------------------------------


def test_cubic_model_passes_every_gate_with_identity_product():
    model = cubic_model()
    (row,) = model.c_mat[0]
    assert row == (model.ring.one(),)
    assert model.string_residual == 0
    assert model.wdvv_residual == 0


def test_eta_must_be_square_symmetric_and_invertible():
    ring = SeriesRing(2, 1, 4)
    t1, t2 = ring.small_var(1), ring.small_var(2)
    prepot = (t1 * t1 * t2).scale(Fraction(1, 2))
    with pytest.raises(ModelError, match="N x N"):
        FrobeniusModel(ring, [[0, 1]], prepot)
    with pytest.raises(ModelError, match="symmetric"):
        FrobeniusModel(ring, [[0, 1], [2, 0]], prepot)
    with pytest.raises(ModelError, match="invertible"):
        FrobeniusModel(ring, [[1, 1], [1, 1]], prepot)


def test_unit_direction_must_act_as_the_identity():
    ring = cubic_ring()
    with pytest.raises(ModelError, match="unit direction"):
        FrobeniusModel(ring, [[2]], cubic_prepotential(ring))


def test_string_normalization_rejects_quadratic_unit_terms():
    ring = cubic_ring()
    t = ring.small_var(1)
    bad = cubic_prepotential(ring) + (t * t).scale(Fraction(1, 2))
    with pytest.raises(ModelError, match="string normalization"):
        FrobeniusModel(ring, [[1]], bad)


def test_associativity_gate_rejects_a_non_wdvv_quartic():
    ring = SeriesRing(3, 1, 4)
    t1, t2, t3 = (ring.small_var(f) for f in (1, 2, 3))
    prepot = (
        (t1 ** 3).scale(Fraction(1, 6))
        + (t1 * t2 * t2 + t1 * t3 * t3).scale(Fraction(1, 2))
        + (t2 * t2 * t3 * t3).scale(Fraction(1, 4))
    )
    with pytest.raises(ModelError, match="WDVV"):
        FrobeniusModel(ring, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], prepot)


def test_prepotential_must_be_an_exact_level0_holomorphic_polynomial():
    ring = cubic_ring(d_max=2)  # the cubic overflows this window
    with pytest.raises(ModelError, match="exact"):
        FrobeniusModel(ring, [[1]], cubic_prepotential(ring))
    ring = cubic_ring()
    bad = cubic_prepotential(ring) + ring.var(ANTIHOL, 0, 1)
    with pytest.raises(ModelError, match="level-0 holomorphic"):
        FrobeniusModel(ring, [[1]], bad)
    other = cubic_ring(d_max=5)
    with pytest.raises(ModelError, match="model ring"):
        FrobeniusModel(ring, [[1]], cubic_prepotential(other))


def test_unit_flavor_must_be_in_range():
    ring = cubic_ring()
    with pytest.raises(ModelError, match="unit_flavor"):
        FrobeniusModel(ring, [[1]], cubic_prepotential(ring), unit_flavor=2)


def test_euler_data_must_be_square_with_matching_shift():
    with pytest.raises(ModelError, match="square"):
        EulerData([[1, 0]], [0])
    with pytest.raises(ModelError, match="square"):
        EulerData([[1, 0], [0, 1]], [0])


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------


def test_a2_product_matrices_match_the_hand_computation():
    model = a2_model()
    ring = model.ring
    t2 = ring.small_var(2)
    ident = (
        (ring.one(), ring.zero()),
        (ring.zero(), ring.one()),
    )
    assert model.c_mat[0] == ident
    expected = (
        (ring.zero(), t2.scale(Fraction(1, 3))),
        (ring.one(), ring.zero()),
    )
    assert model.c_mat[1] == expected


def test_a2_products_are_selfadjoint_for_the_flat_pairing():
    model = a2_model()
    for mat in model.c_mat:
        assert model.eta_adjoint(mat) == mat


# ---------------------------------------------------------------------------
# Euler data
# ---------------------------------------------------------------------------


def test_a2_euler_vector_field_and_charge_matrices():
    model = a2_model()
    ring = model.ring
    t1, t2 = ring.small_var(1), ring.small_var(2)
    assert model.euler_vector() == (t1, t2.scale(Fraction(2, 3)))
    r0 = model.r0_matrix()
    expected = (
        (t1, (t2 * t2).scale(Fraction(2, 9))),
        (t2.scale(Fraction(2, 3)), t1),
    )
    assert r0 == expected
    rinf = model.rinf_matrix()
    assert rinf[0][0] == ring.one()
    assert rinf[1][1] == ring.const(Fraction(2, 3))


def test_a2_prepotential_is_quasi_homogeneous_under_the_euler_field():
    model = a2_model()
    scaled = model.prepotential.scale(Fraction(8, 3))
    assert model.euler_derivation(model.prepotential) == scaled


def test_euler_helpers_require_euler_data():
    model = cubic_model()
    with pytest.raises(ModelError, match="no Euler data"):
        model.euler_vector()
    with pytest.raises(ModelError, match="no Euler data"):
        model.rinf_matrix()


def test_euler_integrate_divides_by_total_degree():
    ring = cubic_ring()
    t = ring.small_var(1)
    cubic = t * t * t
    assert euler_integrate(cubic) == cubic.scale(Fraction(1, 3))
    with pytest.raises(ValueError, match="constant term"):
        euler_integrate(ring.one())


# ---------------------------------------------------------------------------
# flat-side residual catalogue
# ---------------------------------------------------------------------------

A2_NONZERO_ROWS = {"saito.nabla_R0_plus", "saito.weight_minus", "saito.lie_eta_minus"}


def test_a2_flat_catalogue_vanishes_outside_orientation_probes():
    rows = a2_model().saito_small_checks()
    ids = [cid for cid, *_ in rows]
    assert ids == [
        "saito.flatness", "saito.nabla_eta", "saito.d_nabla_C",
        "saito.C_wedge_C", "saito.C_selfadjoint",
        "saito.nabla_R0_plus", "saito.nabla_R0_minus", "saito.R0_C_commute",
        "saito.R0_selfadjoint", "saito.nabla_Rinf",
        "saito.weight_plus", "saito.weight_minus",
        "saito.lie_eta_plus", "saito.lie_eta_minus",
    ]
    for cid, residual, window, _note in rows:
        assert window >= 0
        if cid in A2_NONZERO_ROWS:
            assert residual > 0, cid
        else:
            assert residual == 0, cid


def test_cubic_flat_catalogue_omits_euler_rows():
    rows = cubic_model().saito_small_checks()
    ids = [cid for cid, *_ in rows]
    assert ids == [
        "saito.flatness", "saito.nabla_eta", "saito.d_nabla_C",
        "saito.C_wedge_C", "saito.C_selfadjoint",
    ]
    assert all(residual == 0 for _cid, residual, *_ in rows)


# ---------------------------------------------------------------------------
# deformed flat coordinates
# ---------------------------------------------------------------------------


def test_cubic_deformed_flats_follow_the_factorial_ladder():
    model = cubic_model()
    ring = model.ring
    t = ring.small_var(1)
    flats = model.deformed_flats(4)
    for rank in range(5):
        expected = (t ** (rank + 2)).scale(Fraction(1, math.factorial(rank + 2)))
        assert flats.theta_series(1, rank) == expected
    for rank in range(1, 5):
        assert flats.grad_series(1, 1, rank) == flats.theta_series(1, rank - 1)


def test_integration_constants_feed_the_ladder():
    model = cubic_model(theta_constants={(1, 1): Fraction(5)})
    ring = model.ring
    t = ring.small_var(1)
    flats = model.deformed_flats(2)
    assert flats.theta_series(1, 1) == (t ** 3).scale(Fraction(1, 6)) + ring.const(5)
    assert flats.grad_series(1, 1, 2) == flats.theta_series(1, 1)


def test_deformed_flats_are_cached_per_depth():
    model = cubic_model()
    assert model.deformed_flats(3) is model.deformed_flats(3)
    assert model.deformed_flats(3) is not model.deformed_flats(2)
    with pytest.raises(ValueError, match="non-negative"):
        model.deformed_flats(-1)


def test_a2_rank0_flats_are_the_prepotential_gradient():
    model = a2_model()
    flats = model.deformed_flats(0)
    for flavor in (1, 2):
        expected = model.prepotential.partial_derivative(HOL, 0, flavor)
        assert flats.theta_series(flavor, 0) == expected


# ---------------------------------------------------------------------------
# residual helpers
# ---------------------------------------------------------------------------


def test_residual_helpers_report_magnitude_and_window():
    ring = cubic_ring(d_max=4)
    t = ring.small_var(1)
    blurred = ring.series({((0, 1),): Fraction(-3, 2)}, exact=False, valid_degree=2)
    assert residual_of(blurred) == (Fraction(3, 2), 2)
    assert residual_of(t) == (Fraction(1), 4)
    mag, window = matrix_residual(((t, blurred), (ring.zero(), ring.one())))
    assert mag == Fraction(3, 2)
    assert window == 2
