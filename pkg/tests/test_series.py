"""Tests for the truncated jet-variable series ring."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bigphase import ANTIHOL, HOL, SeriesRing
from bigphase.scalars import ComplexRational

RING = SeriesRing(2, 1, 3)  # 2 flavors, levels 0..1, degree window 3


@pytest.fixture
def ring():
    return RING


# ---------------------------------------------------------------------------
# variable indexing
# ---------------------------------------------------------------------------


def test_var_index_round_trips_over_all_variables(ring):
    seen = set()
    for sector in (HOL, ANTIHOL):
        for level in range(ring.n_max + 1):
            for flavor in range(1, ring.num_flavors + 1):
                idx = ring.var_index(sector, level, flavor)
                assert ring.var_info(idx) == (sector, level, flavor)
                seen.add(idx)
    assert seen == set(range(ring.num_vars))


def test_flip_sector_is_an_involution_swapping_sectors(ring):
    for idx in range(ring.num_vars):
        other = ring.flip_sector(idx)
        assert ring.flip_sector(other) == idx
        s, level, flavor = ring.var_info(idx)
        assert ring.var_info(other) == (1 - s, level, flavor)


def test_var_index_rejects_out_of_range_arguments(ring):
    with pytest.raises(ValueError):
        ring.var_index(2, 0, 1)
    with pytest.raises(ValueError):
        ring.var_index(HOL, ring.n_max + 1, 1)
    with pytest.raises(ValueError):
        ring.var_index(HOL, 0, 0)
    with pytest.raises(ValueError):
        ring.var_info(ring.num_vars)


def test_ring_equality_and_hashing():
    assert SeriesRing(2, 1, 3) == RING
    assert hash(SeriesRing(2, 1, 3)) == hash(RING)
    assert SeriesRing(2, 1, 4) != RING
    assert SeriesRing(2, 1, 3, mode="float") != RING


# ---------------------------------------------------------------------------
# constructors and normalization
# ---------------------------------------------------------------------------


def test_series_constructor_drops_zero_coefficients(ring):
    t = ring.var_index(HOL, 0, 1)
    s = ring.series({((t, 1),): 0, ((t, 2),): 1})
    assert list(s.terms) == [((t, 2),)]


def test_series_constructor_rejects_bad_monomials(ring):
    t = ring.var_index(HOL, 0, 1)
    with pytest.raises(ValueError):
        ring.series({((t, 0),): 1})
    with pytest.raises(ValueError):
        ring.series({((t, 1), (t, 1)): 1})


def test_exact_overflow_demotes_to_a_trimmed_window(ring):
    t = ring.var_index(HOL, 0, 1)
    s = ring.series({((t, 1),): 1, ((t, 4),): 1})  # degree 4 > d_max
    assert not s.exact
    assert s.valid_degree == ring.d_max
    assert list(s.terms) == [((t, 1),)]


def test_series_are_immutable(ring):
    s = ring.one()
    with pytest.raises((AttributeError, TypeError)):
        s.exact = False
    with pytest.raises(TypeError):
        type(s)()


# ---------------------------------------------------------------------------
# window arithmetic
# ---------------------------------------------------------------------------


def test_addition_takes_the_smaller_window(ring):
    t = ring.small_var(1)
    a = ring.series({((0, 1),): 1}, exact=False, valid_degree=2)
    out = a + t
    assert not out.exact
    assert out.valid_degree == 2


def test_multiplying_by_a_high_valuation_factor_widens_the_window(ring):
    # a is trusted through degree 2; multiplying by the degree-1 variable t
    # shifts every uncertain term up one degree, so the product is trusted
    # through degree 3.
    one_plus_t = ring.series({(): 1, ((0, 1),): 1}, exact=False, valid_degree=2)
    out = one_plus_t * ring.small_var(1)
    assert not out.exact
    assert out.valid_degree == 3


def test_product_of_exact_series_beyond_the_cap_is_inexact_zero(ring):
    t = ring.small_var(1)
    out = (t * t) * (t * t)  # degree 4 > d_max = 3
    assert out.is_zero
    assert not out.exact
    assert out.valid_degree == ring.d_max


def test_partial_derivative_keeps_exactness_and_shrinks_windows(ring):
    t = ring.small_var(1)
    cubic = t * t * t
    quad = cubic.partial_derivative(HOL, 0, 1)
    assert quad.exact
    assert quad == ring.const(3) * t * t
    blurred = ring.series({((0, 2),): 1}, exact=False, valid_degree=2)
    assert blurred.partial_derivative(HOL, 0, 1).valid_degree == 1


def test_derivative_with_respect_to_an_absent_variable_is_zero(ring):
    t = ring.small_var(1)
    assert t.partial_derivative(ANTIHOL, 0, 1).is_zero


# ---------------------------------------------------------------------------
# conjugation
# ---------------------------------------------------------------------------


def test_conjugation_swaps_sectors_and_conjugates_coefficients(ring):
    t = ring.small_var(1)
    s = t.scale(ComplexRational(0, 1))  # i * t
    bar = s.conjugate()
    idx = ring.var_index(ANTIHOL, 0, 1)
    assert bar.terms == {((idx, 1),): ComplexRational(0, -1)}
    assert bar.conjugate() == s


# ---------------------------------------------------------------------------
# substitution and restriction
# ---------------------------------------------------------------------------


def test_substitute_expands_polynomial_images(ring):
    t = ring.small_var(1)
    w = ring.var(HOL, 1, 1)
    square = t * t
    out = square.substitute({0: t + w})
    assert out == t * t + ring.const(2) * t * w + w * w


def test_substitute_guards_constant_terms(ring):
    t = ring.small_var(1)
    with pytest.raises(ValueError):
        t.substitute({0: ring.one() + t})
    shifted = t.substitute({0: ring.one() + t}, allow_constant_term=True)
    assert shifted == ring.one() + t
    blurred = ring.series({((0, 1),): 1}, exact=False, valid_degree=2)
    with pytest.raises(ValueError):
        blurred.substitute({0: ring.one() + t}, allow_constant_term=True)


def test_restrict_small_kills_every_descendant_variable(ring):
    t = ring.small_var(1)
    w = ring.var(HOL, 1, 1)
    wbar = ring.var(ANTIHOL, 1, 2)
    s = t + t * w + wbar
    assert s.restrict_small() == t


# ---------------------------------------------------------------------------
# inverse and square root
# ---------------------------------------------------------------------------


def test_inverse_of_one_plus_t_is_the_geometric_series(ring):
    t = ring.small_var(1)
    inv = (ring.one() + t).inverse()
    assert not inv.exact
    assert inv.valid_degree == ring.d_max
    for power, value in enumerate([1, -1, 1, -1]):
        mono = [(HOL, 0, 1, power)] if power else []
        assert inv.coefficient(mono) == ComplexRational(value)
    assert ((ring.one() + t) * inv - ring.one()).is_zero


def test_inverse_of_a_constant_stays_exact(ring):
    inv = ring.const(2).inverse()
    assert inv.exact
    assert inv == ring.const(Fraction(1, 2))


def test_inverse_requires_an_invertible_constant_term(ring):
    with pytest.raises(ValueError):
        ring.small_var(1).inverse()


def test_sqrt_unit_inverts_squaring(ring):
    t = ring.small_var(1)
    square = (ring.one() + t) * (ring.one() + t)
    root = square.sqrt_unit()
    assert (root - (ring.one() + t)).is_zero
    assert (root * root - square).is_zero


def test_sqrt_unit_of_one_plus_t_has_binomial_coefficients(ring):
    t = ring.small_var(1)
    root = (ring.one() + t).sqrt_unit()
    expected = [Fraction(1), Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
    for power, value in enumerate(expected):
        mono = [(HOL, 0, 1, power)] if power else []
        assert root.coefficient(mono) == ComplexRational(value)


def test_sqrt_unit_requires_constant_term_one(ring):
    assert (ring.one()).sqrt_unit() == ring.one()
    with pytest.raises(ValueError):
        ring.const(4).sqrt_unit()
    with pytest.raises(ValueError):
        ring.small_var(1).sqrt_unit()


# ---------------------------------------------------------------------------
# structure access
# ---------------------------------------------------------------------------


def test_homogeneous_part_slices_by_total_degree(ring):
    t = ring.small_var(1)
    s = ring.one() + t + t * t
    part = s.homogeneous_part(2)
    assert part.exact
    assert part == t * t
    blurred = ring.series({((0, 1),): 1}, exact=False, valid_degree=1)
    with pytest.raises(ValueError):
        blurred.homogeneous_part(2)


def test_coefficient_respects_the_trusted_window(ring):
    blurred = ring.series({((0, 1),): 1}, exact=False, valid_degree=1)
    assert blurred.coefficient([(HOL, 0, 1, 1)]) == ComplexRational(1)
    with pytest.raises(ValueError):
        blurred.coefficient([(HOL, 0, 1, 2)])
    assert RING.one().coefficient([(HOL, 0, 1, 2)]) == ComplexRational.ZERO


def test_factorial_rescale_multiplies_by_level_factorials():
    deep = SeriesRing(1, 3, 4)
    v1 = deep.var(HOL, 1, 1)
    v2 = deep.var(HOL, 2, 1)
    v3 = deep.var(HOL, 3, 1)
    s = (v1 + v2 + v3).factorial_rescale()
    assert s.coefficient([(HOL, 1, 1, 1)]) == ComplexRational(1)
    assert s.coefficient([(HOL, 2, 1, 1)]) == ComplexRational(2)
    assert s.coefficient([(HOL, 3, 1, 1)]) == ComplexRational(6)


def test_max_abs_is_the_largest_coefficient_magnitude(ring):
    t = ring.small_var(1)
    s = t.scale(Fraction(-7, 2)) + ring.const(2)
    assert s.max_abs() == Fraction(7, 2)
    assert ring.zero().max_abs() == Fraction(0)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_serialize_and_parse_round_trip(ring):
    t = ring.small_var(1)
    wbar = ring.var(ANTIHOL, 1, 2)
    s = ring.const(ComplexRational(Fraction(1, 3), Fraction(-21, 5))) + t * wbar
    payload = s.serialize_terms()
    assert ring.parse_terms(payload) == s
    degrees = [sum(e for *_, e in entry["mono"]) for entry in payload]
    assert degrees == sorted(degrees)


def test_serialized_terms_use_explicit_rational_strings(ring):
    s = ring.const(Fraction(2))
    assert s.serialize_terms() == [{"re": "2/1", "im": "0/1", "mono": []}]


# ---------------------------------------------------------------------------
# float mode
# ---------------------------------------------------------------------------


def test_float_mode_carries_complex_coefficients():
    fring = SeriesRing(1, 1, 3, mode="float")
    t = fring.small_var(1)
    inv = (fring.one() + t).inverse()
    assert inv.coefficient([(HOL, 0, 1, 2)]) == pytest.approx(1.0)
    assert isinstance(inv.max_abs(), float)
    root = (fring.one() + t).sqrt_unit()
    assert root.coefficient([(HOL, 0, 1, 1)]) == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# algebraic laws (property based)
# ---------------------------------------------------------------------------

_coeffs = st.builds(
    ComplexRational,
    st.fractions(min_value=-9, max_value=9, max_denominator=12),
    st.fractions(min_value=-9, max_value=9, max_denominator=12),
)
_monomials = st.lists(
    st.tuples(st.integers(0, RING.num_vars - 1), st.integers(1, 2)),
    max_size=2,
    unique_by=lambda pair: pair[0],
).map(lambda pairs: tuple(sorted(pairs)))
_polys = st.dictionaries(_monomials, _coeffs, max_size=4).map(RING.series)


@settings(deadline=None, max_examples=60)
@given(_polys, _polys, _polys)
def test_ring_axioms_hold_inside_the_common_window(a, b, c):
    assert (a + b - (b + a)).is_zero
    assert ((a + b) + c - (a + (b + c))).is_zero
    assert (a * b - b * a).is_zero
    assert ((a * b) * c - (a * (b * c))).is_zero
    assert (a * (b + c) - (a * b + a * c)).is_zero


@settings(deadline=None, max_examples=60)
@given(_polys, _polys)
def test_conjugation_is_a_ring_map(a, b):
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


@settings(deadline=None, max_examples=60)
@given(_polys, _polys)
def test_partial_derivative_satisfies_the_leibniz_rule(a, b):
    lhs = (a * b).partial_derivative(HOL, 0, 1)
    rhs = a.partial_derivative(HOL, 0, 1) * b + a * b.partial_derivative(HOL, 0, 1)
    assert (lhs - rhs).is_zero


@settings(deadline=None, max_examples=40)
@given(_polys, _polys)
def test_substitution_distributes_over_sums_and_products(a, b):
    t = RING.small_var(1)
    w = RING.var(HOL, 1, 1)
    images = {0: t + w * w, 2: t * w}
    lhs_add = (a + b).substitute(images)
    rhs_add = a.substitute(images) + b.substitute(images)
    assert (lhs_add - rhs_add).is_zero
    lhs_mul = (a * b).substitute(images)
    rhs_mul = a.substitute(images) * b.substitute(images)
    assert (lhs_mul - rhs_mul).is_zero
