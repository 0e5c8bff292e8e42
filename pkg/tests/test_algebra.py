"""Exact polynomial layer: parameter polynomials and jet polynomials."""

from fractions import Fraction

import pytest

from gdtau import DiffPoly, ParamPoly, diff_x, grading, integrate_x
from gdtau.algebra import degrees, jet_weight, poly_add, poly_mul, poly_scale
from gdtau.errors import AlphabetMismatch, NotExact, NotHomogeneous


def c(i):
    return ParamPoly.var("c", i)


def v(a, k=0):
    return DiffPoly.jet("d", a, k)


# -- ParamPoly ---------------------------------------------------------------


def test_distributivity_example():
    c1 = c(1)
    assert c1 * (c1 + 1) == c1**2 + c1


def test_mul_by_zero_annihilates():
    p = c(1) ** 3 + c(2) * 7
    assert (p * 0).is_zero()
    assert poly_mul(p, ParamPoly.zero("c")).is_zero()


def test_spec_level_wrappers_delegate():
    p, q = c(1) + 2, c(2) - c(1)
    assert poly_add(p, q) == p + q
    assert poly_scale(p, Fraction(1, 3)) == p / 3


def test_substitute_and_expand():
    # 3*c1 + 3/2*c2 with c1 -> d1/3 (and c2 carried along as d2)
    p = c(1) * 3 + c(2) * Fraction(3, 2)
    values = {1: ParamPoly.var("d", 1) / 3, 2: ParamPoly.var("d", 2)}
    q = p.substitute(values, "d")
    assert str(q) == "3/2*d2 + d1"


def test_substitute_needs_every_parameter():
    p = c(1) + c(2)
    with pytest.raises(ValueError):
        p.substitute({1: ParamPoly.var("d", 1)}, "d")


def test_substitute_is_a_ring_map():
    vals = {1: ParamPoly.var("d", 1) + 1, 2: ParamPoly.var("d", 1) * ParamPoly.var("d", 2)}
    p = c(1) * c(2) + c(2) * 5
    q = c(1) ** 2 - 3
    lhs = (p * q).substitute(vals, "d")
    rhs = p.substitute(vals, "d") * q.substitute(vals, "d")
    assert lhs == rhs


def test_evaluate_is_partial():
    p = c(1) ** 2 + c(2)
    out = p.evaluate({1: 2})
    assert out == c(2) + 4
    # fully numeric
    assert p.evaluate({1: Fraction(1, 2), 2: 3}).constant_value() == Fraction(13, 4)


def test_alphabet_mismatch_rejected():
    with pytest.raises(AlphabetMismatch):
        c(1) + ParamPoly.var("d", 1)
    with pytest.raises(AlphabetMismatch):
        c(1) * ParamPoly.var("sigma", 1)


def test_canonical_string_output():
    p = (c(1) ** 2 + c(1)) * Fraction(3, 2)
    assert str(p) == "3/2*c1^2 + 3/2*c1"
    assert str(ParamPoly.zero("c")) == "0"
    assert str(c(2) - c(1)) == "c2 - c1"
    assert str(ParamPoly.const("c", Fraction(-1, 4))) == "-1/4"


def test_no_zero_terms_stored():
    p = c(1) - c(1)
    assert p.terms == {}
    q = ParamPoly("c", {(1, 0): 1, (1,): -1})  # same key after trimming
    assert q.is_zero()


def test_constant_handling():
    p = ParamPoly.const("c", 5)
    assert p.is_constant() and p.constant_value() == 5
    assert not (c(1) + 1).is_constant()
    with pytest.raises(ValueError):
        (c(1) + 1).constant_value()
    assert p.max_index() == 0
    assert (c(3) + c(1)).max_index() == 3


def test_var_index_must_be_positive():
    with pytest.raises(ValueError):
        ParamPoly.var("c", 0)


def test_pow_and_division():
    assert c(1) ** 0 == 1
    assert (c(1) * 2) / 2 == c(1)
    with pytest.raises(ValueError):
        c(1) ** (-1)


def test_parameter_weights():
    # index a weighs a+1
    assert c(1).degrees() == {2}
    assert (c(2) ** 2).degrees() == {6}
    assert (c(1) ** 3 + c(2) * c(1)).degrees() == {6, 5}


# -- DiffPoly: derivative and integral ----------------------------------------


def test_diff_x_single_jet():
    assert diff_x(v(1)) == v(1, 1)


def test_diff_x_product_rule():
    assert diff_x(v(1) * v(2)) == v(1, 1) * v(2) + v(1) * v(2, 1)


def test_diff_x_kills_constants():
    assert diff_x(DiffPoly.const("d", ParamPoly.var("d", 1))).is_zero()


def test_integrate_x_inverts_diff_x():
    assert integrate_x(v(1, 1)) == v(1)
    assert integrate_x(v(1) * v(1, 1)) == v(1) ** 2 * Fraction(1, 2)


def test_integrate_x_rejects_non_derivatives():
    with pytest.raises(NotExact):
        integrate_x(v(1))
    with pytest.raises(NotExact):
        integrate_x(DiffPoly.const("d", 1))
    with pytest.raises(NotExact):
        integrate_x(v(1) ** 2)


def test_integrate_x_multi_term():
    p = v(1) ** 2 * v(2) + v(1, 2) * 3 - v(2, 1) * v(1, 1)
    assert integrate_x(diff_x(p)) == p


def test_diff_after_integrate_is_identity_on_image():
    q = diff_x(v(1) * v(2, 1) + v(1, 1) ** 2)
    assert diff_x(integrate_x(q)) == q


# -- grading -------------------------------------------------------------------


def test_jet_weights():
    assert jet_weight((1, 1)) == 3
    assert jet_weight((2, 0)) == 3
    assert grading(v(1, 1)) == 3
    assert grading(v(2)) == 3


def test_grading_mixed_raises_with_degrees():
    with pytest.raises(NotHomogeneous) as exc:
        grading(v(1) + v(1, 1))
    assert exc.value.degrees == frozenset({2, 3})


def test_grading_includes_parameter_weight():
    p = v(1) * ParamPoly.var("d", 2)  # 2 + 3
    assert grading(p) == 5
    assert degrees(v(1) * ParamPoly.var("d", 1) + v(1, 2)) == {4}


def test_grading_additive_under_product():
    p = v(1, 1) * v(2)  # 3 + 3
    q = v(3) * ParamPoly.var("d", 1)  # 4 + 2
    assert grading(p * q) == grading(p) + grading(q)


def test_grading_of_zero():
    assert grading(DiffPoly.zero("d")) == 0


def test_diff_x_raises_degree_by_one():
    p = v(1) * v(2) + v(2) * ParamPoly.var("d", 1) + v(3, 1)
    assert grading(diff_x(p)) == grading(p) + 1


def test_diffpoly_string_canonical():
    p = v(1, 3) * Fraction(1, 4) + v(1, 1) * v(1) * Fraction(3, 2)
    assert str(p) == "1/4*v1_3 + 3/2*v1_1*v1"
    assert str(DiffPoly.zero("d")) == "0"


def test_diffpoly_partial():
    p = v(1) ** 2 * v(2, 1)
    assert p.partial(1, 0) == v(1) * v(2, 1) * 2
    assert p.partial(2, 1) == v(1) ** 2
    assert p.partial(3, 0).is_zero()
