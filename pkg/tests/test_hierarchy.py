"""Flows, time derivatives along them, and the two-point densities."""

from fractions import Fraction

import pytest

from gdtau import (
    DiffPoly,
    FlowTable,
    OmegaTable,
    ParamPoly,
    diff_x,
    gd_flow,
    grading,
    lax,
    omega,
    t_derivative,
)
from gdtau.errors import IndexDivisible, MissingFlow
from gdtau.psido import frac_power, residue


def v(a, k=0):
    return DiffPoly.jet("d", a, k)


def test_first_flow_is_x_translation():
    for r in (2, 3, 4):
        flow = gd_flow(r, 1)
        assert flow == {a: v(a, 1) for a in range(1, r)}


def test_r2_third_flow():
    got = gd_flow(2, 3)[1]
    assert got == v(1, 3) * Fraction(1, 4) + v(1) * v(1, 1) * Fraction(3, 2)


def test_flow_degrees_r3():
    # the flow of v_a along t_i weighs a+i+1
    for i in (1, 2, 4, 5, 7):
        for a, p in gd_flow(3, i).items():
            assert grading(p) == a + i + 1


def test_flow_index_divisible_by_r_rejected():
    with pytest.raises(IndexDivisible):
        gd_flow(3, 6)
    with pytest.raises(IndexDivisible):
        gd_flow(2, 4)
    with pytest.raises(ValueError):
        gd_flow(2, 0)


def test_t1_derivative_is_diff_x():
    flows = FlowTable(3)
    p = v(1) ** 2 * v(2, 1)
    assert t_derivative(p, 1, flows) == diff_x(p)
    assert t_derivative(v(1), 1, flows) == v(1, 1)


def test_t_derivative_of_constants_vanishes():
    flows = FlowTable(3)
    const = DiffPoly.const("d", ParamPoly.var("d", 2))
    assert t_derivative(const, 5, flows).is_zero()


def test_t_derivatives_commute():
    flows = FlowTable(3)
    for p in (v(1) * v(2), v(1, 1) + v(2) ** 2, v(1) ** 3):
        for i, j in ((1, 2), (2, 4), (1, 5)):
            ij = t_derivative(t_derivative(p, i, flows), j, flows)
            ji = t_derivative(t_derivative(p, j, flows), i, flows)
            assert ij == ji, (i, j, str(p))


def test_closed_flow_table():
    flows = FlowTable(3, indices=[1, 2])
    assert flows.flow(2) == gd_flow(3, 2)
    with pytest.raises(MissingFlow):
        flows.flow(4)


def test_flow_derivative_caches_x_derivatives():
    flows = FlowTable(2)
    assert flows.flow_derivative(3, 1, 0) == gd_flow(2, 3)[1]
    assert flows.flow_derivative(3, 1, 2) == diff_x(diff_x(gd_flow(2, 3)[1]))


# -- two-point densities ----------------------------------------------------------


def test_omega_1_1_is_v1_over_r():
    for r in (2, 3, 4):
        assert omega(r, 1, 1) == v(1) * Fraction(1, r)


def test_omega_1_alpha_equals_residue():
    # pairing with t_1 recovers the density of the alpha-th residue
    L3 = lax(3)
    for a in (1, 2, 4, 5):
        assert omega(3, 1, a) == residue(frac_power(L3, a, -1))


def test_omega_symmetric():
    for r, pairs in ((2, [(1, 3), (3, 5), (1, 5)]),
                     (3, [(1, 2), (2, 4), (4, 5), (2, 5)])):
        for i, j in pairs:
            assert omega(r, i, j) == omega(r, j, i), (r, i, j)


def test_omega_degree_is_sum_of_indices():
    for i, j in ((1, 1), (1, 2), (2, 2), (2, 4), (4, 5)):
        assert grading(omega(3, i, j)) == i + j


def test_omega_rejects_divisible_indices():
    with pytest.raises(IndexDivisible):
        omega(3, 3, 1)
    with pytest.raises(IndexDivisible):
        omega(3, 1, 6)


def test_omega_has_no_constant_term():
    for i, j in ((1, 1), (2, 2), (1, 4)):
        w = omega(3, i, j)
        assert () not in w.terms


def test_omega_table_matches_free_function():
    table = OmegaTable(3)
    assert table.omega(2, 4) == omega(3, 2, 4)
    assert table.omega(2, 4) is table.omega(2, 4)  # cached
    assert table.residue(2) == residue(frac_power(lax(3), 2, -1))
    with pytest.raises(IndexDivisible):
        table.residue(3)
