import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import DegreeError, ShapeError, SingularInputError
from core.jets import (
    Jet,
    jet_arithmetic,
    jet_partial,
    jet_space,
    jmat_det,
    jmat_inverse,
    jmat_ops,
    perm_sign,
    stack,
)


def test_space_counts_monomials():
    # m = 1, order 2: 1, z, z̄, z², zz̄, z̄²
    assert jet_space(1, 2).size == 6
    # each z-monomial appears once per power of t
    assert jet_space(1, 2, 1).size == 12


def test_space_rejects_bad_parameters():
    with pytest.raises(ShapeError):
        jet_space(0, 2)


def test_variable_product_and_coefficients():
    space = jet_space(2, 3)
    z1 = Jet.variable(space, "z1")
    zb2 = Jet.variable(space, "zbar2")
    prod = z1 * zb2 * 3.0
    assert prod.coefficient((1, 0, 0, 1)) == pytest.approx(3.0)
    assert prod.coefficient((1, 0, 0, 0)) == pytest.approx(0.0)


def test_product_truncates_beyond_order():
    space = jet_space(1, 2)
    z = Jet.variable(space, "z1")
    assert (z * z * z).max_abs() == 0.0


def test_partial_lowers_order():
    space = jet_space(1, 3)
    z, zb = Jet.variable(space, "z1"), Jet.variable(space, "zbar1")
    d = (z * z * zb).partial("z1")
    assert d.order == 2
    assert d.coefficient((1, 1)) == pytest.approx(2.0)
    assert jet_partial(z * zb, "zbar1").coefficient((1, 0)) == pytest.approx(1.0)


def test_partial_of_order_zero_jet_raises():
    with pytest.raises(DegreeError):
        Jet.constant(jet_space(1, 0), 1.0).partial("z1")


def test_different_spaces_do_not_mix():
    a = Jet.constant(jet_space(1, 2), 1.0)
    b = Jet.constant(jet_space(1, 3), 1.0)
    with pytest.raises(ShapeError):
        _ = a + b


def test_conj_swaps_variables():
    space = jet_space(1, 2)
    z = Jet.variable(space, "z1")
    w = (z * 2j).conj()
    assert w.coefficient((0, 1)) == pytest.approx(-2j)


def test_inverse_of_zero_constant_raises():
    space = jet_space(1, 2)
    with pytest.raises(SingularInputError):
        Jet.variable(space, "z1").inv()


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 2))
def test_inverse_and_log_exp(seed, m):
    rng = np.random.default_rng(seed)
    space = jet_space(m, 3)
    a = Jet.random(space, rng, scale=0.3) + 2.0
    one = a * a.inv()
    assert abs(one.value() - 1.0) < 1e-12
    assert (one - 1.0).max_abs() < 1e-12
    assert (a.log().exp() - a).max_abs() < 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_product_rule(seed):
    rng = np.random.default_rng(seed)
    space = jet_space(2, 3)
    a, b = Jet.random(space, rng), Jet.random(space, rng)
    lhs = (a * b).partial("zbar1")
    rhs = a.truncate(2) * b.partial("zbar1") + a.partial("zbar1") * b.truncate(2)
    assert (lhs - rhs).max_abs() < 1e-12


def test_realpart_is_real(rng):
    a = Jet.random(jet_space(2, 3), rng)
    assert a.realpart().is_real(1e-14)


def test_t_variable_and_embed():
    space = jet_space(1, 2, 2)
    t = Jet.variable(space, "t")
    assert (t * t).coefficient((0, 0, 2)) == pytest.approx(1.0)
    plain = Jet.constant(jet_space(1, 2), 5.0)
    assert plain.embed(2).space == space
    assert (t * 3.0).dt().value() == pytest.approx(3.0)
    assert (t + 1.0).at_t0().t_order == 0


def test_matrix_inverse_and_det(rng):
    space = jet_space(2, 2)
    M = Jet.random(space, rng, shape=(3, 3), scale=0.2) + np.eye(3) * 2.0
    eye = jmat_ops(M, "mul", jmat_inverse(M))
    assert (eye - np.eye(3)).max_abs() < 1e-12
    assert abs(jmat_det(M).value() - np.linalg.det(M.value())) < 1e-12
    assert (jmat_ops(M, "logdet").exp() - jmat_ops(M, "det")).max_abs() < 1e-10


def test_arithmetic_dispatch_rejects_unknown_op():
    a = Jet.constant(jet_space(1, 1), 1.0)
    assert jet_arithmetic(a, 2.0, "mul").value() == pytest.approx(2.0)
    with pytest.raises(ValueError):
        jet_arithmetic(a, None, "sqrt")


@pytest.mark.parametrize("op", ["add", "mul", "div"])
def test_binary_dispatch_needs_second_operand(op):
    a = Jet.constant(jet_space(1, 1), 1.0)
    with pytest.raises(ShapeError):
        jet_arithmetic(a, None, op)
    assert jet_arithmetic(a, None, "exp").value() == pytest.approx(np.e)


def test_perm_sign():
    assert perm_sign([0, 1, 2]) == 1
    assert perm_sign([1, 0, 2]) == -1
    assert perm_sign([1, 2, 0]) == 1


def test_difference_of_squares():
    space = jet_space(1, 2)
    z = Jet.variable(space, "z1")
    prod = jet_arithmetic(z + 1.0, 1.0 - z, "mul")
    assert prod.coefficient((0, 0)) == pytest.approx(1.0)
    assert prod.coefficient((1, 0)) == pytest.approx(0.0)
    assert prod.coefficient((2, 0)) == pytest.approx(-1.0)


def test_mixed_partials_commute(rng):
    a = Jet.random(jet_space(2, 4), rng)
    lhs = jet_partial(jet_partial(a, "z1"), "zbar2")
    rhs = jet_partial(jet_partial(a, "zbar2"), "z1")
    assert (lhs - rhs).max_abs() == 0.0


def test_det_by_cofactor():
    space = jet_space(1, 2)
    z, zb = Jet.variable(space, "z1"), Jet.variable(space, "zbar1")
    one = Jet.constant(space, 1.0)
    M = stack([stack([one + z, zb]), stack([z, one])])
    expected = one + z - z * zb
    assert (jmat_det(M) - expected).max_abs() < 1e-15


def _integer_jet(space, rng):
    size = space.size
    return Jet(space, rng.integers(-8, 9, size=size) + 1j * rng.integers(-8, 9, size=size))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("order", [2, 3, 4])
def test_ring_axioms_exact(m, order):
    # integer coefficients keep every product exact in floating point
    rng = np.random.default_rng(100 * m + order)
    space = jet_space(m, order)
    for _ in range(200):
        a, b, c = (_integer_jet(space, rng) for _ in range(3))
        assert ((a * b) * c - a * (b * c)).max_abs() == 0.0
        assert (a * (b + c) - (a * b + a * c)).max_abs() == 0.0
        assert (a * b - b * a).max_abs() == 0.0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 3))
def test_conjugation_and_real_part(seed, m):
    rng = np.random.default_rng(seed)
    a = Jet.random(jet_space(m, 3), rng)
    assert (a.conj().conj() - a).max_abs() == 0.0
    real = a.realpart()
    assert real.is_real()
    assert (real.realpart() - real).max_abs() == 0.0
    assert (real.conj() - real).max_abs() == 0.0


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 2))
def test_exp_then_log_without_constant_term(seed, m):
    rng = np.random.default_rng(seed)
    space = jet_space(m, 3)
    a = Jet.random(space, rng, scale=0.5)
    a = a - a.value()
    assert (a.exp().log() - a).max_abs() < 1e-12
    assert abs(a.exp().value() - 1.0) == 0.0
