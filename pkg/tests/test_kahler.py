import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import DegreeError, NotAMetricError, ShapeError
from core.jets import Jet, jet_space
from core.kahler import (
    FormJet,
    VectorFormJet,
    WeightJet,
    bracket,
    contract_omega,
    dbar,
    dbar_covariant,
    flat_potential,
    fubini_study_potential,
    laplacian_f,
    metric_from_components,
    metric_from_potential,
    random_form,
    random_potential,
    random_vector_form,
    ricci_via_logdet,
)


def test_flat_metric_is_identity():
    g = metric_from_potential(flat_potential(jet_space(2, 4)))
    assert np.allclose(g.value(), np.eye(2))
    assert g.curvature.riemann.max_abs() < 1e-14


def test_fubini_study_is_kahler_einstein():
    g = metric_from_potential(fubini_study_potential(jet_space(1, 5)))
    assert g.value()[0, 0] == pytest.approx(2.0)
    ricci = g.curvature.ricci
    assert np.allclose(ricci.value(), g.value())
    assert g.curvature.scalar.value() == pytest.approx(1.0)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 3))
def test_two_ricci_formulas_agree(seed, m):
    rng = np.random.default_rng(seed)
    g = metric_from_potential(random_potential(jet_space(m, 5), rng))
    ricci = g.curvature.ricci
    other = ricci_via_logdet(g)
    order = min(ricci.order, other.order)
    assert (ricci.truncate(order) - other.truncate(order)).max_abs() < 1e-10


def test_potential_order_too_low():
    with pytest.raises(DegreeError):
        metric_from_potential(flat_potential(jet_space(1, 2)))


def test_negative_metric_rejected():
    space = jet_space(1, 2)
    with pytest.raises(NotAMetricError):
        metric_from_components(Jet.constant(space, -np.eye(1)))


def test_complex_weight_rejected():
    space = jet_space(1, 2)
    with pytest.raises(ShapeError):
        WeightJet(Jet.variable(space, "z1"))


def test_form_shape_checked():
    space = jet_space(2, 2)
    with pytest.raises(ShapeError):
        FormJet(0, 1, Jet.zeros(space, (2, 2)))


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000), p=st.integers(0, 1), q=st.integers(0, 1))
def test_dbar_squares_to_zero(seed, p, q):
    rng = np.random.default_rng(seed)
    eta = random_form(jet_space(2, 3), rng, p, q)
    assert dbar(dbar(eta)).max_abs() < 1e-12


def test_dbar_through_connection_matches_coordinates(rng):
    g = metric_from_potential(random_potential(jet_space(2, 5), rng))
    eta = random_form(jet_space(2, 3), rng, 1, 1)
    plain = dbar(eta).comp.value()
    covariant = dbar_covariant(eta, g).comp.value()
    assert np.allclose(plain, covariant, atol=1e-12)


def test_function_laplacian_of_flat_norm_square():
    space = jet_space(2, 4)
    g = metric_from_potential(flat_potential(space))
    u = FormJet(0, 0, flat_potential(space))
    # Δ|z|² = −g^{ij̄}δ_ij = −m
    assert laplacian_f(u, g).comp.value() == pytest.approx(-2.0)


def test_constant_has_zero_laplacian(rng):
    space = jet_space(2, 4)
    g = metric_from_potential(random_potential(jet_space(2, 5), rng))
    f = Jet.random(space, rng, real=True)
    one = FormJet(0, 0, Jet.constant(space, 1.0))
    assert abs(laplacian_f(one, g, f).comp.value()) < 1e-14


def test_contract_omega_is_antisymmetric(rng):
    g = metric_from_potential(random_potential(jet_space(2, 5), rng))
    phi = random_vector_form(jet_space(2, 2), rng, 1)
    C = contract_omega(phi, g)
    assert (C.p, C.q) == (0, 2)
    assert C.antisymmetry_gap() < 1e-12


def test_contract_omega_needs_q1(rng):
    g = metric_from_potential(random_potential(jet_space(2, 5), rng))
    phi = random_vector_form(jet_space(2, 2), rng, 2)
    with pytest.raises(ShapeError):
        contract_omega(phi, g)


def test_bracket_graded_antisymmetry(rng):
    space = jet_space(2, 3)
    phi = random_vector_form(space, rng, 1)
    psi = random_vector_form(space, rng, 1)
    # (−1)^{q₁q₂} = −1, so [φ,ψ] = [ψ,φ] for two (0,1)-forms
    assert (bracket(phi, psi) - bracket(psi, phi)).max_abs() < 1e-12


def test_bracket_of_constants_vanishes(rng):
    space = jet_space(2, 2)
    phi = VectorFormJet(1, Jet.constant(space, rng.standard_normal((2, 2))))
    assert bracket(phi, phi).max_abs() == 0.0
