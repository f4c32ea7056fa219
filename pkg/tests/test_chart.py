import numpy as np
import pytest

from core.chart import build_deformed_chart, complex_structure_tensor
from core.constraints import ConstraintSet, random_constrained_phi
from core.errors import ObstructionError, ShapeError
from core.jets import Jet, jet_space
from core.kahler import VectorFormJet, metric_from_potential, random_potential


def _integrable_phi(rng, m=2):
    g = metric_from_potential(random_potential(jet_space(m, 5), rng))
    phi = random_constrained_phi(rng, m, 2, ConstraintSet(integrable=1, omega_compatible=2), g)
    return phi, g


def test_constant_phi_gives_linear_coordinates(rng):
    space = jet_space(2, 2)
    phi0 = 0.1 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    chart = build_deformed_chart(VectorFormJet(1, Jet.constant(space, phi0)), 3)
    assert chart.coordinate_residual() < 1e-14
    assert np.allclose(chart.A.value(), np.eye(2))
    # w = z + φ(0) z̄
    assert np.allclose(chart.w.coefficient((0, 0, 1, 0)), phi0[:, 0])


def test_integrable_phi_chart_identities(rng):
    phi, g = _integrable_phi(rng)
    chart = build_deformed_chart(phi, 3)
    assert chart.coordinate_residual() < 1e-10
    residuals = chart.jacobian_residuals()
    assert set(residuals) == {"jacobian_identity", "antiholomorphic_jacobian", "frame"}
    assert max(residuals.values()) < 1e-10


def test_complex_structure_squares_to_minus_one(rng):
    phi, g = _integrable_phi(rng)
    structure = complex_structure_tensor(build_deformed_chart(phi, 3), g)
    assert structure["square_residual"] < 1e-10
    assert structure["omega_residual"] < 1e-10


def test_non_integrable_phi_is_obstructed():
    space = jet_space(2, 2)
    # φ^1_1̄ = z̄², so ∂̄φ ≠ 0 while [φ, φ] vanishes at the base point
    unit = np.array([[1.0, 0.0], [0.0, 0.0]])
    phi = VectorFormJet(1, Jet.variable(space, "zbar2") * unit)
    with pytest.raises(ObstructionError):
        build_deformed_chart(phi, 3)


def test_chart_needs_vector_valued_01_form(rng):
    space = jet_space(2, 2)
    with pytest.raises(ShapeError):
        build_deformed_chart(VectorFormJet(0, Jet.zeros(space, (2,))), 3)
