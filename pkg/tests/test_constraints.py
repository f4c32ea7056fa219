import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.constraints import (
    ConstraintSet,
    constraint_residuals,
    fano_adjust_weight,
    fano_residual,
    random_constrained_phi,
    random_weight,
)
from core.errors import DegreeError, InfeasibleError
from core.jets import jet_space
from core.kahler import metric_from_potential, random_potential


def _background(m, rng):
    return metric_from_potential(random_potential(jet_space(m, 5), rng))


def test_constraint_set_helpers():
    c = ConstraintSet(gauge=1, fano_relation=True)
    assert c.active() == {"gauge": 1, "fano_relation": True}
    assert c.without("gauge").active() == {"fano_relation": True}
    assert c.without("fano_relation").active() == {"gauge": 1}
    with pytest.raises(ValueError):
        ConstraintSet.from_dict({"holomorphic": 1})


@settings(max_examples=5, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_integrable_and_compatible_phi(seed):
    rng = np.random.default_rng(seed)
    g = _background(2, rng)
    constraints = ConstraintSet(integrable=1, omega_compatible=2)
    phi = random_constrained_phi(rng, 2, 2, constraints, g)
    residuals = constraint_residuals(phi, constraints, g)
    assert set(residuals) == {"integrable", "omega_compatible"}
    assert max(residuals.values()) < 1e-10
    assert phi.max_abs() > 1e-3


def test_gauge_with_fano_weight(rng):
    g = _background(2, rng)
    f = fano_adjust_weight(g, random_weight(jet_space(2, 3), rng))
    assert fano_residual(g, f) < 1e-12
    constraints = ConstraintSet(gauge=1, fano_relation=True)
    phi = random_constrained_phi(rng, 2, 2, constraints, g, f)
    residuals = constraint_residuals(phi, constraints, g, f)
    assert residuals["gauge"] < 1e-10
    assert residuals["fano_relation"] < 1e-12


def test_fano_relation_must_hold_at_base_point(rng):
    g = _background(2, rng)
    f = random_weight(jet_space(2, 3), rng)
    with pytest.raises(InfeasibleError):
        random_constrained_phi(rng, 2, 2, ConstraintSet(fano_relation=True), g, f)


def test_differential_constraint_needs_order(rng):
    g = _background(2, rng)
    with pytest.raises(DegreeError):
        random_constrained_phi(rng, 2, 2, ConstraintSet(dbar_closed=2), g)


def test_same_seed_same_phi():
    g = _background(2, np.random.default_rng(3))
    constraints = ConstraintSet(dbar_closed=1)
    a = random_constrained_phi(11, 2, 2, constraints, g)
    b = random_constrained_phi(11, 2, 2, constraints, g)
    assert np.array_equal(a.comp.coeffs, b.comp.coeffs)
