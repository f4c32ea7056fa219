import numpy as np
import pytest

from core.errors import ConfigError
from core.identity_lab import CHECKS, compare, run_check


@pytest.mark.parametrize("m,p,q", [(1, 0, 1), (2, 0, 1), (2, 1, 1), (2, 0, 2)])
@pytest.mark.parametrize("weighted", [False, True])
def test_bochner_kodaira(m, p, q, weighted):
    report = run_check("bochner_kodaira", seed=1, m=m, p=p, q=q, weighted=weighted)
    assert report.passed, report.relative
    assert report.identity == ("bochner_kodaira_weighted" if weighted else "bochner_kodaira")
    assert (report.p, report.q) == (p, q)


def test_bochner_kodaira_rejects_bidegree():
    with pytest.raises(ConfigError):
        run_check("bochner_kodaira", seed=0, m=1, p=0, q=2)


def test_omega_contraction_and_its_control():
    report = run_check("omega_contraction_laplacian", seed=2, m=2, control=True)
    assert report.passed, report.relative
    assert report.control is not None and report.control > 1e-4


def test_omega_contraction_needs_two_dimensions():
    with pytest.raises(ConfigError):
        run_check("omega_contraction_laplacian", seed=0, m=1)


@pytest.mark.parametrize("m", [1, 2])
def test_deformed_metric(m):
    report = run_check("deformed_metric", seed=3, m=m, control=False)
    assert report.passed, report.relative
    assert report.components["frame_pairing"] < 1e-8
    assert report.control is None


def test_ricci_form_deformation_components():
    report = run_check("ricci_form_deformation", seed=4, m=2, control=False)
    assert report.passed, report.relative
    expected = {"ddbar_logdet", "dbar_logdetA", "dbar_logdetAbar", "frame_T_Bbar", "frame_T_logdetA"}
    assert expected <= set(report.components)


@pytest.mark.parametrize("name", ["scalar_linearization", "ricci_volume_variation"])
def test_first_order_variations(name):
    report = run_check(name, seed=5, m=2, control=False)
    assert report.passed, report.relative


@pytest.mark.parametrize("k,q", [(1, 0), (1, 1), (2, 0), (2, 1)])
def test_coupled_bk(k, q):
    report = run_check("coupled_bk", seed=6, k=k, m=2, q=q)
    assert report.passed, report.relative
    assert len([c for c in report.components if c.startswith("metric_")]) == k


def test_coupled_bk_rejects_high_degree_for_several_metrics():
    with pytest.raises(ConfigError):
        run_check("coupled_bk", seed=0, k=2, m=2, q=2)


@pytest.mark.parametrize("m", [1, 2])
def test_ricci_identities(m):
    report = run_check("ricci_identities", seed=7, m=m)
    assert report.passed, report.relative
    assert report.components["ricci_formulas"] < 1e-8


def test_chart_consistency():
    report = run_check("chart_consistency", seed=8, m=2)
    assert report.passed, report.components
    assert "holomorphic_coords" in report.components


def test_gauge_divergence_with_control():
    report = run_check("gauge_divergence", seed=9, m=2, control=True)
    assert report.passed, report.relative
    assert report.control > 1e-4


def test_run_check_filters_parameters():
    # `p` is not a parameter of ricci_identities and is dropped
    report = run_check("ricci_identities", seed=0, m=1, p=3)
    assert report.m == 1


def test_unknown_check():
    with pytest.raises(ConfigError):
        run_check("no_such_identity", seed=0)


def test_same_seed_same_report():
    a = run_check("bochner_kodaira", seed=12, m=2, p=1, q=1).to_dict()
    b = run_check("bochner_kodaira", seed=12, m=2, p=1, q=1).to_dict()
    assert a == b


def test_every_check_is_registered():
    assert set(CHECKS) == {
        "bochner_kodaira", "omega_contraction_laplacian", "deformed_metric", "ricci_form_deformation",
        "scalar_linearization", "ricci_volume_variation", "coupled_bk", "ricci_identities",
        "chart_consistency", "gauge_divergence",
    }


def test_compare_relative_residual():
    absolute, relative, nl, nr = compare(np.array([3.0, 4.0]), np.array([3.0, 4.0 + 1e-6]))
    assert nl == pytest.approx(5.0)
    assert absolute == pytest.approx(1e-6)
    assert relative == pytest.approx(1e-6 / nr)
    assert compare(np.zeros(2), np.zeros(2))[1] == 0.0
    # roundoff on both sides is measured against the floor
    assert compare(np.array([1e-17]), np.array([-1e-17]), floor=1.0)[1] == pytest.approx(2e-17)


def test_failing_helper_identity_fails_the_check(monkeypatch):
    monkeypatch.setattr("core.identity_lab.helper_identities", lambda chart: {"dbar_logdetA": 1.0})
    report = run_check("ricci_form_deformation", seed=4, m=2, control=False)
    assert report.relative <= report.tolerance
    assert not report.passed
    assert report.component_tolerance == 1e-10


def test_helper_identities_within_component_tolerance():
    report = run_check("ricci_form_deformation", seed=4, m=2, control=False)
    assert max(report.components.values()) <= report.component_tolerance


def test_ricci_identities_gate_every_component():
    report = run_check("ricci_identities", seed=7, m=2)
    report.components["symmetry_ik"] = 1e-6
    assert not report.gate_components(1e-10).passed


@pytest.mark.parametrize("m,p,q", [(1, 0, 1), (2, 0, 1), (2, 1, 2)])
def test_weighted_bochner_kodaira_control(m, p, q):
    report = run_check("bochner_kodaira", seed=3, m=m, p=p, q=q, weighted=True, control=True)
    assert report.passed, report.relative
    assert report.control is not None and report.control > 1e-4


def test_unweighted_bochner_kodaira_has_no_control():
    assert run_check("bochner_kodaira", seed=3, m=2, p=0, q=1, control=True).control is None


@pytest.mark.parametrize("k", [1, 2])
def test_coupled_bk_control(k):
    report = run_check("coupled_bk", seed=6, k=k, m=2, q=1, control=True)
    assert report.passed, report.relative
    assert report.control is not None and report.control > 1e-4
    # the relation does not enter for functions
    assert run_check("coupled_bk", seed=6, k=k, m=2, q=0, control=True).control is None
