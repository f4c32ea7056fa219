import json
from fractions import Fraction

import pytest

from core.errors import ConfigError, DGLAValidationError, GaugeError, ObstructionError
from core.kuranishi import (
    FormalSeries,
    bracket_series,
    default_linear_terms,
    dgla_from_dict,
    dgla_validate,
    kuranishi_solve,
    list_builtin_dglas,
    load_dgla,
    mc_residual,
    multi_indices,
    series_ops,
)


def test_builtin_dglas_listed():
    assert {"abelian", "three_element", "obstructed", "broken_leibniz"} <= set(list_builtin_dglas())


def test_three_element_solution_terminates():
    D = load_dgla("three_element")
    sol = kuranishi_solve(D, default_linear_terms(D), order=8)
    assert not sol.obstructed
    assert sol.exact
    assert sol.phi.coeffs == {(1,): (1, 0), (2,): (0, 1)}
    assert sol.to_dict()["phi"]["readable"] == {"1": "1*e1", "2": "1*e2"}


def test_linear_term_alone_leaves_quadratic_residual():
    D = load_dgla("three_element")
    sol = kuranishi_solve(D, [[1, 0]], order=8)
    residual = mc_residual(sol.phi.truncate(1).with_order(8), D)
    # dφ − ½[φ, φ] = −t² e3 for φ = t e1
    assert residual.coeffs == {(2,): (Fraction(-1),)}


def test_obstructed_at_order_two():
    D = load_dgla("obstructed")
    sol = kuranishi_solve(D, [[1]], order=4)
    assert sol.obstructed
    assert sol.obstruction.order == 2
    assert sol.obstruction.component == (1,)
    assert sol.order_flags == {1: False, 2: True}
    assert sol.solved_order == 1
    assert not sol.exact
    with pytest.raises(ObstructionError):
        kuranishi_solve(D, [[1]], order=4, raise_on_obstruction=True)


def test_abelian_is_linear_and_exact():
    D = load_dgla("abelian")
    terms = default_linear_terms(D)
    assert len(terms) == 2
    sol = kuranishi_solve(D, terms, order=5)
    assert sol.exact
    assert all(sum(index) == 1 for index in sol.phi.coeffs)


def test_broken_leibniz_fails_only_leibniz():
    report = dgla_validate(load_dgla("broken_leibniz"))
    assert not report.valid
    assert {f["axiom"] for f in report.failures} == {"leibniz"}
    assert report.hodge is None
    with pytest.raises(DGLAValidationError):
        report.raise_if_invalid()


def test_valid_dgla_gets_hodge_data():
    report = dgla_validate(load_dgla("three_element"))
    assert report.valid
    assert report.to_dict()["failures"] == []
    assert report.hodge.harmonic[2].is_zero()


def test_solver_rejects_bad_input():
    D = load_dgla("three_element")
    with pytest.raises(ConfigError):
        kuranishi_solve(D, [[1, 0]], order=0)
    with pytest.raises(ConfigError):
        kuranishi_solve(D, [], order=3)
    # e2 is not closed, hence not harmonic
    with pytest.raises(GaugeError):
        kuranishi_solve(D, [[0, 1]], order=3)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dgla("no_such_algebra")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_dgla(bad)


def test_load_from_explicit_path(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps({"degrees": [1], "dims": [1]}), encoding="utf-8")
    D = load_dgla(path)
    assert D.name == "tiny"
    assert D.dim(1) == 1


def test_dims_must_match_degrees():
    with pytest.raises(ConfigError):
        dgla_from_dict({"degrees": [1, 2], "dims": [1]})


def test_multi_indices():
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert multi_indices(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_series_arithmetic():
    D = load_dgla("three_element")
    a = FormalSeries(1, 3, 1, 2, {(1,): (1, 0)})
    doubled = series_ops(a, a, "add")
    assert doubled.coefficient((1,)) == (2, 0)
    assert bracket_series(a, a, D).coeffs == {(2,): (2,)}
    assert series_ops(a, None, "truncate", order=0).is_zero()
    with pytest.raises(ValueError):
        series_ops(a, a, "wedge")
