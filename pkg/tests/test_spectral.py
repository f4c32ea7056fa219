import numpy as np
import pytest

from core.errors import ConfigError, ZeroFieldError
from core.spectral import (
    BasisSet,
    Perturbation,
    analyze_spectrum,
    assemble_laplacian_01forms,
    assemble_laplacian_functions,
    average_scalar_curvature,
    basis_arrays,
    build_grid,
    closure_gram,
    cluster_ids,
    convergence_table,
    fubini_study_check,
    fubini_study_eigenvalues,
    holomorphy_residual,
    is_monotone,
    moment_map_pairing,
    perturb_metric,
    plot_convergence,
    random_function,
    solve_pencil,
)


@pytest.fixture(scope="module")
def small_grid():
    return build_grid(16, 32)


@pytest.fixture(scope="module")
def fs_metric(small_grid):
    return perturb_metric(Perturbation(), small_grid)


def test_grid_weights_cover_the_sphere():
    grid = build_grid(8, 16)
    assert grid.size == 128
    assert grid.weights.sum() == pytest.approx(4 * np.pi)
    assert grid.exactness == 15


def test_grid_too_small():
    with pytest.raises(ConfigError):
        build_grid(3, 16)


def test_basis_needs_exact_grid():
    basis = BasisSet(8)
    assert basis.size == 81
    with pytest.raises(ConfigError):
        basis.check_grid(build_grid(6, 12))


def test_basis_conjugation_is_an_involution():
    perm = BasisSet(3).conjugation()
    assert np.array_equal(perm[perm], np.arange(16))


def test_perturbation_labels():
    assert Perturbation().label == "fubini-study"
    assert Perturbation(0.05, "nonaxial").label == "0.05:nonaxial"
    with pytest.raises(ConfigError):
        Perturbation(0.1, "cubic")


def test_fubini_study_values():
    assert fubini_study_eigenvalues(9).tolist() == [0, 1, 1, 1, 3, 3, 3, 3, 3]


def test_cluster_ids_group_close_values():
    assert cluster_ids([0.0, 1.0, 1.0 + 1e-7, 3.0]).tolist() == [0, 1, 1, 2]


def test_is_monotone():
    rows = [{"N": 4, "error": 1e-2}, {"N": 6, "error": 1e-5}, {"N": 8, "error": 1e-5 + 1e-12}]
    assert is_monotone(rows)
    assert not is_monotone(rows + [{"N": 10, "error": 1e-3}])


def test_basis_reproduces_constant(small_grid, fs_metric):
    basis = BasisSet(5)
    values = basis.constant() @ basis_arrays(basis, fs_metric).val
    assert np.allclose(values, 1.0, atol=1e-12)


def test_fubini_study_metric(fs_metric):
    assert fs_metric.relation_residual < 1e-10
    assert np.allclose(fs_metric.f.value(), 0.0, atol=1e-12)
    assert average_scalar_curvature(fs_metric) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("mode", ["quad", "nonaxial"])
def test_perturbed_metric_stays_in_class(mode):
    grid = build_grid()
    metric = perturb_metric(Perturbation(0.05, mode), grid)
    assert metric.relation_residual < 1e-8
    assert metric.area.sum() == pytest.approx(4 * np.pi, rel=1e-6)
    assert average_scalar_curvature(metric) == pytest.approx(1.0, abs=1e-6)


def test_fubini_study_spectrum(small_grid, fs_metric):
    result = solve_pencil(assemble_laplacian_functions(small_grid, BasisSet(6), fs_metric))
    check = fubini_study_check(result)
    assert check.passed, check.detail
    assert result.multiplicities[:4] == [1, 3, 5, 7]
    assert len(result.cluster_near(1.0)) == 3
    rows = result.rows()
    assert set(rows[0]) == {"index", "value", "cluster", "residual", "kind"}
    assert rows[0]["kind"] == "functions"


def test_form_closure_term_is_assembled(small_grid, fs_metric):
    basis = BasisSet(6)
    arrays = basis_arrays(basis, fs_metric)
    assert np.abs(arrays.dbar2).max() > 1e-3
    closure = closure_gram(basis, fs_metric)
    assert closure.shape == (basis.size, basis.size)
    # the (0,2)-part of ∂̄η vanishes on a curve
    scale = np.abs(arrays.lap).max() ** 2
    assert np.abs(closure).max() <= 1e-12 * scale


def test_form_spectrum_starts_at_one(small_grid, fs_metric):
    result = solve_pencil(assemble_laplacian_01forms(small_grid, BasisSet(6), fs_metric))
    assert result.eigenvalues[0] == pytest.approx(1.0, abs=1e-6)
    assert result.multiplicities[0] == 3
    assert result.rows()[0]["kind"] == "forms01"


def test_metric_from_another_grid_rejected(fs_metric):
    with pytest.raises(ConfigError):
        assemble_laplacian_functions(build_grid(16, 32), BasisSet(4), fs_metric)


def test_holomorphy_of_first_eigenfunction(fs_metric):
    basis = BasisSet(1)
    # z/(1 + |z|²) has eigenvalue 1 on Fubini–Study
    u = np.zeros(basis.size, dtype=complex)
    u[basis.position(1, 0)] = 1.0
    assert holomorphy_residual(u, basis, fs_metric) < 1e-10
    with pytest.raises(ZeroFieldError):
        holomorphy_residual(basis.constant(), basis, fs_metric)


def test_moment_map_pairing(fs_metric):
    basis = BasisSet(4)
    rng = np.random.default_rng(5)
    v = random_function(basis, fs_metric, rng, real=True)
    u = random_function(basis, fs_metric, rng, real=True)
    assert moment_map_pairing(v, u, basis, fs_metric)[2] < 1e-8


def test_analysis_on_fubini_study(small_grid, fs_metric):
    analysis = analyze_spectrum(small_grid, BasisSet(6), fs_metric, seed=0, samples=5, pairs=5)
    failed = [c.name for c in analysis.checks if not c.passed]
    assert analysis.passed, failed
    names = {c.name for c in analysis.checks}
    assert {"zero_multiplicity", "intertwining", "holomorphy_residual", "hermitian_form_positive"} <= names


def test_convergence_on_fubini_study(small_grid):
    table = convergence_table([3, 4, 6], Perturbation(), small_grid)
    assert [row["N"] for row in table] == [3, 4, 6]
    assert max(row["error"] for row in table) < 1e-8
    with pytest.raises(ConfigError):
        convergence_table([2, 4], Perturbation(), small_grid)


def test_plot_convergence(tmp_path):
    pytest.importorskip("matplotlib")
    tables = {"fubini-study": [{"N": 4, "error": 1e-3}, {"N": 6, "error": 1e-6}]}
    path = plot_convergence(tables, str(tmp_path / "convergence.svg"), title="FS")
    assert (tmp_path / "convergence.svg").read_text().lstrip().startswith("<?xml")
    assert path.endswith(".svg")
