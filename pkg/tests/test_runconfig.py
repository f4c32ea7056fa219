from argparse import Namespace

import pytest

from core.errors import ConfigError
from core.runconfig import (
    build_run_config,
    expand_tasks,
    load_manifest,
    parse_degrees,
    parse_expect_obstruction,
    parse_grid,
    parse_perturbation,
    parse_seeds,
)
from core.spectral import Perturbation


def test_parse_seeds():
    assert parse_seeds("5") == [0, 1, 2, 3, 4]
    assert parse_seeds("1,2,5-8") == [1, 2, 5, 6, 7, 8]
    assert parse_seeds("7-7") == [7]
    assert parse_seeds("3,3,1") == [3, 1]
    assert parse_seeds(3) == [0, 1, 2]
    assert parse_seeds([4, 2]) == [4, 2]
    assert parse_seeds(None) == []
    for bad in ("a", "5-2", "1,,x", [-1], True):
        with pytest.raises(ValueError):
            parse_seeds(bad)


def test_parse_perturbation():
    assert parse_perturbation("eps=0.1,mode=nonaxial") == Perturbation(0.1, "nonaxial")
    assert parse_perturbation("eps=0.05") == Perturbation(0.05, "quad")
    assert parse_perturbation({"eps": 0.1, "mode": "quad"}) == Perturbation(0.1, "quad")
    for bad in ("mode=quad", "eps=x", "eps=0.1,mode=cubic", "eps=0.1,size=2", "0.1"):
        with pytest.raises(ValueError):
            parse_perturbation(bad)


def test_parse_expect_obstruction():
    assert parse_expect_obstruction("order=2") == 2
    assert parse_expect_obstruction("3") == 3
    assert parse_expect_obstruction(None) is None
    with pytest.raises(ValueError):
        parse_expect_obstruction("level=2")


def test_parse_grid_and_degrees():
    assert parse_grid("16x32") == (16, 32)
    assert parse_grid([8, 16]) == (8, 16)
    with pytest.raises(ValueError):
        parse_grid("16by32")
    assert parse_degrees("8,4,6,4") == (4, 6, 8)
    with pytest.raises(ValueError):
        parse_degrees("4,six")


def test_expand_tasks_product_and_skips():
    entries = [{"check": "bochner_kodaira", "m": [1, 2], "pq": [[0, 1], [0, 2]], "weighted": [False, True]}]
    tasks = expand_tasks(entries)
    # (m=1, q=2) is skipped
    assert len(tasks) == 6
    assert all(t["params"]["q"] <= t["params"]["m"] for t in tasks)
    assert tasks[0] == {"check": "bochner_kodaira", "params": {"m": 1, "p": 0, "q": 1, "weighted": False}}


def test_expand_tasks_coupled_skip_and_m_override():
    tasks = expand_tasks([{"check": "coupled_bk", "k": [1, 2], "q": [1, 2], "m": 2}])
    assert [(t["params"]["k"], t["params"]["q"]) for t in tasks] == [(1, 1), (1, 2), (2, 1)]
    tasks = expand_tasks(["ricci_identities"], m_override=[3])
    assert tasks == [{"check": "ricci_identities", "params": {"m": 3}}]
    with pytest.raises(ConfigError):
        expand_tasks([{"m": 2}])


def test_identities_from_args():
    args = Namespace(check=["ricci_identities"], seeds="2", m=[1, 2], tolerance=None, control=True)
    config = build_run_config("identities", args)
    assert config.seeds == [0, 1]
    assert len(config.tasks) == 2
    assert config.control
    echo = config.to_dict()
    assert echo["command"] == "identities"
    assert echo["tolerance"] == config.tolerance


def test_identities_errors():
    with pytest.raises(ConfigError):
        build_run_config("identities", Namespace(check=["ricci_identities"], seeds="x"))
    with pytest.raises(ConfigError):
        build_run_config("identities", Namespace(check=["no_such_check"], seeds="2"))
    with pytest.raises(ConfigError):
        build_run_config("identities", Namespace(check=None, seeds="2"))
    with pytest.raises(ConfigError):
        build_run_config("identities", Namespace(check=["ricci_identities"], seeds="2", workers=0))


def test_cli_overrides_manifest():
    manifest = {"name": "spectrum", "params": {"basis": 12, "grid": "32x64", "samples": 100,
                                               "perturbations": ["eps=0.05,mode=quad"]}}
    config = build_run_config("spectrum", Namespace(basis=6, grid="16x32", samples=None), manifest)
    assert config.basis == 6
    assert config.grid == (16, 32)
    assert config.samples == 100
    assert config.suite == "spectrum"
    assert config.perturbations == [Perturbation(), Perturbation(0.05, "quad")]


def test_spectrum_grid_must_integrate_basis():
    with pytest.raises(ConfigError):
        build_run_config("spectrum", Namespace(basis=12, grid="8x16", degrees="4"))
    with pytest.raises(ConfigError):
        build_run_config("spectrum", Namespace(perturb=["eps=0.1,mode=cubic"]))


def test_kuranishi_config():
    config = build_run_config("kuranishi", Namespace(dgla="obstructed", order=4, expect_obstruction="order=2"))
    assert config.expect_obstruction == 2
    assert config.to_dict()["dgla"] == "obstructed"
    with pytest.raises(ConfigError):
        build_run_config("kuranishi", Namespace(dgla=None))
    with pytest.raises(ConfigError):
        build_run_config("kuranishi", Namespace(dgla="obstructed", order=3, expect_obstruction="5"))


def test_load_manifest(suite_dir):
    manifest = load_manifest("kuranishi", "kuranishi_obstructed")
    assert manifest["name"] == "kuranishi_obstructed"
    assert manifest["params"]["dgla"] == "obstructed"
    assert load_manifest("identities", None) is None
    with pytest.raises(ConfigError):
        load_manifest("spectrum", "kuranishi_obstructed")
    with pytest.raises(ConfigError):
        load_manifest("identities", "no_such_suite")


def test_suite_alias(suite_dir):
    manifest = load_manifest("identities", "k1")
    assert manifest["name"] == "omega_contraction"
