"""
Run configuration for KahlerLab.

Command-line arguments merged over a suite manifest's `params`, parsed and
validated before any computation starts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ConfigError
from .spectral import MODES, Perturbation

try:
    from config import (
        BASIS_N,
        CONTROL_FLOOR,
        CONVERGENCE_DEGREES,
        GRID_ANGULAR,
        GRID_RADIAL,
        IDENTITY_TOLERANCE,
        KURANISHI_ORDER,
        MAX_WORKERS,
        MOMENT_PAIRS,
        PSI_SAMPLES,
    )
except ImportError:
    BASIS_N = 12
    CONTROL_FLOOR = 1e-4
    CONVERGENCE_DEGREES = (4, 6, 8, 10, 12)
    GRID_RADIAL = 32
    GRID_ANGULAR = 64
    IDENTITY_TOLERANCE = 1e-8
    KURANISHI_ORDER = 8
    MAX_WORKERS = None
    MOMENT_PAIRS = 25
    PSI_SAMPLES = 100

COMMANDS = ("identities", "spectrum", "kuranishi")
DEFAULT_M = 2

_RANGE_RE = re.compile(r"^(\d+)\s*-\s*(\d+)$")
_GRID_RE = re.compile(r"^(\d+)\s*[xX×]\s*(\d+)$")


# --------------------------------------------------------------------------
# Parsers
# --------------------------------------------------------------------------

def parse_seeds(spec: Union[str, int, Sequence[int], None]) -> List[int]:
    """
    Seeds from "50" (seeds 0..49), "1,2,5-8" (explicit list and ranges), an int
    count, or a list of ints. Duplicates are dropped, order is kept.
    """
    if spec is None:
        return []
    if isinstance(spec, bool):
        raise ValueError(f"Unrecognized seed format: {spec!r}")
    if isinstance(spec, int):
        return list(range(spec))
    if isinstance(spec, (list, tuple)):
        seeds = []
        for entry in spec:
            if isinstance(entry, bool) or not isinstance(entry, int) or entry < 0:
                raise ValueError(f"Unrecognized seed format: {entry!r}")
            seeds.append(entry)
        return list(dict.fromkeys(seeds))

    text = str(spec).strip()
    if not text:
        return []
    if text.isdigit():
        return list(range(int(text)))
    seeds = []
    for entry in text.split(","):
        entry = entry.strip()
        if not entry:
            continue
        if entry.isdigit():
            seeds.append(int(entry))
            continue
        match = _RANGE_RE.match(entry)
        if match and int(match.group(1)) <= int(match.group(2)):
            seeds.extend(range(int(match.group(1)), int(match.group(2)) + 1))
            continue
        raise ValueError(f"Unrecognized seed format: {entry!r}")
    return list(dict.fromkeys(seeds))


def _key_values(text: str, what: str) -> Dict[str, str]:
    result = {}
    for entry in text.split(","):
        entry = entry.strip()
        if not entry:
            continue
        if "=" not in entry:
            raise ValueError(f"Unrecognized {what} format: {entry!r}")
        key, value = entry.split("=", 1)
        result[key.strip().lower()] = value.strip()
    return result


def parse_perturbation(spec: Union[str, Mapping[str, Any], Perturbation]) -> Perturbation:
    """"eps=0.1,mode=quad" (mode defaults to quad) or an equivalent mapping."""
    if isinstance(spec, Perturbation):
        return spec
    values = dict(spec) if isinstance(spec, Mapping) else _key_values(str(spec), "perturbation")
    unknown = set(values) - {"eps", "mode"}
    if unknown:
        raise ValueError(f"Unrecognized perturbation format: unknown key(s) {sorted(unknown)} in {spec!r}")
    if "eps" not in values:
        raise ValueError(f"Unrecognized perturbation format: {spec!r} (missing eps)")
    try:
        eps = float(values["eps"])
    except (TypeError, ValueError):
        raise ValueError(f"Unrecognized perturbation format: eps={values['eps']!r}") from None
    mode = str(values.get("mode", "quad"))
    if mode not in MODES:
        raise ValueError(f"Unrecognized perturbation format: mode={mode!r} (expected one of {', '.join(MODES)})")
    return Perturbation(eps=eps, mode=mode)


def parse_expect_obstruction(spec: Union[str, int, None]) -> Optional[int]:
    """"order=2" or "2"."""
    if spec is None:
        return None
    if isinstance(spec, int) and not isinstance(spec, bool):
        return spec
    text = str(spec).strip()
    if text.isdigit():
        return int(text)
    values = _key_values(text, "expect-obstruction")
    if set(values) != {"order"} or not values["order"].isdigit():
        raise ValueError(f"Unrecognized expect-obstruction format: {spec!r}")
    return int(values["order"])


def parse_grid(spec: Union[str, Sequence[int], None]) -> Tuple[int, int]:
    """"32x64" (radial x angular) or a two-element list."""
    if spec is None:
        return GRID_RADIAL, GRID_ANGULAR
    if isinstance(spec, (list, tuple)) and len(spec) == 2:
        return int(spec[0]), int(spec[1])
    match = _GRID_RE.match(str(spec).strip())
    if not match:
        raise ValueError(f"Unrecognized grid format: {spec!r}")
    return int(match.group(1)), int(match.group(2))


def parse_degrees(spec: Union[str, Sequence[int], None]) -> Tuple[int, ...]:
    if spec is None:
        return tuple(CONVERGENCE_DEGREES)
    if isinstance(spec, (list, tuple)):
        return tuple(sorted({int(d) for d in spec}))
    try:
        return tuple(sorted({int(d) for d in str(spec).split(",") if d.strip()}))
    except ValueError:
        raise ValueError(f"Unrecognized degree list format: {spec!r}") from None


# --------------------------------------------------------------------------
# Identity tasks
# --------------------------------------------------------------------------

def _candidates(key: str, value: Any) -> List[Dict[str, Any]]:
    if key == "pq":
        pairs = value if value and isinstance(value[0], (list, tuple)) else [value]
        return [{"p": int(p), "q": int(q)} for p, q in pairs]
    values = value if isinstance(value, list) else [value]
    return [{key: v} for v in values]


def _applicable(params: Mapping[str, Any]) -> bool:
    m = params.get("m", DEFAULT_M)
    if params.get("p", 0) > m or params.get("q", 0) > m:
        return False
    if params.get("k", 1) >= 2 and params.get("q", 0) > 1:
        return False
    return True


def expand_tasks(entries: Iterable[Union[str, Mapping[str, Any]]],
                 m_override: Optional[Sequence[int]] = None) -> List[Dict[str, Any]]:
    """
    Expand manifest check entries into concrete (check, params) tasks.

    List-valued parameters expand as a Cartesian product in the order written;
    `pq` lists (p, q) pairs. Combinations with p or q above m are skipped, as
    are coupled runs with k >= 2 and q > 1.
    """
    tasks: List[Dict[str, Any]] = []
    for entry in entries:
        entry = {"check": entry} if isinstance(entry, str) else dict(entry)
        name = entry.pop("check", None)
        if not name:
            raise ConfigError(f"Check entry without a 'check' name: {entry!r}")
        if m_override:
            entry["m"] = list(m_override)
        entry.setdefault("m", DEFAULT_M)
        axes = [_candidates(key, value) for key, value in entry.items()]
        for combo in itertools.product(*axes):
            params: Dict[str, Any] = {}
            for part in combo:
                params.update(part)
            if _applicable(params):
                tasks.append({"check": str(name), "params": params})
    return tasks


# --------------------------------------------------------------------------
# RunConfig
# --------------------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    suite: Optional[str] = None
    output: Optional[Path] = None
    force: bool = False
    workers: Optional[int] = MAX_WORKERS

    # identities
    seeds: List[int] = field(default_factory=list)
    tasks: List[Dict[str, Any]] = field(default_factory=list)
    tolerance: float = IDENTITY_TOLERANCE
    control: bool = False
    control_floor: float = CONTROL_FLOOR

    # spectrum
    basis: int = BASIS_N
    grid: Tuple[int, int] = (GRID_RADIAL, GRID_ANGULAR)
    perturbations: List[Perturbation] = field(default_factory=list)
    samples: int = PSI_SAMPLES
    pairs: int = MOMENT_PAIRS
    count: int = 15
    seed: int = 0
    degrees: Tuple[int, ...] = tuple(CONVERGENCE_DEGREES)
    csv: Optional[Path] = None
    plot: Optional[Path] = None

    # kuranishi
    dgla: Optional[str] = None
    order: int = KURANISHI_ORDER
    expect_obstruction: Optional[int] = None
    linear: Optional[List[List[str]]] = None

    # Fields recorded in the report, per command
    _ECHO = {
        "identities": ("seeds", "tasks", "tolerance", "control", "control_floor"),
        "spectrum": ("basis", "grid", "perturbations", "samples", "pairs", "count", "seed", "degrees"),
        "kuranishi": ("dgla", "order", "expect_obstruction", "linear"),
    }

    def to_dict(self) -> Dict[str, Any]:
        """Config echo for the report; enough to rerun the same computation."""
        echo: Dict[str, Any] = {"command": self.command, "suite": self.suite}
        for name in self._ECHO[self.command]:
            value = getattr(self, name)
            if name == "perturbations":
                value = [p.to_dict() for p in value]
            elif isinstance(value, tuple):
                value = list(value)
            echo[name] = value
        return echo

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"Worker count must be >= 1, got {self.workers}")
        getattr(self, f"_validate_{self.command}")()
        return self

    def _validate_identities(self) -> None:
        from .identity_lab import CHECKS

        if not self.seeds:
            raise ConfigError("Seed list is empty")
        if any(s < 0 for s in self.seeds):
            raise ConfigError("Seeds must be non-negative")
        if not self.tasks:
            raise ConfigError("No identity checks selected (use --suite or --check)")
        for task in self.tasks:
            if task["check"] not in CHECKS:
                raise ConfigError(f"Unknown check {task['check']!r} (available: {', '.join(CHECKS)})")
            m = task["params"].get("m")
            if not isinstance(m, int) or m < 1:
                raise ConfigError(f"Invalid dimension m={m!r} for check {task['check']!r}")
        if not self.tolerance > 0:
            raise ConfigError(f"Tolerance must be positive, got {self.tolerance}")

    def _validate_spectrum(self) -> None:
        if self.basis < 1:
            raise ConfigError(f"Basis degree must be >= 1, got {self.basis}")
        n_radial, n_angular = self.grid
        if n_radial < 4 or n_angular < 4:
            raise ConfigError(f"Grid {n_radial}x{n_angular} is too small (need at least 4x4)")
        exactness = min(2 * n_radial - 1, n_angular - 1)
        if exactness < 2 * self.basis:
            raise ConfigError(f"Grid {n_radial}x{n_angular} integrates degree {exactness} exactly; "
                              f"basis N={self.basis} needs {2 * self.basis}")
        if (self.basis + 1) ** 2 < self.count + 1:
            raise ConfigError(f"Basis N={self.basis} is too small for {self.count} eigenvalues")
        if self.samples < 0 or self.pairs < 0:
            raise ConfigError("Sample counts must be non-negative")
        if self.degrees and (min(self.degrees) + 1) ** 2 < self.count:
            raise ConfigError(f"Convergence degree {min(self.degrees)} has fewer than {self.count} functions")
        if self.degrees and 2 * max(self.degrees) > exactness:
            raise ConfigError(f"Convergence degree {max(self.degrees)} exceeds what the grid integrates")

    def _validate_kuranishi(self) -> None:
        if not self.dgla:
            raise ConfigError("No DGLA given (use --dgla NAME or --dgla PATH)")
        if self.order < 1:
            raise ConfigError(f"Kuranishi order must be >= 1, got {self.order}")
        if self.expect_obstruction is not None and not 2 <= self.expect_obstruction <= self.order:
            raise ConfigError(f"Expected obstruction order {self.expect_obstruction} is outside 2..{self.order}")


def _pick(cli_value: Any, params: Mapping[str, Any], key: str, default: Any) -> Any:
    if cli_value is not None:
        return cli_value
    if key in params and params[key] is not None:
        return params[key]
    return default


def _as_path(value: Any) -> Optional[Path]:
    return Path(value) if value else None


def build_run_config(command: str, args: Any = None, manifest: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Merge CLI args (attributes set to None count as absent) over the manifest's
    `params` and validate. Parse errors become ConfigError.
    """
    params: Mapping[str, Any] = (manifest or {}).get("params") or {}
    suite = (manifest or {}).get("name")

    def arg(name: str) -> Any:
        return getattr(args, name, None) if args is not None else None

    try:
        config = RunConfig(
            command=command,
            suite=str(suite) if suite else None,
            output=_as_path(arg("output")),
            force=bool(arg("force")),
            workers=_pick(arg("workers"), params, "workers", MAX_WORKERS),
        )
        if command == "identities":
            m_override = arg("m")
            if isinstance(m_override, int):
                m_override = [m_override]
            entries = arg("check") or params.get("checks") or []
            config.tasks = expand_tasks(entries, m_override)
            config.seeds = parse_seeds(_pick(arg("seeds"), params, "seeds", None))
            config.tolerance = float(_pick(arg("tolerance"), params, "tolerance", IDENTITY_TOLERANCE))
            config.control = bool(arg("control") or params.get("control", False))
            config.control_floor = float(params.get("control_floor", CONTROL_FLOOR))
        elif command == "spectrum":
            config.basis = int(_pick(arg("basis"), params, "basis", BASIS_N))
            config.grid = parse_grid(_pick(arg("grid"), params, "grid", None))
            raw = arg("perturb") or params.get("perturbations") or []
            config.perturbations = list(dict.fromkeys([Perturbation()] + [parse_perturbation(p) for p in raw]))
            config.samples = int(_pick(arg("samples"), params, "samples", PSI_SAMPLES))
            config.pairs = int(_pick(arg("pairs"), params, "pairs", MOMENT_PAIRS))
            config.count = int(params.get("count", 15))
            config.seed = int(_pick(arg("seed"), params, "seed", 0))
            config.degrees = parse_degrees(_pick(arg("degrees"), params, "degrees", None))
            config.csv = _as_path(arg("csv") or params.get("csv"))
            config.plot = _as_path(arg("plot") or params.get("plot"))
        elif command == "kuranishi":
            config.dgla = _pick(arg("dgla"), params, "dgla", None)
            config.order = int(_pick(arg("order"), params, "order", KURANISHI_ORDER))
            config.expect_obstruction = parse_expect_obstruction(
                _pick(arg("expect_obstruction"), params, "expect_obstruction", None))
            linear = params.get("linear")
            config.linear = [[str(c) for c in row] for row in linear] if linear else None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config.validate()


def load_manifest(command: str, suite_id: Optional[str]) -> Optional[Dict[str, Any]]:
    """The suite manifest for suite_id, checked to drive `command`; None without a suite."""
    if not suite_id:
        return None
    from .yaml import load_suite_yaml_by_filename

    try:
        name, manifest = load_suite_yaml_by_filename(suite_id)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(f"Invalid suite manifest '{suite_id}': {exc}") from None
    if manifest.get("command") != command:
        raise ConfigError(f"Suite '{name}' runs '{manifest.get('command')}', not '{command}'")
    manifest = dict(manifest)
    manifest["name"] = name
    return manifest
