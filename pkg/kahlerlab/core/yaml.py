"""
YAML helpers for KahlerLab.

Functions to read, write and toggle suite manifests in suites/.
"""

import glob
from pathlib import Path
from typing import Any, Dict, List, Tuple

try:
    import yaml  # type: ignore
except ImportError:
    raise ImportError("PyYAML is required for this module")

from . import constants


def _manifest_dir() -> Path:
    return Path(constants.SUITE_MANIFEST_DIR)


def _read(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ValueError(f"Failed to parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"Suite manifest {path} is not a mapping")
    return data


def _matches(data: Dict[str, Any], suite_id: str) -> bool:
    wanted = suite_id.lower()
    aliases = [str(a).lower() for a in data.get("aliases") or []]
    return str(data.get("name", "")).lower() == wanted or wanted in aliases


def find_suite_yaml_path(suite_id: str) -> Path:
    """Return the manifest path for suite_id by filename, `name` field or `aliases`."""
    explicit_path = _manifest_dir() / f"{suite_id}.yml"
    if explicit_path.exists():
        return explicit_path
    for path_str in sorted(glob.glob(str(_manifest_dir() / "*.yml"))):
        p = Path(path_str)
        try:
            if _matches(_read(p), suite_id):
                return p
        except Exception:
            continue
    raise FileNotFoundError(f"YAML file for suite '{suite_id}' not found in '{_manifest_dir()}'.")


def load_suite_yaml_by_filename(suite_id: str) -> Tuple[str, Dict[str, Any]]:
    """
    Read `suites/<suite_id>.yml`, falling back to manifests whose `name` or
    `aliases` match suite_id (case-insensitive).
    Return (resolved_suite_name, manifest_dict).
    """
    path = find_suite_yaml_path(suite_id)
    data = _read(path)
    return str(data.get("name") or path.stem), data


def set_suite_enabled(suite_id: str, enabled: bool) -> None:
    """Set the `enabled` field of a suite manifest."""
    yaml_path = find_suite_yaml_path(suite_id)
    data = _read(yaml_path)
    data["enabled"] = bool(enabled)
    with yaml_path.open("w", encoding="utf-8") as f:
        yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False, allow_unicode=True)


def list_suite_manifests() -> List[Tuple[Path, Dict[str, Any]]]:
    """All manifests in filename order; unreadable ones map to an empty dict."""
    result = []
    for path_str in sorted(glob.glob(str(_manifest_dir() / "*.yml"))):
        p = Path(path_str)
        try:
            data = _read(p)
        except Exception:
            data = {}
        result.append((p, data))
    return result


def list_enabled_suite_ids() -> List[str]:
    return [p.stem for p, data in list_suite_manifests() if data.get("enabled") is True]
