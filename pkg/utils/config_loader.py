"""
Config Loader
Builds an ExperimentConfig from layered sources:
defaults < config file < environment < CLI flags < --set assignments.
"""

import copy
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from silantui import ModernLogger

from config import Config
from core.errors import ConfigError
from models.experiment import ExperimentConfig


def parse_assignment(text: str) -> Tuple[List[str], Any]:
    """
    Parse ``key.path=value``. The value is read as JSON when possible
    (numbers, lists, booleans, null) and as a plain string otherwise.
    """
    if '=' not in text:
        raise ConfigError(f"Expected key.path=value, got {text!r}")
    key, raw = text.split('=', 1)
    path = [part for part in key.strip().split('.') if part]
    if not path:
        raise ConfigError(f"Empty key in assignment {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path, value


def set_path(data: Dict[str, Any], path: List[str], value: Any) -> None:
    node = data
    for part in path[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"Cannot set {'.'.join(path)}: {part!r} is not a section")
        node = child
    node[path[-1]] = value


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigLoader(ModernLogger):
    """Resolves the experiment configuration for one CLI invocation."""

    def __init__(self):
        super().__init__("ConfigLoader")

    def read_file(self, path: Optional[str]) -> Dict[str, Any]:
        if not path:
            return {}
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"Config file not found: {path}")
        self.info(f"[ConfigLoader] Loading config from: {path}")
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        return data

    @staticmethod
    def apply_environment(data: Dict[str, Any], env: Dict[str, Any]) -> Dict[str, Any]:
        """FEDCONTRAST_OUTPUT_ROOT re-roots the output directory; FEDCONTRAST_WORKERS sets workers."""
        data = dict(data)
        if 'output_root' in env:
            run_name = Path(str(data.get('output_dir', Config.DEFAULT_OUTPUT_DIR))).name
            data['output_dir'] = str(Path(env['output_root']) / run_name)
        if 'workers' in env:
            data['workers'] = env['workers']
        return data

    def resolve(
        self,
        config_path: Optional[str] = None,
        flags: Optional[Dict[str, Any]] = None,
        assignments: Iterable[str] = (),
        env: Optional[Dict[str, Any]] = None,
        check_paths: bool = True,
    ) -> ExperimentConfig:
        """
        Merge every layer and validate.

        Args:
            config_path: JSON config file, or None for defaults only
            flags: dotted keys from explicit CLI flags; None values are ignored
            assignments: ``key.path=value`` strings, applied last
            env: environment overrides (default: Config.env_overrides())
        """
        data = deep_merge(ExperimentConfig().to_dict(), self.read_file(config_path))
        data = self.apply_environment(data, Config.env_overrides() if env is None else env)

        for key, value in (flags or {}).items():
            if value is not None:
                set_path(data, key.split('.'), value)
        for text in assignments:
            path, value = parse_assignment(text)
            self.debug(f"[ConfigLoader] Override {'.'.join(path)} = {value!r}")
            set_path(data, path, value)

        cfg = ExperimentConfig.from_dict(data)
        return cfg.validate(check_paths=check_paths)


config_loader = ConfigLoader()
