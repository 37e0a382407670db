"""Toolkit Configuration Service - JSON-driven defaults for estimators, oracle and logging."""

import copy
import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "BFLY_CONFIG"


@dataclass
class SamplingSettings:
    """Defaults for local-sampling runs."""
    fast_edge_repeats: int = 1000
    clock_check_interval: int = 64    # iterations between clock reads in time-budget mode
    default_seed: int = 0
    threads: int = 1


@dataclass
class OracleSettings:
    """Size guards of the brute-force oracle."""
    max_side_vertices: int = 64
    max_butterflies_for_pairs: int = 2000


@dataclass
class SparsifySettings:
    edge_threshold_constant: float = 24.0
    color_threshold_constant: float = 32.0
    report_probability: float = 0.1


@dataclass
class LoggingSettings:
    level: str = "WARNING"
    format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class ToolkitConfigService:
    """
    Loads data/toolkit_config.json and exposes typed settings.

    Missing files or keys fall back to built-in defaults, so the toolkit
    runs without any configuration on disk.
    """

    CONFIG_PATH = os.path.join("data", "toolkit_config.json")

    def __init__(self, config_path: Optional[str] = None):
        self._config: Dict[str, Any] = {}
        self.loaded_from: Optional[str] = None
        self.load_config(config_path)

    def _paths_to_try(self, config_path: Optional[str]) -> List[str]:
        paths = []
        if config_path:
            paths.append(config_path)
        env_path = os.environ.get(CONFIG_ENV_VAR)
        if env_path:
            paths.append(env_path)
        paths.append(self.CONFIG_PATH)
        paths.append(os.path.join(os.path.dirname(__file__), '..', self.CONFIG_PATH))
        return paths

    def load_config(self, config_path: Optional[str] = None) -> bool:
        """Load the first readable candidate file; True when a file was used."""
        self._config = self._get_default_config()
        for path in self._paths_to_try(config_path):
            if not os.path.exists(path):
                continue
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("Ignoring unreadable config %s: %s", path, e)
                continue
            self._merge(self._config, loaded)
            self.loaded_from = os.path.abspath(path)
            logger.debug("Loaded toolkit config from %s", self.loaded_from)
            return True
        logger.debug("No toolkit config found, using defaults")
        return False

    @staticmethod
    def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> None:
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                ToolkitConfigService._merge(base[key], value)
            else:
                base[key] = value

    def _get_default_config(self) -> Dict[str, Any]:
        """Return built-in defaults."""
        return {
            "sampling": {
                "fastEdgeRepeats": 1000,
                "clockCheckInterval": 64,
                "defaultSeed": 0,
                "threads": 1,
            },
            "oracle": {
                "maxSideVertices": 64,
                "maxButterfliesForPairs": 2000,
            },
            "sparsify": {
                "edgeThresholdConstant": 24,
                "colorThresholdConstant": 32,
                "reportProbability": 0.1,
            },
            "logging": {
                "level": "WARNING",
                "format": LoggingSettings.format,
            },
            "output": {
                "timing": True,
            },
        }

    def raw(self) -> Dict[str, Any]:
        return copy.deepcopy(self._config)

    @property
    def sampling(self) -> SamplingSettings:
        section = self._config.get("sampling", {})
        return SamplingSettings(
            fast_edge_repeats=int(section.get("fastEdgeRepeats", 1000)),
            clock_check_interval=int(section.get("clockCheckInterval", 64)),
            default_seed=int(section.get("defaultSeed", 0)),
            threads=int(section.get("threads", 1)),
        )

    @property
    def oracle(self) -> OracleSettings:
        section = self._config.get("oracle", {})
        return OracleSettings(
            max_side_vertices=int(section.get("maxSideVertices", 64)),
            max_butterflies_for_pairs=int(section.get("maxButterfliesForPairs", 2000)),
        )

    @property
    def sparsify(self) -> SparsifySettings:
        section = self._config.get("sparsify", {})
        return SparsifySettings(
            edge_threshold_constant=float(section.get("edgeThresholdConstant", 24)),
            color_threshold_constant=float(section.get("colorThresholdConstant", 32)),
            report_probability=float(section.get("reportProbability", 0.1)),
        )

    @property
    def logging(self) -> LoggingSettings:
        section = self._config.get("logging", {})
        return LoggingSettings(
            level=str(section.get("level", "WARNING")).upper(),
            format=section.get("format", LoggingSettings.format),
        )

    @property
    def timing_enabled(self) -> bool:
        return bool(self._config.get("output", {}).get("timing", True))


_config_service = None


def get_toolkit_config() -> ToolkitConfigService:
    """Get singleton toolkit config service."""
    global _config_service
    if _config_service is None:
        _config_service = ToolkitConfigService()
    return _config_service


def reset_toolkit_config(config_path: Optional[str] = None) -> ToolkitConfigService:
    """Replace the singleton, optionally loading from an explicit path."""
    global _config_service
    _config_service = ToolkitConfigService(config_path)
    return _config_service
