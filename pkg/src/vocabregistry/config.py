"""Service configuration: YAML file, overridden by VOCABREG_* environment
variables, overridden by command-line flags. Every scoring threshold and
service knob is a documented key.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from .ark import ArkConfig
from .errors import ConfigurationError
from .scoring import Thresholds

ENV_PREFIX = "VOCABREG_"


@dataclass
class ServiceConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    naan: str = "99999"
    term_shoulder: str = "y2"
    schema_shoulder: str = "y3"
    collection_shoulder: str = "y4"
    digest_cadence_days: float = 1.0
    audit_timeout_seconds: float = 10.0
    audit_concurrency: int = 4
    session_ttl_hours: float = 24.0
    host: str = "127.0.0.1"
    port: int = 8000
    store_path: str = "registry.json"
    outbox_path: str = "outbox.log"
    stopwords_path: Optional[str] = None
    base_url: str = ""

    def resolved_base_url(self) -> str:
        return self.base_url or f"http://{self.host}:{self.port}"

    def ark_config(self) -> ArkConfig:
        return ArkConfig(
            naan=self.naan,
            shoulders={
                "term": self.term_shoulder,
                "schema": self.schema_shoulder,
                "collection": self.collection_shoulder,
            },
        )


def _coerce(value: Any, target_type: Any, key: str) -> Any:
    if target_type is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"config key {key!r}: cannot read {value!r} as a boolean")
    try:
        if target_type is int:
            return int(value)
        if target_type is float:
            return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"config key {key!r}: cannot read {value!r} as {target_type.__name__}") from exc
    return value if value is None else str(value)


def _threshold_fields() -> dict[str, Any]:
    return {f.name: f.type for f in fields(Thresholds)}


def _service_fields() -> dict[str, Any]:
    return {f.name: f.type for f in fields(ServiceConfig) if f.name != "thresholds"}


_TYPE_NAMES = {"int": int, "float": float, "bool": bool, "str": str, "Optional[str]": str}


def _field_type(annotation: Any) -> Any:
    if isinstance(annotation, str):
        return _TYPE_NAMES.get(annotation, str)
    return annotation


def load_config(
    path: Optional[str] = None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ServiceConfig:
    """Merge defaults < file < environment < explicit overrides."""
    merged: dict[str, Any] = {}

    if path:
        raw = yaml.safe_load(Path(path).read_text()) or {}
        if not isinstance(raw, dict):
            raise ConfigurationError(f"config file {path} must contain a mapping")
        merged.update(raw)

    environ = os.environ if env is None else env
    known = {**_threshold_fields(), **_service_fields()}
    for key in known:
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            merged[key] = environ[env_key]

    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    threshold_kwargs: dict[str, Any] = {}
    service_kwargs: dict[str, Any] = {}
    tf = _threshold_fields()
    sf = _service_fields()
    for key, value in merged.items():
        if key in tf:
            threshold_kwargs[key] = _coerce(value, _field_type(tf[key]), key)
        elif key in sf:
            service_kwargs[key] = _coerce(value, _field_type(sf[key]), key)
        else:
            raise ConfigurationError(f"unknown configuration key {key!r}")

    thresholds = dataclasses.replace(Thresholds(), **threshold_kwargs).validate()
    return ServiceConfig(thresholds=thresholds, **service_kwargs)


def documented_keys() -> list[str]:
    """Every recognized configuration key (for the README and `--help`)."""
    return sorted(list(_threshold_fields()) + list(_service_fields()))
