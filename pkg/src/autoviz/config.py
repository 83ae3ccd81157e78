"""Service configuration: file-based with environment overrides.

Config files are JSON; every field can be overridden by an AUTOVIZ_*
environment variable (e.g. AUTOVIZ_PORT, AUTOVIZ_STORE_DIR,
AUTOVIZ_CORS_ORIGINS as a comma-separated list).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from autoviz.ingest import DEFAULT_MAX_BYTES

DEFAULT_SYNC_CUTOFF = 5 * 2**20


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    size_cap: int = DEFAULT_MAX_BYTES
    sync_cutoff: int = DEFAULT_SYNC_CUTOFF
    workers: int = field(default_factory=lambda: os.cpu_count() or 2)
    cors_origins: tuple[str, ...] = ()
    store_dir: str = "autoviz-jobs"


_ENV_FIELDS = {
    "AUTOVIZ_HOST": ("host", str),
    "AUTOVIZ_PORT": ("port", int),
    "AUTOVIZ_SIZE_CAP": ("size_cap", int),
    "AUTOVIZ_SYNC_CUTOFF": ("sync_cutoff", int),
    "AUTOVIZ_WORKERS": ("workers", int),
    "AUTOVIZ_STORE_DIR": ("store_dir", str),
}


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    config = ServiceConfig()
    if path is not None:
        raw = json.loads(Path(path).read_text())
        allowed = {k: v for k, v in raw.items()
                   if k in ServiceConfig.__dataclass_fields__}
        if "cors_origins" in allowed:
            allowed["cors_origins"] = tuple(allowed["cors_origins"])
        config = replace(config, **allowed)
    for var, (name, cast) in _ENV_FIELDS.items():
        if var in env:
            config = replace(config, **{name: cast(env[var])})
    if "AUTOVIZ_CORS_ORIGINS" in env:
        config = replace(config, cors_origins=tuple(
            o.strip() for o in env["AUTOVIZ_CORS_ORIGINS"].split(",")
            if o.strip()))
    return config
