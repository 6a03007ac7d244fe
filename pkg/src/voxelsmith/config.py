"""Runtime configuration with JSON file and environment overrides."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

ENV_CONFIG_PATH = "VOXELSMITH_CONFIG"


@dataclass(frozen=True)
class Config:
    patch_side: int = 9
    global_side: int = 16
    history_len: int = 3
    default_model: str = "procedural"  # procedural | statistical
    rng_seed: int = 0
    similarity_threshold: float = 0.95
    embed_dim: int = 128
    max_expand_depth: int = 16
    houses_dir: Optional[str] = None
    offset_params_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.patch_side % 2 == 0 or self.patch_side < 1:
            raise ValueError("patch_side must be a positive odd number")
        if self.default_model not in ("procedural", "statistical"):
            raise ValueError(f"unknown default_model: {self.default_model!r}")


def load_config(path: Optional[str | Path] = None) -> Config:
    """Read config from `path`, the VOXELSMITH_CONFIG env var, or defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG_PATH)
    if path is None:
        return Config()
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    known = {f.name for f in fields(Config)}
    unknown = set(doc) - known - {"v"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return Config(**{k: v for k, v in doc.items() if k in known})
