"""Reproducible run plumbing: flat config files, atomic writes, manifests.

Config files are flat ``key = value`` text (``grid.L = 16``); CLI flags
override config entries, and the effective configuration is embedded in the
manifest together with content hashes of every output, so a re-run with the
same inputs can be checked for bit-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .report import round_sig

__all__ = ["parse_config_file", "atomic_write_text", "write_json", "RunManifest"]

CONFIG_KEYS = {
    "grid.L": float,
    "grid.n": int,
    "family.strategy": str,
    "family.min_length": int,
    "solver.rtol": float,
    "solver.atol": float,
    "solver.max_step": float,
    "solver.min_step": float,
    "ledger.C1": float, "ledger.C2": float, "ledger.C3": float, "ledger.C4": float,
    "ledger.C5": float, "ledger.C6": float, "ledger.C7": float, "ledger.c": float,
    "ledger.tau": float, "ledger.epsilon0": float, "ledger.alpha": float,
    "ledger.beta": float, "ledger.jn_c1": float, "ledger.jn_c2": float,
    "output.dir": str,
    "figures": bool,
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_config_file(path) -> dict:
    """Read flat ``key = value`` lines; '#' starts a comment."""
    out: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not eq or not key:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            caster = CONFIG_KEYS[key]
            try:
                out[key] = _parse_bool(value) if caster is bool else caster(value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_json(path, payload, digits: int = 12) -> None:
    atomic_write_text(path, json.dumps(round_sig(payload, digits), indent=2) + "\n")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Inputs and output hashes of one CLI run."""

    command: str
    argv: list[str]
    config: dict
    version: str
    started: float = field(default_factory=time.time)
    outputs: list[dict] = field(default_factory=list)

    def add_output(self, path) -> None:
        path = Path(path)
        self.outputs.append({
            "path": path.name,
            "sha256": _sha256(path),
            "bytes": path.stat().st_size,
        })

    def write(self, path) -> None:
        payload = {
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "version": self.version,
            "wall_clock_s": round(time.time() - self.started, 3),
            "outputs": self.outputs,
        }
        atomic_write_text(path, json.dumps(round_sig(payload), indent=2) + "\n")
