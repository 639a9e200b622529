"""Flat ``key = value`` configuration grammar shared by the CLI and recipes.

Grammar, one entry per line:

    # comment: everything after '#' is ignored
    key = value

Keys match ``[A-Za-z0-9_.-]+`` (dots namespace related keys, e.g.
``time.min``).  Values are bare tokens: reals (``0.1``, ``1e-3``), integers,
enum words (``csv``), paths, or comma-separated lists (``0.5, 1, 2``).
Blank lines are skipped.  Duplicate keys: the last one wins.

The environment variable ``QUBITPAIR_CONFIG`` selects an alternate defaults
file for the CLI; explicit flags always override file values.
"""

from __future__ import annotations

import re
from pathlib import Path

ENV_CONFIG_PATH = "QUBITPAIR_CONFIG"

_KEY_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class ConfigError(ValueError):
    """A config entry is missing or malformed; the message names the field."""


def parse_config(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse the key=value grammar into a flat string-to-string mapping."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY_RE.match(key):
            raise ConfigError(f"{source}:{lineno}: invalid key {key!r}")
        out[key] = value
    return out


def load_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_config(path.read_text(), source=str(path))


def dump_config(entries: dict[str, str]) -> str:
    """Serialise a mapping back to the grammar (insertion order preserved)."""
    return "".join(f"{k} = {v}\n" for k, v in entries.items())


class ConfigView:
    """Typed access to a parsed config; errors name the offending field."""

    def __init__(self, entries: dict[str, str], source: str = "<config>"):
        self.entries = entries
        self.source = source

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def raw(self, key: str, default: str | None = None) -> str | None:
        return self.entries.get(key, default)

    def _require(self, key: str) -> str:
        if key not in self.entries:
            raise ConfigError(f"{self.source}: missing required field {key!r}")
        return self.entries[key]

    def get_float(self, key: str, default: float | None = None) -> float | None:
        if key not in self.entries:
            return default
        value = self.entries[key]
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{self.source}: field {key!r}: not a real number: {value!r}")

    def require_float(self, key: str) -> float:
        self._require(key)
        return self.get_float(key)

    def get_int(self, key: str, default: int | None = None) -> int | None:
        if key not in self.entries:
            return default
        value = self.entries[key]
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{self.source}: field {key!r}: not an integer: {value!r}")

    def get_enum(self, key: str, choices: tuple[str, ...], default: str | None = None) -> str | None:
        if key not in self.entries:
            return default
        value = self.entries[key]
        if value not in choices:
            raise ConfigError(
                f"{self.source}: field {key!r}: expected one of {choices}, got {value!r}"
            )
        return value

    def get_float_list(self, key: str, default=None):
        if key not in self.entries:
            return default
        value = self.entries[key]
        try:
            return tuple(float(tok.strip()) for tok in value.split(",") if tok.strip())
        except ValueError:
            raise ConfigError(f"{self.source}: field {key!r}: not a list of reals: {value!r}")

    def get_str_list(self, key: str, default=None):
        if key not in self.entries:
            return default
        return tuple(tok.strip() for tok in self.entries[key].split(",") if tok.strip())
