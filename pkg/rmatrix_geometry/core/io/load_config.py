from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from rmatrix_geometry.core.errors import ConfigError, GeometryError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.precision import SUPPORTED_PRECISIONS
from rmatrix_geometry.core.verify.suite import expand_checks

KV_SUFFIXES = {".cfg", ".conf", ".txt"}
YAML_SUFFIXES = {".yaml", ".yml"}
MAX_SEED = 2**64 - 1

DEFAULT_Q = (2.0, 0.0)
DEFAULT_G = (0.6, 0.0)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on. Unset couplings fall back to q = 2, g = 3/5."""

    q_re: float = DEFAULT_Q[0]
    q_im: float = DEFAULT_Q[1]
    g_re: float | None = None
    g_im: float | None = None
    u_re: float | None = None
    u_im: float | None = None
    precision: int = 53
    tol: float | None = None
    seed: int = 0
    trials: int | None = None
    epsilon: int | None = None
    checks: tuple[str, ...] = ("all",)
    json: bool = False

    @property
    def q(self) -> complex:
        return complex(self.q_re, self.q_im)

    @property
    def g(self) -> complex:
        if self.g_re is None and self.g_im is None:
            return complex(*DEFAULT_G)
        return complex(self.g_re or 0.0, self.g_im or 0.0)

    @property
    def u(self) -> complex | None:
        if self.u_re is None and self.u_im is None:
            return None
        return complex(self.u_re or 0.0, self.u_im or 0.0)

    def params(self) -> ModelParams:
        try:
            if self.u is not None:
                return ModelParams.from_u(self.q, self.u, bits=self.precision)
            return ModelParams.create(self.q, self.g, bits=self.precision)
        except GeometryError as e:
            raise ConfigError(code=e.code, message=e.message, source="config", path=e.path) from e

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["checks"] = list(self.checks)
        return out

    def to_flags(self) -> list[str]:
        """Options that rebuild this config on the command line; checks are not included."""
        flags: list[str] = []
        for f in fields(self):
            if f.name == "checks":
                continue
            value = getattr(self, f.name)
            if value is None or (f.name == "json" and not value):
                continue
            name = "--" + f.name.replace("_", "-")
            if f.name == "json":
                flags.append(name)
            else:
                flags.extend([name, _flag_value(value)])
        return flags

    def to_argv(self) -> list[str]:
        return ["verify", *self.checks, *self.to_flags()]


def _flag_value(value: Any) -> str:
    return repr(value) if isinstance(value, float) else str(value)


# -- coercion -------------------------------------------------------------------------------------

_FLOATS = {"q_re", "q_im", "g_re", "g_im", "u_re", "u_im", "tol"}
_INTS = {"precision", "seed", "trials", "epsilon"}
KNOWN_KEYS = {f.name for f in fields(RunConfig)}


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "on"}:
        return True
    if text in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"not an integer: {value!r}")
        return int(value)
    text = str(value).strip()
    return int(text[1:] if text.startswith("+") else text)


def _checks(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        items = [v.strip() for v in value.split(",")]
    elif isinstance(value, (list, tuple)):
        items = [str(v).strip() for v in value]
    else:
        raise ValueError(f"checks must be a list or a comma-separated string, got {value!r}")
    items = [v for v in items if v]
    if not items:
        raise ValueError("checks must not be empty")
    return tuple(items)


def coerce_values(raw: Mapping[str, Any], *, source: str | None = None) -> dict[str, Any]:
    """Typed values for the known keys; None stays None."""
    out: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in KNOWN_KEYS:
            raise ConfigError(
                code="E_CONFIG_UNKNOWN_KEY",
                message=f"unknown key {key!r} (known: {', '.join(sorted(KNOWN_KEYS))})",
                source=source,
                path=key,
            )
        if value is None:
            out[key] = None
            continue
        try:
            if key in _FLOATS:
                out[key] = float(value)
            elif key in _INTS:
                out[key] = _int(value)
            elif key == "json":
                out[key] = _bool(value)
            else:
                out[key] = _checks(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(
                code="E_CONFIG_VALUE", message=str(e), source=source, path=key
            ) from e
    return out


def validate_config(config: RunConfig, *, source: str | None = None) -> RunConfig:
    def bad(path: str, message: str, code: str = "E_CONFIG_VALUE") -> ConfigError:
        return ConfigError(code=code, message=message, source=source, path=path)

    if config.u is not None and (config.g_re is not None or config.g_im is not None):
        raise bad("u", "U and g both determine the model; give only one", "E_CONFIG_EXCLUSIVE")
    if config.precision not in SUPPORTED_PRECISIONS:
        raise bad("precision", f"precision must be one of {list(SUPPORTED_PRECISIONS)}")
    if config.trials is not None and config.trials < 1:
        raise bad("trials", "trials must be at least 1")
    if not 0 <= config.seed <= MAX_SEED:
        raise bad("seed", "seed must be an unsigned 64-bit integer")
    if config.epsilon not in (None, 1, -1):
        raise bad("epsilon", "epsilon must be +1 or -1")
    if config.tol is not None and not config.tol > 0:
        raise bad("tol", "tolerance must be positive")
    try:
        expand_checks(config.checks)
    except ValueError as e:
        raise bad("checks", str(e), "E_CONFIG_UNKNOWN_CHECK") from e
    return config


# -- files ----------------------------------------------------------------------------------------


def _parse_kv(text: str, source: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                code="E_CONFIG_PARSE",
                message=f"expected key=value, got {line!r}",
                source=source,
                path=f"line {lineno}",
            )
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Raw values from a key=value, YAML or JSON config file, picked by suffix."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(code="E_FILE_NOT_FOUND", message="file does not exist", source=str(p))
    suffix = p.suffix.lower()
    text = p.read_text(encoding="utf-8")
    try:
        if suffix in KV_SUFFIXES:
            return _parse_kv(text, str(p))
        if suffix in YAML_SUFFIXES:
            data = yaml.safe_load(text)
        elif suffix == ".json":
            data = json.loads(text)
        else:
            raise ConfigError(
                code="E_UNSUPPORTED_FORMAT",
                message="supported formats are .cfg/.conf/.txt, .yaml/.yml and .json",
                source=str(p),
            )
    except ConfigError:
        raise
    except Exception as e:
        code = "E_YAML_PARSE" if suffix in YAML_SUFFIXES else "E_JSON_PARSE"
        raise ConfigError(code=code, message=str(e), source=str(p)) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(
            code="E_INVALID_TOP_LEVEL",
            message="top-level document must be a mapping/object",
            source=str(p),
        )
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def load_config(
    path: str | Path | None = None, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """File values, then command-line `overrides` (None entries are ignored)."""
    values: dict[str, Any] = {}
    source = None
    if path is not None:
        source = str(path)
        values.update(coerce_values(read_config_file(path), source=source))
    given = {k: v for k, v in (overrides or {}).items() if v is not None}
    values.update(coerce_values(given, source="command line"))
    config = replace(RunConfig(), **values)
    return validate_config(config, source=source)
