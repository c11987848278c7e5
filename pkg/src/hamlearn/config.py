"""Plain-text experiment configs: INI sections, strict keys, line-anchored
error messages."""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Optional

from .experiments import SWEEP_KINDS, ExperimentConfig
from .models import ModelFamily


class ConfigError(ValueError):
    """Invalid or unparseable experiment config."""


_RUN_KEYS = {"experiment", "trials", "seed", "jobs", "out_prefix"}
_MODEL_KEYS = {"family", "n_sites", "region_size", "locality_k", "order_seed"}
_SOURCE_KEYS = {
    "epsilon", "betas", "max_states", "temp_decades", "t_max", "dt",
    "checkpoints", "amplitude", "omega", "fit_window", "region_sizes",
    "max_rows",
}


def parse_config(path: str | Path) -> tuple[ExperimentConfig, str]:
    """Read a config file; returns (config, output file prefix)."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: config file not found")
    text = path.read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc

    anchor = _LineAnchors(path, text)
    for section, allowed in (("run", _RUN_KEYS), ("model", _MODEL_KEYS),
                             ("source", _SOURCE_KEYS)):
        if parser.has_section(section):
            for key in parser[section]:
                if key not in allowed:
                    raise ConfigError(anchor.at(key, f"unknown key {key!r} in [{section}]"))
    for section in parser.sections():
        if section not in ("run", "model", "source"):
            raise ConfigError(f"{path}: unknown section [{section}]")

    run = parser["run"] if parser.has_section("run") else {}
    model = parser["model"] if parser.has_section("model") else {}
    source = parser["source"] if parser.has_section("source") else {}

    kind = run.get("experiment")
    if kind is None:
        raise ConfigError(f"{path}: [run] experiment is required "
                          f"(one of {', '.join(SWEEP_KINDS)})")
    if kind not in SWEEP_KINDS:
        raise ConfigError(anchor.at("experiment",
                                    f"unknown experiment {kind!r}; choose from "
                                    + ", ".join(SWEEP_KINDS)))

    overrides: dict = {}
    get = _Getter(anchor)
    if "trials" in run:
        overrides["trials"] = get.int(run, "trials", minimum=1)
    if "seed" in run:
        overrides["seed"] = get.int(run, "seed")
    if "jobs" in run:
        overrides["jobs"] = get.int(run, "jobs", minimum=1)
    if "family" in model:
        try:
            overrides["model"] = ModelFamily.from_name(model["family"])
        except ValueError as exc:
            raise ConfigError(anchor.at("family", str(exc))) from exc
    if "n_sites" in model:
        overrides["n_sites"] = get.int(model, "n_sites", minimum=2)
    if "region_size" in model:
        overrides["region_size"] = get.int(model, "region_size", minimum=1)
    if "locality_k" in model:
        overrides["locality_k"] = get.int(model, "locality_k", minimum=1)
    if "order_seed" in model:
        raw = model["order_seed"].strip()
        overrides["order_seed"] = None if raw.lower() == "none" else get.int(model, "order_seed")
    if "epsilon" in source:
        overrides["epsilon"] = get.float(source, "epsilon", minimum=0.0)
    if "betas" in source:
        overrides["betas"] = get.floats(source, "betas")
    if "max_states" in source:
        overrides["max_states"] = get.int(source, "max_states", minimum=1)
    if "temp_decades" in source:
        vals = get.floats(source, "temp_decades", count=2)
        overrides["temp_decades"] = (vals[0], vals[1])
    if "t_max" in source:
        overrides["t_max"] = get.float(source, "t_max", minimum=1e-12)
    if "dt" in source:
        overrides["dt"] = get.float(source, "dt", minimum=1e-12)
    if "checkpoints" in source:
        overrides["checkpoints"] = get.floats(source, "checkpoints")
    if "amplitude" in source:
        overrides["amplitude"] = get.float(source, "amplitude")
    if "omega" in source:
        overrides["omega"] = get.float(source, "omega")
    if "fit_window" in source:
        vals = get.floats(source, "fit_window", count=2)
        overrides["fit_window"] = (vals[0], vals[1])
    if "region_sizes" in source:
        overrides["region_sizes"] = tuple(int(v) for v in get.floats(source, "region_sizes"))
    if "max_rows" in source:
        overrides["max_rows"] = get.int(source, "max_rows", minimum=1)

    try:
        cfg = ExperimentConfig.for_kind(kind, **overrides)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    prefix = run.get("out_prefix", kind).strip()
    if not prefix or "/" in prefix:
        raise ConfigError(anchor.at("out_prefix", f"bad output prefix {prefix!r}"))
    return cfg, prefix


class _LineAnchors:
    """Maps config keys back to their line numbers for error messages."""

    def __init__(self, path: Path, text: str):
        self.path = path
        self.lines: dict[str, int] = {}
        for i, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(("#", ";", "[")):
                continue
            key = stripped.split("=", 1)[0].split(":", 1)[0].strip().lower()
            self.lines.setdefault(key, i)

    def at(self, key: str, message: str) -> str:
        line = self.lines.get(key.lower())
        where = f"{self.path}:{line}" if line else str(self.path)
        return f"{where}: {message}"


class _Getter:
    def __init__(self, anchor: _LineAnchors):
        self.anchor = anchor

    def int(self, section, key: str, minimum: Optional[int] = None) -> int:
        raw = section[key]
        try:
            val = int(raw)
        except ValueError:
            raise ConfigError(self.anchor.at(key, f"{key} must be an integer, got {raw!r}")) \
                from None
        if minimum is not None and val < minimum:
            raise ConfigError(self.anchor.at(key, f"{key} must be >= {minimum}, got {val}"))
        return val

    def float(self, section, key: str, minimum: Optional[float] = None) -> float:
        raw = section[key]
        try:
            val = float(raw)
        except ValueError:
            raise ConfigError(self.anchor.at(key, f"{key} must be a number, got {raw!r}")) \
                from None
        if minimum is not None and val < minimum:
            raise ConfigError(self.anchor.at(key, f"{key} must be >= {minimum}, got {val}"))
        return val

    def floats(self, section, key: str, count: Optional[int] = None) -> tuple[float, ...]:
        raw = section[key].replace(",", " ").split()
        try:
            vals = tuple(float(v) for v in raw)
        except ValueError:
            raise ConfigError(self.anchor.at(key, f"{key} must be a list of numbers")) from None
        if not vals:
            raise ConfigError(self.anchor.at(key, f"{key} must not be empty"))
        if count is not None and len(vals) != count:
            raise ConfigError(self.anchor.at(key, f"{key} needs exactly {count} values"))
        return vals
