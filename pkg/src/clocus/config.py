"""Scenario configuration: schema validation plus the cross-field rules the schema cannot say."""

from __future__ import annotations

import copy
import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .errors import ConfigError
from .polycore.field import RATIONALS, FieldSpec, field_from_json, prime_field
from .polycore.poly import MultiPoly

CONFIG_VERSION = 1
DEFAULT_SEED = 0


class Mode(enum.Enum):
    ANALYZE = "Analyze"
    VERIFY = "VerifyClassification"
    CONSTRUCT_SCROLL = "ConstructScroll"
    CONSTRUCT_CUBIC = "ConstructCubic"
    CONSTRUCT_FOUR_LINES = "ConstructFourLines"

    @property
    def is_construction(self) -> bool:
        return self.value.startswith("Construct")


CONSTRUCT_MODES = {
    "scroll": Mode.CONSTRUCT_SCROLL,
    "cubic": Mode.CONSTRUCT_CUBIC,
    "four-lines": Mode.CONSTRUCT_FOUR_LINES,
}


@lru_cache(maxsize=1)
def config_schema() -> dict:
    text = resources.files("clocus").joinpath("schema/config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _field(raw) -> FieldSpec:
    try:
        if raw is None:
            return prime_field()
        if isinstance(raw, int):
            return prime_field(raw)
        if isinstance(raw, str):
            return RATIONALS
        return field_from_json(raw)
    except ValueError as exc:
        raise ConfigError(f"field: {exc}") from None


@dataclass(frozen=True)
class ScenarioConfig:
    mode: Mode
    field: FieldSpec
    seed: int
    setup: dict | None = None
    random: dict | None = None
    target: dict | None = None
    smoothness: bool = True
    only: tuple[int, ...] | None = None
    output_path: str | None = None
    output_format: str = "json"
    figures: str | None = None

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "version": CONFIG_VERSION,
            "mode": self.mode.value,
            "field": self.field.to_json(),
            "seed": self.seed,
        }
        for key in ("setup", "random", "target"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = copy.deepcopy(value)
        doc["smoothness"] = {"enabled": self.smoothness}
        if self.only is not None:
            doc["only"] = list(self.only)
        out: dict[str, Any] = {"format": self.output_format}
        if self.output_path is not None:
            out["path"] = self.output_path
        if self.figures is not None:
            out["figures"] = self.figures
        doc["output"] = out
        return doc


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def parse_config(doc: Any, mode: Mode | None = None) -> ScenarioConfig:
    """Validate a config document; ``mode`` fills in (or must agree with) the ``mode`` key."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    try:
        jsonschema.validate(doc, config_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None

    named = doc.get("mode")
    if named is not None and mode is not None and Mode(named) is not mode:
        raise ConfigError(f"config mode {named} conflicts with the {mode.value} command")
    mode = mode or (Mode(named) if named else None)
    _require(mode is not None, "mode is missing and no command supplied one")

    present = {key for key in ("setup", "random", "target") if key in doc}
    if mode is Mode.ANALYZE:
        _require(len(present & {"setup", "random"}) == 1 and "target" not in present, "Analyze needs exactly one of setup or random")
    elif mode is Mode.VERIFY:
        _require(not present, "VerifyClassification takes no setup, random or target section")
    else:
        _require(present == {"target"}, f"{mode.value} needs a target section and nothing else")
        _check_target(mode, doc["target"])
    if "only" in doc:
        _require(mode is Mode.VERIFY, "only applies to VerifyClassification")
    if "setup" in doc:
        s = doc["setup"]
        _require(len(s["hs"]) == len(s["P"]) == len(s["Q"]), "setup: hs, P and Q need one entry per view")

    out = doc.get("output", {})
    return ScenarioConfig(
        mode=mode,
        field=_field(doc.get("field")),
        seed=int(doc.get("seed", DEFAULT_SEED)),
        setup=copy.deepcopy(doc.get("setup")),
        random=copy.deepcopy(doc.get("random")),
        target=copy.deepcopy(doc.get("target")),
        smoothness=bool(doc.get("smoothness", {}).get("enabled", True)),
        only=tuple(doc["only"]) if "only" in doc else None,
        output_path=out.get("path"),
        output_format=out.get("format", "json"),
        figures=out.get("figures"),
    )


def _check_target(mode: Mode, target: dict) -> None:
    keys = set(target)
    if mode is Mode.CONSTRUCT_SCROLL:
        _require(("matrix" in keys) != ("scroll_type" in keys), "scroll target needs exactly one of matrix or scroll_type")
        _require(keys <= {"matrix", "scroll_type", "nvars"}, "scroll target accepts matrix, scroll_type and nvars only")
    elif mode is Mode.CONSTRUCT_CUBIC:
        explicit = {"L", "M"} <= keys
        _require(explicit != bool(target.get("fermat")), "cubic target needs either L and M, or fermat: true")
        _require(keys <= {"L", "M", "nvars", "fermat"}, "cubic target accepts L, M, nvars and fermat only")
    else:
        _require(("lines" in keys) != ("lambda" in keys), "four-lines target needs exactly one of lines or lambda")
        _require(keys <= {"lines", "lambda", "E"}, "four-lines target accepts lines, lambda and E only")


def load_config(path: str | Path, mode: Mode | None = None) -> ScenarioConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_config(doc, mode)


def parse_form(field: FieldSpec, nvars: int | None, raw) -> MultiPoly:
    """A linear form from a coefficient list, or any polynomial from a string."""
    if isinstance(raw, list):
        if nvars is not None and len(raw) != nvars:
            raise ConfigError(f"form {raw} has {len(raw)} coefficients, expected {nvars}")
        return MultiPoly.linear_form(field, [field(x) for x in raw])
    if nvars is None:
        raise ConfigError("string forms need nvars")
    try:
        return MultiPoly.parse(field, nvars, raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse form {raw!r}: {exc}") from None


def parse_scalar(field: FieldSpec, raw):
    try:
        return field(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad scalar {raw!r}: {exc}") from None
