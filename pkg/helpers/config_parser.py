"""
Reader and writer for run files.

Grammar (line oriented):
- `# comment` and blank lines are ignored; a `#` starts a trailing comment.
- `[section]` opens a section, `key = value` sets a key in it.
- `[oscillator]` and `[drude]` attach to the most recently opened
  `[material]` or `[gap_material]` section; `[oscillator]` may repeat.

Example:

    [material]
    model = small_density
    [oscillator]
    k_p = 0.05
    k_r = 0.01
    k_c = 1e-6

    [geometry]
    type = slabs
    d = 10
    t = 5
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import regex
from pydantic import ValidationError

from core_logic.errors import ConfigError

from .materials import DEFAULT_MATERIAL_NAME
from .run_schema import MaterialSpec, RunConfig


SECTION_RE = regex.compile(r"^\[\s*(?<name>[A-Za-z_]\w*)\s*\]$")
KEY_VALUE_RE = regex.compile(r"^(?<key>[A-Za-z_]\w*)\s*=\s*(?<value>.*?)$")
COMMENT_RE = regex.compile(r"\s*#.*$")

MATERIAL_SECTIONS = ("material", "gap_material")
PLAIN_SECTIONS = ("geometry", "quadrature", "thermal", "sweep", "output")
SUB_SECTIONS = ("oscillator", "drude")


def _error(line_no: int, message: str) -> ConfigError:
    return ConfigError(f"line {line_no}: {message}")


def parse_sections(text: str) -> Dict[str, Any]:
    """
    Split run-file text into nested dicts, without type validation.

    Raises:
        ConfigError: malformed lines, unknown sections, repeated keys or
            sections, or a sub-block with no material to attach to.
    """
    data: Dict[str, Any] = {}
    current: Optional[Dict[str, Any]] = None
    material: Optional[Dict[str, Any]] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = COMMENT_RE.sub("", raw).strip()
        if not line:
            continue

        header = SECTION_RE.match(line)
        if header:
            name = header.group("name").lower()
            if name in MATERIAL_SECTIONS or name in PLAIN_SECTIONS:
                if name in data:
                    raise _error(line_no, f"section [{name}] given twice")
                current = data[name] = {}
                material = current if name in MATERIAL_SECTIONS else None
            elif name in SUB_SECTIONS:
                if material is None:
                    raise _error(line_no, f"[{name}] must follow a [material] or [gap_material] section")
                current = {}
                if name == "oscillator":
                    material.setdefault("oscillators", []).append(current)
                else:
                    if "drude" in material:
                        raise _error(line_no, "a material has at most one [drude] block")
                    material["drude"] = current
            else:
                known = ", ".join(MATERIAL_SECTIONS + SUB_SECTIONS + PLAIN_SECTIONS)
                raise _error(line_no, f"unknown section [{name}] (known: {known})")
            continue

        pair = KEY_VALUE_RE.match(line)
        if pair is None:
            raise _error(line_no, f"expected 'key = value' or '[section]', got {raw.strip()!r}")
        if current is None:
            raise _error(line_no, "key outside of any section")
        key, value = pair.group("key"), pair.group("value")
        if key in current:
            raise _error(line_no, f"key '{key}' given twice in one section")
        if not value:
            raise _error(line_no, f"key '{key}' has no value")
        current[key] = value

    return data


def _problems(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate run-file text."""
    data = parse_sections(text)
    if "geometry" not in data:
        raise ConfigError("a run file needs a [geometry] section")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid run configuration: {_problems(exc)}") from exc


def _read(path: Union[str, Path]) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc.strerror or exc}") from exc


def load_config(path: Union[str, Path]) -> RunConfig:
    return parse_config(_read(path))


# ----- Writer -----


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _block(name: str, values: Dict[str, Any]) -> List[str]:
    lines = [f"[{name}]"]
    lines.extend(f"{key} = {_format(value)}" for key, value in values.items() if value is not None)
    return lines


def _material_block(name: str, material: Dict[str, Any]) -> List[str]:
    head = {key: material.get(key) for key in ("preset", "model")}
    lines = _block(name, head)
    for oscillator in material.get("oscillators") or []:
        lines.extend(_block("oscillator", oscillator))
    if material.get("drude"):
        lines.extend(_block("drude", material["drude"]))
    return lines


def dump_config(run: RunConfig) -> str:
    """
    Render a RunConfig in the run-file grammar.

    parse_config(dump_config(run)) == run.
    """
    data = run.model_dump(mode="json", exclude_none=True)
    sections: List[List[str]] = [_material_block("material", data["material"])]
    if "gap_material" in data:
        sections.append(_material_block("gap_material", data["gap_material"]))
    for name in PLAIN_SECTIONS:
        values = data.get(name)
        if values:
            sections.append(_block(name, values))
    return "\n\n".join("\n".join(lines) for lines in sections) + "\n"


# ----- Material-only files -----


def parse_material(text: str, section: str = "material") -> MaterialSpec:
    """
    Validate just one material block; the rest of the file may be absent.

    A missing [material] is the default plate material, as in a run file;
    a missing [gap_material] is an error.
    """
    data = parse_sections(text)
    block = data.get(section)
    if block is None and section == "material":
        return MaterialSpec(preset=DEFAULT_MATERIAL_NAME)
    if block is None:
        raise ConfigError(f"no [{section}] section in config")
    try:
        return MaterialSpec.model_validate(block)
    except ValidationError as exc:
        raise ConfigError(f"invalid [{section}] block: {_problems(exc)}") from exc


def load_material(path: Union[str, Path], section: str = "material") -> MaterialSpec:
    return parse_material(_read(path), section)
