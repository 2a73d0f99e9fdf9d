"""Scenario files: flat ``section.key = value`` text.

Grammar, one entry per line::

    # comment (also allowed after a value)
    medium.L = 1e-3
    sim.z_levels = 0.25, 0.5, 0.75
    outputs.fields = true

Blank lines are ignored. Keys are unique. Lists are comma separated and may
be empty. Booleans are ``true``/``false``. Every ``medium``, ``fluid`` and
``bc`` key is required; ``sim`` and ``outputs`` keys fall back to defaults.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, ScenarioParseError, ScenarioValidationError
from .front import SimConfig
from .physics import BoundaryConditions, FluidParams, MediumParams


@dataclass(frozen=True)
class OutputSelection:
    fields: bool = True
    trajectory: bool = True
    report: bool = True


@dataclass(frozen=True)
class Scenario:
    medium: MediumParams
    fluid: FluidParams
    bc: BoundaryConditions
    sim: SimConfig = field(default_factory=SimConfig)
    outputs: OutputSelection = field(default_factory=OutputSelection)


_SECTIONS = {
    "medium": MediumParams,
    "fluid": FluidParams,
    "bc": BoundaryConditions,
    "sim": SimConfig,
    "outputs": OutputSelection,
}
_REQUIRED = ("medium", "fluid", "bc")
_LIST_KEYS = {"z_levels", "output_times"}
_INT_KEYS = {"n_grid", "max_steps", "max_halvings"}


def _field_names(section: str) -> list[str]:
    return [fl.name for fl in dataclasses.fields(_SECTIONS[section])]


def _parse_float(text: str, line: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ScenarioParseError(f"expected a number, got {text!r}", line, col) from None
    if not math.isfinite(value):
        raise ScenarioParseError(f"expected a finite number, got {text!r}", line, col)
    return value


def _parse_value(section: str, key: str, text: str, line: int, col: int):
    if section == "outputs":
        if text.lower() in ("true", "false"):
            return text.lower() == "true"
        raise ScenarioParseError(f"expected true or false, got {text!r}", line, col)
    if key in _LIST_KEYS:
        if not text:
            return ()
        items = []
        offset = 0
        for part in text.split(","):
            lead = len(part) - len(part.lstrip())
            items.append(_parse_float(part.strip(), line, col + offset + lead))
            offset += len(part) + 1
        return tuple(items)
    if key in _INT_KEYS:
        try:
            return int(text)
        except ValueError:
            raise ScenarioParseError(f"expected an integer, got {text!r}", line, col) from None
    return _parse_float(text, line, col)


def parse_scenario(text: str, path: str | None = None) -> Scenario:
    """Parse and validate scenario text."""
    entries: dict[str, dict[str, object]] = {name: {} for name in _SECTIONS}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ScenarioParseError("expected 'key = value'", lineno, col, path)
        key_part, value_part = body.split("=", 1)
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value_col = len(key_part) + 2 + len(value_part) - len(value_part.lstrip())
        dotted = key_part.strip()
        section, _, key = dotted.partition(".")
        if section not in _SECTIONS or key not in _field_names(section):
            raise ScenarioParseError(f"unknown key {dotted!r}", lineno, key_col, path)
        if key in entries[section]:
            raise ScenarioParseError(f"duplicate key {dotted!r}", lineno, key_col, path)
        try:
            entries[section][key] = _parse_value(section, key, value_part.strip(), lineno, value_col)
        except ScenarioParseError as exc:
            raise ScenarioParseError(exc.message, exc.line, exc.column, path) from None
    return _build(entries)


def _build(entries: dict[str, dict[str, object]]) -> Scenario:
    problems = []
    for section in _REQUIRED:
        missing = [k for k in _field_names(section) if k not in entries[section]]
        problems.extend(f"missing key {section}.{k}" for k in missing)
    if problems:
        raise ScenarioValidationError("; ".join(problems))
    built = {}
    for section, cls in _SECTIONS.items():
        try:
            built[section] = cls(**entries[section])
        except DomainError as exc:
            problems.append(f"{section}: {exc}")
    if problems:
        raise ScenarioValidationError("; ".join(problems))
    return Scenario(**built)


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file.

    Raises:
        OSError: If the file cannot be read.
        ScenarioParseError: On a syntax error, with line and column.
        ScenarioValidationError: On missing keys or violated invariants.
    """
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), str(path))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_scenario(scenario: Scenario) -> str:
    lines = []
    for section in _SECTIONS:
        obj = getattr(scenario, section)
        for name in _field_names(section):
            lines.append(f"{section}.{name} = {_format_value(getattr(obj, name))}")
        lines.append("")
    return "\n".join(lines)


def write_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(format_scenario(scenario), encoding="utf-8", newline="\n")


def reference_scenario() -> Scenario:
    """Water-vapour-like injection into a 1 mm pore, used by the test suite and docs."""
    return Scenario(
        medium=MediumParams(L=1e-3, K=1e-6),
        fluid=FluidParams(lambda_i=5304.0, pi_S=2339.0, eta_E=1.4e-5, psi=120.0),
        bc=BoundaryConditions(theta_E=313.15, theta_S=293.15, p_E=2.0e5, p_S=101325.0, q=1e-3),
        sim=SimConfig(
            z_levels=(0.25, 0.5, 0.75),
            n_grid=21,
            output_times=(0.5, 1.0, 2.0, 5.0, 10.0),
            t_end=10.0,
            dt=0.02,
        ),
    )
