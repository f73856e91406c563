from __future__ import annotations

import json
from typing import Any, TextIO

from rich import box
from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

_CHECK = "✓"
_CROSS = "✗"
_DOT = "·"

_STATUS_ICON: dict[bool, tuple[str, str]] = {
    True: (_CHECK, "green"),
    False: (_CROSS, "red"),
}


def render_json(payload: dict[str, Any]) -> str:
    """The machine format: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt_value(v)}" for k, v in value.items()) + "}"
    return str(value)


def _key_value_table(title: str, data: dict[str, Any]) -> Table:
    table = Table(title=title, box=box.SIMPLE_HEAVY, show_header=False, title_justify="left")
    table.add_column("key", style="bold cyan", no_wrap=True)
    table.add_column("value")
    for key in sorted(data):
        table.add_row(Text(str(key)), Text(_fmt_value(data[key])))
    return table


def _checks_table(checks: list[dict[str, Any]]) -> Table:
    table = Table(title="checks", box=box.SIMPLE_HEAVY, title_justify="left")
    table.add_column("", width=1)
    table.add_column("check")
    table.add_column("detail", style="grey50")
    for check in checks:
        icon, color = _STATUS_ICON[bool(check["passed"])]
        table.add_row(Text(icon, style=color), Text(check["name"]), Text(check.get("detail", "")))
    return table


def _verdict_table(verdicts: dict[str, Any]) -> Table:
    table = Table(title="verdicts", box=box.SIMPLE_HEAVY, title_justify="left")
    table.add_column("lattice", style="bold")
    table.add_column("property")
    table.add_column("holds")
    table.add_column("witnesses")
    for name in sorted(verdicts):
        entry = verdicts[name]
        if not isinstance(entry, dict):
            table.add_row(Text(name), _DOT, Text(_fmt_value(entry)), "")
            continue
        for prop in sorted(entry):
            verdict = entry[prop]
            if not isinstance(verdict, dict):
                table.add_row(Text(name), prop, Text(_fmt_value(verdict)), "")
                continue
            icon, color = _STATUS_ICON[bool(verdict.get("holds"))]
            witnesses = "; ".join(
                f"{w['subgroup']} -> {w['invariant_factors']}" for w in verdict.get("witnesses", [])
            )
            table.add_row(Text(name), prop, Text(icon, style=color), Text(witnesses))
    return table


def build_report_renderable(payload: dict[str, Any]) -> Panel:
    parts: list[Any] = []
    title = payload.get("construction") or payload.get("command") or "report"
    if payload.get("parameters"):
        parts.append(_key_value_table("parameters", payload["parameters"]))
    for section in ("ranks", "invariant_factors", "result"):
        if payload.get(section):
            parts.append(_key_value_table(section.replace("_", " "), payload[section]))
    if payload.get("verdicts"):
        parts.append(_verdict_table(payload["verdicts"]))
    if payload.get("data"):
        parts.append(_key_value_table("data", payload["data"]))
    if payload.get("checks"):
        parts.append(_checks_table(payload["checks"]))
    if payload.get("timings"):
        parts.append(_key_value_table("timings (s)", payload["timings"]))
    if "error" in payload:
        error = payload["error"]
        parts.append(Text(f"{_CROSS} {error['kind']}: {error['message']}", style="bold red"))
    passed = payload.get("passed")
    if passed is None:
        border = "cyan"
        subtitle = None
    else:
        border = "green" if passed else "red"
        subtitle = f"{_CHECK} passed" if passed else f"{_CROSS} failed"
    return Panel(Group(*parts), title=str(title), subtitle=subtitle, border_style=border, expand=False)


def render_text(payload: dict[str, Any], file: TextIO, width: int = 110) -> None:
    console = Console(file=file, width=width)
    console.print(build_report_renderable(payload))


__all__ = ["build_report_renderable", "render_json", "render_text"]
