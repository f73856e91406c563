"""Lattice documents: one UTF-8 file holding a group, a rank and generator matrices.

    {"group": {"type": "abelian", "orders": [2, 2]}, "rank": 5,
     "action": [[[...], ...], ...], "label": "..."}

A table group is {"type": "table", "mul": [[...]], "generators": [...]}.
``.yaml``/``.yml`` files are read as YAML, anything else as JSON.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import yaml

from flasquekit.algebra.groups import FiniteGroup, abelian_group, group_from_table
from flasquekit.algebra.lattice import GammaLattice, trivial_lattice
from flasquekit.utils.errors import InvalidInputError


def group_from_document(raw: Any) -> FiniteGroup:
    if not isinstance(raw, Mapping):
        raise InvalidInputError("'group' must be a mapping")
    kind = raw.get("type")
    if kind == "abelian":
        orders = raw.get("orders")
        if not isinstance(orders, list) or not all(isinstance(n, int) for n in orders):
            raise InvalidInputError("abelian group needs an integer list 'orders'")
        return abelian_group(orders, raw.get("label"))
    if kind == "table":
        mul = raw.get("mul")
        if not isinstance(mul, list):
            raise InvalidInputError("table group needs a 'mul' table")
        return group_from_table(mul, raw.get("generators"), raw.get("label", ""))
    raise InvalidInputError(f"unknown group type {kind!r}; expected 'abelian' or 'table'")


def group_to_document(group: FiniteGroup) -> dict[str, Any]:
    if group.abelian_orders is not None:
        return {"type": "abelian", "orders": list(group.abelian_orders)}
    return {
        "type": "table",
        "mul": [list(row) for row in group.mul],
        "generators": list(group.generator_indices),
    }


def _action_from_mapping(action: Mapping) -> list:
    """Generator matrices keyed by generator position; keys must be exactly 0..k-1."""
    by_position: dict[int, Any] = {}
    for key, matrix in action.items():
        if isinstance(key, bool):
            raise InvalidInputError(f"'action' keys must be generator positions, got {key!r}")
        try:
            position = int(key)
        except (TypeError, ValueError):
            raise InvalidInputError(f"'action' keys must be generator positions, got {key!r}") from None
        if position in by_position:
            raise InvalidInputError(f"'action' lists generator {position} twice")
        by_position[position] = matrix
    if sorted(by_position) != list(range(len(by_position))):
        raise InvalidInputError(
            f"'action' keys must be 0..{len(by_position) - 1}, got {sorted(by_position)}",
            details={"keys": sorted(by_position)},
        )
    return [by_position[i] for i in range(len(by_position))]


def lattice_from_document(raw: Any) -> GammaLattice:
    if not isinstance(raw, Mapping):
        raise InvalidInputError("lattice document must be a mapping")
    missing = [key for key in ("group", "rank", "action") if key not in raw]
    if missing:
        raise InvalidInputError(f"lattice document is missing {', '.join(missing)}")
    group = group_from_document(raw["group"])
    rank = raw["rank"]
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 0:
        raise InvalidInputError(f"'rank' must be a non-negative integer, got {rank!r}")
    action = raw["action"]
    if isinstance(action, Mapping):
        action = _action_from_mapping(action)
    if not isinstance(action, list):
        raise InvalidInputError("'action' must list one matrix per generator")
    label = raw.get("label", "")
    if rank == 0:
        return GammaLattice(group, 0, trivial_lattice(group, 0).action, label, False)
    return GammaLattice.from_generators(group, action, label, rank=rank)


def lattice_to_document(lattice: GammaLattice) -> dict[str, Any]:
    return {
        "group": group_to_document(lattice.group),
        "rank": lattice.rank,
        "action": [[[int(x) for x in row] for row in m.tolist()] for m in lattice.generator_matrices],
        "label": lattice.label,
    }


def _load_raw(path: Path) -> Any:
    try:
        with path.open("r", encoding="utf-8") as f:
            if path.suffix.lower() in {".yaml", ".yml"}:
                return yaml.safe_load(f) or {}
            return json.load(f)
    except FileNotFoundError:
        raise InvalidInputError(f"lattice file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid UTF-8: {exc.reason} at byte {exc.start}") from exc
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InvalidInputError(f"cannot parse {path}: {exc}") from exc
    except IsADirectoryError:
        raise InvalidInputError(f"lattice path is a directory: {path}") from None


def load_lattice(path: str | Path) -> GammaLattice:
    return lattice_from_document(_load_raw(Path(path)))


def save_lattice(lattice: GammaLattice, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    document = lattice_to_document(lattice)
    with target.open("w", encoding="utf-8") as f:
        if target.suffix.lower() in {".yaml", ".yml"}:
            yaml.safe_dump(document, f, sort_keys=True)
        else:
            json.dump(document, f, sort_keys=True)
            f.write("\n")
    return target


__all__ = [
    "group_from_document",
    "group_to_document",
    "lattice_from_document",
    "lattice_to_document",
    "load_lattice",
    "save_lattice",
]
