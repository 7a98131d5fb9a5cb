"""Run reports and their deterministic JSON encoding."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from ._version import __version__

__all__ = ["RunReport", "dumps", "OUTCOMES"]

OUTCOMES = ("passed", "failed", "inconclusive")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits.

    Key order is insertion order, so equal inputs give byte-identical output.
    Non-finite floats become ``null``.
    """
    return _encode(obj, indent, 0) + "\n"


@dataclass
class RunReport:
    """Outcome of one CLI command.

    Each certificate is a dict with an ``outcome`` in :data:`OUTCOMES` and a
    ``status`` of ``verified`` or ``exploratory``. ``summary`` tallies the
    verified certificates; exploratory ones are tallied separately and never
    count as failures.
    """

    command: str
    config: dict
    certificates: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    wall_clock: float | None = None
    version: str = __version__

    def _tally(self, status: str) -> dict:
        counts = Counter(c["outcome"] for c in self.certificates if c.get("status", "verified") == status)
        return {k: counts.get(k, 0) for k in OUTCOMES}

    @property
    def summary(self) -> dict:
        return self._tally("verified")

    @property
    def exploratory(self) -> dict:
        return self._tally("exploratory")

    @property
    def violations(self) -> list[dict]:
        return [c for c in self.certificates if c.get("status", "verified") == "verified" and c["outcome"] == "failed"]

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "summary": self.summary,
        }
        if any(c.get("status") == "exploratory" for c in self.certificates):
            out["exploratory"] = self.exploratory
        if self.wall_clock is not None:
            out["wall_clock_seconds"] = self.wall_clock
        out.update(self.extra)
        out["violations"] = self.violations
        out["certificates"] = self.certificates
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        s = self.summary
        lines = [f"{self.command}: passed={s['passed']} failed={s['failed']} inconclusive={s['inconclusive']}"]
        if any(c.get("status") == "exploratory" for c in self.certificates):
            e = self.exploratory
            lines.append(
                f"exploratory (outside hypotheses): passed={e['passed']} failed={e['failed']} "
                f"inconclusive={e['inconclusive']}"
            )
        for v in self.violations[:20]:
            lines.append(f"  VIOLATION {v}")
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        if self.wall_clock is not None:
            lines.append(f"wall clock: {self.wall_clock:.3f} s")
        return "\n".join(lines) + "\n"
