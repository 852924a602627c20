"""User-supplied description of the trunk of the boundary manifold."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import InvalidTrunk

_FIELDS = ("boundary_tori", "genus_sum", "exceptional_count", "cycle_rank", "solid_torus_flag")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class TrunkStub:
    boundary_tori: int
    genus_sum: int = 0
    exceptional_count: int = 0
    cycle_rank: int = 0
    solid_torus_flag: bool = False
    source: str = "<inline>"

    def __post_init__(self):
        for name in ("boundary_tori", "genus_sum", "exceptional_count", "cycle_rank"):
            if getattr(self, name) < 0:
                raise InvalidTrunk(f"{name} must be non-negative")
        if self.boundary_tori < 1:
            raise InvalidTrunk("the trunk has at least one boundary torus")
        if self.solid_torus_flag and self.boundary_tori != 1:
            raise InvalidTrunk("a solid torus has exactly one boundary torus")

    def to_dict(self) -> dict:
        return asdict(self)


def _coerce(name: str, raw) -> int | bool:
    if name == "solid_torus_flag":
        if isinstance(raw, bool):
            return raw
        text = str(raw).strip().lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise InvalidTrunk(f"solid_torus_flag: expected a boolean, got {raw!r}")
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise InvalidTrunk(f"{name}: expected an integer, got {raw!r}") from None


def parse_trunk(text: str, source: str = "<inline>") -> TrunkStub:
    """JSON object, or one ``key: value`` / ``key = value`` per line (``#`` starts a comment)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidTrunk(f"{source}: {exc}") from None
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            sep = ":" if ":" in line else "="
            if sep not in line:
                raise InvalidTrunk(f"{source}:{lineno}: expected 'key: value'")
            key, value = (part.strip() for part in line.split(sep, 1))
            data[key] = value
    unknown = set(data) - set(_FIELDS) - {"source"}
    if unknown:
        raise InvalidTrunk(f"{source}: unknown fields {sorted(unknown)}")
    if "boundary_tori" not in data:
        raise InvalidTrunk(f"{source}: boundary_tori is required")
    values = {k: _coerce(k, data[k]) for k in _FIELDS if k in data}
    return TrunkStub(**values, source=source)


def load_trunk(path: str | Path) -> TrunkStub:
    p = Path(path)
    return parse_trunk(p.read_text(encoding="utf-8"), str(p))
