"""Shared verdict type for structural validators."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validation pass.

    ``ok`` is True when every check passed.  Otherwise ``reason`` names the
    first violated constraint, with ``slot`` and ``entry_index`` locating it
    when the check is positional.
    """

    ok: bool
    reason: str = ""
    slot: int | None = None
    entry_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> "Verdict":
        return cls(ok=True, reason="OK")

    @classmethod
    def failed(cls, reason: str, slot: int | None = None,
               entry_index: int | None = None) -> "Verdict":
        return cls(ok=False, reason=reason, slot=slot, entry_index=entry_index)
