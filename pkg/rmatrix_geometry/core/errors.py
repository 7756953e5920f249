from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class GeometryError(Exception):
    """Base error envelope. Checks catch these; the CLI prints them sorted."""

    code: str
    message: str
    source: Optional[str] = None
    path: Optional[str] = None

    def __str__(self) -> str:
        parts: list[str] = []
        if self.source:
            parts.append(self.source)
        if self.path:
            parts.append(self.path)
        loc = ":".join(parts) if parts else "<geometry>"
        return f"{loc}: {self.code}: {self.message}"


class ConfigError(GeometryError):
    pass


class NumericError(GeometryError):
    pass


class DegeneracyError(GeometryError):
    pass


class MapInconsistencyError(GeometryError):
    pass


class PoleError(GeometryError):
    pass


class SingularCurveError(GeometryError):
    pass
