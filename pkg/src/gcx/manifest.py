"""Manifest files: ``key: value`` lines with indented continuation blocks.

Example::

    # sigma = z1 d/dz1 ^ d/dz2 on C^2
    holo: z1 z2
    bivector:
      z1 z2: z1
    center: z1 z2

Blank lines and ``#`` comments are ignored.  A key may repeat (``point``,
``sample``); continuation lines (indented) are attached to the most
recent key.  Values keep their line numbers for diagnostics.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import GcxError, InputError, ManifestError
from .poly import Chart, GaussRat

_KEY = re.compile(r"^([A-Za-z_][A-Za-z0-9_.-]*)\s*:(.*)$")


@dataclass
class Entry:
    key: str
    value: str
    line: int
    block: List[Tuple[str, int]] = field(default_factory=list)

    def text(self) -> str:
        """Inline value followed by block lines, joined by newlines."""
        parts = [self.value] if self.value else []
        parts += [b for b, _ in self.block]
        return "\n".join(parts)


@dataclass
class Manifest:
    entries: List[Entry]
    source: str = ""
    path: Optional[str] = None

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def all(self, key: str) -> List[Entry]:
        return [e for e in self.entries if e.key == key]

    def get(self, key: str) -> Optional[Entry]:
        found = self.all(key)
        if len(found) > 1:
            raise ManifestError(f"key {key!r} given more than once (lines {[e.line for e in found]})", key=key)
        return found[0] if found else None

    def has(self, key: str) -> bool:
        return bool(self.all(key))

    def require(self, key: str) -> Entry:
        e = self.get(key)
        if e is None:
            raise ManifestError(f"missing required key {key!r}", key=key)
        return e

    def value(self, key: str, default: Optional[str] = None) -> Optional[str]:
        e = self.get(key)
        return default if e is None else e.text()

    def names(self, key: str) -> Tuple[str, ...]:
        v = self.value(key, "")
        return tuple(t for t in re.split(r"[\s,]+", v) if t)

    def chart(self) -> Chart:
        if not self.has("real") and not self.has("holo"):
            raise ManifestError("manifest declares no coordinates (keys 'real' and/or 'holo')")
        try:
            return Chart(self.names("real"), self.names("holo"))
        except GcxError as exc:
            raise ManifestError(f"bad chart declaration: {exc}") from None

    def check_known(self, allowed: Sequence[str]) -> None:
        for e in self.entries:
            if e.key not in allowed:
                raise ManifestError(f"unknown key {e.key!r} on line {e.line}", key=e.key, line=e.line)


def parse_manifest(text: str, path: Optional[str] = None) -> Manifest:
    entries: List[Entry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if not entries:
                raise ManifestError(f"indented line {lineno} before any key", line=lineno)
            entries[-1].block.append((line.strip(), lineno))
            continue
        m = _KEY.match(line)
        if not m:
            raise ManifestError(f"line {lineno}: expected 'key: value'", line=lineno)
        entries.append(Entry(m.group(1), m.group(2).strip(), lineno))
    return Manifest(entries, text, path)


def load_manifest(path: str) -> Manifest:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path!r}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ManifestError(f"manifest {path!r} is not UTF-8") from None
    return parse_manifest(text, path)


def with_location(exc: GcxError, entry: Optional[Entry]) -> GcxError:
    """Annotate an error raised while interpreting ``entry`` with its manifest line."""
    if entry is not None and "manifest_line" not in exc.details:
        exc.details["manifest_key"] = entry.key
        exc.details["manifest_line"] = entry.line
    return exc
