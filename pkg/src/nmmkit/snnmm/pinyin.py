"""Pinyin lookup for Chinese systematic and generic names.

The table file holds one record per line, ``key<TAB>toned<TAB>untoned``.
A key is either a single character or a multi-character phrase; phrases
carry space-separated syllables and are used to pin the reading of
polyphonic characters (longest key wins).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path


class PinyinError(ValueError):
    """A character has no entry in the pinyin table."""

    def __init__(self, char: str, text: str):
        super().__init__(f"no pinyin for character {char!r} in {text!r}")
        self.char = char
        self.text = text


@dataclass(frozen=True)
class PinyinTable:
    entries: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = field(default_factory=dict)

    @property
    def max_key_len(self) -> int:
        return max((len(k) for k in self.entries), default=1)

    @classmethod
    def from_lines(cls, lines) -> "PinyinTable":
        entries: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {}
        for lineno, raw in enumerate(lines, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"pinyin table line {lineno}: expected 3 tab-separated fields")
            key, toned, untoned = parts
            toned_syl = tuple(toned.split())
            untoned_syl = tuple(untoned.split())
            if len(toned_syl) != len(key) or len(untoned_syl) != len(key):
                raise ValueError(f"pinyin table line {lineno}: syllable count does not match {key!r}")
            entries[key] = (toned_syl, untoned_syl)
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path) -> "PinyinTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)

    def syllables(self, text: str) -> list[tuple[str, str]]:
        """Split ``text`` into (toned, untoned) syllables by longest-key match."""
        out: list[tuple[str, str]] = []
        i = 0
        longest = self.max_key_len
        while i < len(text):
            for size in range(min(longest, len(text) - i), 0, -1):
                hit = self.entries.get(text[i : i + size])
                if hit is not None:
                    out.extend(zip(*hit))
                    i += size
                    break
            else:
                raise PinyinError(text[i], text)
        return out


@lru_cache(maxsize=1)
def default_pinyin_table() -> PinyinTable:
    ref = resources.files("nmmkit").joinpath("fixtures/snnmm/pinyin.tsv")
    with ref.open(encoding="utf-8") as fh:
        return PinyinTable.from_lines(fh)


def pinyinize_toned(zh_name: str, table: PinyinTable | None = None) -> str:
    """Space-joined toned pinyin, e.g. ``青蒿`` -> ``qīng hāo``."""
    table = table or default_pinyin_table()
    return " ".join(toned for toned, _ in table.syllables(zh_name))


def make_generic_name(zh_name: str, table: PinyinTable | None = None) -> str:
    """Build an NMMGN from its Chinese generic name.

    Untoned syllables are hyphen-joined, the first letter is capitalized
    and ``ü`` is written ``v``: ``女贞子`` -> ``Nv-zhen-zi``.
    """
    if len(zh_name) < 2:
        raise ValueError(f"a Chinese generic name needs two or more characters: {zh_name!r}")
    table = table or default_pinyin_table()
    joined = "-".join(untoned for _, untoned in table.syllables(zh_name))
    joined = joined.replace("ü", "v").replace("Ü", "V").lower()
    return joined[:1].upper() + joined[1:]
