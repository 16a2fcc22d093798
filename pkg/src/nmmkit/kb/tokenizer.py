"""Dictionary tokenizer for mixed Chinese/Latin text.

CJK runs are cut by forward longest match against a lexicon (unknown
characters fall back to single-character tokens). Latin runs split on
whitespace and punctuation, keep inner hyphens and are lowercased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple

_LATIN_RE = re.compile(r"[^\W_]+(?:[-'][^\W_]+)*")


def is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x3400 <= cp <= 0x4DBF
        or 0x4E00 <= cp <= 0x9FFF
        or 0xF900 <= cp <= 0xFAFF
        or 0x20000 <= cp <= 0x2FA1F
    )


class Token(NamedTuple):
    text: str
    start: int
    end: int


@dataclass
class Tokenizer:
    lexicon: frozenset[str] = frozenset()

    def __post_init__(self):
        self.lexicon = frozenset(w for w in self.lexicon if w)
        self._max_len = max((len(w) for w in self.lexicon), default=1)

    def with_words(self, words: Iterable[str]) -> "Tokenizer":
        return Tokenizer(self.lexicon | {w for w in words if w and all(is_cjk(c) for c in w)})

    def _cut_cjk(self, run: str, offset: int) -> list[Token]:
        out = []
        i = 0
        while i < len(run):
            for size in range(min(self._max_len, len(run) - i), 1, -1):
                if run[i : i + size] in self.lexicon:
                    break
            else:
                size = 1
            out.append(Token(run[i : i + size], offset + i, offset + i + size))
            i += size
        return out

    def spans(self, text: str) -> list[Token]:
        """Tokens with character offsets into ``text``."""
        tokens: list[Token] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if is_cjk(ch):
                j = i
                while j < n and is_cjk(text[j]):
                    j += 1
                tokens.extend(self._cut_cjk(text[i:j], i))
                i = j
                continue
            m = _LATIN_RE.match(text, i) if ch.isalnum() else None
            if m:
                # stop a Latin word at the first CJK character
                end = m.end()
                for k in range(i, end):
                    if is_cjk(text[k]):
                        end = k
                        break
                tokens.append(Token(text[i:end].lower(), i, end))
                i = end
            else:
                i += 1
        return tokens

    def tokenize(self, text: str) -> list[str]:
        return [t.text for t in self.spans(text)]

    def tokenize_for_search(self, text: str) -> list[str]:
        """Longest-match tokens plus lexicon words nested inside long CJK tokens.

        The extra sub-words let a short query such as ``麻黄`` reach a
        document tokenized as ``草麻黄``.
        """
        out = []
        for tok in self.tokenize(text):
            out.append(tok)
            if len(tok) > 2 and is_cjk(tok[0]):
                for size in range(len(tok) - 1, 1, -1):
                    for i in range(len(tok) - size + 1):
                        sub = tok[i : i + size]
                        if sub in self.lexicon:
                            out.append(sub)
        return out


def read_lexicon(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(ln.strip() for ln in fh if ln.strip() and not ln.startswith("#"))


@lru_cache(maxsize=1)
def default_lexicon() -> frozenset[str]:
    ref = resources.files("nmmkit").joinpath("fixtures/lexicon.txt")
    with ref.open(encoding="utf-8") as fh:
        return frozenset(ln.strip() for ln in fh if ln.strip() and not ln.startswith("#"))


def default_tokenizer() -> Tokenizer:
    return Tokenizer(default_lexicon())
