"""Translation with standardized terms enforced through MLMD annotations.

Pipeline: detect knowledge-base terms in the source, map each to
``[[primary | rendering]]`` (user glossary phrases to ``[[rendering]]``),
hand text plus dictionary to a backend, check that every annotation came
back, then split the result into highlightable spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol

from .kb import KnowledgeBase

DIRECTIONS = (("zh", "en"), ("en", "zh"))
NO_SPACE_BEFORE = set(".,;:!?)]}%")
NO_SPACE_AFTER = set("([{")


class TranslationError(Exception):
    pass


class ContractViolation(TranslationError):
    """Backend output does not carry the dictionary annotations it must."""

    def __init__(self, problems: list[str]):
        super().__init__("backend broke the annotation contract: " + "; ".join(problems))
        self.problems = problems


class MissingRendering(TranslationError):
    def __init__(self, primary: str, lang: str):
        super().__init__(f"no {lang!r} glossary rendering for primary term {primary!r}")
        self.primary = primary
        self.lang = lang


def parse_direction(direction) -> tuple[str, str]:
    pair = tuple(direction.replace("->", "-").split("-")) if isinstance(direction, str) else tuple(direction)
    if pair not in DIRECTIONS:
        raise TranslationError(f"unsupported direction {direction!r}; use zh-en or en-zh")
    return pair


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source: str = "zh"
    target: str = "en"
    user_glossary: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.text.strip():
            raise TranslationError("text must be non-empty")
        parse_direction((self.source, self.target))
        object.__setattr__(self, "user_glossary", tuple((s, t) for s, t in self.user_glossary))
        for src, tgt in self.user_glossary:
            if not src.strip() or not tgt.strip():
                raise TranslationError("glossary phrases must be non-empty")


@dataclass(frozen=True)
class TermMatch:
    start: int
    end: int
    surface: str
    primary: str

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "surface": self.surface, "primary": self.primary}


@dataclass(frozen=True)
class Span:
    kind: str  # nmm_standardized | user_glossary | plain
    text: str
    primary: str | None = None
    link: str | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "text": self.text}
        if self.primary is not None:
            out["primary"] = self.primary
            out["link"] = self.link
        return out


@dataclass
class AnnotatedTranslation:
    mlmd_text: str
    spans: list[Span]
    dictionary: dict[str, str] = field(default_factory=dict)
    matches: list[TermMatch] = field(default_factory=list)

    @property
    def plain_text(self) -> str:
        return "".join(s.text for s in self.spans)

    def to_json(self) -> dict:
        return {"mlmd_text": self.mlmd_text, "spans": [s.to_json() for s in self.spans]}


# -- term detection -----------------------------------------------------------

def detect_terms(text: str, kb: KnowledgeBase) -> list[TermMatch]:
    """Knowledge-base terms in ``text``, matched over whole tokens.

    Candidates are token runs equal to some term's token sequence (Latin
    compared in lower case). Overlaps go to the longer match, then the
    leftmost one.
    """
    tokenizer = kb.tokenizer
    by_tokens: dict[tuple[str, ...], str] = {}
    for term in kb.terms():
        key = tuple(tokenizer.tokenize(term))
        if key:
            by_tokens.setdefault(key, term)
    if not by_tokens:
        return []
    longest = max(len(k) for k in by_tokens)
    spans = tokenizer.spans(text)
    candidates = []
    for i in range(len(spans)):
        for j in range(i + 1, min(len(spans), i + longest) + 1):
            term = by_tokens.get(tuple(t.text for t in spans[i:j]))
            if term is not None:
                candidates.append((spans[i].start, spans[j - 1].end, term))
    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0]))
    chosen: list[tuple[int, int, str]] = []
    for start, end, term in candidates:
        if all(end <= s or start >= e for s, e, _ in chosen):
            chosen.append((start, end, term))
    chosen.sort()
    return [TermMatch(s, e, text[s:e], kb.resolve(term)) for s, e, term in chosen]


def nmm_annotation(primary: str, rendering: str) -> str:
    return f"[[{primary} | {rendering}]]"


def glossary_annotation(rendering: str) -> str:
    return f"[[{rendering}]]"


def build_dictionary(matches, user_glossary, target_lang: str, kb: KnowledgeBase) -> dict[str, str]:
    """Ordered ``source phrase -> annotation`` mapping; the user glossary wins on equal keys."""
    user = dict(user_glossary)
    out: dict[str, str] = {}
    for m in matches:
        if m.surface in out or m.surface in user:
            continue
        std = kb.standardize(m.primary)
        rendering = std.rendering(target_lang) if std else None
        if not rendering:
            raise MissingRendering(m.primary, target_lang)
        out[m.surface] = nmm_annotation(m.primary, rendering)
    for src, tgt in user.items():
        out[src] = glossary_annotation(tgt)
    return out


# -- occurrence scanning shared by the backend and the contract check ---------

def _is_word(ch: str) -> bool:
    return ch.isalnum()


def _match_at(text: str, i: int, keys_by_len, fold: bool, word_bounded: bool):
    """Longest key starting at ``i`` (keys_by_len: longest first)."""
    for key, cmp in keys_by_len:
        n = len(key)
        piece = text[i : i + n]
        if (piece.casefold() if fold else piece) != cmp:
            continue
        if word_bounded:
            if cmp and _is_word(cmp[0]) and i > 0 and _is_word(text[i - 1]):
                continue
            if cmp and _is_word(cmp[-1]) and i + n < len(text) and _is_word(text[i + n]):
                continue
        return key, n
    return None


def _prepare(keys, fold: bool):
    return sorted(((k, k.casefold() if fold else k) for k in keys), key=lambda kc: (-len(kc[0]), kc[0]))


def count_occurrences(text: str, keys, source_lang: str) -> dict[str, int]:
    """Left-to-right, longest-first, non-overlapping occurrences of each key."""
    fold = source_lang == "en"
    prepared = _prepare(keys, fold)
    counts = dict.fromkeys(keys, 0)
    i = 0
    while i < len(text):
        hit = _match_at(text, i, prepared, fold, fold)
        if hit:
            counts[hit[0]] += 1
            i += hit[1]
        else:
            i += 1
    return counts


# -- backends --------------------------------------------------------------------

class Backend(Protocol):
    def translate(self, text: str, source: str, target: str, dictionary: dict[str, str]) -> str: ...


def read_phrase_table(path: str | Path) -> dict[str, str]:
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise TranslationError(f"{path}:{lineno}: expected 'source<TAB>target'")
            table[parts[0]] = parts[1]
    return table


@lru_cache(maxsize=None)
def _fixture_table(name: str) -> tuple[tuple[str, str], ...]:
    ref = resources.files("nmmkit").joinpath(f"fixtures/nmtcpt/{name}.tsv")
    return tuple(read_phrase_table(Path(str(ref))).items())


def default_phrase_tables() -> dict[tuple[str, str], dict[str, str]]:
    return {pair: dict(_fixture_table("-".join(pair))) for pair in DIRECTIONS}


def join_pieces(pieces: list[str], target: str) -> str:
    """Glue output pieces: spaces between English words, none in Chinese."""
    pieces = [p for p in pieces if p.strip()]
    if target == "zh":
        return "".join(p.strip() for p in pieces)
    out = ""
    for p in pieces:
        p = p.strip()
        if out and p[0] not in NO_SPACE_BEFORE and out[-1] not in NO_SPACE_AFTER:
            out += " "
        out += p
    return out


class PhraseTableBackend:
    """Deterministic offline translator.

    Dictionary keys are replaced by their annotations, known phrases by
    their table entries (longest match first, dictionary before table),
    and anything else is copied through. English source is matched over
    whole words, case-insensitively.
    """

    def __init__(self, tables: dict[tuple[str, str], dict[str, str]] | None = None):
        self.tables = default_phrase_tables() if tables is None else tables

    def translate(self, text: str, source: str, target: str, dictionary: dict[str, str]) -> str:
        table = self.tables.get((source, target), {})
        fold = source == "en"
        dict_keys = _prepare(dictionary, fold)
        table_keys = _prepare(table, fold)
        pieces: list[str] = []
        unknown = ""
        i = 0
        while i < len(text):
            hit = _match_at(text, i, dict_keys, fold, fold)
            repl = dictionary[hit[0]] if hit else None
            if hit is None:
                hit = _match_at(text, i, table_keys, fold, fold)
                repl = table[hit[0]] if hit else None
            if hit is None:
                ch = text[i]
                if ch.isspace():
                    if unknown:
                        pieces.append(unknown)
                        unknown = ""
                else:
                    unknown += ch
                i += 1
                continue
            if unknown:
                pieces.append(unknown)
                unknown = ""
            pieces.append(repl)
            i += hit[1]
        if unknown:
            pieces.append(unknown)
        return join_pieces(pieces, target)


class IdentityBackend:
    """Returns the source unchanged; handy for checking plumbing."""

    def translate(self, text: str, source: str, target: str, dictionary: dict[str, str]) -> str:
        return text


DEFAULT_PROMPT = (
    "Translate the text from {source} to {target}.\n"
    "Copy each dictionary annotation verbatim in place of its source phrase.\n"
    "Dictionary:\n{dictionary}\n"
    "{exemplars}"
    "Text: {text}\n"
    "Translation:"
)


class PromptBackend:
    """Remote-model backend: builds a few-shot prompt and calls ``complete``.

    ``complete`` is any callable mapping a prompt string to the model's
    reply; the prompt template and exemplars are configuration.
    """

    def __init__(self, complete: Callable[[str], str], template: str = DEFAULT_PROMPT, exemplars=()):
        self.complete = complete
        self.template = template
        self.exemplars = tuple(exemplars)

    def build_prompt(self, text: str, source: str, target: str, dictionary: dict[str, str]) -> str:
        dict_lines = "\n".join(f"{k} -> {v}" for k, v in dictionary.items())
        shots = "".join(f"Text: {src}\nTranslation: {tgt}\n\n" for src, tgt in self.exemplars)
        return self.template.format(source=source, target=target, dictionary=dict_lines, exemplars=shots, text=text)

    def translate(self, text: str, source: str, target: str, dictionary: dict[str, str]) -> str:
        return self.complete(self.build_prompt(text, source, target, dictionary)).strip()


# -- output parsing -----------------------------------------------------------------

def parse_translation(mlmd_text: str) -> list[Span]:
    spans: list[Span] = []
    i = 0
    plain = ""
    while i < len(mlmd_text):
        if mlmd_text.startswith("]]", i):
            raise TranslationError(f"unbalanced ']]' at offset {i}")
        if not mlmd_text.startswith("[[", i):
            plain += mlmd_text[i]
            i += 1
            continue
        end = mlmd_text.find("]]", i + 2)
        inner_open = mlmd_text.find("[[", i + 2)
        if end < 0 or (0 <= inner_open < end):
            raise TranslationError(f"unbalanced '[[' at offset {i}")
        if plain:
            spans.append(Span("plain", plain))
            plain = ""
        body = mlmd_text[i + 2 : end]
        if "|" in body:
            primary, rendering = (p.strip() for p in body.split("|", 1))
            if not primary or not rendering:
                raise TranslationError(f"empty annotation part at offset {i}")
            spans.append(Span("nmm_standardized", rendering, primary, f"/knowledge/{primary}"))
        else:
            if not body.strip():
                raise TranslationError(f"empty annotation at offset {i}")
            spans.append(Span("user_glossary", body.strip()))
        i = end + 2
    if plain:
        spans.append(Span("plain", plain))
    return spans


def strip_annotations(mlmd_text: str) -> str:
    return "".join(s.text for s in parse_translation(mlmd_text))


# -- pipeline -------------------------------------------------------------------------

def _glossary_spans(text: str, phrases, source: str) -> list[tuple[int, int]]:
    fold = source == "en"
    hay = text.casefold() if fold else text
    out = []
    for p in phrases:
        needle = p.casefold() if fold else p
        for m in re.finditer(re.escape(needle), hay):
            out.append((m.start(), m.end()))
    return out


def check_contract(text: str, output: str, dictionary: dict[str, str], source: str) -> None:
    required: dict[str, int] = {}
    for key, n in count_occurrences(text, list(dictionary), source).items():
        required[dictionary[key]] = required.get(dictionary[key], 0) + n
    problems = []
    for annotation, n in required.items():
        got = output.count(annotation)
        if got != n:
            problems.append(f"{annotation} expected {n}x, found {got}x")
    if problems:
        raise ContractViolation(problems)


def translate(request: TranslationRequest, kb: KnowledgeBase, backend: Backend | None = None) -> AnnotatedTranslation:
    backend = backend or PhraseTableBackend()
    matches = detect_terms(request.text, kb)
    # a term inside a user-glossary phrase yields to the glossary
    taken = _glossary_spans(request.text, [s for s, _ in request.user_glossary], request.source)
    matches = [m for m in matches if all(m.end <= s or m.start >= e for s, e in taken)]
    dictionary = build_dictionary(matches, request.user_glossary, request.target, kb)
    try:
        output = backend.translate(request.text, request.source, request.target, dictionary)
    except TranslationError:
        raise
    except Exception as exc:
        raise TranslationError(f"backend failed: {exc}") from exc
    if not isinstance(output, str):
        raise TranslationError("backend returned a non-string result")
    check_contract(request.text, output, dictionary, request.source)
    return AnnotatedTranslation(output, parse_translation(output), dictionary, matches)
