"""Chat loop grounded in the knowledge base.

A judge decides whether the question needs retrieval, terms found in the
question are standardized and their records fetched, and a composer
writes the reply from those records. The deterministic judge and composer
here stand in for model calls; either can be swapped for a remote one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .kb import KbRecord, KnowledgeBase, is_cjk, ne_values
from .nmtcpt import detect_terms

USER = "user"
ASSISTANT = "assistant"


@dataclass(frozen=True)
class Intent:
    name: str
    field: str | None
    keywords: tuple[str, ...]


# checked in order; the first intent with a keyword in the question wins
INTENTS = (
    Intent("species_origin", "species_origins", ("species origin", "species", "origin", "基源", "物种", "来源")),
    Intent("medicinal_part", "medicinal_parts", ("medicinal part", "part", "药用部位", "部位")),
    Intent("processing", "processing_methods", ("processing", "processed", "炮制", "加工")),
    Intent("systematic_name", "nmmsn", ("systematic name", "系统名")),
    Intent("generic_name", "nmmgn", ("generic name", "通用名")),
    Intent("nmm_id", "nmm_id", ("nmm id", "identifier", "编号")),
)
SUMMARY = Intent("summary", None, ())

NOT_FOUND = {
    "en": "I could not find this in the knowledge base.",
    "zh": "知识库中未找到相关内容。",
}


@dataclass(frozen=True)
class Attachment:
    """A record excerpt shown with the answer, plus the record itself."""

    record: KbRecord
    field: str | None
    excerpt: str

    def to_json(self) -> dict:
        return {
            "collection": self.record.collection,
            "id": self.record.id,
            "field": self.field,
            "excerpt": self.excerpt,
            "record": self.record.to_json(),
        }


@dataclass(frozen=True)
class ChatTurn:
    role: str
    text: str
    attached_search_results: tuple[Attachment, ...] = ()

    def __post_init__(self):
        if self.role not in (USER, ASSISTANT):
            raise ValueError(f"bad role {self.role!r}")

    def to_json(self) -> dict:
        return {
            "role": self.role,
            "text": self.text,
            "attached_search_results": [a.to_json() for a in self.attached_search_results],
        }


def question_language(question: str) -> str:
    return "zh" if any(is_cjk(c) for c in question) else "en"


def detect_intent(question: str) -> Intent:
    q = question.casefold()
    for intent in INTENTS:
        if any(k in q for k in intent.keywords):
            return intent
    return SUMMARY


def excerpt(record: KbRecord, name: str | None, lang: str = "en") -> str:
    """``field: value`` line; name-element lists keep their connectors."""
    if name is None:
        value = record.fields.get(lang) or record.fields.get("en", "")
        return f"{lang}: {value}"
    value = record.fields.get(name)
    if isinstance(value, list):
        idx = 1 if lang == "zh" else 0
        items = [it[idx] if isinstance(it, list) else str(it) for it in value]
        return f"{name}: " + ", ".join(items)
    return f"{name}: {value}"


def history_attachments(history) -> list[Attachment]:
    return [a for turn in history for a in turn.attached_search_results]


@dataclass(frozen=True)
class Found:
    """A question term and the primary it standardizes to."""

    surface: str
    primary: str


class Judge(Protocol):
    def needs_retrieval(self, question: str, found: list[Found], history) -> bool: ...


@dataclass(frozen=True)
class DeterministicJudge:
    """Retrieve when a question term's record is not already attached in history.

    ``precise`` retrieves for every resolvable term regardless of history;
    the default quick mode reuses what the session already holds.
    """

    precise: bool = False

    def needs_retrieval(self, question: str, found: list[Found], history) -> bool:
        if not found:
            return False
        if self.precise:
            return True
        wanted = detect_intent(question).field
        held = {(a.record.id, a.field) for a in history_attachments(history)}
        return any((f.primary, wanted) not in held for f in found)


class Composer(Protocol):
    def compose(self, question: str, found: list[Found], attachments: list[Attachment]) -> str: ...


def join_alternatives(items: list[str], lang: str) -> str:
    if lang == "zh":
        return items[0] if len(items) == 1 else "、".join(items[:-1]) + "或" + items[-1]
    if len(items) <= 2:
        return " or ".join(items)
    return ", ".join(items[:-1]) + ", or " + items[-1]


_TEMPLATES = {
    "species_origin": ("The species origin of {term} is {value}.", "{term}的基源是{value}。"),
    "medicinal_part": ("The medicinal part of {term} is {value}.", "{term}的药用部位是{value}。"),
    "processing": ("{term} is processed by {value}.", "{term}的炮制方法是{value}。"),
    "systematic_name": ("The systematic name of {term} is {value}.", "{term}的系统名是{value}。"),
    "generic_name": ("The generic name of {term} is {value}.", "{term}的通用名是{value}。"),
    "nmm_id": ("The NMM ID of {term} is {value}.", "{term}的天然药材ID是{value}。"),
    "summary": ("{term} is {value}.", "{term}是{value}。"),
}


class DeterministicComposer:
    """Template per intent, filled only with values from attached records."""

    def compose(self, question: str, found: list[Found], attachments: list[Attachment]) -> str:
        lang = question_language(question)
        intent = detect_intent(question)
        sentences = []
        for f in found:
            value = self._value(intent, f.primary, attachments, lang)
            if value:
                template = _TEMPLATES[intent.name][1 if lang == "zh" else 0]
                sentences.append(template.format(term=f.surface, value=value))
        return (" " if lang == "en" else "").join(sentences) if sentences else NOT_FOUND[lang]

    @staticmethod
    def _value(intent: Intent, primary: str, attachments: list[Attachment], lang: str) -> str | None:
        for a in attachments:
            if a.record.id != primary or a.field != intent.field:
                continue
            if intent.field is None:
                return a.record.fields.get(lang)
            value = a.record.fields.get(intent.field)
            if isinstance(value, list):
                names = ne_values(value, 1 if lang == "zh" else 0)
                return join_alternatives(names, lang) if names else None
            if lang == "zh" and intent.field in ("nmmsn", "nmmgn"):
                return a.record.fields.get(intent.field + "_zh") or value
            return value
        return None


def find_terms(question: str, kb: KnowledgeBase) -> list[Found]:
    seen = set()
    out = []
    for m in detect_terms(question, kb):
        if m.primary and m.primary not in seen:
            seen.add(m.primary)
            out.append(Found(m.surface, m.primary))
    return out


def retrieve(found: list[Found], intent: Intent, kb: KnowledgeBase, lang: str) -> list[Attachment]:
    out = []
    for f in found:
        std = kb.standardize(f.primary)
        if std is None:
            continue
        if intent.field is None:
            if std.glossary is not None:
                out.append(Attachment(std.glossary, None, excerpt(std.glossary, None, lang)))
        elif std.snnmm is not None and intent.field in std.snnmm.fields:
            out.append(Attachment(std.snnmm, intent.field, excerpt(std.snnmm, intent.field, lang)))
    return out


def answer(question: str, history=(), kb: KnowledgeBase | None = None, judge: Judge | None = None,
           composer: Composer | None = None) -> ChatTurn:
    """Assistant turn for ``question`` given the session ``history``."""
    if kb is None:
        raise ValueError("a knowledge base is required")
    judge = judge or DeterministicJudge()
    composer = composer or DeterministicComposer()
    history = list(history)
    found = find_terms(question, kb)
    lang = question_language(question)
    intent = detect_intent(question)
    if judge.needs_retrieval(question, found, history):
        attached = retrieve(found, intent, kb, lang)
        context = attached + history_attachments(history)
    else:
        attached = []
        context = history_attachments(history)
    return ChatTurn(ASSISTANT, composer.compose(question, found, context), tuple(attached))


@dataclass
class ChatSession:
    kb: KnowledgeBase
    judge: Judge = field(default_factory=DeterministicJudge)
    composer: Composer = field(default_factory=DeterministicComposer)
    history: list[ChatTurn] = field(default_factory=list)

    def ask(self, question: str) -> ChatTurn:
        reply = answer(question, self.history, self.kb, self.judge, self.composer)
        self.history.append(ChatTurn(USER, question))
        self.history.append(reply)
        return reply
