"""Immutable syntax tree for Multilingual Markdown documents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class MlmdError(ValueError):
    """Malformed MLMD input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


# -- inline nodes -----------------------------------------------------------

@dataclass(frozen=True)
class Text:
    text: str


@dataclass(frozen=True)
class Strong:
    children: tuple["Inline", ...]


@dataclass(frozen=True)
class Emph:
    children: tuple["Inline", ...]


@dataclass(frozen=True)
class Coref:
    """``[[primary|expression]]``; ``[[primary]]`` has expression == primary."""

    primary: str
    expression: str

    @property
    def expression_inlines(self) -> tuple["Inline", ...]:
        # emphasis inside an expression is an extension; parsed on demand
        from .parser import parse_inlines

        return parse_inlines(self.expression)


@dataclass(frozen=True)
class RefMark:
    """Citation marker. ``kb`` is set for ``{{ref|[[id]]}}``, which points
    at a knowledge-base reference rather than an in-document BibTeX entry."""

    ref_id: str
    kb: bool = False


@dataclass(frozen=True)
class TemplateInline:
    name: str
    args: tuple[str, ...] = ()


Inline = Union[Text, Strong, Emph, Coref, RefMark, TemplateInline]
InlineSeq = tuple[Inline, ...]


# -- block nodes ------------------------------------------------------------

@dataclass(frozen=True)
class Multi:
    paragraphs: tuple[InlineSeq, ...]


@dataclass(frozen=True)
class Mono:
    paragraph: InlineSeq


@dataclass(frozen=True)
class Heading:
    level: int
    segments: tuple[InlineSeq, ...]

    def __post_init__(self):
        if not 1 <= self.level <= 6:
            raise ValueError(f"heading level must be 1..6, got {self.level}")

    @property
    def is_mono(self) -> bool:
        return len(self.segments) == 1


@dataclass(frozen=True)
class RefCitation:
    format: str
    payload: str


@dataclass(frozen=True)
class TemplateBlock:
    name: str
    args: tuple[str, ...] = ()


Block = Union[Multi, Mono, Heading, RefCitation, TemplateBlock]


@dataclass(frozen=True)
class MlmdDocument:
    langs: tuple[str, ...]
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        if not self.langs:
            raise ValueError("an MLMD document needs at least one language")
        if len(set(self.langs)) != len(self.langs):
            raise ValueError(f"duplicate language codes: {self.langs}")
        for b in self.blocks:
            if isinstance(b, Multi) and len(b.paragraphs) != len(self.langs):
                raise ValueError("Multi block paragraph count must equal the number of languages")

    @property
    def primary_lang(self) -> str:
        return self.langs[0]


# -- helpers ----------------------------------------------------------------

def plain_text(seq: InlineSeq) -> str:
    """Visible text of an inline sequence (markup and citations dropped)."""
    out = []
    for node in seq:
        if isinstance(node, Text):
            out.append(node.text)
        elif isinstance(node, (Strong, Emph)):
            out.append(plain_text(node.children))
        elif isinstance(node, Coref):
            out.append(plain_text(node.expression_inlines))
    return "".join(out)


def iter_corefs(seq: InlineSeq):
    for node in seq:
        if isinstance(node, Coref):
            yield node
        elif isinstance(node, (Strong, Emph)):
            yield from iter_corefs(node.children)


def iter_refmarks(seq: InlineSeq):
    for node in seq:
        if isinstance(node, RefMark):
            yield node
        elif isinstance(node, (Strong, Emph)):
            yield from iter_refmarks(node.children)


def extract_annotations(doc: MlmdDocument) -> list[dict]:
    """One record per coreference annotation, in document order.

    ``language`` comes from the paragraph position in a Multi block (or
    segment position in a multilingual heading) and is ``None`` for
    language-invariant content.
    """
    records = []

    def emit(seq, lang, index):
        for c in iter_corefs(seq):
            records.append({"primary": c.primary, "expression": c.expression, "language": lang, "block_index": index})

    for index, block in enumerate(doc.blocks):
        if isinstance(block, Multi):
            for lang, para in zip(doc.langs, block.paragraphs):
                emit(para, lang, index)
        elif isinstance(block, Mono):
            emit(block.paragraph, None, index)
        elif isinstance(block, Heading):
            if block.is_mono:
                emit(block.segments[0], None, index)
            else:
                for lang, seg in zip(doc.langs, block.segments):
                    emit(seg, lang, index)
    return records


def document_text(doc: MlmdDocument) -> str:
    """All visible text of the document, one line per paragraph/segment."""
    lines = []
    for block in doc.blocks:
        if isinstance(block, Multi):
            lines.extend(plain_text(p) for p in block.paragraphs)
        elif isinstance(block, Mono):
            lines.append(plain_text(block.paragraph))
        elif isinstance(block, Heading):
            lines.extend(plain_text(s) for s in block.segments)
    return "\n".join(lines)


# -- JSON form --------------------------------------------------------------

def inline_to_json(node: Inline) -> dict:
    if isinstance(node, Text):
        return {"type": "text", "text": node.text}
    if isinstance(node, Strong):
        return {"type": "strong", "children": [inline_to_json(c) for c in node.children]}
    if isinstance(node, Emph):
        return {"type": "emph", "children": [inline_to_json(c) for c in node.children]}
    if isinstance(node, Coref):
        return {"type": "coref", "primary": node.primary, "expression": node.expression}
    if isinstance(node, RefMark):
        return {"type": "ref", "ref_id": node.ref_id, "kb": node.kb}
    if isinstance(node, TemplateInline):
        return {"type": "template", "name": node.name, "args": list(node.args)}
    raise TypeError(f"not an inline node: {node!r}")


def inline_from_json(obj: dict) -> Inline:
    kind = obj["type"]
    if kind == "text":
        return Text(obj["text"])
    if kind == "strong":
        return Strong(tuple(inline_from_json(c) for c in obj["children"]))
    if kind == "emph":
        return Emph(tuple(inline_from_json(c) for c in obj["children"]))
    if kind == "coref":
        return Coref(obj["primary"], obj.get("expression", obj["primary"]))
    if kind == "ref":
        return RefMark(obj["ref_id"], bool(obj.get("kb", False)))
    if kind == "template":
        return TemplateInline(obj["name"], tuple(obj.get("args", ())))
    raise ValueError(f"unknown inline type: {kind!r}")


def _seq_json(seq):
    return [inline_to_json(n) for n in seq]


def _seq_from(items):
    return tuple(inline_from_json(n) for n in items)


def document_to_json(doc: MlmdDocument) -> dict:
    blocks = []
    for b in doc.blocks:
        if isinstance(b, Multi):
            blocks.append({"type": "multi", "paragraphs": [_seq_json(p) for p in b.paragraphs]})
        elif isinstance(b, Mono):
            blocks.append({"type": "mono", "paragraph": _seq_json(b.paragraph)})
        elif isinstance(b, Heading):
            blocks.append({"type": "heading", "level": b.level, "segments": [_seq_json(s) for s in b.segments]})
        elif isinstance(b, RefCitation):
            blocks.append({"type": "ref-citation", "format": b.format, "payload": b.payload})
        elif isinstance(b, TemplateBlock):
            blocks.append({"type": "template", "name": b.name, "args": list(b.args)})
    return {"langs": list(doc.langs), "blocks": blocks}


def document_from_json(obj: dict) -> MlmdDocument:
    blocks: list[Block] = []
    for b in obj.get("blocks", []):
        kind = b["type"]
        if kind == "multi":
            blocks.append(Multi(tuple(_seq_from(p) for p in b["paragraphs"])))
        elif kind == "mono":
            blocks.append(Mono(_seq_from(b["paragraph"])))
        elif kind == "heading":
            blocks.append(Heading(int(b["level"]), tuple(_seq_from(s) for s in b["segments"])))
        elif kind == "ref-citation":
            blocks.append(RefCitation(b["format"], b["payload"]))
        elif kind == "template":
            blocks.append(TemplateBlock(b["name"], tuple(b.get("args", ()))))
        else:
            raise ValueError(f"unknown block type: {kind!r}")
    return MlmdDocument(tuple(obj["langs"]), tuple(blocks))
