"""HTML rendering in the four bilingual display modes."""

from __future__ import annotations

from html import escape

from .ast import (
    Coref,
    Emph,
    Heading,
    InlineSeq,
    MlmdDocument,
    MlmdError,
    Mono,
    Multi,
    RefCitation,
    RefMark,
    Strong,
    TemplateBlock,
    TemplateInline,
    Text,
)

MODES = ("zh-en", "en-zh", "zh", "en")


def mode_languages(mode: str) -> tuple[str, ...]:
    """``"zh-en"`` -> ``("zh", "en")``; any ``a-b`` or single code works."""
    langs = tuple(p for p in mode.split("-") if p)
    if not langs or len(set(langs)) != len(langs):
        raise MlmdError(f"invalid display mode: {mode!r}")
    return langs


class _Renderer:
    def __init__(self, doc: MlmdDocument, mode: str):
        self.doc = doc
        self.langs = mode_languages(mode)
        missing = [lang for lang in self.langs if lang not in doc.langs]
        if missing:
            raise MlmdError(f"display mode {mode!r} needs language(s) absent from the document: {', '.join(missing)}")
        self.bilingual = len(self.langs) > 1
        self.ref_numbers: dict[str, int] = {}

    def inline(self, seq: InlineSeq) -> str:
        out = []
        for node in seq:
            if isinstance(node, Text):
                out.append(escape(node.text, quote=False))
            elif isinstance(node, Strong):
                out.append(f"<strong>{self.inline(node.children)}</strong>")
            elif isinstance(node, Emph):
                out.append(f"<em>{self.inline(node.children)}</em>")
            elif isinstance(node, Coref):
                out.append(
                    f'<a class="mlmd-coref" data-coref-primary="{escape(node.primary)}">'
                    f"{self.inline(node.expression_inlines)}</a>"
                )
            elif isinstance(node, RefMark):
                num = self.ref_numbers.setdefault(node.ref_id, len(self.ref_numbers) + 1)
                kb = ' data-ref-kb="true"' if node.kb else ""
                out.append(f'<sup class="mlmd-ref" data-ref-id="{escape(node.ref_id)}"{kb}>[{num}]</sup>')
            elif isinstance(node, TemplateInline):
                raw = "|".join((node.name, *node.args))
                out.append(f'<span class="mlmd-template" data-template="{escape(node.name)}">{escape(raw, quote=False)}</span>')
        return "".join(out)

    def _select(self, items):
        return [(lang, items[self.doc.langs.index(lang)]) for lang in self.langs]

    def block(self, block) -> str:
        if isinstance(block, Multi):
            chosen = self._select(block.paragraphs)
            if not self.bilingual:
                return f"<p>{self.inline(chosen[0][1])}</p>"
            paras = "".join(f'<p lang="{lang}">{self.inline(p)}</p>' for lang, p in chosen)
            return f'<div class="mlmd-multi">{paras}</div>'
        if isinstance(block, Mono):
            return f"<p>{self.inline(block.paragraph)}</p>"
        if isinstance(block, Heading):
            tag = f"h{block.level}"
            if block.is_mono:
                return f"<{tag}>{self.inline(block.segments[0])}</{tag}>"
            chosen = self._select(block.segments)
            if not self.bilingual:
                return f"<{tag}>{self.inline(chosen[0][1])}</{tag}>"
            spans = "".join(f'<span lang="{lang}">{self.inline(s)}</span>' for lang, s in chosen)
            return f"<{tag}>{spans}</{tag}>"
        if isinstance(block, RefCitation):
            return (
                f'<pre class="mlmd-ref-citation" data-format="{escape(block.format)}">'
                f"{escape(block.payload.strip(), quote=False)}</pre>"
            )
        if isinstance(block, TemplateBlock):
            raw = "|".join((block.name, *block.args))
            return f'<div class="mlmd-template" data-template="{escape(block.name)}">{escape(raw, quote=False)}</div>'
        raise TypeError(f"not a block node: {block!r}")


def render_html(doc: MlmdDocument, mode: str = "zh-en") -> str:
    """Render an HTML fragment, one element per block, newline-separated.

    In bilingual modes each Multi block becomes a ``div`` whose paragraphs
    follow the mode order; in single-language modes only that language's
    paragraph is emitted. Language-invariant blocks appear in every mode.
    """
    r = _Renderer(doc, mode)
    return "\n".join(r.block(b) for b in doc.blocks)
