"""Canonical MLMD writer."""

from __future__ import annotations

from .ast import (
    Block,
    Coref,
    Emph,
    Heading,
    InlineSeq,
    MlmdDocument,
    Mono,
    Multi,
    RefCitation,
    RefMark,
    Strong,
    TemplateBlock,
    TemplateInline,
    Text,
)


def serialize_inlines(seq: InlineSeq) -> str:
    out = []
    for node in seq:
        if isinstance(node, Text):
            out.append(node.text)
        elif isinstance(node, Strong):
            out.append(f"**{serialize_inlines(node.children)}**")
        elif isinstance(node, Emph):
            out.append(f"*{serialize_inlines(node.children)}*")
        elif isinstance(node, Coref):
            if node.expression == node.primary:
                out.append(f"[[{node.primary}]]")
            else:
                out.append(f"[[{node.primary}|{node.expression}]]")
        elif isinstance(node, RefMark):
            out.append(f"{{{{ref|[[{node.ref_id}]]}}}}" if node.kb else f"{{{{ref|@{node.ref_id}}}}}")
        elif isinstance(node, TemplateInline):
            out.append("{{" + "|".join((node.name, *node.args)) + "}}")
        else:
            raise TypeError(f"not an inline node: {node!r}")
    return "".join(out)


def serialize_block(block: Block) -> str:
    if isinstance(block, Multi):
        return "\n".join(serialize_inlines(p) for p in block.paragraphs)
    if isinstance(block, Mono):
        return serialize_inlines(block.paragraph)
    if isinstance(block, Heading):
        return "#" * block.level + " " + " | ".join(serialize_inlines(s) for s in block.segments)
    if isinstance(block, RefCitation):
        return f"{{{{ref-citation|{block.format}|{block.payload}}}}}"
    if isinstance(block, TemplateBlock):
        return "{{" + "|".join((block.name, *block.args)) + "}}"
    raise TypeError(f"not a block node: {block!r}")


def serialize(doc: MlmdDocument) -> str:
    """Header line, then blocks separated by one blank line.

    >>> from .ast import Text
    >>> serialize(MlmdDocument(("zh", "en"), (Multi(((Text("你好"),), (Text("Hi"),))),)))
    '{{langs|zh|en}}\\n\\n你好\\nHi'
    """
    parts = ["{{langs|" + "|".join(doc.langs) + "}}"]
    parts.extend(serialize_block(b) for b in doc.blocks)
    return "\n\n".join(parts)
