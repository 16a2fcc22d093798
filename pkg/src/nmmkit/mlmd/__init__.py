"""Multilingual Markdown (MLMD): parallel multilingual text in one document.

>>> doc = parse("{{langs|zh|en}}\\n\\n你好，世界！\\nHello, world!")
>>> render_html(doc, "en")
'<p>Hello, world!</p>'
"""

from .ast import (
    Block,
    Coref,
    Emph,
    Heading,
    Inline,
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
    document_from_json,
    document_text,
    document_to_json,
    extract_annotations,
    plain_text,
)
from .html import MODES, render_html
from .parser import parse, parse_file, parse_inlines
from .writer import serialize

__all__ = [
    "Block",
    "Coref",
    "Emph",
    "Heading",
    "Inline",
    "MODES",
    "MlmdDocument",
    "MlmdError",
    "Mono",
    "Multi",
    "RefCitation",
    "RefMark",
    "Strong",
    "TemplateBlock",
    "TemplateInline",
    "Text",
    "document_from_json",
    "document_text",
    "document_to_json",
    "extract_annotations",
    "parse",
    "parse_file",
    "parse_inlines",
    "plain_text",
    "render_html",
    "serialize",
]
