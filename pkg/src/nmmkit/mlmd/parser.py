"""Multilingual Markdown parser.

Pipeline: newline normalization, comment erasure, header, block
segmentation on blank lines (templates may span lines), block
classification, inline parsing.
"""

from __future__ import annotations

import re

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
)

_HEADER_RE = re.compile(r"^\{\{langs((?:\|[^|{}\[\]]*)+)\}\}$")
_HEADING_RE = re.compile(r"^(#{1,6})[ \t]+(.*)$")
_KB_REF_RE = re.compile(r"^\[\[([^\[\]|]+)\]\]$")


def _strip_comments(lines: list[str]) -> list[tuple[int, str]]:
    """Remove ``<!-- -->`` comments, keeping original 1-based line numbers.

    Lines left empty only because a comment was removed are dropped so a
    comment never turns into a block separator.
    """
    out: list[tuple[int, str]] = []
    in_comment = False
    opened_at = 0
    for lineno, line in enumerate(lines, 1):
        kept = []
        had_comment = in_comment
        i = 0
        while i < len(line):
            if in_comment:
                end = line.find("-->", i)
                if end < 0:
                    i = len(line)
                else:
                    in_comment = False
                    i = end + 3
            else:
                start = line.find("<!--", i)
                if start < 0:
                    kept.append(line[i:])
                    i = len(line)
                else:
                    kept.append(line[i:start])
                    in_comment = True
                    had_comment = True
                    opened_at = lineno
                    i = start + 4
        text = "".join(kept)
        if had_comment and not text.strip():
            continue
        out.append((lineno, text.rstrip() if had_comment else text))
    if in_comment:
        raise MlmdError("unclosed comment '<!--'", opened_at)
    return out


def _template_depth_after(line: str, depth: int) -> int:
    """Advance the ``{{ }}`` nesting state over one line.

    Outside a template only ``{{`` is significant; inside, single braces
    are counted so BibTeX payloads with ``{...}`` stay balanced.
    """
    i = 0
    while i < len(line):
        if depth == 0:
            j = line.find("{{", i)
            if j < 0:
                return 0
            depth = 2
            i = j + 2
            continue
        ch = line[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        i += 1
    return depth


def _segment_blocks(lines: list[tuple[int, str]]) -> list[list[tuple[int, str]]]:
    """Group lines into blocks of logical lines (blank lines separate blocks)."""
    blocks: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    depth = 0
    open_line = 0
    for lineno, line in lines:
        if depth > 0:
            start, prev = current[-1]
            current[-1] = (start, prev + "\n" + line)
            depth = _template_depth_after(line, depth)
            continue
        if not line.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        current.append((lineno, line.strip() if _template_depth_after(line, 0) == 0 else line.lstrip()))
        depth = _template_depth_after(line, 0)
        if depth:
            open_line = lineno
    if depth > 0:
        raise MlmdError("unclosed template '{{'", open_line)
    if current:
        blocks.append(current)
    return blocks


def _find_template_end(s: str, start: int, line: int | None) -> int:
    """Index just past the ``}}`` matching the ``{{`` at ``start``."""
    depth = 2
    i = start + 2
    while i < len(s):
        ch = s[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    raise MlmdError("unclosed template '{{'", line)


def _split_top_level(s: str, sep: str = "|") -> list[str]:
    """Split on ``sep`` outside ``[[...]]`` and ``{{...}}``."""
    parts, buf = [], []
    square = curly = 0
    i = 0
    while i < len(s):
        two = s[i : i + 2]
        if two == "[[":
            square += 1
            buf.append(two)
            i += 2
            continue
        if two == "]]" and square:
            square -= 1
            buf.append(two)
            i += 2
            continue
        if two == "{{":
            curly += 1
            buf.append(two)
            i += 2
            continue
        if two == "}}" and curly:
            curly -= 1
            buf.append(two)
            i += 2
            continue
        if s[i] == sep and not square and not curly:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(s[i])
        i += 1
    parts.append("".join(buf))
    return parts


def _template_node(body: str, line: int | None) -> Inline:
    parts = _split_top_level(body)
    name, args = parts[0].strip(), tuple(parts[1:])
    if not name:
        raise MlmdError("template without a name", line)
    if name == "ref" and len(args) == 1:
        arg = args[0].strip()
        if arg.startswith("@") and len(arg) > 1:
            return RefMark(arg[1:])
        m = _KB_REF_RE.match(arg)
        if m:
            return RefMark(m.group(1).strip(), kb=True)
    return TemplateInline(name, args)


def _find_single_star(s: str, start: int) -> int:
    i = start
    while True:
        j = s.find("*", i)
        if j < 0:
            return -1
        if s[j + 1 : j + 2] == "*":
            # skip a whole run of stars belonging to strong markup
            k = j
            while k < len(s) and s[k] == "*":
                k += 1
            i = k
            continue
        return j


def parse_inlines(s: str, line: int | None = None) -> tuple[Inline, ...]:
    """Parse emphasis, coreference annotations and templates in one paragraph."""
    nodes: list[Inline] = []
    buf: list[str] = []

    def flush():
        if buf:
            nodes.append(Text("".join(buf)))
            buf.clear()

    i = 0
    n = len(s)
    while i < n:
        two = s[i : i + 2]
        if two == "[[":
            end = s.find("]]", i + 2)
            if end < 0:
                raise MlmdError("unclosed coreference annotation '[['", line)
            body = s[i + 2 : end]
            if "[[" in body or "{{" in body:
                raise MlmdError("nested markup inside a coreference annotation", line)
            primary, sep, expression = body.partition("|")
            primary = primary.strip()
            expression = expression.strip() if sep else primary
            if not primary or not expression:
                raise MlmdError("empty coreference annotation", line)
            flush()
            nodes.append(Coref(primary, expression))
            i = end + 2
        elif two == "{{":
            end = _find_template_end(s, i, line)
            flush()
            nodes.append(_template_node(s[i + 2 : end - 2], line))
            i = end
        elif two == "**":
            end = s.find("**", i + 2)
            if end > i + 2:
                flush()
                nodes.append(Strong(parse_inlines(s[i + 2 : end], line)))
                i = end + 2
            else:
                buf.append(two)
                i += 2
        elif s[i] == "*":
            end = _find_single_star(s, i + 1)
            if end > i + 1:
                flush()
                nodes.append(Emph(parse_inlines(s[i + 1 : end], line)))
                i = end + 1
            else:
                buf.append("*")
                i += 1
        else:
            buf.append(s[i])
            i += 1
    flush()
    return tuple(nodes)


def parse_header(line: str) -> tuple[str, ...]:
    m = _HEADER_RE.match(line.strip())
    if m is None:
        raise MlmdError("the first line must be a language header '{{langs|<code>|...}}'", 1)
    langs = tuple(code.strip() for code in m.group(1).split("|")[1:])
    if any(not code for code in langs):
        raise MlmdError("empty language code in header", 1)
    if len(set(langs)) != len(langs):
        raise MlmdError(f"duplicate language codes in header: {', '.join(langs)}", 1)
    return langs


def _classify(block: list[tuple[int, str]], langs: tuple[str, ...]) -> Block:
    first_line, first = block[0]
    if len(block) == 1 and first.startswith("{{"):
        end = _find_template_end(first, 0, first_line)
        if end == len(first):
            parts = _split_top_level(first[2:-2])
            name = parts[0].strip()
            if name == "ref-citation" and len(parts) >= 2:
                pieces = first[2:-2].split("|", 2)
                return RefCitation(pieces[1].strip(), pieces[2] if len(pieces) > 2 else "")
            if name != "ref":
                return TemplateBlock(name, tuple(parts[1:]))

    headings = [_HEADING_RE.match(text) for _, text in block]
    if any(headings):
        if len(block) > 1:
            lineno = next(ln for (ln, _), h in zip(block, headings) if h)
            raise MlmdError("a heading must be a block of its own", lineno)
        m = headings[0]
        segments = [seg.strip() for seg in _split_top_level(m.group(2))]
        if len(segments) not in (1, len(langs)):
            raise MlmdError(
                f"heading has {len(segments)} language segments; expected 1 or {len(langs)}", first_line
            )
        return Heading(len(m.group(1)), tuple(parse_inlines(seg, first_line) for seg in segments))

    if len(block) == 1:
        return Mono(parse_inlines(first, first_line))
    if len(block) == len(langs):
        return Multi(tuple(parse_inlines(text, ln) for ln, text in block))
    raise MlmdError(
        f"block has {len(block)} paragraphs; expected 1 (language-invariant) or {len(langs)} (one per language)",
        first_line,
    )


def parse(text: str) -> MlmdDocument:
    """Parse MLMD text into an :class:`MlmdDocument`."""
    text = text.lstrip("﻿").replace("\r\n", "\n").replace("\r", "\n")
    raw_lines = text.split("\n")
    lines = _strip_comments(raw_lines)
    if not lines:
        raise MlmdError("empty document: missing language header", 1)
    header_lineno, header = lines[0]
    if header_lineno != 1:
        raise MlmdError("the language header must be on the first line", 1)
    langs = parse_header(header)
    blocks = tuple(_classify(b, langs) for b in _segment_blocks(lines[1:]))
    return MlmdDocument(langs, blocks)


def parse_file(path) -> MlmdDocument:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse(fh.read())
