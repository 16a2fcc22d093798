import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from nmmkit.mlmd import (
    Coref,
    Emph,
    Heading,
    MlmdDocument,
    MlmdError,
    Mono,
    Multi,
    RefCitation,
    RefMark,
    Strong,
    Text,
    document_from_json,
    document_to_json,
    extract_annotations,
    parse,
    parse_file,
    parse_inlines,
    render_html,
    serialize,
)

LISTINGS = sorted(p.stem for p in (FIXTURES / "mlmd").glob("*.mlmd"))


def doc(name):
    return parse_file(FIXTURES / "mlmd" / f"{name}.mlmd")


@pytest.mark.parametrize("name", LISTINGS)
def test_every_listing_parses(name):
    assert isinstance(doc(name), MlmdDocument)


@pytest.mark.parametrize("name", LISTINGS)
def test_parse_serialize_identity(name):
    d = doc(name)
    assert parse(serialize(d)) == d


@pytest.mark.parametrize("name", ["hello", "parallel_zh_en", "mono", "emphasis", "headings", "coref", "entity", "citation"])
def test_serialize_reproduces_comment_free_listings(name):
    text = (FIXTURES / "mlmd" / f"{name}.mlmd").read_text(encoding="utf-8")
    assert serialize(parse(text)) == text.rstrip("\n")


def test_hello():
    d = doc("hello")
    assert d.langs == ("zh", "en")
    assert d.blocks == (Multi(((Text("你好，世界！"),), (Text("Hello, world!"),))),)
    assert serialize(d) == "{{langs|zh|en}}\n\n你好，世界！\nHello, world!"


def test_headers_only():
    assert doc("header_zh_en").langs == ("zh", "en")
    assert doc("header_zh_en_la").langs == ("zh", "en", "la")
    assert doc("header_zh_en_la").blocks == ()


def test_trilingual_blocks():
    d = doc("parallel_zh_en_la")
    assert all(isinstance(b, Multi) and len(b.paragraphs) == 3 for b in d.blocks)


@pytest.mark.parametrize("name", ["mono", "emphasis", "comments"])
def test_mono_multi_classification(name):
    assert [type(b) for b in doc(name).blocks] == [Multi, Mono, Mono, Multi]


def test_emphasis_nodes():
    mono = doc("emphasis").blocks[1].paragraph
    assert Strong((Text("bold"),)) in mono
    assert Emph((Text("italic"),)) in mono


def test_unmatched_star_is_literal():
    assert parse_inlines("2 * 3") == (Text("2 * 3"),)


def test_headings():
    blocks = doc("headings").blocks
    assert [b.level for b in blocks] == [1, 2, 3, 4, 5, 6, 1, 2]
    assert blocks[1] == Heading(2, ((Text("二级标题"),), (Text("Heading Level-2"),)))
    assert blocks[6].is_mono and blocks[7].is_mono


def test_coreferences():
    anns = extract_annotations(doc("coref"))
    assert [(a["primary"], a["expression"], a["language"]) for a in anns] == [
        ("神农", "神农", "zh"),
        ("神农", "Shennong", "en"),
        ("神农", "炎帝", "zh"),
        ("神农", "Yan Emperor", "en"),
    ]


def test_plain_listing_has_no_annotations():
    assert extract_annotations(doc("coref_plain")) == []


def test_entity_annotation():
    para = doc("entity").blocks[0].paragraphs[1]
    assert para[0] == Coref("NMM-0001", "Qing-hao")


def test_comments_erased():
    d = doc("comments")
    assert "注释" not in serialize(d) and "comment" not in serialize(d)
    assert len(d.blocks) == 4


def test_citation_block():
    d = doc("citation")
    assert RefMark("ai_masterbrain") in d.blocks[0].paragraphs[0]
    cite = d.blocks[1]
    assert isinstance(cite, RefCitation) and cite.format == "bibtex"
    assert "@article{ai_masterbrain," in cite.payload
    assert "publisher={Cold Spring Harbor Laboratory}" in cite.payload


def test_kb_citation_flag():
    assert parse_inlines("x{{ref|[[sna-ref-1]]}}") == (Text("x"), RefMark("sna-ref-1", kb=True))


def test_json_roundtrip():
    for name in LISTINGS:
        d = doc(name)
        assert document_from_json(document_to_json(d)) == d


@pytest.mark.parametrize(
    "text,line",
    [
        ("你好\nHello", 1),  # no header
        ("{{langs|zh|en}}\n\na\nb\nc", 3),  # three lines, two languages
        ("{{langs|zh|zh}}\n\na", 1),
        ("{{langs|zh|en}}\n\n[[a|[[b]]]]", 3),
        ("{{langs|zh|en}}\n\n[[open", 3),
    ],
)
def test_errors_report_lines(text, line):
    with pytest.raises(MlmdError) as exc:
        parse(text)
    assert exc.value.line == line


# -- rendering ----------------------------------------------------------------

def _paragraph_langs(html):
    return re.findall(r'<p lang="(\w+)">', html)


@pytest.mark.parametrize("name", ["mono", "parallel_zh_en", "emphasis", "coref"])
def test_zh_en_order(name):
    d = doc(name)
    for block, html in zip(d.blocks, render_html(d, "zh-en").split("\n")):
        if isinstance(block, Multi):
            assert _paragraph_langs(html) == ["zh", "en"]


def test_en_zh_order():
    html = render_html(doc("mono"), "en-zh")
    assert _paragraph_langs(html.split("\n")[0]) == ["en", "zh"]


@pytest.mark.parametrize("mode,present,absent", [("en", "This is an English paragraph", "中文段落"), ("zh", "中文段落", "This is an English paragraph")])
def test_single_language_modes(mode, present, absent):
    html = render_html(doc("mono"), mode)
    assert present in html and absent not in html
    # both Mono blocks survive in every mode
    assert "language-invariant paragraph in English" in html
    assert "跨语言不变段落" in html
    assert 'lang="' not in html


def test_render_markup():
    html = render_html(doc("entity"), "en")
    assert html == '<p><a class="mlmd-coref" data-coref-primary="NMM-0001">Qing-hao</a> is a kind of Natural Medicinal Material.</p>'
    cite = render_html(doc("citation"), "en")
    assert '<sup class="mlmd-ref" data-ref-id="ai_masterbrain">[1]</sup>' in cite


def test_render_escapes_html():
    d = parse("{{langs|en}}\n\na <b> & c")
    assert render_html(d, "en") == "<p>a &lt;b&gt; &amp; c</p>"


def test_render_unknown_language():
    with pytest.raises(MlmdError):
        render_html(doc("hello"), "la")


# -- round-trip property ------------------------------------------------------

WORD = st.text(alphabet="abcdefgxyz麻黄青蒿0123", min_size=1, max_size=6)
TEXT = st.lists(WORD, min_size=1, max_size=3).map(" ".join).map(Text)


def _special():
    return st.one_of(
        TEXT.map(lambda t: Strong((t,))),
        TEXT.map(lambda t: Emph((t,))),
        st.tuples(WORD, WORD).map(lambda p: Coref(p[0], p[1])),
        WORD.map(lambda w: Coref(w, w)),
        st.tuples(WORD, st.booleans()).map(lambda p: RefMark(p[0], p[1])),
    )


@st.composite
def paragraphs(draw):
    n = draw(st.integers(0, 3))
    seq = [draw(TEXT)]
    for _ in range(n):
        seq.append(draw(_special()))
        seq.append(draw(TEXT))
    return tuple(seq)


@st.composite
def documents(draw):
    langs = draw(st.sampled_from([("zh",), ("zh", "en"), ("zh", "en", "la")]))
    blocks = []
    for _ in range(draw(st.integers(0, 5))):
        kind = draw(st.sampled_from(["multi", "mono", "heading"]))
        if kind == "multi" and len(langs) > 1:
            blocks.append(Multi(tuple(draw(paragraphs()) for _ in langs)))
        elif kind == "heading":
            segs = draw(st.sampled_from([1, len(langs)]))
            blocks.append(Heading(draw(st.integers(1, 6)), tuple(draw(paragraphs()) for _ in range(segs))))
        else:
            blocks.append(Mono(draw(paragraphs())))
    return MlmdDocument(langs, tuple(blocks))


@settings(max_examples=300, deadline=None)
@given(documents())
def test_roundtrip_property(d):
    assert parse(serialize(d)) == d


@settings(max_examples=100, deadline=None)
@given(documents(), st.sampled_from(["zh", "zh-en", "en-zh", "en"]))
def test_render_one_element_per_block(d, mode):
    if mode != "zh" and "en" not in d.langs:
        return
    html = render_html(d, mode)
    assert len(html.split("\n")) == max(len(d.blocks), 1)
