"""Parse a bilingual document and show each display mode.

Run: python demos/markup.py
"""

from nmmkit.mlmd import extract_annotations, parse, render_html, serialize

SOURCE = """{{langs|zh|en}}

# 青蒿 | Qing-hao

[[NMM-0001|青蒿]]是一种**常用**中药材。
[[NMM-0001|Qing-hao]] is a **commonly used** Chinese medicinal material.

Artemisia annua L.

可治疗疟疾。
It treats malaria.
"""


def main():
    doc = parse(SOURCE)
    print("blocks:", [type(b).__name__ for b in doc.blocks])
    for mode in ("zh-en", "en", "zh"):
        print(f"\n--- {mode}")
        print(render_html(doc, mode))
    print("\nannotations:", extract_annotations(doc))
    assert parse(serialize(doc)) == doc


if __name__ == "__main__":
    main()
