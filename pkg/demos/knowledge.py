"""Search the bundled knowledge base, translate a sentence and ask a question.

Run: python demos/knowledge.py
"""

from nmmkit.kb import load_fixture_kb
from nmmkit.nmtcpt import TranslationRequest, translate
from nmmkit.rag import ChatSession


def main():
    kb = load_fixture_kb()

    print("full-text '草麻黄':")
    for hit in kb.fulltext_search("草麻黄", k=3):
        print(f"  {hit.score:5.1f}  {hit.record.key}")
    print("vector 'Ephedra sinica stem':")
    for hit in kb.vector_search("Ephedra sinica stem", k=3):
        print(f"  {hit.score:.3f}  {hit.record.key}")

    for term in ("Ma Huang", "草麻黄", "黄花蒿"):
        std = kb.standardize(term)
        print(f"{term} -> {std.primary}: {std.rendering('en')}")

    request = TranslationRequest("麻黄是一种天然药材。", "zh", "en", (("天然药材", "Natural Medicinal Material"),))
    result = translate(request, kb)
    print("\ntranslation:", result.mlmd_text)
    for span in result.spans:
        print("  ", span)

    chat = ChatSession(kb)
    for q in ("What is the species origin of Ma Huang?", "What is the species origin of Ma Huang?", "麻黄的基源是什么？"):
        turn = chat.ask(q)
        print(f"\nQ: {q}\nA: {turn.text}")
        for a in turn.attached_search_results:
            print(f"   [{a.record.key}] {a.excerpt}")


if __name__ == "__main__":
    main()
