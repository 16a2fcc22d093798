from hypothesis import given, settings
from hypothesis import strategies as st

from nmmkit.rag import (
    NOT_FOUND,
    ChatSession,
    ChatTurn,
    DeterministicJudge,
    answer,
    detect_intent,
    join_alternatives,
)

Q = "What is the species origin of Ma Huang?"
A = "The species origin of Ma Huang is Ephedra equisetina, Ephedra intermedia, or Ephedra sinica."


def test_species_origin_answer(kb):
    turn = answer(Q, [], kb)
    assert turn.role == "assistant"
    assert turn.text == A
    [att] = turn.attached_search_results
    assert (att.record.id, att.field) == ("nmm-0006", "species_origins")
    assert att.excerpt == "species_origins: Ephedra equisetina, or, Ephedra intermedia, or, Ephedra sinica"


def test_repeat_question_skips_retrieval(kb):
    s = ChatSession(kb)
    first = s.ask(Q)
    second = s.ask(Q)
    assert first.attached_search_results and not second.attached_search_results
    assert second.text == first.text
    assert [t.role for t in s.history] == ["user", "assistant", "user", "assistant"]


def test_precise_mode_always_retrieves(kb):
    s = ChatSession(kb, judge=DeterministicJudge(precise=True))
    s.ask(Q)
    assert s.ask(Q).attached_search_results


def test_not_found(kb):
    turn = answer("How is the weather today?", [], kb)
    assert turn.text == NOT_FOUND["en"]
    assert turn.attached_search_results == ()


def test_chinese_question(kb):
    turn = answer("麻黄的基源是什么？", [], kb)
    assert turn.text == "麻黄的基源是木贼麻黄、中麻黄或草麻黄。"


def test_new_field_triggers_retrieval(kb):
    s = ChatSession(kb)
    s.ask(Q)
    turn = s.ask("What is the medicinal part of Ma Huang?")
    assert turn.text == "The medicinal part of Ma Huang is stem herbaceous."
    assert turn.attached_search_results[0].field == "medicinal_parts"


def test_summary_intent(kb):
    turn = answer("Tell me about Qing-hao", [], kb)
    assert turn.text == "Qing-hao is Artemisia annua Part-aerial (NMM-0001, Qing-hao)."


def test_intents_and_joins():
    assert detect_intent(Q).field == "species_origins"
    assert detect_intent("炮制方法").field == "processing_methods"
    assert join_alternatives(["A"], "en") == "A"
    assert join_alternatives(["A", "B"], "en") == "A or B"
    assert join_alternatives(["A", "B", "C"], "zh") == "A、B或C"


def test_turn_json(kb):
    data = answer(Q, [], kb).to_json()
    assert data["attached_search_results"][0]["record"]["nmm_id"] == "NMM-0006"


QUESTIONS = [Q, "What is the medicinal part of Ma Huang?", "麻黄的基源是什么？", "What is the species origin of Qing-hao?",
             "What is the species origin of 草麻黄?", "Hello there", "What is the processing method of 蜜草麻黄?"]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(QUESTIONS), max_size=4), st.sampled_from(QUESTIONS))
def test_grounded_and_monotone(kb, earlier, question):
    s = ChatSession(kb)
    for q in earlier:
        s.ask(q)
    with_history = answer(question, s.history, kb)
    fresh = answer(question, [], kb)
    # clearing history never removes attachments
    assert len(fresh.attached_search_results) >= len(with_history.attached_search_results)
    assert fresh.text == with_history.text
    # every Latin binomial in the reply appears verbatim in an attachment
    pool = " ".join(a.excerpt for a in fresh.attached_search_results)
    for genus in ("Ephedra", "Artemisia", "Curcuma"):
        words = fresh.text.replace(",", "").replace(".", "").split()
        for i, w in enumerate(words[:-1]):
            if w == genus:
                assert f"{w} {words[i + 1]}" in pool
