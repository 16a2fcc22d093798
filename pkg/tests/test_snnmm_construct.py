import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_json
from nmmkit.snnmm import NmmsnRequest, capitalize_hyphenate, construct_nmmsn, format_reference, format_reference_zh

GOLDEN_IN = load_json("snnmm/golden_request.json")
GOLDEN_OUT = load_json("snnmm/golden_response.json")
RULEBOOK = load_json("snnmm/rulebook.json")


def _key_order(obj):
    if isinstance(obj, dict):
        return [(k, _key_order(v)) for k, v in obj.items()]
    if isinstance(obj, list):
        return [_key_order(v) for v in obj]
    return None


def test_golden_request_field_for_field():
    out = construct_nmmsn(GOLDEN_IN).to_json()
    assert out == GOLDEN_OUT
    assert _key_order(out) == _key_order(GOLDEN_OUT)


def test_golden_seq_keeps_empty_special_description():
    seq = construct_nmmsn(GOLDEN_IN).nmmsn.seq
    assert seq[2] == ("", "")
    assert seq[3] == ("Segmented and Aquafried-honey", "蜜炙制段制")


def test_dumps_is_valid_json():
    text = construct_nmmsn(GOLDEN_IN).dumps()
    assert json.loads(text) == GOLDEN_OUT
    assert "检测到多个物种基源。" in text  # not ascii-escaped


@pytest.mark.parametrize("case", RULEBOOK, ids=[f"{c['rule']}:{c.get('nmmsn') or 'error'}" for c in RULEBOOK])
def test_rulebook(case):
    result = construct_nmmsn(case["request"])
    if "error" in case:
        assert not result.success
        assert result.nmmsn is None
        assert case["error"] in result.status.error_msg
    else:
        assert result.success, result.status.error_msg
        assert result.nmmsn.nmmsn == case["nmmsn"]
        assert result.nmmsn.zh == case["nmmsn_zh"]


def test_failed_shape_has_no_payload():
    out = construct_nmmsn({"nmm_type": "agricultural", "species_origins": [["Ephedra sinica", "草麻黄"]]}).to_json()
    assert out["success"] is False
    assert "nmmsn" not in out
    assert "medicinal part (II) is required" in out["error_msg"]
    assert out["error_msg"].startswith("Pipe: construct_nmmsn. Status: error. Reason: ")


@pytest.mark.parametrize(
    "request_json,fragment",
    [
        ({"nmm_type": "processed", "species_origins": [["Ephedra sinica", "草麻黄"]], "medicinal_parts": [["root", "根"]]}, "processing method (IV)"),
        ({"nmm_type": "agricultural", "medicinal_parts": [["root", "根"]]}, "species origin (I) is required"),
        ({"nmm_type": "agricultural", "species_origins": [["Ephedra sinica", "草麻黄"]], "medicinal_parts": [["root", "根"]],
          "processing_methods": [["cleaned", "净制"]]}, "must not carry a processing method"),
        ({"nmm_type": "dried", "species_origins": [["Ephedra sinica", "草麻黄"]], "medicinal_parts": [["root", "根"]]}, "Unknown NMM type"),
        ({"nmm_type": "agricultural", "species_origins": [["Ephedra sinica", "草麻黄"], "and", ["Ephedra intermedia", "中麻黄"]],
          "medicinal_parts": [["root", "根"]]}, "Illegal connector"),
        ({"nmm_type": "agricultural", "species_origins": ["or", ["Ephedra sinica", "草麻黄"]], "medicinal_parts": [["root", "根"]]}, "must begin with a pair"),
        ({"nmm_type": "processed", "species_origins": [["Ephedra sinica", "草麻黄"]], "medicinal_parts": [["root", "根"]],
          "processing_methods": [["cleaned", "净"]]}, "must end with '制'"),
        ({"nmm_type": "agricultural", "species_origins": [["", "草麻黄"]], "medicinal_parts": [["root", "根"]]}, "Empty name element"),
    ],
)
def test_errors(request_json, fragment):
    result = construct_nmmsn(request_json)
    assert not result.success
    assert fragment in result.status.error_msg


def test_unspecified_species_warns():
    r = construct_nmmsn({"nmm_type": "agricultural", "species_origins": [["Taraxacum unspecified", "蒲公英属未定种"]], "medicinal_parts": [["herb", "全草"]]})
    assert r.success
    assert "Unspecified species origin detected." in r.status.error_msg


def test_accents_folded_in_latin():
    r = construct_nmmsn({"nmm_type": "agricultural", "species_origins": [["Ephedra sínica", "草麻黄"]], "medicinal_parts": [["root", "根"]]})
    assert r.nmmsn.nmmsn == "Ephedra sinica Root"


def test_missing_pinyin_is_a_warning(tmp_path):
    from nmmkit.snnmm import PinyinTable

    table = PinyinTable.from_lines(["草\tcǎo\tcao"])
    r = construct_nmmsn(GOLDEN_IN, table)
    assert r.success
    assert r.nmmsn.pinyin == ""
    assert "No pinyin available" in r.status.error_msg


def test_request_roundtrip():
    req = NmmsnRequest.from_json(GOLDEN_IN)
    assert req.to_json() == GOLDEN_IN


def test_reference_formats():
    assert format_reference("Artemisia annua Part-aerial", "NMM-0001", "Qing-hao") == "Artemisia annua Part-aerial (NMM-0001, Qing-hao)"
    assert format_reference_zh("黄花蒿地上部", "NMM-0001", "青蒿") == "黄花蒿地上部（NMM-0001，青蒿）"


@pytest.mark.parametrize("raw,out", [("stem herbaceous", "Stem-herbaceous"), ("aquafried honey", "Aquafried-honey"), ("root", "Root"), ("freshly sliced", "Freshly-sliced")])
def test_capitalize_hyphenate(raw, out):
    assert capitalize_hyphenate(raw) == out


# -- properties ---------------------------------------------------------------

GENERA = ["Ephedra", "Pleione", "Cremastra", "Curcuma"]
EPITHETS = ["sinica", "intermedia", "equisetina", "yunnanensis", "appendiculata", "wenyujin", "longa"]
species_st = st.lists(
    st.tuples(st.sampled_from(GENERA), st.sampled_from(EPITHETS)), min_size=1, max_size=5, unique=True
)


def _request(species, parts=(("root", "根"),)):
    items = []
    for g, e in species:
        if items:
            items.append("or")
        items.append([f"{g} {e}", f"{g}{e}中"])
    part_items = []
    for p in parts:
        if part_items:
            part_items.append("and")
        part_items.append(list(p))
    return {"nmm_type": "agricultural", "species_origins": items, "medicinal_parts": part_items}


def _oracle_species(species):
    """Reference rendering written independently: sort, then drop repeated genera."""
    names = sorted({f"{g} {e}" for g, e in species}, key=str.casefold)
    out, seen = [], set()
    for n in names:
        g, e = n.split(" ", 1)
        out.append(e if g in seen else n)
        seen.add(g)
    return " vel ".join(out)


@settings(max_examples=200, deadline=None)
@given(species_st, st.randoms())
def test_species_order_invariant(species, rnd):
    shuffled = list(species)
    rnd.shuffle(shuffled)
    a = construct_nmmsn(_request(species))
    b = construct_nmmsn(_request(shuffled))
    assert a.nmmsn.nmmsn == b.nmmsn.nmmsn and a.nmmsn.zh == b.nmmsn.zh


@settings(max_examples=200, deadline=None)
@given(species_st)
def test_species_matches_oracle(species):
    r = construct_nmmsn(_request(species))
    assert r.success
    assert r.nmmsn.nmmsn == _oracle_species(species) + " Root"
    assert ("Multiple species origins detected." in r.status.error_msg) == (len(species) > 1)


@settings(max_examples=100, deadline=None)
@given(st.permutations([("cleaned", "净制"), ("segmented", "段制"), ("aquafried honey", "蜜炙制")]))
def test_processing_order_is_kept(methods):
    items = []
    for m in methods:
        if items:
            items.append("and")
        items.append(list(m))
    r = construct_nmmsn({**_request([("Ephedra", "sinica")]), "nmm_type": "processed", "processing_methods": items})
    assert r.nmmsn.seq[3][0] == " and ".join(capitalize_hyphenate(m[0]) for m in methods)
    assert r.nmmsn.seq[3][1] == "".join(m[1] for m in reversed(methods))


@settings(max_examples=100, deadline=None)
@given(species_st)
def test_component_order(species):
    r = construct_nmmsn({**_request(species), "nmm_type": "processed", "special_descriptions": [["fresh", "鲜"]],
                         "processing_methods": [["cleaned", "净制"]]})
    (i_en, i_zh), (ii_en, ii_zh), (iii_en, iii_zh), (iv_en, iv_zh) = r.nmmsn.seq
    assert r.nmmsn.nmmsn == f"{i_en} {ii_en} {iii_en} {iv_en}"
    assert r.nmmsn.zh == iv_zh + iii_zh + i_zh + ii_zh


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.sampled_from(["nmm_type", "species_origins", "medicinal_parts", "processing_methods"]),
                       st.one_of(st.none(), st.integers(), st.text(max_size=5), st.lists(st.one_of(st.text(max_size=3), st.lists(st.text(max_size=3), max_size=3)), max_size=4))))
def test_never_raises_on_junk(obj):
    construct_nmmsn(obj)
