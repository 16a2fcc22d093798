import pytest

from nmmkit.snnmm import PinyinError, PinyinTable, make_generic_name, pinyinize_toned


def test_toned_golden_name():
    zh = "蜜炙制段制木贼麻黄或中麻黄或草麻黄草质茎"
    assert pinyinize_toned(zh) == (
        "mì zhì zhì duàn zhì mù zéi má huáng huò zhōng má huáng huò cǎo má huáng cǎo zhì jīng"
    )


@pytest.mark.parametrize(
    "zh,gn",
    [
        ("青蒿", "Qing-hao"),
        ("草麻黄", "Cao-ma-huang"),
        ("草麻黄根", "Cao-ma-huang-gen"),
        ("女贞子", "Nv-zhen-zi"),
        ("单丁公藤", "Dan-ding-gong-teng"),
        ("丁公藤", "Ding-gong-teng"),
        ("净片姜黄", "Jing-pian-jiang-huang"),
    ],
)
def test_generic_names(zh, gn):
    assert make_generic_name(zh) == gn


def test_generic_name_minimum_length():
    with pytest.raises(ValueError):
        make_generic_name("梅")


def test_phrase_entry_beats_single_characters():
    table = PinyinTable.from_lines(["人\trén\tren", "参\tcān\tcan", "人参\trén shēn\tren shen"])
    assert pinyinize_toned("人参", table) == "rén shēn"
    assert pinyinize_toned("参", table) == "cān"


def test_unknown_character():
    table = PinyinTable.from_lines(["青\tqīng\tqing"])
    with pytest.raises(PinyinError):
        make_generic_name("青蒿", table)
