"""Systematic nomenclature for natural medicinal materials."""

from .construct import (
    ConstructResult,
    Nmmsn,
    NmmsnRequest,
    StatusReport,
    construct_nmmsn,
    find_generic_name_conflicts,
    format_reference,
    format_reference_zh,
)
from .elements import (
    Issue,
    NameElementPair,
    NeData,
    capitalize_hyphenate,
    normalize_group,
    normalize_species,
    render_group,
    render_species,
    validate_ne_data,
)
from .ids import MAX_ID, canonical_nmm_id, is_nmm_id, nmm_id_decode, nmm_id_encode
from .pinyin import PinyinError, PinyinTable, default_pinyin_table, make_generic_name, pinyinize_toned

__all__ = [
    "ConstructResult",
    "Issue",
    "MAX_ID",
    "NameElementPair",
    "NeData",
    "Nmmsn",
    "NmmsnRequest",
    "PinyinError",
    "PinyinTable",
    "StatusReport",
    "canonical_nmm_id",
    "capitalize_hyphenate",
    "construct_nmmsn",
    "default_pinyin_table",
    "find_generic_name_conflicts",
    "format_reference",
    "format_reference_zh",
    "is_nmm_id",
    "make_generic_name",
    "nmm_id_decode",
    "nmm_id_encode",
    "normalize_group",
    "normalize_species",
    "pinyinize_toned",
    "render_group",
    "render_species",
    "validate_ne_data",
]
