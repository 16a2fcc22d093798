"""Name-element data: validation, normalization and rendering of each
name component (species origin, medicinal part, special description,
processing method)."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

SPECIES = "species_origins"
PARTS = "medicinal_parts"
SPECIAL = "special_descriptions"
PROCESSING = "processing_methods"
CATEGORIES = (SPECIES, PARTS, SPECIAL, PROCESSING)

# pipe stage reported in status messages, per component
STAGES = {
    SPECIES: "construct_nmmsn_spe_ori",
    PARTS: "construct_nmmsn_med_par",
    SPECIAL: "construct_nmmsn_spe_des",
    PROCESSING: "construct_nmmsn_pro_met",
}

_ALLOWED_CONNECTORS = {
    SPECIES: {"or"},
    PARTS: {"or", "and"},
    SPECIAL: {"or", "and"},
    PROCESSING: {"and"},
}

_CATEGORY_LABELS = {
    SPECIES: ("species origins", "物种基源"),
    PARTS: ("medicinal parts", "药用部位"),
    SPECIAL: ("special descriptions", "特殊描述"),
    PROCESSING: ("processing methods", "炮制方法"),
}

_LEGIT_RE = re.compile(r"^[A-Za-z]+(?:[ -][A-Za-z]+)*$")

# genuine-region descriptions: EN name -> NMMSN-zh word
GENUINE_REGIONS = {"zhejiang": "浙产"}


@dataclass(frozen=True)
class Issue:
    stage: str
    status: str  # "warning" | "error"
    en: str
    zh: str

    @property
    def message(self) -> str:
        return f"Pipe: {self.stage}. Status: {self.status}. Reason: {self.en}"

    @property
    def is_error(self) -> bool:
        return self.status == "error"


def _warn(category: str, en: str, zh: str) -> Issue:
    return Issue(STAGES[category], "warning", en, zh)


def _error(category: str, en: str, zh: str) -> Issue:
    return Issue(STAGES[category], "error", en, zh)


@dataclass(frozen=True)
class NameElementPair:
    value_en: str
    value_zh: str

    def to_json(self) -> list[str]:
        return [self.value_en, self.value_zh]


@dataclass(frozen=True)
class NeData:
    """Homogeneously connected name-element pairs."""

    pairs: tuple[NameElementPair, ...] = ()
    connector: str | None = None

    def __post_init__(self):
        if len(self.pairs) > 1 and self.connector not in ("or", "and"):
            raise ValueError("NeData with several pairs needs an 'or'/'and' connector")

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_json(cls, items) -> "NeData":
        """Build from the JSON list form. Call :func:`validate_ne_data` first."""
        pairs = tuple(_as_pair(x) for x in items[::2])
        connectors = set(items[1::2])
        connector = connectors.pop() if connectors else None
        return cls(pairs, connector)

    def to_json(self) -> list:
        out: list = []
        for i, pair in enumerate(self.pairs):
            if i:
                out.append(self.connector)
            out.append(pair.to_json())
        return out

    def replace_pairs(self, pairs) -> "NeData":
        pairs = tuple(pairs)
        return NeData(pairs, self.connector if len(pairs) > 1 else None)


def _is_pair(x) -> bool:
    if isinstance(x, NameElementPair):
        return True
    return isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(s, str) for s in x)


def _as_pair(x) -> NameElementPair:
    if isinstance(x, NameElementPair):
        return x
    return NameElementPair(x[0], x[1])


def validate_ne_data(category: str, data) -> list[Issue]:
    """Check the alternation and connector rules of one name-element list.

    Returns an empty list for well-formed data. Never raises on bad data.
    """
    if category not in STAGES:
        raise KeyError(f"unknown name-element category: {category!r}")
    label_en, label_zh = _CATEGORY_LABELS[category]
    if isinstance(data, NeData):
        data = data.to_json()
    if not isinstance(data, (list, tuple)):
        return [_error(category, f"Name-element data for {label_en} must be a list.", f"{label_zh}的命名元素数据必须是列表。")]
    if not data:
        return []
    issues: list[Issue] = []
    if isinstance(data[0], str):
        issues.append(_error(category, "Name-element sequence must begin with a pair.", "命名元素序列必须以命名元素对开头。"))
    if isinstance(data[-1], str):
        issues.append(_error(category, "Name-element sequence must end with a pair.", "命名元素序列必须以命名元素对结尾。"))
    if issues:
        return issues
    connectors = []
    for i, item in enumerate(data):
        if i % 2 == 0:
            if not _is_pair(item):
                issues.append(_error(category, "Name-element pairs and connectors must alternate.", "命名元素对与连接词必须交替出现。"))
                return issues
            pair = _as_pair(item)
            if not pair.value_en.strip() or not pair.value_zh.strip():
                issues.append(_error(category, f"Empty name element in {label_en}.", f"{label_zh}中存在空的命名元素。"))
        else:
            if not isinstance(item, str):
                issues.append(_error(category, "Name-element pairs and connectors must alternate.", "命名元素对与连接词必须交替出现。"))
                return issues
            if item not in ("or", "and"):
                issues.append(_error(category, f"Unknown connector {item!r}.", f"未知连接词“{item}”。"))
            connectors.append(item)
    allowed = _ALLOWED_CONNECTORS[category]
    bad = sorted({c for c in connectors if c in ("or", "and") and c not in allowed})
    if bad:
        issues.append(_error(
            category,
            f"Illegal connector for {label_en}: {', '.join(repr(c) for c in bad)}.",
            f"{label_zh}使用了非法连接词：{'、'.join(bad)}。",
        ))
    elif len(set(connectors)) > 1:
        issues.append(_error(category, f"Connectors for {label_en} must be homogeneous.", f"{label_zh}的连接词必须一致。"))
    return issues


def clean_latin(text: str) -> tuple[str, set[str]]:
    """Fold accents to ASCII, drop periods and collapse spaces.

    Returns the cleaned name and the set of characters that remain
    non-legitimate (empty when the name is usable).
    """
    folded = unicodedata.normalize("NFKD", text)
    folded = "".join(ch for ch in folded if not unicodedata.combining(ch))
    folded = " ".join(folded.replace(".", " ").split())
    bad = {ch for ch in folded if not (ch.isascii() and (ch.isalpha() or ch in " -"))}
    if not bad and folded and not _LEGIT_RE.match(folded):
        bad = {"-"}
    return folded, bad


def _clean_group(category: str, data: NeData, fold: bool) -> tuple[list[NameElementPair], list[Issue]]:
    label_en, label_zh = _CATEGORY_LABELS[category]
    pairs, issues = [], []
    for pair in data.pairs:
        if fold:
            en, bad = clean_latin(pair.value_en)
        else:
            en = " ".join(pair.value_en.split())
            bad = {ch for ch in en if not (ch.isascii() and (ch.isalpha() or ch in " -"))}
        if bad:
            chars = "".join(sorted(bad))
            issues.append(_error(
                category,
                f"Non-legitimate characters {chars!r} in {label_en} {pair.value_en!r}.",
                f"{label_zh}“{pair.value_en}”中含有非法字符“{chars}”。",
            ))
        pairs.append(NameElementPair(en, pair.value_zh.strip()))
    return pairs, issues


def _dedup(pairs) -> list[NameElementPair]:
    seen, out = set(), []
    for p in pairs:
        key = p.value_en.casefold()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


@dataclass(frozen=True)
class Normalized:
    data: NeData
    issues: list[Issue]


def normalize_species(data: NeData, non_species: bool = False) -> Normalized:
    """Clean, deduplicate and alphabetically sort species origins.

    Inclusion-rule violations (one origin refines another, e.g. a variety)
    are reported as errors; several origins or an ``unspecified`` origin
    produce warnings.
    """
    pairs, issues = _clean_group(SPECIES, data, fold=True)
    pairs = sorted(_dedup(pairs), key=lambda p: p.value_en.casefold())
    if non_species:
        return Normalized(data.replace_pairs(pairs), issues)
    for a in (p.value_en for p in pairs):
        for b in (p.value_en for p in pairs):
            if b.casefold().startswith(a.casefold() + " "):
                issues.append(_error(
                    SPECIES,
                    f"Species inclusion rule violated: {b!r} is included in {a!r}; "
                    "only the species of the highest hierarchical level may be named.",
                    f"违反物种包含规则：“{b}”包含于“{a}”，仅可使用最高分类等级的物种命名。",
                ))
    if len(pairs) > 1:
        issues.append(_warn(SPECIES, "Multiple species origins detected.", "检测到多个物种基源。"))
    if any(p.value_en.casefold().endswith(" unspecified") for p in pairs):
        issues.append(_warn(SPECIES, "Unspecified species origin detected.", "检测到未定种物种基源。"))
    return Normalized(data.replace_pairs(pairs), issues)


def normalize_group(category: str, data: NeData) -> Normalized:
    """Normalize medicinal parts (sorted), special descriptions or
    processing methods (both kept in input order)."""
    pairs, issues = _clean_group(category, data, fold=False)
    if category == PARTS:
        pairs = sorted(_dedup(pairs), key=lambda p: p.value_en.casefold())
    elif category == SPECIAL:
        pairs = _dedup(pairs)
        for p in pairs:
            if p.value_en.casefold() in GENUINE_REGIONS:
                issues.append(_warn(SPECIAL, "Genuine regional description detected.", "检测到道地产区描述。"))
    elif category == PROCESSING:
        for p in pairs:
            if not p.value_zh.endswith("制"):
                issues.append(_error(
                    PROCESSING,
                    f"The Chinese processing method {p.value_zh!r} must end with '制'.",
                    f"炮制方法“{p.value_zh}”必须以“制”结尾。",
                ))
    return Normalized(data.replace_pairs(pairs), issues)


def render_species(data: NeData, non_species: bool = False) -> tuple[str, str]:
    """Join sorted species with ``vel``/``或``, eliding repeated genus names.

    >>> d = NeData((NameElementPair("Ephedra equisetina", "木贼麻黄"),
    ...             NameElementPair("Ephedra intermedia", "中麻黄")), "or")
    >>> render_species(d)
    ('Ephedra equisetina vel intermedia', '木贼麻黄或中麻黄')
    """
    if non_species:
        # common English names, first letter capitalized ("talc" -> "Talc")
        names = [p.value_en[:1].upper() + p.value_en[1:] for p in data.pairs]
        return " or ".join(names), "或".join(p.value_zh for p in data.pairs)
    seen_genera: set[str] = set()
    parts = []
    for p in data.pairs:
        words = p.value_en.split(" ")
        genus = words[0].casefold()
        if genus in seen_genera and len(words) > 1:
            parts.append(" ".join(words[1:]))
        else:
            parts.append(p.value_en)
        seen_genera.add(genus)
    return " vel ".join(parts), "或".join(p.value_zh for p in data.pairs)


def capitalize_hyphenate(phrase: str) -> str:
    """``stem herbaceous`` -> ``Stem-herbaceous``."""
    token = "-".join(phrase.split())
    return token[:1].upper() + token[1:].lower()


def render_group(category: str, data: NeData) -> tuple[str, str]:
    """EN/ZH text of a medicinal-part, special-description or processing group."""
    if not data:
        return "", ""
    words = [capitalize_hyphenate(p.value_en) for p in data.pairs]
    if category == PROCESSING:
        # later processing steps come first in Chinese, no connectors
        return " and ".join(words), "".join(p.value_zh for p in reversed(data.pairs))
    en_sep, zh_sep = (" and ", "与") if data.connector == "and" else (" or ", "或")
    return en_sep.join(words), zh_sep.join(p.value_zh for p in data.pairs)
