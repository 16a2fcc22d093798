"""Assemble the NMM Systematic Name (NMMSN) and its Chinese counterpart.

A request holds four name-element lists. The result carries ``success``,
``error_msg``, ``error_msg_en_zh`` and, on success, the ``nmmsn`` bundle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .elements import (
    CATEGORIES,
    PARTS,
    PROCESSING,
    SPECIAL,
    SPECIES,
    Issue,
    NeData,
    normalize_group,
    normalize_species,
    render_group,
    render_species,
    validate_ne_data,
)
from .pinyin import PinyinError, PinyinTable, pinyinize_toned

NMM_TYPES = ("raw", "agricultural", "processed")
STAGE = "construct_nmmsn"


@dataclass
class NmmsnRequest:
    nmm_type: str
    species_origins: list = field(default_factory=list)
    medicinal_parts: list = field(default_factory=list)
    special_descriptions: list = field(default_factory=list)
    processing_methods: list = field(default_factory=list)
    non_species: bool = False

    @classmethod
    def from_json(cls, obj: dict) -> "NmmsnRequest":
        if not isinstance(obj, dict):
            raise TypeError("request must be a JSON object")
        return cls(
            nmm_type=obj.get("nmm_type", ""),
            species_origins=obj.get(SPECIES, []),
            medicinal_parts=obj.get(PARTS, []),
            special_descriptions=obj.get(SPECIAL, []),
            processing_methods=obj.get(PROCESSING, []),
            non_species=bool(obj.get("non_species", False)),
        )

    def to_json(self) -> dict:
        out = {
            "nmm_type": self.nmm_type,
            SPECIES: self.species_origins,
            PARTS: self.medicinal_parts,
            SPECIAL: self.special_descriptions,
            PROCESSING: self.processing_methods,
        }
        if self.non_species:
            out["non_species"] = True
        return out


@dataclass
class StatusReport:
    success: bool
    issues: list[Issue] = field(default_factory=list)

    @property
    def error_msg(self) -> str:
        return "; ".join(i.message for i in self.issues)

    @property
    def error_msg_en_zh(self) -> dict[str, str]:
        return {
            "en": "; ".join(i.en for i in self.issues),
            "zh": "; ".join(i.zh for i in self.issues),
        }


@dataclass
class Nmmsn:
    nmmsn: str
    zh: str
    pinyin: str
    name_element: dict
    seq: list[tuple[str, str]]

    def to_json(self) -> dict:
        return {
            "nmmsn": self.nmmsn,
            "nmmsn_zh": {"zh": self.zh, "pinyin": self.pinyin},
            "nmmsn_name_element": self.name_element,
            "nmmsn_seq": [list(p) for p in self.seq],
        }


@dataclass
class ConstructResult:
    status: StatusReport
    nmmsn: Nmmsn | None = None

    @property
    def success(self) -> bool:
        return self.status.success

    def to_json(self) -> dict:
        out = {
            "success": self.status.success,
            "error_msg": self.status.error_msg,
            "error_msg_en_zh": self.status.error_msg_en_zh,
        }
        if self.nmmsn is not None:
            out["nmmsn"] = self.nmmsn.to_json()
        return out

    def dumps(self, indent: int | None = 4) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=indent)


def _composition_error(en: str, zh: str) -> Issue:
    return Issue(STAGE, "error", en, zh)


def _check_composition(req: NmmsnRequest, groups: dict[str, NeData]) -> list[Issue]:
    if req.nmm_type not in NMM_TYPES:
        return [_composition_error(
            f"Unknown NMM type {req.nmm_type!r}; expected one of raw, agricultural, processed.",
            f"未知的天然药材类型“{req.nmm_type}”，应为 raw、agricultural 或 processed。",
        )]
    issues = []
    if req.non_species:
        if not groups[SPECIES] and not groups[PARTS]:
            issues.append(_composition_error(
                "A non-species NMM needs a common name in the species-origin component.",
                "非物种基源天然药材需在物种基源组件中提供通用名称。",
            ))
    else:
        if not groups[SPECIES]:
            issues.append(_composition_error(
                "Minimal NMMSN composition violated: species origin (I) is required.",
                "违反NMMSN最小构成规则：必须包含物种基源（I）。",
            ))
        if not groups[PARTS]:
            issues.append(_composition_error(
                "Minimal NMMSN composition violated: medicinal part (II) is required.",
                "违反NMMSN最小构成规则：必须包含药用部位（II）。",
            ))
    if req.nmm_type == "processed" and not groups[PROCESSING]:
        issues.append(_composition_error(
            "Minimal NMMSN composition violated: a processed NMM requires a processing method (IV).",
            "违反NMMSN最小构成规则：炮制天然药材必须包含炮制方法（IV）。",
        ))
    if req.nmm_type != "processed" and groups[PROCESSING]:
        issues.append(_composition_error(
            f"A {req.nmm_type} NMM must not carry a processing method (IV).",
            "非炮制天然药材不得包含炮制方法（IV）。",
        ))
    return issues


def construct_nmmsn(request: NmmsnRequest | dict, pinyin_table: PinyinTable | None = None) -> ConstructResult:
    """Validate a request and build the systematic names.

    Never raises on bad input: failures come back as ``success=False``
    with the reasons in the status report.
    """
    req = request if isinstance(request, NmmsnRequest) else NmmsnRequest.from_json(request)
    issues: list[Issue] = []
    raw = {c: getattr(req, c) for c in CATEGORIES}
    for c in CATEGORIES:
        issues.extend(validate_ne_data(c, raw[c]))
    if any(i.is_error for i in issues):
        return ConstructResult(StatusReport(False, issues))

    groups = {c: NeData.from_json(raw[c]) for c in CATEGORIES}
    issues.extend(_check_composition(req, groups))

    species = normalize_species(groups[SPECIES], non_species=req.non_species)
    issues.extend(species.issues)
    groups[SPECIES] = species.data
    for c in (PARTS, SPECIAL, PROCESSING):
        norm = normalize_group(c, groups[c])
        issues.extend(norm.issues)
        groups[c] = norm.data
    if any(i.is_error for i in issues):
        return ConstructResult(StatusReport(False, issues))

    seq = [
        render_species(groups[SPECIES], non_species=req.non_species),
        render_group(PARTS, groups[PARTS]),
        render_group(SPECIAL, groups[SPECIAL]),
        render_group(PROCESSING, groups[PROCESSING]),
    ]
    en = " ".join(e for e, _ in seq if e)
    zh = "".join(seq[i][1] for i in (3, 2, 0, 1))
    try:
        pinyin = pinyinize_toned(zh, pinyin_table)
    except PinyinError as exc:
        pinyin = ""
        issues.append(Issue(
            "construct_nmmsn_zh_pinyin",
            "warning",
            f"No pinyin available for character {exc.char!r}.",
            f"字符“{exc.char}”缺少拼音。",
        ))

    echo = NmmsnRequest(req.nmm_type, *(groups[c].to_json() for c in CATEGORIES), non_species=req.non_species)
    return ConstructResult(StatusReport(True, issues), Nmmsn(en, zh, pinyin, echo.to_json(), seq))


def format_reference(nmmsn: str, nmm_id: str, nmmgn: str) -> str:
    """First-appearance reference form: ``NMMSN (NMM-ID, NMMGN)``."""
    return f"{nmmsn} ({nmm_id}, {nmmgn})"


def format_reference_zh(nmmsn_zh: str, nmm_id: str, nmmgn_zh: str) -> str:
    return f"{nmmsn_zh}（{nmm_id}，{nmmgn_zh}）"


def find_generic_name_conflicts(registry) -> list[tuple[str, list[str]]]:
    """Return generic names claimed by more than one NMM ID.

    ``registry`` is an iterable of ``(nmm_id, nmmgn)``; names compare
    case-insensitively. Resolving a conflict is left to the curator.
    """
    claims: dict[str, list[str]] = {}
    for nmm_id, name in registry:
        claims.setdefault(name.casefold(), []).append(nmm_id)
    return [(name, ids) for name, ids in claims.items() if len(ids) > 1]
