"""Knowledge base collections, import, indexes and standardization."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .. import cgs
from ..mlmd import MlmdError, document_text, parse
from ..snnmm import canonical_nmm_id, is_nmm_id
from .index import Embedder, HashingEmbedder, InvertedIndex, VectorIndex
from .tokenizer import Tokenizer, default_lexicon

COLLECTIONS = ("snnmm", "text", "knowledge", "glossary", "relation")

# English glossary rendering for an NMM: "NMMSN (NMM-XXXX, NMMGN)"
REFERENCE_RE = re.compile(r"^(?P<nmmsn>\S.*) \((?P<id>NMM-[0-9A-Z]{4}), (?P<gn>[^(),]+)\)$")

_SNNMM_REQUIRED = ("nmm_id", "nmm_type", "nmmsn", "nmmsn_zh", "nmmgn", "nmmgn_zh", "species_origins", "medicinal_parts")
_NE_FIELDS = ("species_origins", "medicinal_parts", "special_descriptions", "processing_methods")


class KbError(Exception):
    pass


class SchemaError(KbError):
    pass


@dataclass(frozen=True)
class KbRecord:
    id: str
    collection: str
    fields: dict = field(default_factory=dict, compare=True, hash=False)
    body: str | None = None

    @property
    def key(self) -> str:
        return f"{self.collection}/{self.id}"

    def to_json(self) -> dict:
        out = {"id": self.id, **self.fields}
        if self.body is not None:
            out["body"] = self.body
        return out

    @property
    def text(self) -> str:
        """Searchable text: field values in order, then the body's visible text."""
        parts = []
        for name, value in self.fields.items():
            if name in _NE_FIELDS:
                parts.extend(ne_values(value))
            elif name != "weight" and isinstance(value, str):
                parts.append(value)
        if self.body:
            parts.append(document_text(parse(self.body)))
        return "\n".join(p for p in parts if p)


def ne_values(items, lang: int = 0) -> list[str]:
    """Name-element values of one language (0 = Latin/English, 1 = Chinese)."""
    return [it[lang] for it in items or () if isinstance(it, (list, tuple)) and len(it) == 2]


def _require_str(obj, name):
    value = obj.get(name)
    if not isinstance(value, str) or not value.strip():
        raise SchemaError(f"missing or empty field {name!r}")
    return value


def _check_body(body):
    if not isinstance(body, str) or not body.strip():
        raise SchemaError("missing or empty field 'body'")
    try:
        parse(body)
    except MlmdError as exc:
        raise SchemaError(f"body is not valid MLMD: {exc}") from exc


def make_record(collection: str, obj: dict) -> KbRecord:
    """Validate a raw JSON object against the collection schema."""
    if collection not in COLLECTIONS:
        raise KbError(f"unknown collection: {collection!r}")
    if not isinstance(obj, dict):
        raise SchemaError("record must be a JSON object")
    obj = dict(obj)
    body = obj.pop("body", None)
    given_id = obj.pop("id", None)

    if collection == "snnmm":
        for name in _SNNMM_REQUIRED[:6]:
            _require_str(obj, name)
        if not is_nmm_id(obj["nmm_id"]):
            raise SchemaError(f"invalid nmm_id {obj['nmm_id']!r}")
        obj["nmm_id"] = canonical_nmm_id(obj["nmm_id"])
        for name in _NE_FIELDS:
            if name in _SNNMM_REQUIRED and name not in obj:
                raise SchemaError(f"missing field {name!r}")
            obj.setdefault(name, [])
            if not isinstance(obj[name], list):
                raise SchemaError(f"field {name!r} must be a list")
        rid = obj["nmm_id"].lower()
    elif collection in ("text", "knowledge"):
        rid = given_id
        _check_body(body)
        if collection == "text":
            _require_str(obj, "source")
        else:
            _require_str(obj, "nmm_id")
        if "nmm_id" in obj:
            if not is_nmm_id(obj["nmm_id"]):
                raise SchemaError(f"invalid nmm_id {obj['nmm_id']!r}")
            obj["nmm_id"] = canonical_nmm_id(obj["nmm_id"])
        if rid is None and collection == "knowledge":
            rid = obj["nmm_id"].lower()
    elif collection == "glossary":
        rid = given_id
        if not isinstance(rid, str) or not rid.strip():
            raise SchemaError("missing or empty field 'id'")
        en = _require_str(obj, "en")
        if is_nmm_id(rid):
            rid = rid.lower()
            m = REFERENCE_RE.match(en)
            if not m:
                raise SchemaError(f"EN rendering {en!r} is not in 'NMMSN (NMM-ID, NMMGN)' format")
            if m["id"] != canonical_nmm_id(rid):
                raise SchemaError(f"EN rendering names {m['id']} but the entry is {rid}")
    else:  # relation
        src = _require_str(obj, "from_term").strip()
        dst = _require_str(obj, "to_term").strip()
        obj["from_term"] = canonical_nmm_id(src).lower() if is_nmm_id(src) else src
        obj["to_term"] = canonical_nmm_id(dst).lower() if is_nmm_id(dst) else dst
        weight = obj.get("weight", 1)
        if isinstance(weight, bool) or not isinstance(weight, (int, float)) or not weight > 0:
            raise SchemaError(f"weight must be a positive number, got {weight!r}")
        obj["weight"] = weight
        rid = given_id or f"{obj['from_term']}->{obj['to_term']}"

    if not isinstance(rid, str) or not rid.strip():
        raise SchemaError("missing or empty field 'id'")
    return KbRecord(rid, collection, obj, body)


@dataclass(frozen=True)
class ImportIssue:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class ImportReport:
    collection: str
    count: int = 0
    issues: list[ImportIssue] = field(default_factory=list)
    records: list[KbRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "collection": self.collection,
            "count": self.count,
            "issues": [{"line": i.line, "message": i.message} for i in self.issues],
        }


@dataclass(frozen=True)
class Hit:
    record: KbRecord
    score: float

    def to_json(self) -> dict:
        return {"collection": self.record.collection, "id": self.record.id, "score": self.score}


@dataclass(frozen=True)
class Standardized:
    term: str
    primary: str
    snnmm: KbRecord | None
    glossary: KbRecord | None

    def rendering(self, lang: str) -> str | None:
        return self.glossary.fields.get(lang) if self.glossary else None

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "primary": self.primary,
            "snnmm": self.snnmm.to_json() if self.snnmm else None,
            "glossary": self.glossary.to_json() if self.glossary else None,
        }


@dataclass(frozen=True)
class _Built:
    tokenizer: Tokenizer
    fulltext: InvertedIndex
    vectors: VectorIndex
    embedder: Embedder
    graph: cgs.Cptg
    folded: dict[str, str]


STATS_ROWS = (
    ("NMM", "Named NMMs, each with an ID, a systematic name and a generic name"),
    ("NMM knowledge", "Structured MLMD knowledge documents"),
    ("NMM standardized translation", "Glossary entries with bilingual standardized renderings"),
    ("NMM text in ChP-2020", "Monograph texts from the 2020 pharmacopoeia edition"),
    ("NMM text in ChP-2015", "Monograph texts from the 2015 pharmacopoeia edition"),
    ("NMM synonym", "Terms that resolve to an NMM through the relation graph"),
    ("Species origin", "Distinct species origins across named NMMs"),
    ("Medicinal part", "Distinct medicinal parts across named NMMs"),
    ("Processing method", "Distinct processing methods across named NMMs"),
)


class KnowledgeBase:
    """Five collections held in memory, upserted by id.

    Indexes and the coreference graph are built by :meth:`build` and
    dropped on any change, so a stale index is never searched.
    """

    def __init__(self, lexicon: Iterable[str] | None = None, embedder_factory=None):
        self.lexicon = frozenset(default_lexicon() if lexicon is None else lexicon)
        self.embedder_factory = embedder_factory or (lambda tok: HashingEmbedder(tok))
        self.collections: dict[str, dict[str, KbRecord]] = {c: {} for c in COLLECTIONS}
        self._built: _Built | None = None

    # -- records -------------------------------------------------------------

    def upsert(self, record: KbRecord) -> None:
        self.collections[record.collection][record.id] = record
        self._built = None

    def get(self, collection: str, rid: str) -> KbRecord | None:
        return self.collections.get(collection, {}).get(rid)

    def records(self, collection: str | None = None) -> list[KbRecord]:
        names = COLLECTIONS if collection is None else (collection,)
        return [r for c in names for _, r in sorted(self.collections[c].items())]

    def __len__(self) -> int:
        return sum(len(c) for c in self.collections.values())

    def import_lines(self, lines: Iterable[str], collection: str) -> ImportReport:
        if collection not in COLLECTIONS:
            raise KbError(f"unknown collection: {collection!r}")
        report = ImportReport(collection)
        for lineno, line in enumerate(lines, 1):
            if not line.strip():
                continue
            try:
                record = make_record(collection, json.loads(line))
            except json.JSONDecodeError as exc:
                report.issues.append(ImportIssue(lineno, f"malformed JSON: {exc.msg}"))
                continue
            except SchemaError as exc:
                report.issues.append(ImportIssue(lineno, str(exc)))
                continue
            self.upsert(record)
            report.records.append(record)
            report.count += 1
        return report

    def import_jsonl(self, path: str | Path, collection: str) -> ImportReport:
        if collection not in COLLECTIONS:
            raise KbError(f"unknown collection: {collection!r}")
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise KbError(f"cannot read {path}: {exc.strerror or exc}") from exc
        return self.import_lines(lines, collection)

    @classmethod
    def load(cls, kb_dir: str | Path, lexicon: Iterable[str] | None = None, build: bool = True) -> "KnowledgeBase":
        """Read ``<collection>.jsonl`` files present in ``kb_dir``.

        Later lines win, which is what makes append-only files work.
        """
        kb = cls(lexicon)
        kb_dir = Path(kb_dir)
        if not kb_dir.is_dir():
            raise KbError(f"knowledge base directory not found: {kb_dir}")
        for name in COLLECTIONS:
            path = kb_dir / f"{name}.jsonl"
            if path.exists():
                report = kb.import_jsonl(path, name)
                if report.issues:
                    raise KbError(f"{path}: " + "; ".join(map(str, report.issues)))
        if build:
            kb.build()
        return kb

    def save(self, kb_dir: str | Path) -> None:
        kb_dir = Path(kb_dir)
        kb_dir.mkdir(parents=True, exist_ok=True)
        for name in COLLECTIONS:
            rows = self.records(name)
            if rows:
                with open(kb_dir / f"{name}.jsonl", "w", encoding="utf-8") as fh:
                    for r in rows:
                        fh.write(json.dumps(r.to_json(), ensure_ascii=False) + "\n")

    # -- indexes -------------------------------------------------------------

    def build(self) -> None:
        relations = self.records("relation")
        primaries = {r.id for r in self.records("snnmm")} | {r.id for r in self.records("glossary")}
        graph = cgs.build_graph(
            [(r.fields["from_term"], r.fields["to_term"], r.fields["weight"]) for r in relations],
            primaries,
            cgs.WEIGHTED,
        )
        words = set(graph.nodes)
        for r in self.records("snnmm"):
            words.update((r.fields["nmmsn_zh"], r.fields["nmmgn_zh"]))
        tokenizer = Tokenizer(self.lexicon).with_words(words)
        embedder = self.embedder_factory(tokenizer)
        fulltext = InvertedIndex(tokenizer)
        vectors = VectorIndex(embedder.dim)
        for r in self.records():
            text = r.text
            fulltext.add(r.key, text)
            vectors.add(r.key, embedder.embed(text))
        folded: dict[str, str] = {}
        for node in sorted(graph.resolution):
            folded.setdefault(node.casefold(), node)
        # swap in one assignment so readers see the old or the new state
        self._built = _Built(tokenizer, fulltext, vectors, embedder, graph, folded)

    def _state(self) -> _Built:
        if self._built is None:
            raise KbError("index not built; call build() first")
        return self._built

    @property
    def tokenizer(self) -> Tokenizer:
        return self._state().tokenizer

    @property
    def graph(self) -> cgs.Cptg:
        return self._state().graph

    @property
    def embedder(self) -> Embedder:
        return self._state().embedder

    def _lookup(self, key: str) -> KbRecord:
        collection, rid = key.split("/", 1)
        return self.collections[collection][rid]

    def _keep(self, collection):
        if collection is None:
            return None
        if collection not in COLLECTIONS:
            raise KbError(f"unknown collection: {collection!r}")
        prefix = collection + "/"
        return lambda key: key.startswith(prefix)

    def fulltext_search(self, query: str, collection: str | None = None, k: int = 10) -> list[Hit]:
        state = self._state()
        hits = state.fulltext.search(query, k, self._keep(collection))
        return [Hit(self._lookup(key), score) for key, score in hits]

    def vector_search(self, query, k: int = 10, collection: str | None = None) -> list[Hit]:
        """Cosine search; ``query`` is text or a precomputed embedding."""
        state = self._state()
        vec = state.embedder.embed(query) if isinstance(query, str) else np.asarray(query, dtype=float)
        hits = state.vectors.search(vec, k, self._keep(collection))
        return [Hit(self._lookup(key), score) for key, score in hits]

    # -- standardization -----------------------------------------------------

    def normalize_term(self, term: str) -> str | None:
        """Graph node for ``term``: exact, NMM-ID-shaped, or case-folded match."""
        state = self._state()
        term = term.strip()
        if is_nmm_id(term):
            term = canonical_nmm_id(term).lower()
        if term in state.graph.resolution:
            return term
        return state.folded.get(term.casefold())

    def resolve(self, term: str) -> str | None:
        node = self.normalize_term(term)
        return None if node is None else self._state().graph.resolution[node]

    def standardize(self, term: str) -> Standardized | None:
        primary = self.resolve(term)
        if primary is None:
            return None
        return Standardized(term, primary, self.get("snnmm", primary), self.get("glossary", primary))

    def terms(self) -> list[str]:
        """Every term that resolves to a primary."""
        return sorted(self._state().graph.resolution)

    def resolve_reference(self, ref_id: str) -> KbRecord | None:
        """Target of a ``{{ref|[[id]]}}`` citation: a record in any collection."""
        for name in ("text", "knowledge", "snnmm", "glossary"):
            rec = self.get(name, ref_id) or self.get(name, ref_id.lower())
            if rec:
                return rec
        primary = self.resolve(ref_id) if self._built else None
        return self.get("snnmm", primary) if primary else None

    # -- report ----------------------------------------------------------------

    def stats(self) -> list[dict]:
        snnmm = self.records("snnmm")
        texts = self.records("text")
        nmm_ids = {r.id for r in snnmm}
        if self._built is not None:
            synonyms = {t for t, p in self.graph.resolution.items() if p in nmm_ids and t != p}
        else:
            synonyms = {r.fields["from_term"] for r in self.records("relation")}

        def distinct(name):
            return len({v for r in snnmm for v in ne_values(r.fields.get(name))})

        counts = [
            len(snnmm),
            len(self.records("knowledge")),
            sum(1 for r in self.records("glossary") if is_nmm_id(r.id)),
            sum(1 for r in texts if r.fields.get("source") == "ChP-2020"),
            sum(1 for r in texts if r.fields.get("source") == "ChP-2015"),
            len(synonyms),
            distinct("species_origins"),
            distinct("medicinal_parts"),
            distinct("processing_methods"),
        ]
        return [{"type": t, "count": n, "description": d} for (t, d), n in zip(STATS_ROWS, counts)]


def fixture_dir() -> Path:
    return Path(str(resources.files("nmmkit").joinpath("fixtures/kb")))


def load_fixture_kb() -> KnowledgeBase:
    """The small Ephedra / Artemisia / Curcuma corpus shipped with the package."""
    return KnowledgeBase.load(fixture_dir())


def append_records(kb_dir: str | Path, collection: str, records: Iterable[KbRecord]) -> int:
    kb_dir = Path(kb_dir)
    kb_dir.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(kb_dir / f"{collection}.jsonl", "a", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json(), ensure_ascii=False) + "\n")
            n += 1
    return n
