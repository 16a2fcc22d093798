"""``nmmkit`` command-line entry point.

Exit status: 0 on success, 1 when the operation fails, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import cgs, mlmd
from .kb import COLLECTIONS, KbError, KnowledgeBase, append_records, fixture_dir, read_lexicon
from .nmtcpt import PhraseTableBackend, TranslationError, TranslationRequest, default_phrase_tables, parse_direction, read_phrase_table, translate
from .rag import ChatSession, DeterministicJudge
from .snnmm import PinyinError, PinyinTable, construct_nmmsn

ENV_KB_DIR = "SHENNONG_KB_DIR"


class OperationError(Exception):
    """Reported on stderr with exit status 1."""


class UsageError(Exception):
    """Reported on stderr with exit status 2."""


@dataclass
class CliConfig:
    kb_dir: Path | None = None
    lexicon: Path | None = None
    pinyin_table: Path | None = None
    phrase_tables: dict[str, Path] = field(default_factory=dict)
    precise: bool = False

    @classmethod
    def resolve(cls, args) -> "CliConfig":
        """Flags override the config file; the environment supplies only the KB dir."""
        data = {}
        if getattr(args, "config", None):
            try:
                with open(args.config, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {args.config}: {exc}") from exc
            if not isinstance(data, dict):
                raise UsageError("config file must hold a JSON object")
        known = {"kb_dir", "lexicon", "pinyin_table", "phrase_tables", "precise"}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

        def pick(name):
            value = getattr(args, name, None)
            return value if value is not None else data.get(name)

        kb_dir = pick("kb_dir") or os.environ.get(ENV_KB_DIR) or None
        cfg = cls(
            kb_dir=Path(kb_dir) if kb_dir else None,
            lexicon=Path(pick("lexicon")) if pick("lexicon") else None,
            pinyin_table=Path(pick("pinyin_table")) if pick("pinyin_table") else None,
            phrase_tables={k: Path(v) for k, v in (data.get("phrase_tables") or {}).items()},
            precise=bool(getattr(args, "precise", False) or data.get("precise", False)),
        )
        for name in ("lexicon", "pinyin_table"):
            path = getattr(cfg, name)
            if path is not None and not path.is_file():
                raise UsageError(f"{name} file not found: {path}")
        return cfg


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise OperationError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_kb(cfg: CliConfig, writable: bool = False) -> KnowledgeBase:
    """KB from ``cfg.kb_dir``; read-only commands fall back to the shipped fixture."""
    lexicon = read_lexicon(cfg.lexicon) if cfg.lexicon else None
    if cfg.kb_dir is None:
        if writable:
            raise UsageError(f"no knowledge base directory; pass --kb-dir or set {ENV_KB_DIR}")
        return KnowledgeBase.load(fixture_dir(), lexicon)
    if not cfg.kb_dir.exists():
        if writable:
            kb = KnowledgeBase(lexicon)
            kb.build()
            return kb
        raise OperationError(f"knowledge base directory not found: {cfg.kb_dir}")
    return KnowledgeBase.load(cfg.kb_dir, lexicon)


# -- name ----------------------------------------------------------------------

def cmd_name_construct(args, cfg) -> int:
    try:
        request = json.loads(_read_text(args.input))
    except json.JSONDecodeError as exc:
        raise OperationError(f"request is not valid JSON: {exc}") from exc
    if not isinstance(request, dict):
        raise OperationError("request must be a JSON object")
    table = None
    if cfg.pinyin_table:
        try:
            table = PinyinTable.load(cfg.pinyin_table)
        except (OSError, ValueError, PinyinError) as exc:
            raise OperationError(f"bad pinyin table: {exc}") from exc
    result = construct_nmmsn(request, table)
    sys.stdout.write(result.dumps(indent=4) + "\n")
    return 0 if result.success else 1


# -- mlmd ----------------------------------------------------------------------

def _mlmd_doc(path: str) -> mlmd.MlmdDocument:
    if not path.endswith(".mlmd"):
        raise UsageError(f"expected a .mlmd file, got {path}")
    try:
        return mlmd.parse_file(path)
    except OSError as exc:
        raise OperationError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except mlmd.MlmdError as exc:
        raise OperationError(f"{path}: {exc}") from exc


def cmd_mlmd_parse(args, cfg) -> int:
    _emit(mlmd.document_to_json(_mlmd_doc(args.file)))
    return 0


def cmd_mlmd_render(args, cfg) -> int:
    doc = _mlmd_doc(args.file)
    try:
        html = mlmd.render_html(doc, args.mode)
    except mlmd.MlmdError as exc:
        raise OperationError(str(exc)) from exc
    if args.json:
        _emit({"mode": args.mode, "html": html})
    else:
        sys.stdout.write(html + "\n")
    return 0


def cmd_mlmd_serialize(args, cfg) -> int:
    text = mlmd.serialize(_mlmd_doc(args.file))
    if args.json:
        _emit({"mlmd": text})
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


# -- cgs -----------------------------------------------------------------------

def _graph(args) -> cgs.Cptg:
    if (args.edges is None) != (args.primaries is None):
        raise UsageError("--edges and --primaries go together")
    if args.edges is None:
        base = resources.files("nmmkit").joinpath("fixtures/cgs")
        edges_path = Path(str(base.joinpath(f"{args.mode}_edges.tsv")))
        prim_path = Path(str(base.joinpath(f"{args.mode}_primaries.txt")))
    else:
        edges_path, prim_path = Path(args.edges), Path(args.primaries)
    try:
        return cgs.build_graph(cgs.read_edge_list(edges_path), cgs.read_primaries(prim_path), args.mode)
    except OSError as exc:
        raise OperationError(f"cannot read graph: {exc}") from exc
    except (cgs.CgsError, ValueError) as exc:
        raise OperationError(str(exc)) from exc


def cmd_cgs_build(args, cfg) -> int:
    g = _graph(args)
    for w in g.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(g.resolution)
    return 0


def cmd_cgs_resolve(args, cfg) -> int:
    g = _graph(args)
    primary = cgs.resolve(g, args.term)
    if args.json:
        _emit({"term": args.term, "primary": primary, "path": g.path(args.term)})
    elif primary is not None:
        sys.stdout.write(primary + "\n")
    if primary is None:
        print(f"term {args.term!r} does not resolve to a primary term", file=sys.stderr)
        return 1
    return 0


# -- kb ------------------------------------------------------------------------

def cmd_kb_import(args, cfg) -> int:
    kb = _load_kb(cfg, writable=True)
    try:
        report = kb.import_jsonl(args.file, args.collection)
    except KbError as exc:
        raise OperationError(str(exc)) from exc
    append_records(cfg.kb_dir, args.collection, report.records)
    out = report.to_json()
    out["total"] = len(kb.records(args.collection))
    _emit(out)
    for issue in report.issues:
        print(f"{args.file}: {issue}", file=sys.stderr)
    return 0


def cmd_kb_search(args, cfg) -> int:
    kb = _load_kb(cfg)
    if args.vector:
        hits = kb.vector_search(args.query, args.k, args.collection)
    else:
        hits = kb.fulltext_search(args.query, args.collection, args.k)
    _emit([h.to_json() for h in hits])
    return 0


def cmd_kb_stats(args, cfg) -> int:
    rows = _load_kb(cfg).stats()
    if args.json:
        _emit(rows)
    else:
        width = max(len(r["type"]) for r in rows)
        for r in rows:
            sys.stdout.write(f"{r['type']:<{width}}  {r['count']:>6}  {r['description']}\n")
    return 0


# -- translate / chat ----------------------------------------------------------

def _read_glossary(path: str | None) -> tuple[tuple[str, str], ...]:
    if not path:
        return ()
    try:
        return tuple(read_phrase_table(path).items())
    except OSError as exc:
        raise OperationError(f"cannot read glossary {path}: {exc.strerror or exc}") from exc
    except TranslationError as exc:
        raise OperationError(str(exc)) from exc


def cmd_translate(args, cfg) -> int:
    try:
        source, target = parse_direction(args.dir)
    except TranslationError as exc:
        raise UsageError(str(exc)) from exc
    tables = default_phrase_tables()
    extra = dict(cfg.phrase_tables)
    if args.phrase_table:
        extra[f"{source}-{target}"] = Path(args.phrase_table)
    for key, path in extra.items():
        try:
            tables[parse_direction(key)] = read_phrase_table(path)
        except (OSError, TranslationError) as exc:
            raise OperationError(f"bad phrase table {path}: {exc}") from exc
    text = _read_text(args.input).strip()
    kb = _load_kb(cfg)
    try:
        request = TranslationRequest(text, source, target, _read_glossary(args.glossary))
        result = translate(request, kb, PhraseTableBackend(tables))
    except TranslationError as exc:
        raise OperationError(str(exc)) from exc
    _emit(result.to_json())
    return 0


def cmd_chat(args, cfg) -> int:
    session = ChatSession(_load_kb(cfg), judge=DeterministicJudge(precise=cfg.precise))
    interactive = sys.stdin.isatty() and not args.json
    while True:
        if interactive:
            sys.stdout.write("> ")
            sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            break
        question = line.strip()
        if not question:
            continue
        turn = session.ask(question)
        if args.json:
            sys.stdout.write(json.dumps(turn.to_json(), ensure_ascii=False) + "\n")
        else:
            sys.stdout.write(turn.text + "\n")
            for a in turn.attached_search_results:
                sys.stdout.write(f"  [{a.record.collection}/{a.record.id}] {a.excerpt}\n")
        sys.stdout.flush()
    return 0


# -- parser --------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    p.add_argument("--kb-dir", dest="kb_dir", default=argparse.SUPPRESS, help=f"knowledge base directory (env {ENV_KB_DIR})")
    p.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    p.add_argument("--lexicon", default=argparse.SUPPRESS, help="tokenizer lexicon, one word per line")
    p.add_argument("--pinyin-table", dest="pinyin_table", default=argparse.SUPPRESS, help="pinyin table TSV")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="nmmkit", description="Natural medicinal material naming, markup, search and translation tools.", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    name = sub.add_parser("name", help="systematic names").add_subparsers(dest="action", metavar="ACTION")
    name.required = True
    p = name.add_parser("construct", parents=[common], help="build names from a JSON request on stdin")
    p.add_argument("--input", help="request file instead of stdin")
    p.set_defaults(func=cmd_name_construct)

    m = sub.add_parser("mlmd", help="multilingual markdown").add_subparsers(dest="action", metavar="ACTION")
    m.required = True
    for action, func, helptext in (
        ("parse", cmd_mlmd_parse, "print the document tree as JSON"),
        ("render", cmd_mlmd_render, "render HTML"),
        ("serialize", cmd_mlmd_serialize, "print canonical MLMD"),
    ):
        p = m.add_parser(action, parents=[common], help=helptext)
        p.add_argument("file")
        if action == "render":
            p.add_argument("--mode", default="zh-en", help="zh-en, en-zh, zh or en")
        p.set_defaults(func=func)

    c = sub.add_parser("cgs", help="coreference graph search").add_subparsers(dest="action", metavar="ACTION")
    c.required = True
    for action, func in (("build", cmd_cgs_build), ("resolve", cmd_cgs_resolve)):
        p = c.add_parser(action, parents=[common], help="resolve every term" if action == "build" else "resolve one term")
        p.add_argument("--edges", help="from<TAB>to[<TAB>weight] file (default: shipped worked example)")
        p.add_argument("--primaries", help="primary terms, one per line")
        p.add_argument("--mode", choices=(cgs.FOUNDATIONAL, cgs.WEIGHTED), default=cgs.FOUNDATIONAL)
        if action == "resolve":
            p.add_argument("--term", required=True)
        p.set_defaults(func=func)

    k = sub.add_parser("kb", help="knowledge base").add_subparsers(dest="action", metavar="ACTION")
    k.required = True
    p = k.add_parser("import", parents=[common], help="import a JSON-lines file into --kb-dir")
    p.add_argument("file")
    p.add_argument("--collection", required=True, choices=COLLECTIONS)
    p.set_defaults(func=cmd_kb_import)
    p = k.add_parser("search", parents=[common], help="full-text or vector search")
    p.add_argument("query")
    p.add_argument("--collection", choices=COLLECTIONS)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--vector", action="store_true")
    p.set_defaults(func=cmd_kb_search)
    p = k.add_parser("stats", parents=[common], help="per-category counts")
    p.set_defaults(func=cmd_kb_stats)

    p = sub.add_parser("translate", parents=[common], help="standardized-term translation of stdin")
    p.add_argument("--dir", default="zh-en", help="zh-en or en-zh")
    p.add_argument("--glossary", help="user glossary, source<TAB>target lines")
    p.add_argument("--phrase-table", dest="phrase_table", help="phrase table for this direction")
    p.add_argument("--input", help="source file instead of stdin")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("chat", parents=[common], help="question answering over stdin lines")
    p.add_argument("--precise", action="store_true", default=None, help="always retrieve, ignoring history")
    p.set_defaults(func=cmd_chat)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    try:
        cfg = CliConfig.resolve(args)
        return args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"nmmkit: error: {exc}", file=sys.stderr)
        return 2
    except (OperationError, KbError, cgs.CgsError) as exc:
        print(f"nmmkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
