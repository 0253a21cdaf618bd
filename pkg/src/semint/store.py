"""Plain-text persistent store with canonical, diff-friendly exports.

Layout under the store root:

* ``prefixes``      prefix map, one ``prefix<TAB>iri`` per line
* ``terms``         one term record per line (JSON)
* ``mappings.tsv``  entity mappings, tab-separated
* ``schemas/``, ``crosswalks/``, ``operations/``, ``fdos/``
                    one JSON document per file

Exports are canonical: records sorted by canonical identifier, documents
emitted with fixed key order, so export-import-export is byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import documents
from .engine import Engine
from .errors import EmptyQuery, IoFailure, ParseFailure, SemintError
from .fdo import StatementCategory
from .identifiers import Gupri, PrefixMap
from .terminology import InteropLevel

__all__ = ["StoreLayout", "init_store", "load_store", "export_store", "FindQuery", "ExpandMode", "find"]

_MAPPING_COLUMNS = (
    "subject_id",
    "predicate_id",
    "object_id",
    "mapping_justification",
    "confidence",
    "comment",
    "author_id",
)


@dataclass(frozen=True)
class StoreLayout:
    root: Path

    @property
    def prefixes_path(self) -> Path:
        return self.root / "prefixes"

    @property
    def terms_path(self) -> Path:
        return self.root / "terms"

    @property
    def mappings_path(self) -> Path:
        return self.root / "mappings.tsv"

    @property
    def schemas_dir(self) -> Path:
        return self.root / "schemas"

    @property
    def crosswalks_dir(self) -> Path:
        return self.root / "crosswalks"

    @property
    def operations_dir(self) -> Path:
        return self.root / "operations"

    @property
    def fdos_dir(self) -> Path:
        return self.root / "fdos"

    def document_dirs(self) -> list[Path]:
        return [self.schemas_dir, self.crosswalks_dir, self.operations_dir, self.fdos_dir]


def init_store(path: str | Path) -> StoreLayout:
    """Create an empty canonical layout; refuses to clobber an existing store."""
    layout = StoreLayout(Path(path))
    if layout.prefixes_path.exists() or layout.mappings_path.exists():
        raise IoFailure(f"store already initialized at {layout.root}")
    try:
        layout.root.mkdir(parents=True, exist_ok=True)
        for d in layout.document_dirs():
            d.mkdir(exist_ok=True)
        layout.prefixes_path.write_text("", encoding="utf-8")
        layout.terms_path.write_text("", encoding="utf-8")
        layout.mappings_path.write_text("\t".join(_MAPPING_COLUMNS) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot initialize store at {layout.root}: {exc}") from exc
    return layout


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise IoFailure(f"missing store file {path}") from None
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def load_store(path: str | Path) -> Engine:
    """Parse every store file into a fresh engine.

    Errors carry file and line context. Crosswalk documents are loaded with
    structural checks only; semantic re-validation is the job of
    ``crosswalk check``, so a store whose mapping set changed still loads.
    """
    layout = StoreLayout(Path(path))
    if not layout.root.is_dir():
        raise IoFailure(f"no store at {layout.root}")
    prefix_map = PrefixMap()
    for lineno, line in enumerate(_read_text(layout.prefixes_path).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseFailure("prefixes", lineno, f"expected 'prefix<TAB>iri', got {line!r}")
        try:
            prefix_map.register(parts[0].strip(), parts[1].strip())
        except SemintError as exc:
            raise ParseFailure("prefixes", lineno, str(exc)) from None
    engine = Engine.empty(prefix_map)

    if layout.terms_path.exists():
        for lineno, line in enumerate(_read_text(layout.terms_path).splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = documents.term_from_doc(json.loads(line), prefix_map)
                engine.terminology.register_term(record)
            except (SemintError, ValueError) as exc:
                raise ParseFailure("terms", lineno, str(exc)) from None

    if layout.mappings_path.exists():
        try:
            report = engine.terminology.import_mappings_tsv(_read_text(layout.mappings_path))
        except SemintError as exc:
            raise ParseFailure("mappings.tsv", 1, str(exc)) from None
        if report.rejected:
            first = report.rejected[0]
            raise ParseFailure("mappings.tsv", first.line, first.reason)

    for file, doc in _documents_in(layout.schemas_dir):
        try:
            engine.schemas.register_schema(documents.schema_from_doc(doc, prefix_map))
        except SemintError as exc:
            raise ParseFailure(file, 1, str(exc)) from None
    for file, doc in _documents_in(layout.crosswalks_dir):
        try:
            engine.crosswalks._insert_trusted(documents.crosswalk_from_doc(doc, prefix_map))
        except SemintError as exc:
            raise ParseFailure(file, 1, str(exc)) from None
    for file, doc in _documents_in(layout.operations_dir):
        try:
            engine.operations.register_operation(documents.operation_from_doc(doc, prefix_map))
        except SemintError as exc:
            raise ParseFailure(file, 1, str(exc)) from None
    for file, doc in _documents_in(layout.fdos_dir):
        try:
            engine.fdos.register_fdo(documents.fdo_from_doc(doc, prefix_map))
        except SemintError as exc:
            raise ParseFailure(file, 1, str(exc)) from None
    return engine


def _documents_in(directory: Path):
    if not directory.is_dir():
        return
    for file in sorted(directory.glob("*.json")):
        try:
            yield str(file.relative_to(directory.parent)), json.loads(file.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read {file}: {exc}") from exc
        except ValueError as exc:
            raise ParseFailure(str(file.relative_to(directory.parent)), 1, str(exc)) from None


_SLUG_RE = re.compile(r"[^A-Za-z0-9._-]+")


def _filename(compact_id: str, canonical: str) -> str:
    slug = _SLUG_RE.sub("_", compact_id).strip("_") or "record"
    digest = hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:8]
    return f"{slug[:80]}-{digest}.json"


def export_store(engine: Engine, path: str | Path) -> StoreLayout:
    """Write the engine's full contents in canonical form."""
    layout = StoreLayout(Path(path))
    pm = engine.prefix_map
    try:
        layout.root.mkdir(parents=True, exist_ok=True)
        for d in layout.document_dirs():
            d.mkdir(exist_ok=True)
            for stale in d.glob("*.json"):
                stale.unlink()

        prefix_lines = [f"{prefix}\t{iri}" for prefix, iri in pm.bindings()]
        layout.prefixes_path.write_text(
            "\n".join(prefix_lines) + ("\n" if prefix_lines else ""), encoding="utf-8"
        )

        term_lines = [
            documents.render_line(documents.term_to_doc(t, pm)) for t in engine.terminology.terms()
        ]
        layout.terms_path.write_text(
            "\n".join(term_lines) + ("\n" if term_lines else ""), encoding="utf-8"
        )

        rows = ["\t".join(_MAPPING_COLUMNS)]
        for m in engine.terminology.mappings():
            rows.append(
                "\t".join(
                    [
                        pm.compress(m.subject.canonical),
                        m.predicate.curie,
                        pm.compress(m.object.canonical),
                        m.justification,
                        repr(m.confidence),
                        m.comment or "",
                        m.author or "",
                    ]
                )
            )
        layout.mappings_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

        for schema in engine.schemas.schemas():
            doc = documents.schema_to_doc(schema, pm)
            target = layout.schemas_dir / _filename(doc["id"], schema.id.canonical)
            target.write_text(documents.render(doc), encoding="utf-8")
        for cw in engine.crosswalks.crosswalks():
            doc = documents.crosswalk_to_doc(cw, pm)
            target = layout.crosswalks_dir / _filename(doc["id"], cw.id.canonical)
            target.write_text(documents.render(doc), encoding="utf-8")
        for op in engine.operations.operations():
            doc = documents.operation_to_doc(op, pm)
            target = layout.operations_dir / _filename(doc["id"], op.id.canonical)
            target.write_text(documents.render(doc), encoding="utf-8")
        for record in engine.fdos.records():
            doc = documents.fdo_to_doc(record, pm)
            target = layout.fdos_dir / _filename(doc["gupri"], record.gupri.canonical)
            target.write_text(documents.render(doc), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot export store to {layout.root}: {exc}") from exc
    return layout


# ---------------------------------------------------------------------------
# findability


class ExpandMode(Enum):
    NONE = "none"
    ONTOLOGICAL = "ontological"
    REFERENTIAL = "referential"


@dataclass(frozen=True)
class FindQuery:
    term: Gupri | None = None
    expand: ExpandMode = ExpandMode.NONE
    statement_type: Gupri | None = None
    category: StatementCategory | None = None


def find(engine: Engine, query: FindQuery) -> list[Gupri]:
    """FDO gupris whose content matches the query, in canonical order.

    Term matching honors the expansion mode: with referential expansion an FDO
    using any term from the query term's referential equivalence class is
    found, independent of the vocabulary its author chose.
    """
    if query.term is None and query.statement_type is None and query.category is None:
        raise EmptyQuery("set at least one of term, statement_type, category")
    wanted_terms: set[str] | None = None
    if query.term is not None:
        term = engine.prefix_map.gupri(query.term)
        if query.expand is ExpandMode.NONE:
            wanted_terms = {term.canonical}
        else:
            level = (
                InteropLevel.ONTOLOGICAL
                if query.expand is ExpandMode.ONTOLOGICAL
                else InteropLevel.REFERENTIAL
            )
            wanted_terms = {g.canonical for g in engine.terminology.equivalence_class(term, level)}
    wanted_schemas: set[str] | None = None
    if query.statement_type is not None:
        wanted_schemas = {
            s.canonical for s in engine.schemas.schemas_for_statement_type(query.statement_type)
        }
    results = []
    for record in engine.fdos.records():
        if wanted_terms is not None:
            mentioned = {t.canonical for t in record.content_terms()}
            if not mentioned & wanted_terms:
                continue
        if wanted_schemas is not None:
            used = {inst.schema_id.canonical for inst in record.instances()}
            if not used & wanted_schemas:
                continue
        if query.category is not None and record.category is not query.category:
            continue
        results.append(record.gupri)
    return results
