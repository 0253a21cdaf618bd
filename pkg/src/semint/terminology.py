"""Terminology service: term records, typed entity mappings, and closures.

Mapping predicates fall into grades with fixed formal properties:

* ontological grade (``owl:sameAs``, ``skos:exactMatch``): same meaning and
  referent; transitive, symmetric, machine-actionable.
* referential grade (``owl:equivalentClass``, ``new:referentialMatch``,
  ``owl:equivalentProperty``): same referent only; transitive, symmetric,
  machine-actionable. Every ontological-grade edge also counts referentially,
  so the ontological classes always refine the referential ones.
* hierarchical (``rdfs:subClassOf``, ``rdfs:subPropertyOf``): transitive,
  directed, machine-actionable. Stored edges read subject-is-subclass-of-object.
* advisory (``skos:closeMatch``, ``skos:relatedMatch``, ``skos:broadMatch``,
  ``skos:narrowMatch``): not usable by machines; they never influence the
  equivalence closures. ``narrowMatch`` is normalized to its inverse
  ``broadMatch`` on ingestion.
"""

from __future__ import annotations

import hashlib
import re
import threading
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from typing import Mapping, Sequence

from .errors import (
    ConflictingTermRecord,
    InvalidGupri,
    MalformedRecord,
    MissingRequiredColumn,
    UnknownPredicate,
    UnknownTerm,
)
from .identifiers import Gupri, PrefixMap

__all__ = [
    "ReferentKind",
    "TermRecord",
    "MappingPredicate",
    "EntityMapping",
    "NOOP_MAPPING_ID",
    "InteropLevel",
    "InteropVerdict",
    "ImportReport",
    "AuditCheck",
    "TermAudit",
    "ClosureSnapshot",
    "TerminologyRegistry",
]

_LANG_TAG_RE = re.compile(r"^[a-z]{2,8}(-[a-z0-9]{1,8})*$")


class ReferentKind(Enum):
    INDIVIDUAL = "individual"
    CLASS = "class"
    PROPERTY = "property"


@dataclass(frozen=True)
class TermRecord:
    """A vocabulary entry: identifier, labels, definitions, synonyms.

    ``definition`` states what the entity is (its intension);
    ``recognition_criteria`` state how to recognize one (extension
    diagnostics). Terms for which recognition criteria make no sense can set
    ``recognition_criteria_applicable`` to False so audits report
    not-applicable instead of a failure.
    """

    id: Gupri
    labels: Mapping[str, str]
    definition: str | None = None
    recognition_criteria: str | None = None
    recognition_criteria_applicable: bool = True
    synonyms: tuple[str, ...] = ()
    referent_kind: ReferentKind = ReferentKind.CLASS

    def __post_init__(self):
        normalized = {}
        for tag, text in self.labels.items():
            tag = tag.lower()
            if not _LANG_TAG_RE.match(tag):
                raise MalformedRecord(f"bad language tag {tag!r} on {self.id}")
            normalized[tag] = text
        object.__setattr__(self, "labels", dict(sorted(normalized.items())))
        deduped: list[str] = []
        for s in self.synonyms:
            if s not in deduped:
                deduped.append(s)
        object.__setattr__(self, "synonyms", tuple(deduped))


class MappingPredicate(Enum):
    """Typed relation between two terms, keyed by its CURIE."""

    SAME_AS = "owl:sameAs"
    EXACT_MATCH = "skos:exactMatch"
    EQUIVALENT_CLASS = "owl:equivalentClass"
    REFERENTIAL_MATCH = "new:referentialMatch"
    EQUIVALENT_PROPERTY = "owl:equivalentProperty"
    SUB_CLASS_OF = "rdfs:subClassOf"
    SUB_PROPERTY_OF = "rdfs:subPropertyOf"
    CLOSE_MATCH = "skos:closeMatch"
    RELATED_MATCH = "skos:relatedMatch"
    BROAD_MATCH = "skos:broadMatch"
    NARROW_MATCH = "skos:narrowMatch"

    @classmethod
    def from_curie(cls, curie: str) -> "MappingPredicate":
        try:
            return cls(curie)
        except ValueError:
            raise UnknownPredicate(f"unknown mapping predicate {curie!r}") from None

    @property
    def curie(self) -> str:
        return self.value

    @property
    def transitive(self) -> bool:
        return self in _TRANSITIVE

    @property
    def symmetric(self) -> bool:
        return self in _SYMMETRIC

    @property
    def machine_actionable(self) -> bool:
        return self in _ACTIONABLE


_ONTOLOGICAL_GRADE = frozenset({MappingPredicate.SAME_AS, MappingPredicate.EXACT_MATCH})
_REFERENTIAL_GRADE = _ONTOLOGICAL_GRADE | {
    MappingPredicate.EQUIVALENT_CLASS,
    MappingPredicate.REFERENTIAL_MATCH,
    MappingPredicate.EQUIVALENT_PROPERTY,
}
_HIERARCHICAL = frozenset({MappingPredicate.SUB_CLASS_OF, MappingPredicate.SUB_PROPERTY_OF})
_ASSOCIATIVE = frozenset({MappingPredicate.CLOSE_MATCH, MappingPredicate.RELATED_MATCH})
_TRANSITIVE = _REFERENTIAL_GRADE | _HIERARCHICAL
_SYMMETRIC = _REFERENTIAL_GRADE | _ASSOCIATIVE
_ACTIONABLE = _REFERENTIAL_GRADE | _HIERARCHICAL

#: Sentinel returned when a self-mapping is accepted without being stored.
NOOP_MAPPING_ID = "m-noop"


@dataclass(frozen=True)
class EntityMapping:
    """A typed, provenance-carrying edge between two term identifiers."""

    id: str
    subject: Gupri
    predicate: MappingPredicate
    object: Gupri
    justification: str = "unspecified"
    confidence: float = 1.0
    author: str | None = None
    comment: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise MalformedRecord(f"confidence {self.confidence} outside [0,1]")

    @classmethod
    def create(
        cls,
        subject: Gupri,
        predicate: MappingPredicate,
        object: Gupri,
        *,
        justification: str = "unspecified",
        confidence: float = 1.0,
        author: str | None = None,
        comment: str | None = None,
    ) -> "EntityMapping":
        """Build a mapping with a deterministic content-derived id."""
        digest = hashlib.sha1(
            "\x1f".join(
                [
                    subject.canonical,
                    predicate.curie,
                    object.canonical,
                    justification,
                    repr(confidence),
                    author or "",
                    comment or "",
                ]
            ).encode("utf-8")
        ).hexdigest()[:12]
        return cls(
            id=f"m-{digest}",
            subject=subject,
            predicate=predicate,
            object=object,
            justification=justification,
            confidence=confidence,
            author=author,
            comment=comment,
        )


class InteropLevel(IntEnum):
    """Ordered interoperability verdicts between two terms."""

    NONE = 0
    ASSOCIATIVE = 1
    HIERARCHICAL = 2
    REFERENTIAL = 3
    ONTOLOGICAL = 4
    IDENTICAL = 5

    @property
    def label(self) -> str:
        return _LEVEL_LABELS[self]


_LEVEL_LABELS = {
    InteropLevel.NONE: "None",
    InteropLevel.ASSOCIATIVE: "Associative",
    InteropLevel.HIERARCHICAL: "Hierarchical",
    InteropLevel.REFERENTIAL: "Referential",
    InteropLevel.ONTOLOGICAL: "Ontological",
    InteropLevel.IDENTICAL: "Identical",
}


@dataclass(frozen=True)
class InteropVerdict:
    """Interoperability level plus hierarchy direction and actionability.

    ``direction`` is set only for hierarchical verdicts and reads from the
    first argument: ``broader`` means the second term is broader than the
    first. Verdicts reached only through non-actionable edges (broadMatch,
    closeMatch, relatedMatch) carry ``actionable=False`` and are advisory.
    """

    level: InteropLevel
    direction: str | None = None
    actionable: bool = False


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str


@dataclass(frozen=True)
class ImportReport:
    accepted: int
    rejected: tuple[RejectedRow, ...] = ()


@dataclass(frozen=True)
class AuditCheck:
    check_id: str
    status: str  # pass | fail | not_applicable
    advisory: bool = False
    detail: str = ""


@dataclass(frozen=True)
class TermAudit:
    term: Gupri
    checks: tuple[AuditCheck, ...]


class _UnionFind:
    def __init__(self):
        self._parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        self._parent.setdefault(x, x)

    def find(self, x: str) -> str:
        self.add(x)
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def components(self) -> dict[str, frozenset[str]]:
        """Members keyed by canonical root (lexicographically smallest member)."""
        groups: dict[str, set[str]] = {}
        for x in self._parent:
            groups.setdefault(self.find(x), set()).add(x)
        return {min(members): frozenset(members) for members in groups.values()}


def _transitive_reach(adjacency: Mapping[str, set[str]]) -> dict[str, frozenset[str]]:
    reach: dict[str, frozenset[str]] = {}
    for start in adjacency:
        seen: set[str] = set()
        queue = deque(adjacency.get(start, ()))
        while queue:
            node = queue.popleft()
            if node in seen:
                continue
            seen.add(node)
            queue.extend(adjacency.get(node, ()))
        reach[start] = frozenset(seen)
    return reach


@dataclass(frozen=True)
class ClosureSnapshot:
    """Immutable closure over the stored mapping multiset.

    Equivalence classes are connected components; hierarchical reachability is
    lifted to referential classes and kept separate for the actionable
    (subClassOf/subPropertyOf) and advisory (plus broadMatch) edge sets.
    """

    ont_root: Mapping[str, str]
    ont_members: Mapping[str, frozenset[str]]
    ref_root: Mapping[str, str]
    ref_members: Mapping[str, frozenset[str]]
    subclass_reach: Mapping[str, frozenset[str]]
    subproperty_reach: Mapping[str, frozenset[str]]
    loose_reach: Mapping[str, frozenset[str]]
    associative_pairs: frozenset[frozenset[str]]

    def ontological_root(self, g: Gupri) -> str:
        return self.ont_root.get(g.canonical, g.canonical)

    def referential_root(self, g: Gupri) -> str:
        return self.ref_root.get(g.canonical, g.canonical)

    def ontological_class(self, g: Gupri) -> frozenset[str]:
        return self.ont_members.get(self.ontological_root(g), frozenset({g.canonical}))

    def referential_class(self, g: Gupri) -> frozenset[str]:
        return self.ref_members.get(self.referential_root(g), frozenset({g.canonical}))

    def strictly_broader(self, a: Gupri, b: Gupri) -> bool:
        """True when b's referential class is above a's via subclass/subproperty."""
        ra, rb = self.referential_root(a), self.referential_root(b)
        return rb in self.subclass_reach.get(ra, frozenset()) or rb in self.subproperty_reach.get(
            ra, frozenset()
        )

    def loosely_broader(self, a: Gupri, b: Gupri) -> bool:
        ra, rb = self.referential_root(a), self.referential_root(b)
        return rb in self.loose_reach.get(ra, frozenset())

    def associative(self, a: Gupri, b: Gupri) -> bool:
        return frozenset({a.canonical, b.canonical}) in self.associative_pairs

    def to_doc(self) -> dict:
        """Deterministic plain-data rendering, for output and byte comparison."""
        return {
            "ontological_classes": [
                sorted(m) for _, m in sorted(self.ont_members.items()) if len(m) > 1
            ],
            "referential_classes": [
                sorted(m) for _, m in sorted(self.ref_members.items()) if len(m) > 1
            ],
            "subclass_reach": {
                k: sorted(v) for k, v in sorted(self.subclass_reach.items()) if v
            },
            "subproperty_reach": {
                k: sorted(v) for k, v in sorted(self.subproperty_reach.items()) if v
            },
            "associative_pairs": sorted(sorted(p) for p in self.associative_pairs),
        }


class TerminologyRegistry:
    """Registry of term records and entity mappings with closure queries.

    Reads run against an immutable :class:`ClosureSnapshot` computed lazily
    and invalidated on every write; writes are serialized by a lock.
    """

    def __init__(self, prefix_map: PrefixMap | None = None):
        self.prefix_map = prefix_map or PrefixMap()
        self._terms: dict[str, TermRecord] = {}
        self._mappings: dict[str, EntityMapping] = {}
        self._snapshot: ClosureSnapshot | None = None
        self._lock = threading.Lock()

    # -- term registry ------------------------------------------------------

    def register_term(self, record: TermRecord) -> Gupri:
        gid = self.prefix_map.gupri(record.id)
        record = replace(record, id=gid)
        with self._lock:
            existing = self._terms.get(gid.canonical)
            if existing is not None:
                if existing != record:
                    raise ConflictingTermRecord(f"term {gid} already registered with different content")
                return gid
            self._terms[gid.canonical] = record
        return gid

    def term(self, id: str | Gupri) -> TermRecord:
        gid = self.prefix_map.gupri(id)
        record = self._terms.get(gid.canonical)
        if record is None:
            raise UnknownTerm(f"term {gid} not registered")
        return record

    def has_term(self, id: str | Gupri) -> bool:
        try:
            gid = self.prefix_map.gupri(id)
        except InvalidGupri:
            return False
        return gid.canonical in self._terms

    def terms(self) -> list[TermRecord]:
        return [self._terms[k] for k in sorted(self._terms)]

    # -- mapping registry ---------------------------------------------------

    def add_mapping(self, m: EntityMapping) -> str:
        m = self._normalize(m)
        if m.subject == m.object:
            return NOOP_MAPPING_ID  # self-mappings are implicit, never stored
        with self._lock:
            if m.id not in self._mappings:
                self._mappings[m.id] = m
                self._snapshot = None
        return m.id

    def _normalize(self, m: EntityMapping) -> EntityMapping:
        subject = self.prefix_map.gupri(m.subject)
        object_ = self.prefix_map.gupri(m.object)
        predicate = m.predicate
        if predicate is MappingPredicate.NARROW_MATCH:
            subject, object_ = object_, subject
            predicate = MappingPredicate.BROAD_MATCH
        return EntityMapping.create(
            subject,
            predicate,
            object_,
            justification=m.justification,
            confidence=m.confidence,
            author=m.author,
            comment=m.comment,
        )

    def remove_mapping(self, mapping_id: str) -> bool:
        with self._lock:
            removed = self._mappings.pop(mapping_id, None)
            if removed is not None:
                self._snapshot = None
        return removed is not None

    def mappings(self) -> list[EntityMapping]:
        return sorted(
            self._mappings.values(),
            key=lambda m: (
                m.subject.canonical,
                m.predicate.curie,
                m.object.canonical,
                m.justification,
                m.author or "",
                m.comment or "",
                m.confidence,
            ),
        )

    def mappings_between(self, subject: Gupri | None = None, object: Gupri | None = None) -> list[EntityMapping]:
        found = []
        for m in self.mappings():
            if subject is not None and m.subject != subject and m.object != subject:
                continue
            if object is not None and m.subject != object and m.object != object:
                continue
            found.append(m)
        return found

    # -- TSV interchange ----------------------------------------------------

    REQUIRED_COLUMNS = ("subject_id", "predicate_id", "object_id")
    OPTIONAL_COLUMNS = ("mapping_justification", "confidence", "comment", "author_id")

    def import_mappings_tsv(self, data: bytes | str, *, table1_direction: bool = False) -> ImportReport:
        """Ingest a tab-separated mapping file.

        Lines starting with ``#`` are metadata comments. Rows that fail to
        parse are reported with their line number; the rest are ingested.
        With ``table1_direction`` the subject of subClassOf/subPropertyOf rows
        is read as the parent and the edge is flipped on storage.
        """
        if isinstance(data, bytes):
            text = data.decode("utf-8")
        else:
            text = data
        header: list[str] | None = None
        accepted = 0
        rejected: list[RejectedRow] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if header is None:
                header = [f.strip() for f in fields]
                missing = [c for c in self.REQUIRED_COLUMNS if c not in header]
                if missing:
                    raise MissingRequiredColumn(f"missing column(s): {', '.join(missing)}")
                continue
            if len(fields) != len(header):
                rejected.append(
                    RejectedRow(lineno, f"expected {len(header)} fields, got {len(fields)}")
                )
                continue
            row = dict(zip(header, fields))
            try:
                mapping = self._row_to_mapping(row, table1_direction=table1_direction)
            except (InvalidGupri, UnknownPredicate, MalformedRecord, ValueError) as exc:
                rejected.append(RejectedRow(lineno, str(exc)))
                continue
            self.add_mapping(mapping)
            accepted += 1
        if header is None:
            raise MissingRequiredColumn("file has no header row")
        return ImportReport(accepted=accepted, rejected=tuple(rejected))

    def _row_to_mapping(self, row: Mapping[str, str], *, table1_direction: bool) -> EntityMapping:
        subject = self.prefix_map.gupri(row["subject_id"].strip())
        object_ = self.prefix_map.gupri(row["object_id"].strip())
        predicate = MappingPredicate.from_curie(row["predicate_id"].strip())
        if table1_direction and predicate in _HIERARCHICAL:
            subject, object_ = object_, subject
        confidence_text = row.get("confidence", "").strip()
        confidence = float(confidence_text) if confidence_text else 1.0
        return EntityMapping.create(
            subject,
            predicate,
            object_,
            justification=row.get("mapping_justification", "").strip() or "unspecified",
            confidence=confidence,
            author=row.get("author_id", "").strip() or None,
            comment=row.get("comment", "").strip() or None,
        )

    # -- closure ------------------------------------------------------------

    def compute_closure(self, min_confidence: float | None = None) -> ClosureSnapshot:
        """Closure snapshot; pure function of the stored edge set.

        The default (unfiltered) snapshot is cached until the next write.
        """
        if min_confidence is None:
            snapshot = self._snapshot
            if snapshot is None:
                snapshot = self._build_snapshot(self.mappings())
                self._snapshot = snapshot
            return snapshot
        edges = [m for m in self.mappings() if m.confidence >= min_confidence]
        return self._build_snapshot(edges)

    def _build_snapshot(self, edges: Sequence[EntityMapping]) -> ClosureSnapshot:
        ont = _UnionFind()
        ref = _UnionFind()
        for m in edges:
            ref.add(m.subject.canonical)
            ref.add(m.object.canonical)
            ont.add(m.subject.canonical)
            ont.add(m.object.canonical)
            if m.predicate in _ONTOLOGICAL_GRADE:
                ont.union(m.subject.canonical, m.object.canonical)
            if m.predicate in _REFERENTIAL_GRADE:
                ref.union(m.subject.canonical, m.object.canonical)
        for canonical in self._terms:
            ont.add(canonical)
            ref.add(canonical)

        ont_members = ont.components()
        ref_members = ref.components()
        ont_root = {m: root for root, members in ont_members.items() for m in members}
        ref_root = {m: root for root, members in ref_members.items() for m in members}

        def lift(term: str) -> str:
            return ref_root.get(term, term)

        subclass_adj: dict[str, set[str]] = {}
        subproperty_adj: dict[str, set[str]] = {}
        loose_adj: dict[str, set[str]] = {}
        associative: set[frozenset[str]] = set()
        for m in edges:
            s, o = lift(m.subject.canonical), lift(m.object.canonical)
            if m.predicate is MappingPredicate.SUB_CLASS_OF:
                if s != o:
                    subclass_adj.setdefault(s, set()).add(o)
                    loose_adj.setdefault(s, set()).add(o)
            elif m.predicate is MappingPredicate.SUB_PROPERTY_OF:
                if s != o:
                    subproperty_adj.setdefault(s, set()).add(o)
                    loose_adj.setdefault(s, set()).add(o)
            elif m.predicate is MappingPredicate.BROAD_MATCH:
                if s != o:
                    loose_adj.setdefault(s, set()).add(o)
            elif m.predicate in _ASSOCIATIVE:
                associative.add(frozenset({m.subject.canonical, m.object.canonical}))

        return ClosureSnapshot(
            ont_root=ont_root,
            ont_members=ont_members,
            ref_root=ref_root,
            ref_members=ref_members,
            subclass_reach=_transitive_reach(subclass_adj),
            subproperty_reach=_transitive_reach(subproperty_adj),
            loose_reach=_transitive_reach(loose_adj),
            associative_pairs=frozenset(associative),
        )

    # -- interoperability queries -------------------------------------------

    def interop_level(self, a: str | Gupri, b: str | Gupri, min_confidence: float | None = None) -> InteropVerdict:
        """Strongest interoperability verdict between two identifiers."""
        ga, gb = self.prefix_map.gupri(a), self.prefix_map.gupri(b)
        if ga == gb:
            return InteropVerdict(InteropLevel.IDENTICAL, actionable=True)
        snap = self.compute_closure(min_confidence)
        if snap.ontological_root(ga) == snap.ontological_root(gb):
            return InteropVerdict(InteropLevel.ONTOLOGICAL, actionable=True)
        if snap.referential_root(ga) == snap.referential_root(gb):
            return InteropVerdict(InteropLevel.REFERENTIAL, actionable=True)
        if snap.strictly_broader(ga, gb):
            return InteropVerdict(InteropLevel.HIERARCHICAL, direction="broader", actionable=True)
        if snap.strictly_broader(gb, ga):
            return InteropVerdict(InteropLevel.HIERARCHICAL, direction="narrower", actionable=True)
        if snap.loosely_broader(ga, gb):
            return InteropVerdict(InteropLevel.HIERARCHICAL, direction="broader", actionable=False)
        if snap.loosely_broader(gb, ga):
            return InteropVerdict(InteropLevel.HIERARCHICAL, direction="narrower", actionable=False)
        if snap.associative(ga, gb):
            return InteropVerdict(InteropLevel.ASSOCIATIVE, actionable=False)
        return InteropVerdict(InteropLevel.NONE, actionable=False)

    def equivalence_class(
        self, a: str | Gupri, level: InteropLevel, min_confidence: float | None = None
    ) -> set[Gupri]:
        """Closed class containing ``a`` at an equivalence-forming level."""
        if level not in (InteropLevel.ONTOLOGICAL, InteropLevel.REFERENTIAL):
            raise ValueError(f"{level!r} does not form equivalence classes")
        ga = self.prefix_map.gupri(a)
        snap = self.compute_closure(min_confidence)
        members = (
            snap.ontological_class(ga)
            if level is InteropLevel.ONTOLOGICAL
            else snap.referential_class(ga)
        )
        return {Gupri(m) for m in members}

    def is_subclass_reachable(self, a: str | Gupri, b: str | Gupri, min_confidence: float | None = None) -> bool:
        """True when a's referential class reaches b's via subClassOf edges."""
        ga, gb = self.prefix_map.gupri(a), self.prefix_map.gupri(b)
        snap = self.compute_closure(min_confidence)
        ra, rb = snap.referential_root(ga), snap.referential_root(gb)
        return rb in snap.subclass_reach.get(ra, frozenset())

    # -- path explanation ----------------------------------------------------

    def explain_path(self, a: str | Gupri, b: str | Gupri, min_confidence: float | None = None) -> list[EntityMapping]:
        """Shortest mapping-edge path witnessing the interop verdict for (a, b).

        Empty for Identical and None verdicts. Ties between equal-length paths
        are broken by the lexicographic canonical order of intermediate nodes.
        """
        ga, gb = self.prefix_map.gupri(a), self.prefix_map.gupri(b)
        verdict = self.interop_level(ga, gb, min_confidence)
        if verdict.level in (InteropLevel.IDENTICAL, InteropLevel.NONE):
            return []
        edges = [
            m
            for m in self.mappings()
            if min_confidence is None or m.confidence >= min_confidence
        ]
        if verdict.level is InteropLevel.ASSOCIATIVE:
            direct = [
                m
                for m in edges
                if m.predicate in _ASSOCIATIVE
                and {m.subject, m.object} == {ga, gb}
            ]
            return direct[:1]
        allowed: set[MappingPredicate] = set(_ONTOLOGICAL_GRADE)
        if verdict.level is not InteropLevel.ONTOLOGICAL:
            allowed = set(_REFERENTIAL_GRADE)
        directed: set[MappingPredicate] = set()
        if verdict.level is InteropLevel.HIERARCHICAL:
            directed = set(_HIERARCHICAL)
            if not verdict.actionable:
                directed.add(MappingPredicate.BROAD_MATCH)
        adjacency: dict[str, dict[str, EntityMapping]] = {}

        def connect(u: str, v: str, m: EntityMapping) -> None:
            slot = adjacency.setdefault(u, {})
            best = slot.get(v)
            if best is None or m.id < best.id:
                slot[v] = m

        forward = "broader" == (verdict.direction or "broader")
        for m in edges:
            s, o = m.subject.canonical, m.object.canonical
            if m.predicate in allowed:
                connect(s, o, m)
                connect(o, s, m)
            elif m.predicate in directed:
                if forward:
                    connect(s, o, m)
                else:
                    connect(o, s, m)
        return self._lex_shortest_path(adjacency, ga.canonical, gb.canonical)

    @staticmethod
    def _lex_shortest_path(
        adjacency: Mapping[str, Mapping[str, EntityMapping]], start: str, goal: str
    ) -> list[EntityMapping]:
        # distances from the goal over the reversed graph, then a greedy
        # forward walk picks the lexicographically smallest shortest path
        reverse: dict[str, set[str]] = {}
        for u, nbrs in adjacency.items():
            for v in nbrs:
                reverse.setdefault(v, set()).add(u)
        dist = {goal: 0}
        queue = deque([goal])
        while queue:
            node = queue.popleft()
            for prev in reverse.get(node, ()):
                if prev not in dist:
                    dist[prev] = dist[node] + 1
                    queue.append(prev)
        if start not in dist:
            return []
        path: list[EntityMapping] = []
        node = start
        while node != goal:
            candidates = sorted(
                v for v in adjacency.get(node, {}) if dist.get(v) == dist[node] - 1
            )
            nxt = candidates[0]
            path.append(adjacency[node][nxt])
            node = nxt
        return path

    # -- audits ---------------------------------------------------------------

    def audit_term_fairness(self, id: str | Gupri) -> TermAudit:
        """Per-criterion vocabulary-quality audit of a registered term."""
        record = self.term(id)
        snap = self.compute_closure()
        checks = []
        checks.append(
            AuditCheck(
                "has_definition",
                "pass" if record.definition else "fail",
                detail="ontological definition present" if record.definition else "no definition",
            )
        )
        if not record.recognition_criteria_applicable:
            criteria_status = "not_applicable"
        else:
            criteria_status = "pass" if record.recognition_criteria else "fail"
        checks.append(AuditCheck("has_recognition_criteria", criteria_status))
        multilingual = len(record.labels) >= 2
        checks.append(
            AuditCheck(
                "has_multilingual_labels",
                "pass" if multilingual else "fail",
                detail=f"{len(record.labels)} language tag(s)",
            )
        )
        checks.append(AuditCheck("has_synonyms", "pass" if record.synonyms else "fail"))
        others = [
            member
            for member in snap.referential_class(record.id)
            if member != record.id.canonical and member in self._terms
        ]
        checks.append(
            AuditCheck(
                "is_mapped",
                "pass" if others else "fail",
                advisory=True,
                detail="shares a referential class with another registered term"
                if others
                else "referential class is a singleton",
            )
        )
        return TermAudit(term=record.id, checks=tuple(checks))
