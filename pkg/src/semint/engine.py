"""Wiring of the registries into one engine exposing the three services."""

from __future__ import annotations

from dataclasses import dataclass

from .crosswalks import CrosswalkRegistry
from .fdo import FdoRegistry
from .identifiers import PrefixMap
from .operations import OperationsRegistry
from .schemas import SchemaRegistry
from .terminology import TerminologyRegistry


@dataclass
class Engine:
    """All registries over one prefix map: terminology, schema, and operations
    services plus the record store."""

    prefix_map: PrefixMap
    terminology: TerminologyRegistry
    schemas: SchemaRegistry
    crosswalks: CrosswalkRegistry
    operations: OperationsRegistry
    fdos: FdoRegistry

    @classmethod
    def empty(cls, prefix_map: PrefixMap | None = None) -> "Engine":
        prefix_map = prefix_map or PrefixMap()
        terminology = TerminologyRegistry(prefix_map)
        schemas = SchemaRegistry(terminology)
        crosswalks = CrosswalkRegistry(schemas)
        operations = OperationsRegistry(schemas, crosswalks)
        fdos = FdoRegistry(terminology, schemas, crosswalks)
        return cls(
            prefix_map=prefix_map,
            terminology=terminology,
            schemas=schemas,
            crosswalks=crosswalks,
            operations=operations,
            fdos=fdos,
        )
