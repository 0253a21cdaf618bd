"""Semantic interoperability engine.

Typed entity mappings with closure semantics, statement schemas with
slot/role/constraint structure, crosswalks that translate instances between
schemas, an operations registry for machine-actionability, and a FAIR-record
assessor, all over a plain-text store with a CLI and an HTTP facade.
"""

from .crosswalks import (
    AlignmentStatus,
    Crosswalk,
    CrosswalkLevel,
    CrosswalkProvenance,
    CrosswalkRegistry,
    CrosswalkReport,
    PlanReport,
    SlotAlignment,
    identity_crosswalk,
)
from .engine import Engine
from .errors import SemintError
from .fdo import (
    AssessmentReport,
    CertaintyLevel,
    FdoRecord,
    FdoRegistry,
    StatementCategory,
)
from .identifiers import Gupri, PrefixMap
from .operations import (
    ActionabilityClass,
    OperationDescriptor,
    OperationKind,
    OperationParam,
    OperationsRegistry,
    XInteropStatus,
)
from .schemas import (
    DatatypeTag,
    SchemaRegistry,
    SlotFill,
    SlotKind,
    SlotSpec,
    StatementInstance,
    StatementSchema,
    ValidationReport,
)
from .store import ExpandMode, FindQuery, export_store, find, init_store, load_store
from .terminology import (
    EntityMapping,
    InteropLevel,
    InteropVerdict,
    MappingPredicate,
    ReferentKind,
    TermRecord,
    TerminologyRegistry,
)

__version__ = "0.1.0"

__all__ = [
    "ActionabilityClass",
    "AlignmentStatus",
    "AssessmentReport",
    "CertaintyLevel",
    "Crosswalk",
    "CrosswalkLevel",
    "CrosswalkProvenance",
    "CrosswalkRegistry",
    "CrosswalkReport",
    "DatatypeTag",
    "Engine",
    "EntityMapping",
    "ExpandMode",
    "FdoRecord",
    "FdoRegistry",
    "FindQuery",
    "Gupri",
    "InteropLevel",
    "InteropVerdict",
    "MappingPredicate",
    "OperationDescriptor",
    "OperationKind",
    "OperationParam",
    "OperationsRegistry",
    "PlanReport",
    "PrefixMap",
    "ReferentKind",
    "SchemaRegistry",
    "SemintError",
    "SlotAlignment",
    "SlotFill",
    "SlotKind",
    "SlotSpec",
    "StatementCategory",
    "StatementInstance",
    "StatementSchema",
    "TermRecord",
    "TerminologyRegistry",
    "ValidationReport",
    "XInteropStatus",
    "export_store",
    "find",
    "identity_crosswalk",
    "init_store",
    "load_store",
]
