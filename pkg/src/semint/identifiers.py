"""Identifier handling: absolute IRIs, CURIEs, and explicit prefix maps.

Identifiers are canonicalized to their absolute form once, at the edge of the
system; everything downstream compares canonical strings byte-wise. Prefix
resolution is purely local configuration, never a network lookup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidGupri

__all__ = ["Gupri", "PrefixMap", "is_absolute_iri", "local_name"]

# scheme://... style IRIs plus URNs; anything else with a colon is a CURIE
_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*://\S+$")
_URN_RE = re.compile(r"^urn:[A-Za-z0-9][A-Za-z0-9\-]{0,31}:\S+$", re.IGNORECASE)
_CURIE_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_.\-]*):(\S+)$")
_PREFIX_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def is_absolute_iri(value: str) -> bool:
    """True when the value needs no prefix expansion."""
    return bool(_IRI_RE.match(value) or _URN_RE.match(value))


def local_name(iri: str) -> str:
    """Trailing segment of an IRI, after the last ``#``, ``/``, or ``:``."""
    for sep in ("#", "/", ":"):
        if sep in iri:
            tail = iri.rsplit(sep, 1)[1]
            if tail:
                return tail
    return iri


@dataclass(frozen=True, order=True)
class Gupri:
    """A globally unique persistent resolvable identifier in canonical form.

    Construct via :meth:`PrefixMap.gupri`; two Gupris are equal iff their
    canonical absolute forms are byte-equal. Holding only absolute forms is
    what makes that equality sound, so construction enforces it.
    """

    canonical: str

    def __post_init__(self):
        if not is_absolute_iri(self.canonical):
            raise InvalidGupri(f"not a canonical absolute identifier: {self.canonical!r}")

    def __str__(self) -> str:
        return self.canonical


class PrefixMap:
    """Registered prefix bindings used to expand CURIEs and compress IRIs."""

    def __init__(self, bindings: Mapping[str, str] | None = None):
        self._bindings: dict[str, str] = {}
        if bindings:
            for prefix, iri in bindings.items():
                self.register(prefix, iri)

    def register(self, prefix: str, iri: str) -> None:
        if not _PREFIX_RE.match(prefix):
            raise InvalidGupri(f"invalid prefix {prefix!r}")
        if not is_absolute_iri(iri):
            raise InvalidGupri(f"prefix {prefix!r} must expand to an absolute IRI, got {iri!r}")
        self._bindings[prefix] = iri

    def bindings(self) -> list[tuple[str, str]]:
        return sorted(self._bindings.items())

    def __contains__(self, prefix: str) -> bool:
        return prefix in self._bindings

    def canonicalize(self, value: str) -> str:
        """Expand a CURIE or pass an absolute IRI through, idempotently."""
        if not isinstance(value, str):
            raise InvalidGupri(f"identifier must be a string, got {type(value).__name__}")
        value = value.strip()
        if not value:
            raise InvalidGupri("empty identifier")
        if any(c.isspace() for c in value):
            raise InvalidGupri(f"identifier contains whitespace: {value!r}")
        if is_absolute_iri(value):
            return value
        match = _CURIE_RE.match(value)
        if not match:
            raise InvalidGupri(f"not an absolute IRI or CURIE: {value!r}")
        prefix, local = match.groups()
        expansion = self._bindings.get(prefix)
        if expansion is None:
            raise InvalidGupri(f"unregistered prefix {prefix!r} in {value!r}")
        return expansion + local

    def gupri(self, value: str | Gupri) -> Gupri:
        if isinstance(value, Gupri):
            return value
        return Gupri(self.canonicalize(value))

    def compress(self, iri: str) -> str:
        """CURIE form under the longest matching binding, or the IRI itself.

        Deterministic: longest expansion wins, ties broken by prefix name.
        """
        best: tuple[int, str] | None = None
        for prefix, expansion in self.bindings():
            if iri.startswith(expansion) and len(iri) > len(expansion):
                key = (len(expansion), prefix)
                if best is None or key[0] > best[0]:
                    best = (len(expansion), prefix)
        if best is None:
            return iri
        _, prefix = best
        return f"{prefix}:{iri[len(self._bindings[prefix]):]}"

    def gupris(self, values: Iterable[str]) -> list[Gupri]:
        return [self.gupri(v) for v in values]
