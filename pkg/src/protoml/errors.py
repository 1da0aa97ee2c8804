"""Typed errors raised by the protoml toolkit.

Every failure mode callers are expected to handle has its own class so the
CLI and service can map errors to exit codes / HTTP statuses without string
matching.
"""


class ProtomlError(Exception):
    """Base class for all toolkit errors."""


# notebook model
class MalformedNotebook(ProtomlError):
    """File is not parseable as a notebook interchange document."""


class UnsupportedVersion(ProtomlError):
    """Notebook format version outside the supported range (major 4 only)."""


# dataflow / rendering
class UnknownFormat(ProtomlError):
    """Requested export format is not one of the supported names."""


class GeneratorUnavailable(ProtomlError):
    """External text generator could not produce a response."""


# recorder store
class StoreCorrupt(ProtomlError):
    """Snapshot store violates its structural invariants on load."""


class StoreLocked(ProtomlError):
    """Another writer currently holds the store lock."""


class UnknownNode(ProtomlError):
    """Referenced snapshot node does not exist in the store."""


class FileVanished(ProtomlError):
    """Watched notebook file disappeared between polls."""


# reviewer
class InvalidCatalog(ProtomlError):
    """Rule/persona catalog failed validation; message carries the location."""


# recommender
class EmptyCorpus(ProtomlError):
    """Index build requested over an empty corpus."""


class NoNotebooksFound(ProtomlError):
    """Corpus ingestion found no parseable notebook files."""


# card generator
class HashMismatch(ProtomlError):
    """Card inputs were computed from different notebook states."""


# knowledge catalog
class InvalidSource(ProtomlError):
    """Knowledge source violates its invariants (bad slug, unknown kind)."""


class DuplicateId(ProtomlError):
    """Knowledge source slug already present in the catalog."""


class UnknownSource(ProtomlError):
    """Referenced knowledge source does not exist."""


class DanglingLink(ProtomlError):
    """Trace link target is syntactically invalid."""


class InvalidWeights(ProtomlError):
    """Suitability weights are negative or do not sum to 1."""
