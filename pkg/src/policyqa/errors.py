"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PolicyQAError(Exception):
    """Base class for all errors raised by this package."""


# --- document normalization ---

class EmptyDocument(PolicyQAError):
    """No visible text remained after stripping markup and noise."""


class MalformedInput(PolicyQAError):
    """The input markup could not be tokenized at all."""


class SpanOutOfRange(PolicyQAError):
    """A character span does not fit inside the document text."""


# --- metric catalog ---

class CatalogError(PolicyQAError):
    """Base class for metric catalog loading problems."""


class CatalogParseError(CatalogError):
    """The catalog file is not valid JSON or not the expected shape."""


class DuplicateMetricName(CatalogError):
    """Two metrics in one catalog share a name."""


class TypeMismatch(CatalogError):
    """A target value does not match the declared data type, or an
    assessment comparison was attempted between incompatible values."""


# --- embeddings ---

class HeaderMismatch(PolicyQAError):
    """Vector file header is not ``vocab_size dimension``."""


class DimensionMismatch(PolicyQAError):
    """A vector has a different dimension than the table."""


class EmptyVocabulary(PolicyQAError):
    """Vector file contains no word entries."""


# --- remote answering backend ---

class RemoteError(PolicyQAError):
    """Base class for remote answering backend failures."""


class RemoteUnavailable(RemoteError):
    """The answering endpoint could not be reached."""


class RemoteTimeout(RemoteError):
    """The answering endpoint did not respond within the timeout."""


class RemoteMalformedResponse(RemoteError):
    """The answering endpoint returned an invalid or inconsistent payload."""


# --- pipelines ---

class EmptyKeywords(PolicyQAError):
    """A similarity pipeline was run with no usable keyword lemmas."""


class SpanMappingError(PolicyQAError):
    """An answer span could not be mapped back to document offsets."""


# --- evaluation ---

class SpanTextMismatch(PolicyQAError):
    """An annotation's recorded text differs from the document substring."""
