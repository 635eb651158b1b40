"""Input loading, validation and column arrays."""

from .alphabet import SENTINEL, SENTINEL_CODE, Alphabet
from .collection import (
    ColumnSet,
    ColumnWriter,
    Record,
    StringCollection,
    compute_columns,
    iter_records,
    load_collection,
    stream_columns,
)

__all__ = [
    "SENTINEL",
    "SENTINEL_CODE",
    "Alphabet",
    "ColumnSet",
    "ColumnWriter",
    "Record",
    "StringCollection",
    "compute_columns",
    "iter_records",
    "load_collection",
    "stream_columns",
]
