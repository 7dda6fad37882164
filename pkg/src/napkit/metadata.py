"""Per-sample metadata: labels, predictions, display assets.

Metadata is joined onto activation patterns for inspection only; it never
enters the clustering itself. Records live in newline-delimited JSON with
fields ``sample_id``, ``label``, ``prediction``, ``image_ref``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from napkit.errors import DataError, FormatError, IoError

_FIELDS = ("sample_id", "label", "prediction", "image_ref")


@dataclass(frozen=True)
class SampleMetadata:
    sample_id: int
    label: str | None = None
    prediction: str | None = None
    image_ref: str | None = None

    def __post_init__(self):
        if not isinstance(self.sample_id, int) or self.sample_id < 0:
            raise DataError(f"sample_id must be a non-negative integer, got {self.sample_id!r}")
        for name in ("label", "prediction", "image_ref"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise DataError(f"{name} must be a string when present, got {value!r}")

    @property
    def mispredicted(self) -> bool:
        """True when label and prediction are both present and disagree."""
        return (
            self.label is not None
            and self.prediction is not None
            and self.label != self.prediction
        )


class MetadataTable:
    """Immutable mapping from sample id to its metadata record.

    Accepts either an iterable of records or a ready ``{sample_id: record}``
    mapping (whose keys must equal each record's own id).
    """

    def __init__(self, records=()):
        table: dict[int, SampleMetadata] = {}
        if isinstance(records, dict):
            for key, record in records.items():
                if key != record.sample_id:
                    raise DataError(
                        f"mapping key {key} disagrees with record id {record.sample_id}"
                    )
            records = records.values()
        for record in records:
            if record.sample_id in table:
                raise DataError(f"duplicate sample_id {record.sample_id}")
            table[record.sample_id] = record
        self._table = table

    @property
    def records(self) -> dict[int, SampleMetadata]:
        """A copy of the underlying ``{sample_id: record}`` mapping."""
        return dict(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, sample_id: int) -> bool:
        return sample_id in self._table

    def __iter__(self) -> Iterator[SampleMetadata]:
        return iter(sorted(self._table.values(), key=lambda r: r.sample_id))

    def get(self, sample_id: int) -> SampleMetadata | None:
        return self._table.get(sample_id)


def load_metadata(path: str | Path) -> MetadataTable:
    """Read a metadata file. Unknown fields warn and are dropped; missing
    fields stay absent rather than being defaulted."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read metadata file {path}: {exc}") from exc

    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{lineno}: invalid record: {exc}") from exc
        if not isinstance(raw, dict):
            raise FormatError(f"{path}:{lineno}: record must be an object, got {type(raw).__name__}")
        if "sample_id" not in raw:
            raise FormatError(f"{path}:{lineno}: record without sample_id")
        unknown = sorted(set(raw) - set(_FIELDS))
        if unknown:
            warnings.warn(f"{path}:{lineno}: ignoring unknown metadata fields {unknown}")
        try:
            records.append(SampleMetadata(**{k: raw[k] for k in _FIELDS if k in raw}))
        except DataError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return MetadataTable(records)


def metadata_record(record: SampleMetadata) -> dict:
    """Record as a plain dict; absent optional fields stay absent."""
    entry: dict = {"sample_id": record.sample_id}
    for name in ("label", "prediction", "image_ref"):
        value = getattr(record, name)
        if value is not None:
            entry[name] = value
    return entry


def save_metadata(table: MetadataTable, path: str | Path) -> None:
    """Write records as newline-delimited JSON, sorted by sample id."""
    lines = [json.dumps(metadata_record(record), sort_keys=True) for record in table]
    try:
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write metadata file {path}: {exc}") from exc
