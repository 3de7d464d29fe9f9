"""Reference picker over a pleasure/arousal-annotated sample table.

Given a CSV of samples annotated with pleasure and arousal, returns
the k nearest samples to any target point by Euclidean distance, and
the per-corner reference sets for all nine corner targets (k defaults
to 10). Ties break by dataset row order, which keeps runs reproducible;
a linear scan is plenty at this scale.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .emotion import PleasureArousal, corner_targets, pa_distance
from .errors import DuplicateId, EmptyDataset, MalformedRow, OutOfRange, ValueRangeError
from .grid import corner_key
from .numfmt import fmt6

DEFAULT_K = 10

_HEADER = ("id", "pleasure", "arousal")


@dataclass(frozen=True)
class AnnotatedSample:
    id: str
    pa: PleasureArousal


@dataclass(frozen=True)
class Dataset:
    samples: tuple[AnnotatedSample, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.samples)


def load_dataset(data: bytes | str, source: str = "") -> Dataset:
    """Parse a dataset CSV with header id,pleasure,arousal.

    Row order is preserved (it is the tie-break order). Values are
    expected already scaled to [-1, 1]; out-of-range rows are rejected
    with their row number.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRow(f"dataset is not UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(data))
    rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    if not rows:
        raise MalformedRow("empty file: expected an id,pleasure,arousal header", line=1)

    header_no, header = rows[0]
    normalized = tuple(cell.strip().lower() for cell in header)
    if normalized != _HEADER:
        raise MalformedRow(
            f"row {header_no}: header must be 'id,pleasure,arousal'", line=header_no)

    samples: list[AnnotatedSample] = []
    seen: dict[str, int] = {}
    for row_no, row in rows[1:]:
        if len(row) != 3:
            raise MalformedRow(
                f"row {row_no}: expected 3 columns, got {len(row)}", line=row_no)
        sample_id = row[0].strip()
        if not sample_id:
            raise MalformedRow(f"row {row_no}: empty id", line=row_no)
        if sample_id in seen:
            raise DuplicateId(
                f"duplicate id '{sample_id}' (rows {seen[sample_id]} and {row_no})",
                line=row_no)
        seen[sample_id] = row_no
        values = []
        for column, cell in zip(("pleasure", "arousal"), row[1:]):
            try:
                values.append(float(cell))
            except ValueError:
                raise MalformedRow(
                    f"row {row_no}: {column} is not a number: '{cell}'",
                    line=row_no) from None
        try:
            pa = PleasureArousal(values[0], values[1])
        except OutOfRange as exc:
            raise MalformedRow(f"row {row_no}: {exc.message}", line=row_no) from None
        samples.append(AnnotatedSample(id=sample_id, pa=pa))
    return Dataset(samples=tuple(samples), source=source)


def knn_pick(dataset: Dataset, target: PleasureArousal, k: int) -> list[tuple[str, float]]:
    """The min(k, n) samples nearest to target, distances ascending,
    exact ties broken by dataset row order."""
    if k < 1:
        raise ValueRangeError(f"k must be >= 1, got {k}")
    if not dataset.samples:
        raise EmptyDataset("dataset has no samples")
    ranked = sorted(
        range(len(dataset.samples)),
        key=lambda i: (pa_distance(dataset.samples[i].pa, target), i),
    )
    return [
        (dataset.samples[i].id, pa_distance(dataset.samples[i].pa, target))
        for i in ranked[:k]
    ]


def corner_reference_sets(
    dataset: Dataset, k: int = DEFAULT_K
) -> dict[tuple[int, int], list[tuple[str, float]]]:
    """knn_pick for each of the nine corner targets, keyed by (p, a)."""
    return {
        (int(target.p), int(target.a)): knn_pick(dataset, target, k)
        for target in corner_targets()
    }


def picks_to_json(picks: list[tuple[str, float]]) -> str:
    items = ",\n".join(
        f'  {{"id": {_json_str(sample_id)}, "distance": {fmt6(distance)}}}'
        for sample_id, distance in picks
    )
    return "[\n" + items + "\n]\n" if picks else "[]\n"


def corner_sets_to_json(sets: dict[tuple[int, int], list[tuple[str, float]]]) -> str:
    """JSON map corner -> [{id, distance}], corners in canonical order."""
    blocks = []
    for corner, picks in sets.items():
        rows = ",\n".join(
            f'    {{"id": {_json_str(sample_id)}, "distance": {fmt6(distance)}}}'
            for sample_id, distance in picks
        )
        body = "[\n" + rows + "\n  ]" if picks else "[]"
        blocks.append(f'  "{corner_key(corner)}": {body}')
    return "{\n" + ",\n".join(blocks) + "\n}\n"


def reference_summary(sets: dict[tuple[int, int], list[tuple[str, float]]]) -> tuple[int, int]:
    """(total references, unique sample ids); duplicates across corners kept as-is."""
    ids = [sample_id for picks in sets.values() for sample_id, _ in picks]
    return len(ids), len(set(ids))


def _json_str(text: str) -> str:
    import json

    return json.dumps(text)
