"""Dataset ingestion for (smiles_1, smiles_2, label) interaction files.

Files are UTF-8, comma- or tab-delimited, with a header row naming the
columns smiles_1, smiles_2, label (extra columns are ignored). Rows
whose SMILES fall outside the supported subset are quarantined with the
parse error and 1-based line number rather than failing the load;
structurally broken rows (missing fields, non-integer labels) abort it.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EmptyDatasetError,
    MalformedRowError,
    MissingColumnError,
    SmilesError,
)
from .smiles import FeaturedGraph, featurize, parse_smiles

REQUIRED_COLUMNS = ("smiles_1", "smiles_2", "label")


@dataclass
class DDISample:
    smiles_1: str
    smiles_2: str
    label: int


@dataclass
class QuarantinedRow:
    line: int
    reason: str


@dataclass
class LoadResult:
    samples: list[DDISample]
    n_classes: int
    quarantined: list[QuarantinedRow]


def dataset_digest(path) -> str:
    """sha256 of the raw file bytes, for tying metrics to exact data."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_dataset(path) -> LoadResult:
    """Read a delimited interaction file; returns usable samples, the
    class count C = 1 + max label, and the quarantine report."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise EmptyDatasetError(f"{path}: empty file")
    delimiter = "\t" if "\t" in lines[0] else ","
    reader = csv.reader(lines, delimiter=delimiter)
    header = next(reader)
    columns = [c.strip() for c in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise MissingColumnError(f"{path}: header lacks {', '.join(missing)}")
    idx = {c: columns.index(c) for c in REQUIRED_COLUMNS}
    width = max(idx.values()) + 1

    samples: list[DDISample] = []
    quarantined: list[QuarantinedRow] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) < width:
            raise MalformedRowError(
                f"{path}:{line_no}: expected {width}+ fields, got {len(row)}")
        s1 = row[idx["smiles_1"]].strip()
        s2 = row[idx["smiles_2"]].strip()
        raw_label = row[idx["label"]].strip()
        try:
            label = int(raw_label)
        except ValueError:
            raise MalformedRowError(
                f"{path}:{line_no}: label {raw_label!r} is not an integer") from None
        if label < 0:
            raise MalformedRowError(f"{path}:{line_no}: negative label {label}")
        try:
            parse_smiles(s1)
            parse_smiles(s2)
        except SmilesError as exc:
            quarantined.append(QuarantinedRow(line_no, str(exc)))
            continue
        samples.append(DDISample(s1, s2, label))

    if not samples:
        raise EmptyDatasetError(f"{path}: no usable samples")
    n_classes = 1 + max(s.label for s in samples)
    return LoadResult(samples, n_classes, quarantined)


def featurize_samples(samples: list[DDISample]) -> list[tuple[FeaturedGraph, FeaturedGraph]]:
    """Parse and featurize every sample once, caching per distinct SMILES."""
    cache: dict[str, FeaturedGraph] = {}

    def get(smiles: str) -> FeaturedGraph:
        if smiles not in cache:
            cache[smiles] = featurize(parse_smiles(smiles))
        return cache[smiles]

    return [(get(s.smiles_1), get(s.smiles_2)) for s in samples]
