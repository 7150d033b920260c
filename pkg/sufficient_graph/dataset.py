"""CSV ingestion of sample matrices and ground-truth edge lists"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .errors import DatasetError, InvalidTruth
from .types import GroundTruth, Pair, SampleMatrix

logger = logging.getLogger(__name__)

MIN_SAMPLES = 4
MIN_VARIABLES = 3

PathLike = Union[str, Path]


def _read_cells(path: PathLike) -> pd.DataFrame:
    """Every cell as stripped text; short rows show up as missing cells"""
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"No such file: {path}")
    try:
        frame = pd.read_csv(
            path, header=None, dtype=str, keep_default_na=False, skip_blank_lines=True
        )
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"{path} is empty") from e
    except pd.errors.ParserError as e:
        # pandas reports "Expected k fields in line r, saw m"
        match = re.search(r"line (\d+)", str(e))
        row = int(match.group(1)) if match else None
        raise DatasetError(f"Ragged row in {path}: {e}", row=row) from e
    return frame.apply(lambda column: column.str.strip())


def _is_number(cell) -> bool:
    if not isinstance(cell, str) or not cell:
        return False
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _has_header(frame: pd.DataFrame) -> bool:
    return not all(_is_number(cell) for cell in frame.iloc[0])


def ingest_csv(path: PathLike) -> SampleMatrix:
    """Read an n x p numeric CSV with an optional header row

    The header is detected by a non-numeric cell in the first row. Its cells
    become the column labels.

    Raises:
        DatasetError: For ragged rows, non-numeric or non-finite cells, or
            fewer than 4 samples or 3 variables, naming the 1-based row and column
    """
    frame = _read_cells(path)
    header = _has_header(frame)
    labels = tuple(frame.iloc[0]) if header else ()
    body = frame.iloc[1:] if header else frame
    offset = 2 if header else 1

    missing = body.isna().to_numpy()
    if missing.any():
        row, _ = np.argwhere(missing)[0]
        raise DatasetError(f"Ragged row in {path}: too few fields", row=int(row) + offset)

    numeric = body.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = ~np.isfinite(numeric)
    if bad.any():
        row, column = np.argwhere(bad)[0]
        cell = body.iat[row, column]
        raise DatasetError(
            f"Cell {cell!r} in {path} is not a finite number",
            row=int(row) + offset,
            column=int(column) + 1,
        )

    n, p = numeric.shape
    if n < MIN_SAMPLES:
        raise DatasetError(f"{path} has {n} samples; at least {MIN_SAMPLES} are needed")
    if p < MIN_VARIABLES:
        raise DatasetError(f"{path} has {p} variables; at least {MIN_VARIABLES} are needed")

    logger.info(f"Read {n} x {p} samples from {path}")
    return SampleMatrix(numeric, labels=labels)


def resolve_node(token: str, labels: Sequence[str]) -> Optional[int]:
    """0-based index of a node given by label or 1-based index"""
    if token in labels:
        return list(labels).index(token)
    try:
        value = int(token)
    except ValueError:
        return None
    return value - 1


def ingest_truth(path: PathLike, labels: Sequence[str]) -> GroundTruth:
    """Read a two-column edge list of node labels or 1-based indices

    A first row that resolves to no node is treated as a header.

    Raises:
        DatasetError: If a row does not have two resolvable nodes
        InvalidTruth: If an edge is out of range or a self-loop
    """
    frame = _read_cells(path)
    if frame.shape[1] != 2:
        raise DatasetError(f"Edge list {path} must have 2 columns, found {frame.shape[1]}")

    edges: List[Pair] = []
    for row, (left, right) in enumerate(frame.itertuples(index=False, name=None), start=1):
        i, j = resolve_node(left, labels), resolve_node(right, labels)
        if row == 1 and i is None and j is None:
            continue
        if i is None or j is None:
            raise DatasetError(f"Unknown node in edge list {path}", row=row)
        if i == j:
            raise InvalidTruth(f"Self-loop on node {left!r} in {path} row {row}")
        edges.append((i, j))
    return GroundTruth(p=len(labels), edges=frozenset(edges))
