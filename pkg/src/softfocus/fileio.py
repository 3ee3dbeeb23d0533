"""File formats: the SFF1 binary field container, the JSON click document,
PNG mask ingestion, and the CSV / session-report writers.

SFF1 layout: 4-byte magic "SFF1", height and width as unsigned 32-bit
little-endian, then height*width 32-bit little-endian floats, row-major.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError
from .robustness import EXPORT_COLUMNS, RobustnessReport, export_density
from .session import SessionRecord

SFF_MAGIC = b"SFF1"

_SUPPORTED_PNG_MODES = ("1", "L", "P", "I", "I;16")


def save_field(path, fld: np.ndarray) -> None:
    """Write a field as SFF1 (values downcast to 32-bit floats)."""
    arr = np.asarray(fld, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"field must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("field contains non-finite values")
    height, width = arr.shape
    payload = arr.astype("<f4").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(SFF_MAGIC)
        fh.write(struct.pack("<II", height, width))
        fh.write(payload)


def load_field(path) -> np.ndarray:
    """Read an SFF1 file back as a float64 field."""
    data = Path(path).read_bytes()
    if len(data) < 12:
        raise FormatError(f"{path}: truncated header ({len(data)} bytes)")
    if data[:4] != SFF_MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}, expected {SFF_MAGIC!r}")
    height, width = struct.unpack("<II", data[4:12])
    expected = 12 + 4 * height * width
    if len(data) != expected:
        raise FormatError(
            f"{path}: payload length {len(data) - 12} does not match "
            f"{height}x{width} header (expected {expected - 12} bytes)"
        )
    values = np.frombuffer(data, dtype="<f4", offset=12).reshape(height, width)
    if not np.isfinite(values).all():
        raise FormatError(f"{path}: payload contains non-finite values")
    return values.astype(np.float64)


@dataclass(frozen=True)
class ClickDocument:
    """Parsed click file: extreme points, corrective clicks, optional grid."""

    extreme_points: np.ndarray
    fpc: np.ndarray
    fnc: np.ndarray
    grid: tuple[int, int] | None = None
    seed: int | None = None


def _coord_list(obj, key: str) -> np.ndarray:
    raw = obj.get(key, [])
    if raw is None:
        raw = []
    try:
        arr = np.asarray(raw, dtype=np.float64).reshape(-1, 2)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"click file key '{key}' is not a list of [row, col] pairs") from exc
    if arr.size and not np.isfinite(arr).all():
        raise FormatError(f"click file key '{key}' contains non-finite coordinates")
    return arr


def load_clicks(path) -> ClickDocument:
    """Read a JSON click document and validate coordinates against its grid."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: top level must be an object")
    eps = _coord_list(obj, "extreme_points")
    fpc = _coord_list(obj, "fpc")
    fnc = _coord_list(obj, "fnc")
    grid = obj.get("grid")
    if grid is not None:
        try:
            height, width = int(grid[0]), int(grid[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise FormatError(f"{path}: grid must be [height, width]") from exc
        if height < 1 or width < 1:
            raise FormatError(f"{path}: grid must be positive, got {grid}")
        for name, arr in (("extreme_points", eps), ("fpc", fpc), ("fnc", fnc)):
            if arr.size and (
                (arr[:, 0] < 0).any()
                or (arr[:, 0] > height - 1).any()
                or (arr[:, 1] < 0).any()
                or (arr[:, 1] > width - 1).any()
            ):
                raise FormatError(f"{path}: {name} coordinates fall outside grid {grid}")
        grid = (height, width)
    seed = obj.get("seed")
    return ClickDocument(extreme_points=eps, fpc=fpc, fnc=fnc, grid=grid,
                         seed=None if seed is None else int(seed))


def save_clicks(path, extreme_points, fpc=(), fnc=(), grid=None, seed=None) -> None:
    """Write a JSON click document; key order and layout are fixed."""
    doc: dict = {
        "extreme_points": [[float(r), float(c)] for r, c in np.asarray(extreme_points).reshape(-1, 2)],
        "fpc": [[float(r), float(c)] for r, c in np.asarray(fpc).reshape(-1, 2)],
        "fnc": [[float(r), float(c)] for r, c in np.asarray(fnc).reshape(-1, 2)],
    }
    if grid is not None:
        doc["grid"] = [int(grid[0]), int(grid[1])]
    if seed is not None:
        doc["seed"] = int(seed)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_mask(path, label: int | None = None) -> np.ndarray:
    """Read a PNG mask: nonzero pixels are foreground.

    For palette masks, label selects one index value as the foreground.
    Only 8/16-bit single-channel or palette PNGs are accepted.
    """
    try:
        img = Image.open(path)
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise FormatError(f"{path}: not a readable image ({exc})") from exc
    if img.format != "PNG":
        raise FormatError(f"{path}: unsupported format {img.format!r}, expected PNG")
    if img.mode not in _SUPPORTED_PNG_MODES:
        raise FormatError(
            f"{path}: unsupported color mode {img.mode!r}; "
            "expected an 8- or 16-bit single-channel or palette PNG"
        )
    arr = np.asarray(img)
    if label is not None:
        return arr == label
    return arr != 0


def write_robustness_csv(path, reports: list[RobustnessReport]) -> None:
    """One CSV over all configurations, fixed header and column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EXPORT_COLUMNS)
        for report in reports:
            for row in export_density(report):
                writer.writerow([row[0], row[1], repr(row[2]), repr(row[3])])


def read_robustness_csv(path) -> list[tuple[str, int, float, float]]:
    """Read back a robustness CSV (header validated)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(EXPORT_COLUMNS):
            raise FormatError(f"{path}: unexpected CSV header {header}")
        return [(row[0], int(row[1]), float(row[2]), float(row[3])) for row in reader]


def write_session_report(path, record: SessionRecord, extra: dict | None = None) -> None:
    """Write a session record as a JSON report."""
    doc = dataclasses.asdict(record)
    doc["final_iou"] = record.final_iou
    doc["corrective_clicks"] = record.corrective_clicks
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
