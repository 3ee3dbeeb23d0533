"""Interactive-annotation session machinery.

A session encodes extreme points, asks a pluggable segmenter for a mask,
scores it, then loops: sample a corrective click from the largest error
blob, re-encode with the grown click set, re-segment, re-score, until the
IoU target is reached or the click budget runs out.  Includes two
reference segmenters and the clicks@IoU summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .clicksim import (
    Rng,
    as_mask,
    extract_extreme_points,
    perturb_points,
    sample_corrective_click,
    select_three_points,
)
from .encoder import ClickSet, SFGParams, bounding_box, encode
from .geometry import BoundingBox


def iou(a, b) -> float:
    """Intersection over union of two masks; 1.0 when both are empty."""
    ma = as_mask(a, "a")
    mb = as_mask(b, "b")
    if ma.shape != mb.shape:
        raise ValueError(f"mask dimensions differ: {ma.shape} vs {mb.shape}")
    union = int(np.logical_or(ma, mb).sum())
    if union == 0:
        return 1.0
    inter = int(np.logical_and(ma, mb).sum())
    return inter / union


class Segmenter(Protocol):
    """Anything that turns a guidance field into a mask.

    The accumulated click set is passed along so reference segmenters that
    react to clicks (like the degraded oracle) can use it; segmenters are
    free to ignore it, as is the optional image.
    """

    def segment(
        self,
        fld: np.ndarray,
        bbox: BoundingBox,
        clicks: ClickSet | None = None,
        image: np.ndarray | None = None,
    ) -> np.ndarray: ...


@dataclass(frozen=True)
class ThresholdSegmenter:
    """Superlevel-set segmenter: field >= level, restricted to the box."""

    level: float

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")

    def segment(self, fld, bbox, clicks=None, image=None) -> np.ndarray:
        arr = np.asarray(fld, dtype=np.float64)
        out = np.zeros(arr.shape, dtype=bool)
        rows, cols = bbox.slices
        out[rows, cols] = arr[rows, cols] >= self.level
        return out


class OracleSegmenter:
    """Ground truth degraded by toggled square blobs, healed by clicks.

    The initial prediction XORs flip_blobs disjoint squares of roughly
    flip_size pixels into the ground truth.  On every call, each
    accumulated corrective click heals the blob containing it (or the
    nearest one), so a session needs exactly one click per blob to recover
    the ground truth.  Calls are stateless in the click set, which makes
    replays exact.
    """

    def __init__(self, gt, flip_blobs: int, flip_size: int, rng: Rng):
        if flip_blobs < 0:
            raise ValueError(f"flip_blobs must be >= 0, got {flip_blobs}")
        if flip_blobs > 0 and flip_size < 1:
            raise ValueError(f"flip_size must be >= 1, got {flip_size}")
        self.gt = as_mask(gt, "gt").copy()
        height, width = self.gt.shape
        side = max(1, round(float(flip_size) ** 0.5))
        if side > min(height, width):
            raise ValueError("flip_size too large for the grid")
        gen = rng.generator()
        blobs: list[tuple[int, int, int]] = []
        attempts = 0
        while len(blobs) < flip_blobs:
            attempts += 1
            if attempts > 10000:
                raise RuntimeError("could not place disjoint degradation blobs")
            r = int(gen.integers(0, height - side + 1))
            c = int(gen.integers(0, width - side + 1))
            # keep a 2 px gap so blobs stay separate error components
            if all(
                r + side + 2 <= br or br + side + 2 <= r or c + side + 2 <= bc or bc + side + 2 <= c
                for br, bc, _ in blobs
            ):
                blobs.append((r, c, side))
        self.blobs = blobs

    def _nearest_blob(self, row: float, col: float) -> int:
        best = -1
        best_d2 = np.inf
        for idx, (r, c, side) in enumerate(self.blobs):
            dr = max(r - row, 0.0, row - (r + side - 1))
            dc = max(c - col, 0.0, col - (c + side - 1))
            d2 = dr * dr + dc * dc
            if d2 < best_d2:
                best_d2 = d2
                best = idx
        return best

    def segment(self, fld, bbox, clicks=None, image=None) -> np.ndarray:
        healed: set[int] = set()
        if clicks is not None and self.blobs:
            for row, col in np.concatenate([clicks.fpc, clicks.fnc]):
                healed.add(self._nearest_blob(float(row), float(col)))
        pred = self.gt.copy()
        for idx, (r, c, side) in enumerate(self.blobs):
            if idx not in healed:
                pred[r : r + side, c : c + side] ^= True
        return pred


@dataclass(frozen=True)
class SessionProtocol:
    """Session settings: starting click count, budget, target, and noise."""

    start_k: int = 4
    max_clicks: int = 20
    target_iou: float = 0.85
    noise_px: float = 0.0
    params: SFGParams = field(default_factory=SFGParams)

    def __post_init__(self):
        if self.start_k not in (3, 4):
            raise ValueError(f"start_k must be 3 or 4, got {self.start_k}")
        if self.max_clicks < self.start_k:
            raise ValueError("max_clicks must be >= start_k")
        if not 0.0 < self.target_iou <= 1.0:
            raise ValueError(f"target_iou must be in (0, 1], got {self.target_iou}")
        if self.noise_px < 0:
            raise ValueError(f"noise_px must be >= 0, got {self.noise_px}")


@dataclass(frozen=True)
class SessionStep:
    """One scored step: cumulative clicks, what was clicked, IoU after."""

    click_count: int
    click_kind: str  # EP, FPC, or FNC
    iou: float


@dataclass(frozen=True)
class SessionRecord:
    """Full log of one interactive session."""

    object_id: str
    steps: tuple[SessionStep, ...]
    terminal: str  # target_reached, budget_exhausted, or aborted
    budget: int
    seed: int
    error: str | None = None

    @property
    def final_iou(self) -> float:
        return self.steps[-1].iou if self.steps else 0.0

    @property
    def corrective_clicks(self) -> int:
        return sum(1 for s in self.steps if s.click_kind != "EP")


def run_session(
    gt,
    segmenter: Segmenter,
    protocol: SessionProtocol,
    rng: Rng,
    object_id: str = "object",
    image: np.ndarray | None = None,
) -> SessionRecord:
    """Run one interactive session against a ground-truth mask.

    Extreme points are extracted once (dropped to 3 via the closest-pair
    rule when start_k is 3), perturbed once, and never changed afterwards;
    corrective clicks accumulate across steps.  Segmenter exceptions abort
    the session with the error recorded.
    """
    mask = as_mask(gt, "gt")
    dims = mask.shape
    eps = extract_extreme_points(mask)
    if protocol.start_k == 3:
        eps = select_three_points(eps, rng.child(0))
    eps = perturb_points(eps, protocol.noise_px, rng.child(1), dims=dims)

    clicks = ClickSet.empty()
    box = bounding_box(eps, protocol.params.bbox_margin, dims)
    steps: list[SessionStep] = []
    click_count = protocol.start_k

    def step_once(kind: str) -> float:
        fld = encode(eps, clicks, protocol.params, dims)
        pred = segmenter.segment(fld, box, clicks=clicks, image=image)
        score = iou(pred, mask)
        steps.append(SessionStep(click_count=click_count, click_kind=kind, iou=score))
        return score

    try:
        fld = encode(eps, clicks, protocol.params, dims)
        pred = segmenter.segment(fld, box, clicks=clicks, image=image)
    except Exception as exc:  # noqa: BLE001 - any segmenter failure aborts
        return SessionRecord(
            object_id=object_id,
            steps=tuple(steps),
            terminal="aborted",
            budget=protocol.max_clicks,
            seed=rng.seed,
            error=f"{type(exc).__name__}: {exc}",
        )
    score = iou(pred, mask)
    steps.append(SessionStep(click_count=click_count, click_kind="EP", iou=score))

    step_index = 0
    while score < protocol.target_iou and click_count < protocol.max_clicks:
        click = sample_corrective_click(pred, mask, "test", rng.child(2, step_index))
        if click is None:
            break
        step_index += 1
        clicks = clicks.add(click.location, click.polarity)
        click_count += 1
        try:
            fld = encode(eps, clicks, protocol.params, dims)
            pred = segmenter.segment(fld, box, clicks=clicks, image=image)
        except Exception as exc:  # noqa: BLE001
            return SessionRecord(
                object_id=object_id,
                steps=tuple(steps),
                terminal="aborted",
                budget=protocol.max_clicks,
                seed=rng.seed,
                error=f"{type(exc).__name__}: {exc}",
            )
        score = iou(pred, mask)
        steps.append(SessionStep(click_count=click_count, click_kind=click.polarity, iou=score))

    terminal = "target_reached" if score >= protocol.target_iou else "budget_exhausted"
    return SessionRecord(
        object_id=object_id,
        steps=tuple(steps),
        terminal=terminal,
        budget=protocol.max_clicks,
        seed=rng.seed,
    )


@dataclass(frozen=True)
class ClicksAtIoUSummary:
    """Batch summary: mean clicks to reach a target IoU.

    Sessions that never reach the target are charged their full budget and
    counted in unreached.  mean_iou_by_clicks carries the last IoU forward
    for sessions that stopped early.
    """

    target: float
    mean_clicks: float
    unreached: int
    total: int
    mean_iou_by_clicks: dict[int, float]


def clicks_at_iou(records, target: float) -> ClicksAtIoUSummary:
    """Summarize sessions by the click count needed to reach target IoU."""
    records = list(records)
    if not records:
        raise ValueError("no session records to summarize")
    clicks_needed = []
    unreached = 0
    for rec in records:
        needed = None
        for step in rec.steps:
            if step.iou >= target:
                needed = step.click_count
                break
        if needed is None:
            needed = rec.budget
            unreached += 1
        clicks_needed.append(needed)

    max_count = max(s.click_count for rec in records for s in rec.steps)
    by_clicks: dict[int, float] = {}
    for k in range(min(s.click_count for rec in records for s in rec.steps), max_count + 1):
        values = []
        for rec in records:
            last = None
            for step in rec.steps:
                if step.click_count <= k:
                    last = step.iou
            if last is not None:
                values.append(last)
        if values:
            by_clicks[k] = float(np.mean(values))
    return ClicksAtIoUSummary(
        target=target,
        mean_clicks=float(np.mean(clicks_needed)),
        unreached=unreached,
        total=len(records),
        mean_iou_by_clicks=by_clicks,
    )
