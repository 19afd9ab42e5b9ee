"""Planar polyline curves and the geometric operations the oscillator model needs.

A curve is an ordered vertex list in dimensionless length units together with a
per-segment flexibility flag (``True`` = elastic, ``False`` = rigid) and the
reference span ``L0`` used to normalise lengths and periods.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

# Absolute tolerance (relative to the span) used when comparing abscissae.
_X_TOL = 1e-12


class CurveError(ValueError):
    """Raised when a curve violates its structural invariants."""


def _segment_gram(p: np.ndarray, q: np.ndarray, length: np.ndarray) -> np.ndarray:
    """Exact integral of v v^T over straight segments, v = (1, x, y).

    ``p`` and ``q`` are ``(n, 2)`` endpoint arrays; returns the summed 3x3 matrix.
    """
    va = np.column_stack([np.ones(len(p)), p])
    vb = np.column_stack([np.ones(len(q)), q])
    w = length / 6.0
    g = (
        np.einsum("s,si,sj->ij", 2.0 * w, va, va)
        + np.einsum("s,si,sj->ij", w, va, vb)
        + np.einsum("s,si,sj->ij", w, vb, va)
        + np.einsum("s,si,sj->ij", 2.0 * w, vb, vb)
    )
    return g


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """Ordered polyline with per-segment flexibility flags.

    Args:
        vertices: ``(n, 2)`` array of vertex coordinates, ``n >= 2``.
        flexibility: boolean flag per segment; ``None`` means all flexible.
        base_span: reference horizontal span ``L0``.
        lengths: exact segment lengths when the construction knows them (Koch
            copies are all equal); must agree with the vertices to 1e-9.
    """

    vertices: np.ndarray
    flexibility: np.ndarray = None  # type: ignore[assignment]
    base_span: float = 1.0
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    lengths: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 2:
            raise CurveError("a curve needs at least two (x, y) vertices")
        if not np.all(np.isfinite(v)):
            raise CurveError("vertex coordinates must be finite")
        seg = np.hypot(*np.diff(v, axis=0).T)
        if np.any(seg <= 0.0):
            raise CurveError("consecutive vertices must be distinct")
        if v[-1, 0] - v[0, 0] <= 0.0:
            raise CurveError("last vertex must lie to the right of the first")
        if not self.base_span > 0:
            raise CurveError("base_span must be positive")
        if self.flexibility is None:
            flex = np.ones(len(v) - 1, dtype=bool)
        else:
            flex = np.array(self.flexibility, dtype=bool).reshape(-1)
            if len(flex) != len(v) - 1:
                raise CurveError("flexibility needs one flag per segment")
        if self.lengths is not None:
            given = np.array(self.lengths, dtype=float).reshape(-1)
            if given.shape != seg.shape or not np.allclose(given, seg, rtol=1e-9, atol=0.0):
                raise CurveError("given segment lengths disagree with the vertices")
            seg = given
        v.setflags(write=False)
        flex.setflags(write=False)
        seg.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "flexibility", flex)
        object.__setattr__(self, "base_span", float(self.base_span))
        object.__setattr__(self, "_lengths", seg)

    @property
    def segment_lengths(self) -> np.ndarray:
        return self._lengths  # type: ignore[attr-defined]

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    @property
    def span(self) -> float:
        return float(self.vertices[-1, 0] - self.vertices[0, 0])

    def arc_length(self, flexible_only: bool = False) -> float:
        return arc_length(self, flexible_only)

    def min_segment_length(self) -> float:
        return min_segment_length(self)

    def flex_gram(self) -> np.ndarray:
        """Moment matrix of (1, x, y) over the flexible part of the curve."""
        f = self.flexibility
        v = self.vertices
        return _segment_gram(v[:-1][f], v[1:][f], self.segment_lengths[f])

    def to_json(self) -> dict:
        rigid = np.flatnonzero(~self.flexibility).tolist()
        out = {"base_span": self.base_span, "vertices": self.vertices.tolist()}
        if rigid:
            out["rigid_segments"] = rigid
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PlanarCurve":
        vertices = np.asarray(obj["vertices"], dtype=float)
        flex = np.ones(max(len(vertices) - 1, 0), dtype=bool)
        rigid = obj.get("rigid_segments") or []
        try:
            flex[np.asarray(rigid, dtype=int)] = False
        except IndexError:
            raise CurveError("rigid segment index out of range") from None
        return cls(vertices, flex, obj.get("base_span", 1.0))


@dataclass(frozen=True)
class CurveSequence:
    """Ordered family of curves on one reference span.

    ``scales`` optionally overrides the characteristic length of each term; when
    omitted the shortest segment of each term is used.
    """

    terms: Sequence
    labels: Sequence[int] = None  # type: ignore[assignment]
    scales: Sequence[float] | None = None

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise CurveError("empty curve sequence")
        spans = {round(t.base_span, 12) for t in terms}
        if len(spans) != 1:
            raise CurveError("all terms must share one base_span")
        labels = tuple(range(len(terms))) if self.labels is None else tuple(self.labels)
        if len(labels) != len(terms):
            raise CurveError("one label per term required")
        if self.scales is None:
            scales = tuple(float(t.min_segment_length()) for t in terms)
        else:
            scales = tuple(float(s) for s in self.scales)
            if len(scales) != len(terms):
                raise CurveError("one scale per term required")
        if any(b >= a for a, b in zip(scales, scales[1:])):
            raise CurveError("characteristic lengths must strictly decrease")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "scales", scales)

    @property
    def base_span(self) -> float:
        return self.terms[0].base_span

    def __len__(self) -> int:
        return len(self.terms)


def arc_length(curve: PlanarCurve, flexible_only: bool = False) -> float:
    """Sum of Euclidean segment lengths, optionally over flexible segments only."""
    seg = curve.segment_lengths
    if flexible_only:
        seg = seg[curve.flexibility]
    return float(np.sum(seg))


def min_segment_length(curve: PlanarCurve) -> float:
    return float(np.min(curve.segment_lengths))


def cut_sample(curve: PlanarCurve, b: float) -> PlanarCurve:
    """Sub-polyline from the first vertex up to the first crossing of ``x0 + b``.

    A crossing inside a segment creates an interpolated vertex that inherits the
    host segment's flexibility flag. The result keeps the master's base span.
    Curves kept as formation rules delegate to their own ``cut``.
    """
    if not isinstance(curve, PlanarCurve):
        return curve.cut(b)
    span = curve.span
    if not (0.0 < b <= span * (1.0 + _X_TOL)):
        raise ValueError(f"cut width {b!r} outside (0, {span!r}]")
    v = curve.vertices
    target = v[0, 0] + min(b, span)
    tol = _X_TOL * max(span, 1.0)
    i = int(np.argmax(v[:, 0] >= target - tol))
    if abs(v[i, 0] - target) <= tol:
        return PlanarCurve(v[: i + 1], curve.flexibility[:i], curve.base_span)
    p, q = v[i - 1], v[i]
    t = (target - p[0]) / (q[0] - p[0])
    point = p + t * (q - p)
    verts = np.vstack([v[:i], point])
    return PlanarCurve(verts, curve.flexibility[:i], curve.base_span)


def decimate(curve: PlanarCurve, step: float) -> PlanarCurve:
    """Resample a graph-like polyline on a horizontal grid of spacing ``step``.

    Each grid abscissa keeps the nearest original vertex at or before it; both
    endpoints are always retained and every segment of the result is flexible.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    v = curve.vertices
    x = v[:, 0]
    if np.any(np.diff(x) < 0):
        raise CurveError("decimation needs non-decreasing abscissae")
    span = curve.span
    if step >= span:
        warnings.warn("decimation step covers the whole span; result has 2 vertices",
                      stacklevel=2)
        return PlanarCurve(v[[0, -1]], None, curve.base_span)
    n = int(np.floor(span / step * (1.0 + 1e-12)))
    grid = x[0] + step * np.arange(n + 1)
    idx = np.searchsorted(x, grid + _X_TOL * span, side="right") - 1
    idx = np.unique(np.concatenate([[0], idx, [len(x) - 1]]))
    return PlanarCurve(v[idx], None, curve.base_span)


def straight(length: float = 1.0, base_span: float | None = None) -> PlanarCurve:
    """Horizontal segment from the origin; handy baseline and test fixture."""
    return PlanarCurve([[0.0, 0.0], [length, 0.0]], None,
                       length if base_span is None else base_span)


def load_curve(path: str | Path) -> PlanarCurve:
    with open(path) as fh:
        return PlanarCurve.from_json(json.load(fh))


def save_curve(curve: PlanarCurve, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(curve.to_json(), fh)
