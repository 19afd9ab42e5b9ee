"""Independent oracles: adaptive quadrature of the compliance integrals, Koch
closed forms, a dense generalized eigen-solver and a grid box-counting estimator.

Nothing here reuses the closed-form segment integrals of :mod:`mechanics`; the
point is to check them by a different route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .generators import KochGenerator, koch_iterate, make_rng
from .geometry import PlanarCurve
from .mechanics import ComplianceTriple, OscillatorConstants, flexibility_matrix

# Upper-triangle index pairs of the (H, V, M) flexibility matrix.
_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class OracleError(RuntimeError):
    """An oracle failed to converge or was asked something it cannot answer."""


class UnsupportedOracleError(OracleError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    """Oracle settings.

    Args:
        rtol: relative tolerance of the adaptive quadrature.
        box_levels: box sizes are ``span * 2**-j`` for ``j`` in this inclusive range.
        box_offsets: number of jittered grid origins averaged per box size.
        seed: seed for the grid jitter.
        max_depth: bisection depth at which quadrature gives up.
    """

    rtol: float = 1e-12
    box_levels: tuple = (4, 11)
    box_offsets: int = 4
    seed: int = 0
    max_depth: int = 40

    def __post_init__(self) -> None:
        if not self.rtol > 0:
            raise ValueError("rtol must be positive")
        lo, hi = self.box_levels
        if hi - lo + 1 < 4:
            raise ValueError("box counting needs at least 4 scales")
        if self.box_offsets < 1:
            raise ValueError("need at least one grid offset")


def _as_explicit(curve) -> PlanarCurve:
    return curve if isinstance(curve, PlanarCurve) else curve.materialize()


def _integrand(p, d, t, tip):
    """Products of the (H, V, M) moments at fractions ``t`` along segments."""
    x = p[:, 0] + t * d[:, 0]
    y = p[:, 1] + t * d[:, 1]
    m = (tip[1] - y, tip[0] - x, np.ones_like(x))
    return np.stack([m[i] * m[j] for i, j in _PAIRS])


def _simpson(p, d, ln, a, b, tip):
    fa = _integrand(p, d, a, tip)
    fm = _integrand(p, d, 0.5 * (a + b), tip)
    fb = _integrand(p, d, b, tip)
    return (b - a) * ln / 6.0 * (fa + 4.0 * fm + fb)


def quadrature_matrix(curve, k: OscillatorConstants = OscillatorConstants(),
                      cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Flexibility matrix in (H, V, M) order by adaptive Simpson bisection.

    Every flexible segment starts as one interval on ``t in [0, 1]``; an interval
    is accepted once its two-half estimate agrees with the whole-interval one to
    the tolerance, then Richardson-corrected. Intervals are processed in index
    order and summed with ``math.fsum`` so the result is reproducible.
    """
    c = _as_explicit(curve)
    v = c.vertices
    tip = v[0] if k.clamp_end == "last" else v[-1]
    flex = c.flexibility
    p = v[:-1][flex]
    d = (v[1:] - v[:-1])[flex]
    ln = c.segment_lengths[flex]
    if len(p) == 0:
        raise OracleError("no flexible segment")
    # absolute floor so integrals that vanish exactly (flat curve, H) still stop
    reach = np.max(np.abs(v - tip)) + 1.0
    floor = cfg.rtol * reach**2 * float(np.sum(ln))
    idx = np.arange(len(p))
    a = np.zeros(len(p))
    b = np.ones(len(p))
    whole = _simpson(p, d, ln, a, b, tip)
    parts = [[] for _ in _PAIRS]
    for _ in range(cfg.max_depth):
        mid = 0.5 * (a + b)
        left = _simpson(p[idx], d[idx], ln[idx], a, mid, tip)
        right = _simpson(p[idx], d[idx], ln[idx], mid, b, tip)
        halves = left + right
        err = np.abs(halves - whole)
        ok = np.all(err <= 15.0 * (cfg.rtol * np.abs(halves) + floor / len(p)), axis=0)
        done = halves[:, ok] + (halves[:, ok] - whole[:, ok]) / 15.0
        for row, vals in zip(parts, done):
            row.extend(vals.tolist())
        if ok.all():
            break
        keep = ~ok
        idx = np.concatenate([idx[keep], idx[keep]])
        a, b = np.concatenate([a[keep], mid[keep]]), np.concatenate([mid[keep], b[keep]])
        whole = np.concatenate([left[:, keep], right[:, keep]], axis=1)
    else:
        raise OracleError("adaptive quadrature did not converge")
    f = np.empty((3, 3))
    for (i, j), row in zip(_PAIRS, parts):
        f[i, j] = f[j, i] = math.fsum(row)
    return f / k.EI


def quadrature_compliances(curve, k: OscillatorConstants = OscillatorConstants(),
                           cfg: OracleConfig = OracleConfig()) -> ComplianceTriple:
    f = quadrature_matrix(curve, k, cfg)
    return ComplianceTriple(c_M=float(f[2, 2]), c_H=float(f[0, 0]), c_V=float(f[1, 1]))


def relative_discrepancy(a: np.ndarray, b: np.ndarray) -> float:
    """Largest entry-wise difference relative to the largest entry of ``b``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), np.finfo(float).tiny))


def compare_compliances(curve, k: OscillatorConstants = OscillatorConstants(),
                        cfg: OracleConfig = OracleConfig()) -> float:
    """Relative gap between the closed-form and quadrature flexibility matrices."""
    return relative_discrepancy(flexibility_matrix(curve, k), quadrature_matrix(curve, k, cfg))


@dataclass(frozen=True)
class KochClosedForm:
    arc_length: float
    shortest: float
    dimension: float
    m_slope: float


def koch_closed_forms(gen, k: int, L0: float = 1.0) -> KochClosedForm:
    """Arc length, shortest segment, dimension and direct M-cover slope.

    ``gen`` is a :class:`KochGenerator` or a raw motif vertex list.
    """
    if isinstance(gen, KochGenerator):
        motif = np.asarray(gen.motif, dtype=float)
    else:
        motif = np.asarray(gen, dtype=float)
    seg = np.hypot(*np.diff(motif, axis=0).T)
    if not np.allclose(seg, seg[0], rtol=1e-9):
        raise UnsupportedOracleError("closed forms need equal motif segments")
    n, r = len(seg), float(seg[0])
    dim = 1.0 if n == 1 else math.log(n) / math.log(1.0 / r)
    return KochClosedForm((n * r) ** k * L0, r**k * L0, dim, (1.0 - dim) / 2.0)


def dense_coupled_periods(f: np.ndarray, k: OscillatorConstants = OscillatorConstants()) -> np.ndarray:
    """Coupled periods from the generalized problem ``K phi = w^2 M phi``.

    ``K`` is the explicit inverse of ``f``, so ``f`` must be non-singular.
    """
    stiffness = np.linalg.inv(np.asarray(f, dtype=float))
    mass = np.diag([k.mass, k.mass, k.rot_inertia])
    w2 = scipy.linalg.eigh(0.5 * (stiffness + stiffness.T), mass, eigvals_only=True)
    return np.sort(2.0 * math.pi / np.sqrt(w2))[::-1]


def random_polyline(rng: np.random.Generator, n: int = 20, base_span: float = 1.0,
                    rigid_fraction: float = 0.0) -> PlanarCurve:
    """Random test curve with ``n`` segments from (0, 0) to a point at x > 0."""
    steps = rng.normal(size=(n, 2)) * base_span / n
    steps[:, 0] = np.abs(steps[:, 0]) + 0.1 * base_span / n
    v = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])
    flex = rng.random(n) >= rigid_fraction
    flex[0] = True
    return PlanarCurve(v, flex, base_span)


@dataclass(frozen=True)
class BoxCount:
    dimension: float
    sizes: tuple
    counts: tuple
    offsets: int


def _trace_points(v: np.ndarray, eps: float) -> np.ndarray:
    """Points along the polyline no further than ``eps / 4`` apart along arc."""
    seg = np.hypot(*np.diff(v, axis=0).T)
    h = 0.25 * eps
    if seg.max() <= h:
        # thin out runs of short segments, keeping ~h of arc between samples
        s = np.concatenate([[0.0], np.cumsum(seg)])
        keep = np.unique(np.searchsorted(s, np.arange(0.0, s[-1], h)))
        return np.vstack([v[keep], v[-1:]])
    reps = np.maximum(1, np.ceil(seg / h).astype(int))
    t = (np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)) / np.repeat(reps, reps)
    base = np.repeat(v[:-1], reps, axis=0)
    step = np.repeat(np.diff(v, axis=0), reps, axis=0)
    return np.vstack([base + t[:, None] * step, v[-1:]])


def box_counting_dimension(curve, cfg: OracleConfig = OracleConfig()) -> BoxCount:
    """Grid box-counting estimate averaged over jittered grid origins.

    Box sizes are ``span * 2**-j``; the dimension is the least-squares slope of
    ``log N`` against ``log(1/eps)``.
    """
    c = _as_explicit(curve)
    v = c.vertices
    span = c.span
    lo, hi = cfg.box_levels
    rng = make_rng(cfg.seed)
    jitter = rng.random((cfg.box_offsets, 2))
    sizes, counts = [], []
    for j in range(lo, hi + 1):
        eps = span * 2.0**-j
        pts = _trace_points(v, eps)
        n = []
        for off in jitter:
            cell = np.floor((pts - v[0]) / eps + off).astype(np.int64)
            n.append(len(np.unique(cell[:, 0] * (1 << 32) + cell[:, 1])))
        sizes.append(eps)
        counts.append(float(np.mean(n)))
    if len(sizes) < 4:
        raise OracleError("insufficient box scales")
    slope = np.polyfit(np.log(1.0 / np.array(sizes)), np.log(counts), 1)[0]
    return BoxCount(float(slope), tuple(sizes), tuple(counts), cfg.box_offsets)


def moment_identity_gap(curve, k: OscillatorConstants = OscillatorConstants()) -> float:
    """Relative gap between ``tau_M**2`` and flexible arc length over ``L0``."""
    from .mechanics import curve_periods

    tau_m = curve_periods(curve, k).tau_M
    L0 = k.span_for(curve)
    target = curve.arc_length(flexible_only=True) / L0
    return abs(tau_m**2 - target) / target


def explicit_koch(gen: KochGenerator, k: int, base_span: float = 1.0) -> PlanarCurve:
    """Explicit polyline of a Koch generation, for oracles that need vertices."""
    return koch_iterate(gen, k, base_span)
