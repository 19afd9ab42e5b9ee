"""Bending compliances and periods of the virtual cantilever oscillator.

The curve is a wire clamped at one end with a lumped mass ``m0`` and rotary
inertia ``J0`` at the other. Under a unit tip load the internal bending moment
is linear along each straight segment:

* moment ``M``: ``m(s) = 1``
* horizontal force ``H``: ``m(s) = y_T - y(s)``
* vertical force ``V``: ``m(s) = x_T - x(s)``

and the unit-load method gives the tip compliances ``(1/EI) * int m_i m_j ds``
over the flexible segments. Rigid segments store no energy but still carry the
geometry that sets the moment arms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PlanarCurve

COVERS = ("M", "H", "V")
# Row/column order of the flexibility matrix.
MATRIX_ORDER = ("H", "V", "M")
# H (or V) compliance below this fraction of the other one is exactly zero.
DEGENERATE_RTOL = 1e-12


class DegenerateOscillatorError(ValueError):
    """The curve has no flexible length, so no oscillator can be built."""


@dataclass(frozen=True)
class OscillatorConstants:
    """Wire stiffness, tip mass and tip rotary inertia, all strictly positive.

    ``L0`` is the normalising span; ``None`` means "use the curve's base span".
    ``clamp_end`` selects which end is fixed (the other carries the mass).
    """

    EI: float = 1.0
    mass: float = 1.0
    rot_inertia: float = 1.0
    L0: float | None = None
    clamp_end: str = "first"

    def __post_init__(self) -> None:
        for name in ("EI", "mass", "rot_inertia"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.L0 is not None and not self.L0 > 0:
            raise ValueError("L0 must be positive")
        if self.clamp_end not in ("first", "last"):
            raise ValueError("clamp_end must be 'first' or 'last'")

    def span_for(self, curve) -> float:
        return curve.base_span if self.L0 is None else self.L0

    def normalizing_periods(self, L0: float) -> dict:
        """Reference periods of the straight wire of length ``L0``.

        The horizontal reference uses ``m0 L0^3 / EI`` like the vertical one, the
        dimensionally consistent choice. References only shift log-log
        intercepts, never slopes.
        """
        tau = 2.0 * math.pi
        return {
            "M": tau * math.sqrt(self.rot_inertia * L0 / self.EI),
            "H": tau * math.sqrt(self.mass * L0**3 / self.EI),
            "V": tau * math.sqrt(self.mass * L0**3 / self.EI),
        }


@dataclass(frozen=True)
class ComplianceTriple:
    c_M: float
    c_H: float
    c_V: float

    def __getitem__(self, cover: str) -> float:
        return getattr(self, "c_" + cover)


@dataclass(frozen=True)
class PeriodTriple:
    T_M: float
    T_H: float
    T_V: float
    tau_M: float
    tau_H: float
    tau_V: float
    degenerate: tuple = ()

    def tau(self, cover: str) -> float:
        return getattr(self, "tau_" + cover)

    def period(self, cover: str) -> float:
        return getattr(self, "T_" + cover)


def segment_integral_sq(qa, qb, length):
    """Exact integral of q(s)^2 over a segment where q is linear in s."""
    return length / 3.0 * (qa * qa + qa * qb + qb * qb)


def segment_integral_cross(qa, qb, ra, rb, length):
    """Exact integral of q(s) r(s) over a segment, both linear in s."""
    return length / 6.0 * (2.0 * qa * ra + qa * rb + qb * ra + 2.0 * qb * rb)


def _tip(curve, k: OscillatorConstants) -> np.ndarray:
    return np.asarray(curve.start if k.clamp_end == "last" else curve.end, dtype=float)


def _moment_fields(curve: PlanarCurve, tip: np.ndarray):
    """Endpoint values of the (H, V, M) unit-load moments on flexible segments."""
    f = curve.flexibility
    v = curve.vertices
    p, q = v[:-1][f], v[1:][f]
    ones = np.ones(len(p))
    fa = np.stack([tip[1] - p[:, 1], tip[0] - p[:, 0], ones])
    fb = np.stack([tip[1] - q[:, 1], tip[0] - q[:, 0], ones])
    return fa, fb, curve.segment_lengths[f]


def flexibility_matrix(curve, k: OscillatorConstants = OscillatorConstants()) -> np.ndarray:
    """Symmetric 3x3 tip flexibility in (H, V, M) order.

    Explicit polylines are integrated segment by segment in the tip frame.
    Other curve types (self-similar, composite) supply the moment matrix of
    ``(1, x, y)`` through ``flex_gram()`` and are shifted to the tip here.
    """
    tip = _tip(curve, k)
    if isinstance(curve, PlanarCurve):
        fa, fb, length = _moment_fields(curve, tip)
        if length.size == 0:
            raise DegenerateOscillatorError("curve has no flexible segment")
        f = np.empty((3, 3))
        for i in range(3):
            for j in range(i, 3):
                terms = segment_integral_cross(fa[i], fb[i], fa[j], fb[j], length)
                f[i, j] = f[j, i] = np.sum(terms)
    else:
        g = curve.flex_gram()
        if not g[0, 0] > 0:
            raise DegenerateOscillatorError("curve has no flexible segment")
        # (H, V, M) fields as linear maps of (1, x, y)
        b = np.array([[tip[1], 0.0, -1.0], [tip[0], -1.0, 0.0], [1.0, 0.0, 0.0]])
        f = b @ g @ b.T
        f = 0.5 * (f + f.T)
    return f / k.EI


def compliances(curve, k: OscillatorConstants = OscillatorConstants()) -> ComplianceTriple:
    """Tip rotation per unit moment and tip deflections per unit H and V force."""
    f = flexibility_matrix(curve, k)
    c_h, c_v = float(f[0, 0]), float(f[1, 1])
    # the moment-matrix route leaves round-off residue where the exact value is 0
    if c_h <= DEGENERATE_RTOL * c_v:
        c_h = 0.0
    if c_v <= DEGENERATE_RTOL * c_h:
        c_v = 0.0
    return ComplianceTriple(c_M=float(f[2, 2]), c_H=c_h, c_V=c_v)


def periods(c: ComplianceTriple, k: OscillatorConstants = OscillatorConstants(),
            L0: float | None = None) -> PeriodTriple:
    """Uncoupled single-degree-of-freedom periods and their normalised values.

    A zero compliance gives period 0 and lists the cover in ``degenerate``.
    """
    L0 = k.L0 if L0 is None else L0
    if L0 is None:
        raise ValueError("a normalising span L0 is required")
    ref = k.normalizing_periods(L0)
    inertia = {"M": k.rot_inertia, "H": k.mass, "V": k.mass}
    out = {}
    degenerate = []
    for cover in COVERS:
        cval = c[cover]
        if cval <= 0.0:
            degenerate.append(cover)
            out["T_" + cover] = 0.0
        else:
            out["T_" + cover] = 2.0 * math.pi * math.sqrt(inertia[cover] * cval)
        out["tau_" + cover] = out["T_" + cover] / ref[cover]
    return PeriodTriple(**out, degenerate=tuple(degenerate))


def curve_periods(curve, k: OscillatorConstants = OscillatorConstants()) -> PeriodTriple:
    return periods(compliances(curve, k), k, k.span_for(curve))


def coupled_periods(f: np.ndarray, k: OscillatorConstants = OscillatorConstants(),
                    rtol: float = 1e-12) -> np.ndarray:
    """Periods of the coupled 3-DOF tip oscillator, largest first.

    Solves ``K phi = w^2 M phi`` with ``M = diag(m0, m0, J0)`` and ``K`` the
    pseudo-inverse of ``f``. Equivalently the periods are ``2 pi sqrt(mu)`` for
    the eigenvalues ``mu`` of ``S f S`` with ``S = M^(1/2)``; modes in the null
    space of ``f`` get period 0.
    """
    s = np.sqrt([k.mass, k.mass, k.rot_inertia])
    mu = np.linalg.eigvalsh(s[:, None] * np.asarray(f, dtype=float) * s[None, :])
    mu = np.where(mu > rtol * max(mu.max(), 0.0), mu, 0.0)
    return np.sort(2.0 * math.pi * np.sqrt(mu))[::-1]
