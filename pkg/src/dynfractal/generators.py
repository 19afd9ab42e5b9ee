"""Curve families: generalized Koch iterations, Weierstrass-Mandelbrot graphs,
random walks and white noise.

Koch curves come in two representations. :func:`koch_iterate` builds the
explicit polyline (used for random orientations and anything that needs every
vertex). :class:`SelfSimilarCurve` keeps the formation rule and evaluates arc
length, bending moment integrals and horizontal cuts by recursion over the
generations, which keeps generation 12 of an 8-segment motif (6.9e10 segments)
tractable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .geometry import CurveError, PlanarCurve, _segment_gram

#: Standard 8-segment quadric Koch generator (D = log 8 / log 4 = 1.5).
QUADRIC = ((0.0, 0.0), (0.25, 0.0), (0.25, 0.25), (0.5, 0.25), (0.5, 0.0),
           (0.5, -0.25), (0.75, -0.25), (0.75, 0.0), (1.0, 0.0))
#: Indices of the vertical bars of :data:`QUADRIC`.
QUADRIC_VERTICAL = (1, 3, 4, 6)
QUADRIC_HORIZONTAL = (0, 2, 5, 7)
#: Triadic (von Koch) generator, D = log 4 / log 3.
TRIADIC = ((0.0, 0.0), (1 / 3, 0.0), (0.5, math.sqrt(3) / 6), (2 / 3, 0.0), (1.0, 0.0))

MOTIFS = {"quadric": QUADRIC, "triadic": TRIADIC}

MAX_EXPLICIT_SEGMENTS = 1 << 24
RNG_ALGORITHM = "Philox4x64-10"


def make_rng(seed: int | Sequence[int]) -> np.random.Generator:
    """Counter-based generator used for every stochastic construction."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class KochGenerator:
    """Equal-segment generator cell on the unit span.

    Args:
        motif: vertices from (0, 0) to (1, 0).
        rigid_segments: motif segment indices whose copies are rigid.
        random_orientation: reflect each motif copy across its segment axis
            with probability 1/2.
        seed: RNG seed for random orientation (an int or a tuple of ints).
    """

    motif: tuple = QUADRIC
    rigid_segments: tuple = ()
    random_orientation: bool = False
    seed: int | tuple = 0

    def __post_init__(self) -> None:
        m = np.asarray(self.motif, dtype=float)
        if m.ndim != 2 or m.shape[1] != 2 or len(m) < 2:
            raise CurveError("motif needs at least two (x, y) vertices")
        if not (np.allclose(m[0], 0.0, atol=1e-12) and np.allclose(m[-1], (1.0, 0.0), atol=1e-12)):
            raise CurveError("motif must start at (0, 0) and end at (1, 0)")
        seg = np.hypot(*np.diff(m, axis=0).T)
        if np.any(seg <= 0) or not np.allclose(seg, seg[0], rtol=1e-9):
            raise CurveError("motif segments must all have the same positive length")
        rigid = tuple(sorted({int(i) for i in self.rigid_segments}))
        if rigid and (rigid[0] < 0 or rigid[-1] >= len(seg)):
            raise CurveError("rigid segment index out of range")
        object.__setattr__(self, "motif", tuple(map(tuple, m.tolist())))
        object.__setattr__(self, "rigid_segments", rigid)
        d = self.dimension
        if not (1.0 - 1e-9 <= d <= 2.0 + 1e-9):
            raise CurveError(f"implied dimension {d:.4f} outside [1, 2]")

    @property
    def n_segments(self) -> int:
        return len(self.motif) - 1

    @property
    def ratio(self) -> float:
        """Length of one motif segment on the unit span."""
        m = np.asarray(self.motif)
        return float(np.hypot(*(m[1] - m[0])))

    @property
    def dimension(self) -> float:
        n, r = self.n_segments, self.ratio
        if n == 1:
            return 1.0
        return math.log(n) / math.log(1.0 / r)

    @property
    def flex_mask(self) -> np.ndarray:
        mask = np.ones(self.n_segments, dtype=bool)
        mask[list(self.rigid_segments)] = False
        return mask

    # -- recursion tables shared by every SelfSimilarCurve of this generator --

    @cached_property
    def _maps(self) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(self.motif) @ np.array([1.0, 1j])
        return z[:-1], np.diff(z)

    @cached_property
    def _grams(self) -> list:
        return [_unit_segment_gram()]

    def level_gram(self, level: int) -> np.ndarray:
        """Flexible moment matrix of generation ``level`` on the unit span."""
        grams = self._grams
        p, a = self._maps
        flex = self.flex_mask
        while len(grams) <= level:
            k = len(grams)
            if k == 1:
                pts = np.column_stack([p.real, p.imag])
                ends = pts + np.column_stack([a.real, a.imag])
                g = _segment_gram(pts[flex], ends[flex], np.abs(a)[flex])
            else:
                g = np.zeros((3, 3))
                for pj, aj in zip(p, a):
                    t = _affine(pj, aj)
                    g += abs(aj) * t @ grams[k - 1] @ t.T
            grams.append(g)
        return grams[level]

    def level_length(self, level: int) -> float:
        """Total (rigid and flexible) arc length of generation ``level``, unit span."""
        return (self.n_segments * self.ratio) ** level

    @cached_property
    def _support_memo(self) -> dict:
        return {}

    def support(self, level: int, u: complex) -> float:
        """Max of Re(conj(u) z) over generation ``level`` on the unit span."""
        key = (level, round(math.atan2(u.imag, u.real), 11))
        memo = self._support_memo
        if key in memo:
            return memo[key]
        if level == 0:
            val = max(0.0, u.real)
        else:
            p, a = self._maps
            val = -math.inf
            for pj, aj in zip(p, a):
                w = u * np.conj(aj) / abs(aj)
                val = max(val, (np.conj(u) * pj).real + abs(aj) * self.support(level - 1, w))
        if len(memo) > 1_000_000:
            raise RuntimeError("support recursion does not close; motif angles are not commensurate")
        memo[key] = val
        return val


def _unit_segment_gram() -> np.ndarray:
    return _segment_gram(np.zeros((1, 2)), np.array([[1.0, 0.0]]), np.array([1.0]))


def _affine(p: complex, a: complex) -> np.ndarray:
    """Action of z -> p + a z on the vector (1, x, y)."""
    return np.array([[1.0, 0.0, 0.0],
                     [p.real, a.real, -a.imag],
                     [p.imag, a.imag, a.real]])


def koch_iterate(gen: KochGenerator, k: int, base_span: float = 1.0) -> PlanarCurve:
    """Explicit generation-``k`` polyline of a Koch generator on ``[0, base_span]``."""
    if k < 0:
        raise ValueError("generation must be non-negative")
    n = gen.n_segments
    if n**k > MAX_EXPLICIT_SEGMENTS:
        raise ValueError(f"{n}**{k} segments is too many to materialise; use SelfSimilarCurve")
    motif = (np.asarray(gen.motif) @ np.array([1.0, 1j]))[:-1]
    rng = make_rng(gen.seed) if gen.random_orientation else None
    pts = np.array([0.0, base_span], dtype=complex)
    for _ in range(k):
        start = pts[:-1]
        d = np.diff(pts)
        cells = np.broadcast_to(motif, (len(start), n))
        if rng is not None:
            flip = rng.random(len(start)) < 0.5
            cells = np.where(flip[:, None], np.conj(cells), cells)
        pts = np.append((start[:, None] + d[:, None] * cells).ravel(), pts[-1])
    flex = np.tile(gen.flex_mask, n ** (k - 1)) if k > 0 else None
    # every copy has the same nominal length; reflections must not change it by an ulp
    lengths = np.full(n**k, base_span * gen.ratio**k)
    return PlanarCurve(np.column_stack([pts.real, pts.imag]), flex, base_span, lengths=lengths)


class SelfSimilarCurve:
    """Generation ``k`` of a deterministic Koch generator, kept as a formation rule.

    Supports the same queries the oscillator model uses on explicit curves
    (arc length, shortest segment, flexible moment matrix) plus horizontal
    cutting, without materialising the vertices.
    """

    def __init__(self, gen: KochGenerator, k: int, base_span: float = 1.0):
        if gen.random_orientation:
            raise ValueError("random orientations break self-similarity; use koch_iterate")
        if k < 0:
            raise ValueError("generation must be non-negative")
        self.generator = gen
        self.generation = int(k)
        self.base_span = float(base_span)

    def __repr__(self) -> str:
        return f"SelfSimilarCurve(k={self.generation}, N={self.generator.n_segments})"

    @property
    def start(self) -> np.ndarray:
        return np.zeros(2)

    @property
    def end(self) -> np.ndarray:
        return np.array([self.base_span, 0.0])

    @property
    def span(self) -> float:
        return self.base_span

    @property
    def n_segments(self) -> int:
        return self.generator.n_segments ** self.generation

    def _whole(self) -> "CompositeCurve":
        if self.generation == 0:
            return CompositeCurve(self.generator, self.base_span,
                                  [(LOOSE, 0j, complex(self.base_span), True)])
        return CompositeCurve(self.generator, self.base_span,
                              [(self.generation, 0j, complex(self.base_span), True)])

    def arc_length(self, flexible_only: bool = False) -> float:
        return self._whole().arc_length(flexible_only)

    def min_segment_length(self) -> float:
        return self.generator.ratio ** self.generation * self.base_span

    def flex_gram(self) -> np.ndarray:
        return self._whole().flex_gram()

    def materialize(self) -> PlanarCurve:
        return koch_iterate(self.generator, self.generation, self.base_span)

    def cut(self, b: float) -> "CompositeCurve":
        """Sample from the origin to the first crossing of the abscissa ``b``."""
        if not (0.0 < b <= self.base_span * (1 + 1e-12)):
            raise ValueError(f"cut width {b!r} outside (0, {self.base_span!r}]")
        gen = self.generator
        p, a = gen._maps
        flex = gen.flex_mask
        target = min(b, self.base_span)
        tol = 1e-12 * self.base_span
        if self.generation == 0:
            return CompositeCurve(gen, self.base_span, [(LOOSE, 0j, complex(target), True)])
        pieces: list = []
        origin, scale, level = 0j, complex(self.base_span), self.generation
        while True:
            for j in range(gen.n_segments):
                pj = origin + scale * p[j]
                aj = scale * a[j]
                if level == 1:
                    end = pj + aj
                    if end.real >= target - tol:
                        t = min(1.0, (target - pj.real) / (end.real - pj.real))
                        pieces.append((LOOSE, pj, t * aj, bool(flex[j])))
                        return CompositeCurve(gen, self.base_span, pieces)
                    pieces.append((LOOSE, pj, aj, bool(flex[j])))
                    continue
                reach = pj.real + abs(aj) * gen.support(level - 1, np.conj(aj) / abs(aj))
                if reach < target - tol:
                    pieces.append((level - 1, pj, aj, True))
                else:
                    origin, scale, level = pj, aj, level - 1
                    break
            else:  # pragma: no cover - the enclosing cell always reaches the target
                raise RuntimeError("cut abscissa never reached")


#: Piece level marking a loose straight segment inside a :class:`CompositeCurve`.
LOOSE = -1


@dataclass
class CompositeCurve:
    """Ordered union of whole self-similar cells and loose segments.

    Each piece is ``(level, origin, scale, flexible)``. For ``level >= 1`` it
    stands for ``origin + scale * z`` with ``z`` running over generation
    ``level`` of the generator (flags from the rigid pattern). For
    ``level == LOOSE`` it is the straight segment from ``origin`` to
    ``origin + scale`` with its own flag.
    """

    generator: KochGenerator
    base_span: float
    pieces: list

    @property
    def start(self) -> np.ndarray:
        z = self.pieces[0][1]
        return np.array([z.real, z.imag])

    @property
    def end(self) -> np.ndarray:
        _, o, s, _ = self.pieces[-1]
        return np.array([(o + s).real, (o + s).imag])

    @property
    def span(self) -> float:
        return float(self.end[0] - self.start[0])

    @property
    def n_segments(self) -> int:
        n = self.generator.n_segments
        return sum(1 if lv == LOOSE else n**lv for lv, _, _, _ in self.pieces)

    def arc_length(self, flexible_only: bool = False) -> float:
        gen = self.generator
        total = 0.0
        for lv, _, s, fl in self.pieces:
            if lv == LOOSE:
                total += abs(s) if (fl or not flexible_only) else 0.0
            else:
                unit = gen.level_gram(lv)[0, 0] if flexible_only else gen.level_length(lv)
                total += abs(s) * unit
        return float(total)

    def min_segment_length(self) -> float:
        r = self.generator.ratio
        return float(min(abs(s) * (1.0 if lv == LOOSE else r**lv)
                         for lv, _, s, _ in self.pieces))

    def flex_gram(self) -> np.ndarray:
        gen = self.generator
        g = np.zeros((3, 3))
        loose = [(o, s) for lv, o, s, fl in self.pieces if lv == LOOSE and fl]
        for lv, o, s, _ in self.pieces:
            if lv != LOOSE:
                t = _affine(o, s)
                g += abs(s) * t @ gen.level_gram(lv) @ t.T
        if loose:
            o, s = np.array(loose).T
            g += _segment_gram(np.column_stack([o.real, o.imag]),
                               np.column_stack([(o + s).real, (o + s).imag]), np.abs(s))
        return g

    def materialize(self) -> PlanarCurve:
        gen = self.generator
        pts: list = []
        flags: list = []
        for lv, o, s, fl in self.pieces:
            if lv == LOOSE:
                pts.append(np.array([o]))
                flags.append(np.array([fl]))
            else:
                unit = koch_iterate(gen, lv)
                pts.append(o + s * (unit.vertices[:-1] @ np.array([1.0, 1j])))
                flags.append(unit.flexibility)
        _, o, s, _ = self.pieces[-1]
        verts = np.concatenate(pts + [np.array([o + s])])
        return PlanarCurve(np.column_stack([verts.real, verts.imag]),
                           np.concatenate(flags), self.base_span)


@dataclass(frozen=True)
class WMParams:
    """Truncated Weierstrass-Mandelbrot sum parameters."""

    b: float = 1.5
    D: float = 1.5
    m: int = 100
    n_points: int = 1 << 14
    t_range: tuple = (0.0, 2 * math.pi)

    def __post_init__(self) -> None:
        if not self.b > 1:
            raise ValueError("frequency ratio b must exceed 1")
        if not 1.0 <= self.D <= 2.0:
            raise ValueError("D must lie in [1, 2]")
        if self.m < 1 or self.n_points < 2:
            raise ValueError("need m >= 1 and n_points >= 2")
        t0, t1 = self.t_range
        if not t1 > t0:
            raise ValueError("empty t_range")


def wm_values(p: WMParams) -> tuple[np.ndarray, np.ndarray]:
    """Sample ``sum_{n=-m}^{m} (1 - cos b^n t) / b^((2-D) n)`` on ``t_range``."""
    t = np.linspace(p.t_range[0], p.t_range[1], p.n_points)
    w = np.zeros_like(t)
    lb = math.log(p.b)
    limit = math.log(np.finfo(float).max) - 1.0
    dropped = 0
    for n in range(-p.m, p.m + 1):
        if abs((2.0 - p.D) * n * lb) > limit or abs(n * lb) > limit:
            dropped += 1
            continue
        # 1 - cos x = 2 sin^2(x/2) keeps the low-frequency terms accurate
        w += 2.0 * np.sin(0.5 * p.b**n * t) ** 2 * p.b ** (-(2.0 - p.D) * n)
    if dropped:
        warnings.warn(f"dropped {dropped} WM terms outside floating-point range", stacklevel=2)
    return t, w


def wm_curve(p: WMParams, base_span: float = 1.0) -> PlanarCurve:
    """Weierstrass-Mandelbrot graph scaled to ``base_span`` in both directions.

    Abscissae map ``t_range`` onto ``[0, base_span]``; ordinates are divided by
    ``max |W|`` and multiplied by ``base_span``. The factor is kept in ``meta``.
    """
    t, w = wm_values(p)
    norm = float(np.max(np.abs(w)))
    x = (t - t[0]) / (t[-1] - t[0]) * base_span
    y = w / norm * base_span if norm > 0 else w
    curve = PlanarCurve(np.column_stack([x, y]), None, base_span)
    curve.meta["wm_normalization"] = norm
    return curve


@dataclass(frozen=True)
class StochasticParams:
    n_points: int = 1 << 14
    step_amplitude: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")
        if not self.step_amplitude > 0:
            raise ValueError("step_amplitude must be positive")


def random_walk(p: StochasticParams) -> PlanarCurve:
    """Equal-probability +/- steps on ``n_points`` equally spaced abscissae in [0, 1]."""
    rng = make_rng(p.seed)
    steps = np.where(rng.integers(0, 2, p.n_points - 1) == 1, p.step_amplitude, -p.step_amplitude)
    y = np.concatenate([[0.0], np.cumsum(steps)])
    x = np.linspace(0.0, 1.0, p.n_points)
    return PlanarCurve(np.column_stack([x, y]), None, 1.0)


def white_noise(p: StochasticParams) -> PlanarCurve:
    """Uniform ordinates on ``n_points`` sorted uniform abscissae, both in [0, 1]."""
    rng = make_rng(p.seed)
    x = np.unique(rng.random(p.n_points))
    while len(x) < p.n_points:  # redraw duplicates
        x = np.unique(np.concatenate([x, rng.random(p.n_points - len(x))]))
    y = rng.random(p.n_points)
    return PlanarCurve(np.column_stack([x, y]), None, 1.0)


def generator_from_spec(spec: dict) -> KochGenerator:
    motif = spec.get("motif", "quadric")
    if isinstance(motif, str):
        try:
            motif = MOTIFS[motif]
        except KeyError:
            raise CurveError(f"unknown motif preset {motif!r}") from None
    return KochGenerator(tuple(map(tuple, motif)), tuple(spec.get("rigid_segments", ())),
                         bool(spec.get("random_orientation", False)), int(spec.get("seed", 0)))


def curve_from_spec(spec: dict, explicit: bool = False):
    """Build a curve from a JSON generator specification.

    Koch specifications return a :class:`SelfSimilarCurve` unless ``explicit``
    is set or the orientation is random.
    """
    kind = spec.get("kind")
    span = float(spec.get("base_span", 1.0))
    if kind == "koch":
        gen = generator_from_spec(spec)
        k = int(spec.get("k", 0))
        if k < 0:
            raise CurveError("generation must be non-negative")
        if explicit or gen.random_orientation:
            return koch_iterate(gen, k, span)
        return SelfSimilarCurve(gen, k, span)
    if kind == "wm":
        keys = ("b", "D", "m", "n_points")
        kw = {k: spec[k] for k in keys if k in spec}
        if "t_range" in spec:
            kw["t_range"] = tuple(spec["t_range"])
        return wm_curve(WMParams(**kw), span)
    if kind in ("random_walk", "white_noise"):
        kw = {k: spec[k] for k in ("n_points", "step_amplitude", "seed") if k in spec}
        fn = random_walk if kind == "random_walk" else white_noise
        return fn(StochasticParams(**kw))
    raise CurveError(f"unknown generator kind {kind!r}")
