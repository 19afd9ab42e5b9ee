"""Direct and inverse problems: log-log period series, slope fits, conversion to
fractal dimensions and fractality classification per energy cover.

Direct problem: a sequence of curves on one span; abscissa ``log(lambda_k/L0)``
with ``lambda_k`` the characteristic (shortest) length of term ``k``.

Inverse problem: samples cut from one master curve at horizontal widths
``b_n = span * r**n``; abscissa ``log(b_n/L0)``.

Both feed the same period computation and ordinary least-squares fit of
``log(tau)`` against the abscissa, one fit per cover ``M``, ``H``, ``V``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .generators import KochGenerator, SelfSimilarCurve, koch_iterate
from .geometry import CurveSequence, PlanarCurve, cut_sample, decimate
from .mechanics import COVERS, OscillatorConstants, compliances, periods

log = logging.getLogger(__name__)

PROBLEMS = ("direct", "inverse")
MODELS = ("self_similar", "graph")


class InsufficientDataError(ValueError):
    """Too few usable points for a straight-line fit."""


class UnsupportedConversionError(ValueError):
    pass


@dataclass(frozen=True)
class FitThresholds:
    """Linearity criterion that makes a cover count as fractal."""

    r2_min: float = 0.995
    residual_tol: float = 0.05
    d_min: float = 0.02


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything that determines an analysis run; echoed into every report."""

    oscillator: OscillatorConstants = OscillatorConstants()
    problem: str = "direct"
    model: str = "self_similar"
    ratio: float = 1 / 1.3
    samples: int = 12
    generations: tuple = (1, 12)
    levels: tuple = (1, 14)
    skip_initial: int = 2
    thresholds: FitThresholds = FitThresholds()
    min_sample_segments: int = 2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("sample ratio must lie in (0, 1)")
        if self.samples < 3:
            raise ValueError("need at least 3 samples")
        lo, hi = self.generations
        if hi - lo + 1 < 3 or lo < 0:
            raise ValueError("need at least 3 generations")
        if self.skip_initial < 0:
            raise ValueError("skip_initial must be non-negative")
        object.__setattr__(self, "generations", (int(lo), int(hi)))
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "AnalysisConfig":
        obj = dict(obj)
        if "oscillator" in obj:
            obj["oscillator"] = OscillatorConstants(**obj["oscillator"])
        if "thresholds" in obj:
            obj["thresholds"] = FitThresholds(**obj["thresholds"])
        for key in ("generations", "levels"):
            if key in obj:
                obj[key] = tuple(obj[key])
        return cls(**obj)

    def with_(self, **changes) -> "AnalysisConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class PeriodPoint:
    """One abscissa and the log normalised period of each cover (NaN if degenerate)."""

    x_log: float
    tau_log: dict
    degenerate: tuple = ()
    label: object = None

    def value(self, cover: str) -> float:
        return self.tau_log[cover]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    max_abs_residual: float
    n_points: int


@dataclass
class CoverResult:
    slope: float
    intercept: float
    r2: float
    max_residual: float
    n_points: int
    estimate: float
    dimension: float | None
    fractal: bool
    note: str = ""


@dataclass
class DimensionReport:
    problem: str
    model: str
    covers: dict
    entirely_fractal: bool
    perfectly_fractal: bool | None = None
    config: dict = field(default_factory=dict)
    points: list = field(default_factory=list, repr=False)

    def dimensions(self) -> dict:
        """Converted dimension estimate per cover, whether or not it passed."""
        return {c: r.estimate for c, r in self.covers.items()}

    @property
    def fractal_covers(self) -> tuple:
        return tuple(c for c in COVERS if self.covers[c].fractal)

    def to_json(self) -> dict:
        return {
            "problem": self.problem,
            "model": self.model,
            "covers": {c: asdict(r) for c, r in self.covers.items()},
            "classification": {
                "entirely_fractal": self.entirely_fractal,
                "perfectly_fractal": self.perfectly_fractal,
                "fractal_covers": list(self.fractal_covers),
            },
            "config": self.config,
        }


def _point(curve, x_log: float, k: OscillatorConstants, L0: float, label=None) -> PeriodPoint:
    pt = periods(compliances(curve, k), k, L0)
    tau = {c: (math.log(pt.tau(c)) if c not in pt.degenerate else math.nan) for c in COVERS}
    return PeriodPoint(x_log, tau, pt.degenerate, label)


def direct_series(seq: CurveSequence, k: OscillatorConstants = OscillatorConstants()) -> list:
    """Period points of every term against ``log(lambda_k / L0)``."""
    if len(seq) < 3:
        raise InsufficientDataError("a direct series needs at least 3 terms")
    L0 = k.span_for(seq)
    return [_point(term, math.log(scale / L0), k, L0, label)
            for term, scale, label in zip(seq.terms, seq.scales, seq.labels)]


def inverse_series(master, ratio: float, n_samples: int,
                   k: OscillatorConstants = OscillatorConstants(),
                   min_segments: int = 2) -> list:
    """Period points of samples cut at widths ``span * ratio**i``, i = 0..n-1.

    A sample with fewer than ``min_segments`` segments lies inside the master's
    finest feature (the non-fractal regime) and is dropped with a warning. A
    master that itself has fewer segments has no finer structure to resolve and
    keeps every sample.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie in (0, 1)")
    if n_samples < 3:
        raise InsufficientDataError("an inverse series needs at least 3 samples")
    L0 = k.span_for(master)
    span = master.span
    out = []
    for i in range(n_samples):
        b = span * ratio**i
        sample = cut_sample(master, b)
        if sample.n_segments < min_segments <= master.n_segments:
            warnings.warn(f"sample {i} (b={b:.3g}) has {sample.n_segments} segments; dropped",
                          stacklevel=2)
            continue
        out.append(_point(sample, math.log(b / L0), k, L0, label=i))
    return out


def fit_loglog(points: list, cover: str) -> FitResult:
    """Least-squares line through the non-degenerate points of one cover."""
    xs = np.array([p.x_log for p in points if cover not in p.degenerate])
    ys = np.array([p.tau_log[cover] for p in points if cover not in p.degenerate])
    if len(xs) < 3:
        raise InsufficientDataError(f"cover {cover}: {len(xs)} usable points, need 3")
    a = np.column_stack([xs, np.ones_like(xs)])
    (slope, intercept), *_ = np.linalg.lstsq(a, ys, rcond=None)
    resid = ys - (slope * xs + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    if ss_tot > 0:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    else:
        r2 = 1.0 if ss_res <= 1e-24 else 0.0
    return FitResult(float(slope), float(intercept), r2, float(np.abs(resid).max()), len(xs))


def convert_dimension(slope: float, problem: str, cover: str, model: str = "self_similar") -> float:
    """Map a fitted log-log slope to a fractal dimension.

    direct, any cover:          D = 1 - 2 s
    inverse, M (both models):   D = 2 s
    inverse, V (both models):   D = 2 (s - 1)
    inverse, H, self_similar:   D = 2 (s - 1)
    inverse, H, graph:          D = (5 - 2 s) / 2
    """
    if not math.isfinite(slope):
        raise ValueError("slope must be finite")
    if cover not in COVERS:
        raise UnsupportedConversionError(f"unknown cover {cover!r}")
    if problem == "direct" and model in MODELS:
        return 1.0 - 2.0 * slope
    if problem == "inverse" and model in MODELS:
        if cover == "M":
            return 2.0 * slope
        if cover == "H" and model == "graph":
            return (5.0 - 2.0 * slope) / 2.0
        return 2.0 * (slope - 1.0)
    raise UnsupportedConversionError(f"no conversion for problem={problem!r}, model={model!r}")


def classify(fits: dict, problem: str, model: str,
             thresholds: FitThresholds = FitThresholds(), config: dict | None = None,
             points: list | None = None) -> DimensionReport:
    """Per-cover fractal flags and the entirely-fractal verdict.

    A cover is fractal when its fit is linear (``r2 >= r2_min`` and largest
    residual ``<= residual_tol``) and its dimension exceeds ``1 + d_min``.
    Covers missing from ``fits`` (too few usable points) are not fractal.
    """
    covers = {}
    for cover in COVERS:
        fit = fits.get(cover)
        if fit is None:
            covers[cover] = CoverResult(math.nan, math.nan, 0.0, math.nan, 0, math.nan, None,
                                        False, "insufficient data")
            continue
        est = convert_dimension(fit.slope, problem, cover, model)
        linear = fit.r_squared >= thresholds.r2_min and fit.max_abs_residual <= thresholds.residual_tol
        note = ""
        if problem == "inverse" and model == "graph" and cover in ("M", "V"):
            note = "length-topology"
        covers[cover] = CoverResult(fit.slope, fit.intercept, fit.r_squared, fit.max_abs_residual,
                                    fit.n_points, est, est if linear else None,
                                    bool(linear and est > 1.0 + thresholds.d_min), note)
    entirely = all(r.fractal for r in covers.values())
    return DimensionReport(problem, model, covers, entirely, None, config or {}, points or [])


def fit_all(points: list, skip: int = 0) -> dict:
    fits = {}
    for cover in COVERS:
        try:
            fits[cover] = fit_loglog(points[skip:], cover)
        except InsufficientDataError:
            log.info("cover %s: not enough usable points", cover)
    return fits


def analyze_sequence(seq: CurveSequence, cfg: AnalysisConfig = AnalysisConfig()) -> DimensionReport:
    """Direct problem; the first ``cfg.skip_initial`` terms are left out of the fits."""
    points = direct_series(seq, cfg.oscillator)
    fits = fit_all(points, cfg.skip_initial)
    return classify(fits, "direct", cfg.model, cfg.thresholds,
                    replace(cfg, problem="direct").to_json(), points)


def analyze_master(master, cfg: AnalysisConfig = AnalysisConfig()) -> DimensionReport:
    """Inverse problem on samples cut from ``master``."""
    points = inverse_series(master, cfg.ratio, cfg.samples, cfg.oscillator, cfg.min_sample_segments)
    fits = fit_all(points)
    return classify(fits, "inverse", cfg.model, cfg.thresholds,
                    replace(cfg, problem="inverse").to_json(), points)


def perfectly_fractal(direct: DimensionReport, inverse: DimensionReport) -> bool:
    """Entirely fractal as a sequence and as a sampled member curve."""
    ok = direct.entirely_fractal and inverse.entirely_fractal
    direct.perfectly_fractal = inverse.perfectly_fractal = ok
    return ok


def koch_sequence(gen: KochGenerator, generations: tuple, base_span: float = 1.0) -> CurveSequence:
    """Generations ``lo..hi`` inclusive; deterministic generators stay symbolic."""
    lo, hi = generations
    ks = range(lo, hi + 1)
    if gen.random_orientation:
        terms = [koch_iterate(gen, k, base_span) for k in ks]
    else:
        terms = [SelfSimilarCurve(gen, k, base_span) for k in ks]
    return CurveSequence(terms, list(ks))


def decimation_sequence(curve: PlanarCurve, levels: tuple) -> CurveSequence:
    """Dyadic resamplings at steps ``span * 2**-j`` for ``j`` in ``lo..hi``.

    The characteristic length of each term is its grid step.
    """
    lo, hi = levels
    steps = [curve.span * 2.0**-j for j in range(lo, hi + 1)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        terms = [decimate(curve, s) for s in steps]
    return CurveSequence(terms, list(range(lo, hi + 1)), steps)


@dataclass
class RandomOrientationSummary:
    generation: int
    seeds: list
    h_dimensions: list
    h_r2: list
    m_dimension: float
    m_series_identical: bool
    rms_h_dimension: float
    reference_h_r2: float
    reference_h_dimension: float


def realization_seeds(seed: int, n: int) -> list:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n)]


def random_assembly(gen: KochGenerator, generations: tuple, seed: int,
                    base_span: float = 1.0) -> CurveSequence:
    """One randomly grouped sequence: every term is assembled independently.

    Term ``k`` draws its orientations from the stream ``(seed, k)``, so a term
    is not a refinement of the previous one.
    """
    lo, hi = generations
    ks = range(lo, hi + 1)
    terms = [koch_iterate(replace(gen, seed=(int(seed), k)), k, base_span) for k in ks]
    return CurveSequence(terms, list(ks))


def random_orientation_study(gen: KochGenerator, k: int, n_realizations: int,
                             cfg: AnalysisConfig = AnalysisConfig()) -> RandomOrientationSummary:
    """Direct analysis of independently assembled random sequences, generations 1..k.

    Also runs the deterministic generator as the reference for the H-cover fit
    quality. Realization seeds derive from ``cfg.seed``.
    """
    if not gen.random_orientation:
        raise ValueError("generator must have random_orientation=True")
    seeds = realization_seeds(cfg.seed, n_realizations)
    dims, r2s, m_series = [], [], []
    m_dim = math.nan
    for s in seeds:
        rep = analyze_sequence(random_assembly(gen, (1, k), s), cfg)
        dims.append(rep.covers["H"].estimate)
        r2s.append(rep.covers["H"].r2)
        m_series.append(tuple(p.tau_log["M"] for p in rep.points))
        m_dim = rep.covers["M"].estimate
    ref = analyze_sequence(koch_sequence(replace(gen, random_orientation=False), (1, k)), cfg)
    return RandomOrientationSummary(
        generation=k, seeds=seeds, h_dimensions=dims, h_r2=r2s, m_dimension=m_dim,
        m_series_identical=all(s == m_series[0] for s in m_series),
        rms_h_dimension=float(np.sqrt(np.mean(np.square(dims)))),
        reference_h_r2=ref.covers["H"].r2, reference_h_dimension=ref.covers["H"].estimate)


def rigid_bar_study(cfg: AnalysisConfig = AnalysisConfig(), motif=None,
                    vertical=None, horizontal=None):
    """Quadric direct analysis with vertical bars rigid, then horizontal bars rigid.

    Returns ``(vertical_rigid_report, horizontal_rigid_report, max_abs_difference)``.
    """
    from .generators import QUADRIC, QUADRIC_HORIZONTAL, QUADRIC_VERTICAL

    motif = QUADRIC if motif is None else motif
    vertical = QUADRIC_VERTICAL if vertical is None else vertical
    horizontal = QUADRIC_HORIZONTAL if horizontal is None else horizontal
    reports = []
    for rigid in (vertical, horizontal):
        gen = KochGenerator(motif, tuple(rigid))
        reports.append(analyze_sequence(koch_sequence(gen, cfg.generations), cfg))
    a, b = (r.dimensions() for r in reports)
    diff = max(abs(a[c] - b[c]) for c in COVERS)
    return reports[0], reports[1], diff
