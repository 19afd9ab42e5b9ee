"""Dynamical fractal dimensions of planar curves.

A curve is read as an elastic wire clamped at one end with a tip mass at the
other. The periods of the three tip excitations (moment M, horizontal force H,
vertical force V) scale as power laws along a sequence of approximating curves,
and the log-log slopes convert to three fractal dimension estimates.
"""

__version__ = "0.1.0"

from .analysis import (AnalysisConfig, DimensionReport, FitResult, FitThresholds,
                       InsufficientDataError, PeriodPoint, analyze_master, analyze_sequence,
                       classify, convert_dimension, decimation_sequence, direct_series,
                       fit_loglog, inverse_series, koch_sequence, perfectly_fractal,
                       random_assembly, random_orientation_study, rigid_bar_study)
from .generators import (QUADRIC, TRIADIC, KochGenerator, SelfSimilarCurve, StochasticParams,
                         WMParams, curve_from_spec, koch_iterate, random_walk, white_noise,
                         wm_curve)
from .geometry import (CurveError, CurveSequence, PlanarCurve, arc_length, cut_sample, decimate,
                       load_curve, min_segment_length, save_curve, straight)
from .mechanics import (ComplianceTriple, OscillatorConstants, PeriodTriple, compliances,
                        coupled_periods, curve_periods, flexibility_matrix, periods)

__all__ = [name for name in dir() if not name.startswith("_")]
