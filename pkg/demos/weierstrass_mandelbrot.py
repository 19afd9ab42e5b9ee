"""Weierstrass-Mandelbrot graphs: fractal as a sequence, not as a single curve.

Direct problem: resample one 2^14-point WM graph on dyadic grids and treat the
resamplings as an approximating sequence. All three covers track the nominal D.

Inverse problem: cut samples of shrinking width out of the same graph. Only the
horizontal-force cover (graph correlation D = (5 - 2s)/2) keeps following D.
The moment and vertical covers collapse to 1, so the WM family is not a
perfectly fractal set.

Run with ``python demos/weierstrass_mandelbrot.py``.
"""

from dynfractal import analyze_master, analyze_sequence, decimation_sequence, perfectly_fractal
from dynfractal.reproduce import GRAPH_INVERSE, WM_DIRECT, wm_master

print("  D    | direct M   H      V    | inverse M   H      V    | perfectly fractal")
for D in (1.1, 1.3, 1.5, 1.7, 1.9):
    curve = wm_master(D)
    direct = analyze_sequence(decimation_sequence(curve, WM_DIRECT.levels), WM_DIRECT)
    inverse = analyze_master(curve, GRAPH_INVERSE)
    d, i = direct.dimensions(), inverse.dimensions()
    print(f"  {D:.1f}  | {d['M']:.3f} {d['H']:.3f} {d['V']:.3f}  | "
          f"{i['M']:.3f} {i['H']:.3f} {i['V']:.3f}  | {perfectly_fractal(direct, inverse)}")
