"""Random walk and white noise, with a box-counting cross-check.

A +/-0.01 lattice walk on 2^14 points should look like a D = 1.5 graph and
uniform white noise like a plane-filling D = 2 one. The dynamical estimates
come from dyadic resamplings (direct) and shrinking samples (inverse); grid
box counting gives an independent reading of the same curves.

Run with ``python demos/random_graphs.py``.
"""

from dynfractal import analyze_master, analyze_sequence, decimation_sequence
from dynfractal.reproduce import GRAPH_INVERSE, RANDOM_DIRECT, random_masters
from dynfractal.testkit import box_counting_dimension

for name, curve in random_masters(seed=RANDOM_DIRECT.seed).items():
    direct = analyze_sequence(decimation_sequence(curve, RANDOM_DIRECT.levels), RANDOM_DIRECT)
    inverse = analyze_master(curve, GRAPH_INVERSE)
    box = box_counting_dimension(curve)
    print(name)
    print("  direct  ", {c: round(v, 4) for c, v in direct.dimensions().items()})
    print("  inverse ", {c: round(v, 4) for c, v in inverse.dimensions().items()})
    print(f"  box counting {box.dimension:.4f} over {len(box.sizes)} scales, "
          f"{box.offsets} grid offsets")
