"""Command-line entry point: ``generate``, ``analyze``, ``reproduce``, ``verify``.

Exit codes: 0 success, 2 invalid input, 3 insufficient data, 4 oracle gate failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from pathlib import Path

from . import __version__
from .analysis import (AnalysisConfig, InsufficientDataError, analyze_master, analyze_sequence,
                       decimation_sequence, koch_sequence)
from .generators import (TRIADIC, KochGenerator, StochasticParams, WMParams, curve_from_spec,
                         generator_from_spec, koch_iterate, random_walk, white_noise, wm_curve)
from .geometry import PlanarCurve, straight
from .mechanics import COVERS
from .reproduce import EXPERIMENTS, reproduce
from .testkit import OracleConfig, compare_compliances, koch_closed_forms, moment_identity_gap

log = logging.getLogger("dynfractal")

EXIT_OK, EXIT_INPUT, EXIT_DATA, EXIT_ORACLE = 0, 2, 3, 4

CSV_COLUMNS = ("label", "x_log", "tau_M_log", "tau_H_log", "tau_V_log", "degenerate")


class OracleGateError(RuntimeError):
    pass


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _write_json(obj, path: Path | None) -> None:
    text = json.dumps(obj, indent=2, default=_jsonable)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n")


def _jsonable(x):
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def _range(text: str) -> tuple:
    """Parse ``LO:HI`` (or ``LO-HI``) into an inclusive integer pair."""
    for sep in (":", "-", ","):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def _ratio(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


# -- input handling ---------------------------------------------------------


def load_input(path: str):
    """Return ``(obj, kind)``: a generator spec dict or a :class:`PlanarCurve`."""
    obj = _read_json(path)
    if "kind" in obj:
        return obj, "spec"
    if "vertices" in obj:
        return PlanarCurve.from_json(obj), "curve"
    raise ValueError(f"{path}: neither a curve (needs 'vertices') nor a generator spec (needs 'kind')")


def build_config(args) -> AnalysisConfig:
    cfg = AnalysisConfig.from_json(_read_json(args.config)) if args.config else AnalysisConfig()
    changes = {}
    if args.problem:
        changes["problem"] = args.problem
    if args.model:
        changes["model"] = args.model.replace("-", "_")
    if args.ratio is not None:
        changes["ratio"] = args.ratio
    if args.samples is not None:
        changes["samples"] = args.samples
    if args.generations is not None:
        changes["generations"] = args.generations
    if args.levels is not None:
        changes["levels"] = args.levels
    if args.seed is not None:
        changes["seed"] = args.seed
    return cfg.with_(**changes) if changes else cfg


def run_analysis(obj, kind: str, cfg: AnalysisConfig):
    """Dispatch to the direct or inverse problem for a spec or an explicit curve."""
    if kind == "spec" and obj.get("kind") == "koch":
        gen = generator_from_spec({**obj, "seed": obj.get("seed", cfg.seed)})
        span = float(obj.get("base_span", 1.0))
        if cfg.problem == "direct":
            return analyze_sequence(koch_sequence(gen, cfg.generations, span), cfg)
        master = curve_from_spec({**obj, "k": obj.get("k", cfg.generations[1])})
        return analyze_master(master, cfg)
    if kind == "spec":
        spec = dict(obj)
        if spec.get("kind") in ("random_walk", "white_noise"):
            spec.setdefault("seed", cfg.seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            curve = curve_from_spec(spec)
    else:
        curve = obj
    if cfg.problem == "direct":
        return analyze_sequence(decimation_sequence(curve, cfg.levels), cfg)
    return analyze_master(curve, cfg)


def write_series_csv(points, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for p in points:
            taus = ["" if math.isnan(p.tau_log[c]) else repr(p.tau_log[c]) for c in COVERS]
            w.writerow([p.label, repr(p.x_log), *taus, "".join(p.degenerate)])


def series_svg(report, width: int = 480, height: int = 360) -> str:
    """Log-log scatter of every cover with its fitted line."""
    colors = {"M": "#1f77b4", "H": "#d62728", "V": "#2ca02c"}
    pts = [(p.x_log, p.tau_log[c], c) for p in report.points for c in COVERS
           if not math.isnan(p.tau_log[c])]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"/>'
    xs = [x for x, _, _ in pts]
    ys = [y for _, y, _ in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    pad = 40

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           'fill="none" stroke="#888"/>']
    for x, y, c in pts:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{colors[c]}"/>')
    for c, r in report.covers.items():
        if math.isfinite(r.slope):
            ya, yb = r.slope * x0 + r.intercept, r.slope * x1 + r.intercept
            out.append(f'<line x1="{sx(x0):.2f}" y1="{sy(ya):.2f}" x2="{sx(x1):.2f}" '
                       f'y2="{sy(yb):.2f}" stroke="{colors[c]}"/>')
    for i, c in enumerate(COVERS):
        out.append(f'<text x="{pad + 60 * i}" y="{pad - 10}" fill="{colors[c]}" '
                   f'font-size="12">{c}: D={report.covers[c].estimate:.4f}</text>')
    out += [f'<text x="{width / 2:.0f}" y="{height - 8}" font-size="12" text-anchor="middle">'
            'log(x)</text>', "</svg>"]
    return "\n".join(out)


# -- commands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    spec = _read_json(args.config) if args.config else json.loads(args.spec)
    if args.seed is not None:
        spec["seed"] = args.seed
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        curve = curve_from_spec(spec, explicit=True)
    out = Path(args.out) if args.out else None
    _write_json(curve.to_json(), out)
    if args.svg and out is not None:
        out.with_suffix(".svg").write_text(curve_svg(curve))
    log.info("generated %d segments", curve.n_segments)
    return EXIT_OK


def curve_svg(curve: PlanarCurve, width: int = 480, height: int = 240) -> str:
    v = curve.vertices
    x0, y0 = v.min(axis=0)
    x1, y1 = v.max(axis=0)
    s = min((width - 20) / max(x1 - x0, 1e-12), (height - 20) / max(y1 - y0, 1e-12))
    path = " ".join(f"{10 + (x - x0) * s:.2f},{height - 10 - (y - y0) * s:.2f}" for x, y in v)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'<polyline points="{path}" fill="none" stroke="black" stroke-width="0.5"/></svg>')


def cmd_analyze(args) -> int:
    obj, kind = load_input(args.input)
    cfg = build_config(args)
    report = run_analysis(obj, kind, cfg)
    payload = report.to_json()
    payload["input"] = obj if kind == "spec" else {"curve_file": str(args.input)}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(payload, out / "report.json")
        write_series_csv(report.points, out / "series.csv")
        if args.svg:
            (out / "series.svg").write_text(series_svg(report))
    else:
        _write_json(payload, None)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    comp = reproduce(args.experiment)
    print(comp.table())
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        _write_json(comp.to_json(), out)
    return EXIT_OK


def verification_curves() -> dict:
    """Built-in family sample used by ``verify`` without an input file."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {
            "straight": straight(),
            "quadric_k3": koch_iterate(KochGenerator(), 3),
            "quadric_rigid_k3": koch_iterate(KochGenerator(rigid_segments=(1, 3, 4, 6)), 3),
            "triadic_k5": koch_iterate(KochGenerator(TRIADIC), 5),
            "triadic_random_k5": koch_iterate(KochGenerator(TRIADIC, random_orientation=True), 5),
            "wm_2^10": wm_curve(WMParams(n_points=1 << 10)),
            "random_walk": random_walk(StochasticParams(n_points=1 << 10)),
            "white_noise": white_noise(StochasticParams(n_points=1 << 10)),
        }


def verify_curve(name: str, curve, tol: float, spec: dict | None = None) -> dict:
    row = {"name": name,
           "compliance_gap": compare_compliances(curve, cfg=OracleConfig()),
           "moment_identity_gap": moment_identity_gap(curve)}
    if spec is not None and spec.get("kind") == "koch" and not spec.get("rigid_segments"):
        cf = koch_closed_forms(generator_from_spec(spec), int(spec.get("k", 0)),
                               float(spec.get("base_span", 1.0)))
        row["arc_length_gap"] = abs(curve.arc_length() - cf.arc_length) / cf.arc_length
    row["passed"] = all(v <= tol for k, v in row.items() if k.endswith("_gap"))
    return row


def cmd_verify(args) -> int:
    tol = args.verify_tolerance
    rows = []
    if args.input:
        obj, kind = load_input(args.input)
        curve = curve_from_spec(obj, explicit=True) if kind == "spec" else obj
        rows.append(verify_curve(Path(args.input).stem, curve, tol, obj if kind == "spec" else None))
    else:
        for name, curve in verification_curves().items():
            rows.append(verify_curve(name, curve, tol))
    for r in rows:
        gaps = " ".join(f"{k}={v:.2e}" for k, v in r.items() if k.endswith("_gap"))
        print(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}: {gaps}")
    if args.out:
        _write_json({"tolerance": tol, "results": rows}, Path(args.out))
    if not all(r["passed"] for r in rows):
        raise OracleGateError("oracle gate failed")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynfractal", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a curve JSON from a generator spec")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="generator spec JSON file")
    src.add_argument("--spec", help="generator spec as an inline JSON string")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output curve JSON (stdout if omitted)")
    g.add_argument("--svg", action="store_true", help="also write <out>.svg")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="direct or inverse dimension analysis")
    a.add_argument("input", help="curve JSON or generator spec JSON")
    a.add_argument("--config", help="analysis config JSON (flags override it)")
    a.add_argument("--problem", choices=("direct", "inverse"))
    a.add_argument("--model", choices=("self-similar", "self_similar", "graph"))
    a.add_argument("--ratio", type=_ratio, help="sample width ratio, e.g. 1/3")
    a.add_argument("--samples", type=int)
    a.add_argument("--generations", type=_range, help="Koch generations LO:HI")
    a.add_argument("--levels", type=_range, help="dyadic resampling levels LO:HI")
    a.add_argument("--seed", type=int)
    a.add_argument("--out", help="output directory for report.json and series.csv")
    a.add_argument("--svg", action="store_true", help="also write series.svg")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("reproduce", help="rerun a published figure or table")
    r.add_argument("experiment", help=f"one of {', '.join(EXPERIMENTS)} (or 1, 2, 3)")
    r.add_argument("--out", help="comparison JSON path")
    r.set_defaults(func=cmd_reproduce)

    v = sub.add_parser("verify", help="check closed forms against independent oracles")
    v.add_argument("input", nargs="?", help="curve or spec JSON (default: built-in families)")
    v.add_argument("--verify-tolerance", type=float, default=1e-10)
    v.add_argument("--out", help="write results JSON")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InsufficientDataError as e:
        print(f"error: insufficient data: {e}", file=sys.stderr)
        return EXIT_DATA
    except OracleGateError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
