"""Command-line interface.

Subcommands: validate, unfold, periods, classify, rigidity, iet, diagnose,
corpus.  Exit codes: 0 success (weakly mixing, for classify), 10 not weakly
mixing (classify only), 64 usage error, 65 bad input data, 70 internal
precision failure.  Exact commands emit byte-identical JSON across runs;
diagnostic commands are seed-pinned and write figures next to their CSVs.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import serialize
from .classify import classify_polygon, classify_surface
from .corpus import corpus_polygons, corpus_surfaces
from .diagnostics import (
    correlation_cesaro,
    rigidity_exclusion_scan,
    veech_tracker,
)
from .dynamics import first_return_iet, zorich_step
from .errors import FlatmixError, InputError, PrecisionError
from .flow import Direction, Transversal
from .geometry import PlanarVector
from .homology import homology_basis, period_matrix
from .polygons import triangle_from_angles
from .rigidity import rigidity_configuration, rigidity_curve_class, verify_rigidity_config
from .unfold import deck_rotation, unfold

EXIT_OK = 0
EXIT_NOT_WM = 10
EXIT_USAGE = 64
EXIT_BAD_INPUT = 65
EXIT_PRECISION = 70


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def parse_direction(spec, field):
    """Direction components: 'dx,dy' with each one of a rational 'p/q', the
    literal 'phi' or 'g' (the field generator), or colon-joined power-basis
    coordinates like '0:1'."""
    parts = spec.split(",")
    if len(parts) != 2:
        raise InputError("direction must be 'dx,dy'")

    def component(token):
        token = token.strip()
        if token in ("phi", "g"):
            return field.generator()
        if ":" in token:
            return field.element([Fraction(t) for t in token.split(":")])
        return field.from_rational(Fraction(token))

    return Direction(PlanarVector(component(parts[0]), component(parts[1])))


def _load_polygon(args):
    if getattr(args, "triangle", None):
        fracs = [tuple(map(int, t.split("/"))) for t in args.triangle.split(",")]
        return triangle_from_angles(fracs)
    if getattr(args, "polygon", None):
        return serialize.polygon_from_json(_load_json(args.polygon))
    raise InputError("no polygon input given")


def _load_surface(args):
    if getattr(args, "surface", None):
        return serialize.surface_from_json(_load_json(args.surface))
    if getattr(args, "polygon", None) or getattr(args, "triangle", None):
        return unfold(_load_polygon(args))
    raise InputError("no surface input given")


# -- subcommand implementations ----------------------------------------------

def cmd_validate(args):
    poly = _load_polygon(args)
    out = serialize.polygon_to_json(poly)
    out["k"] = poly.k
    out["area"] = serialize.element_to_json(poly.area())
    _write(args.out, serialize.dump_canonical(out))
    return EXIT_OK


def cmd_unfold(args):
    poly = _load_polygon(args)
    surface = unfold(poly)
    out = serialize.surface_to_json(surface)
    out["genus"] = surface.genus
    out["stratum"] = surface.stratum_signature()
    out["area"] = serialize.element_to_json(surface.area)
    out["deck_order"] = deck_rotation(surface, poly).order()
    _write(args.out, serialize.dump_canonical(out))
    return EXIT_OK


def cmd_periods(args):
    surface = _load_surface(args)
    basis = homology_basis(surface)
    pm = period_matrix(surface, basis)
    _write(args.out, serialize.dump_canonical(
        serialize.periods_to_json(surface, basis, pm)))
    return EXIT_OK


def cmd_classify(args):
    if getattr(args, "surface", None):
        verdict = classify_surface(_load_surface(args))
    else:
        verdict = classify_polygon(_load_polygon(args), cross_check=args.cross_check)
    _write(args.out, serialize.dump_canonical(serialize.verdict_to_json(verdict)))
    return EXIT_OK if verdict.weakly_mixing else EXIT_NOT_WM


def cmd_rigidity(args):
    surface = _load_surface(args)
    direction = parse_direction(args.direction, surface.field)
    cfg = rigidity_configuration(surface, direction, args.L, exact=args.exact,
                                 marked_point=args.marked)
    basis = homology_basis(surface)
    report = verify_rigidity_config(surface, cfg, basis=basis)
    gamma = rigidity_curve_class(surface, cfg, basis)
    out = {
        "case": cfg.case,
        "L": str(cfg.L),
        "V": float(cfg.V),
        "H": float(cfg.H),
        "sigma": float(cfg.sigma),
        "constants": {k: float(v) for k, v in cfg.constants.items()},
        "curve_class": gamma["cycle"],
        "pairings": {"im": float(gamma["im_pairing"]),
                     "re": float(gamma["re_pairing"]),
                     "exactly_verified": bool(gamma["pairings_ok"])},
        "verification": {k: v for k, v in report.items() if isinstance(v, bool)},
    }
    _write(args.out, serialize.dump_canonical(out))
    if args.plot:
        from .plotting import save_rigidity_figure

        save_rigidity_figure(cfg, report, args.plot)
    return EXIT_OK if report["passed"] else EXIT_PRECISION


def cmd_iet(args):
    surface = _load_surface(args)
    direction = parse_direction(args.direction, surface.field)
    if args.transversal:
        c, e = map(int, args.transversal.split(","))
        transversal = Transversal.from_edge(surface, direction, c, e)
    else:
        from .diagnostics import default_transversal

        transversal = default_transversal(surface, direction)
    iet = first_return_iet(surface, direction, transversal, exact=args.exact)
    rows = []
    cur = iet
    rows.append({"step": 0, "matrix": "", "lengths":
                 ";".join(repr(float(x)) for x in cur.lengths)})
    for n in range(args.steps):
        cur, step = zorich_step(cur)
        rows.append({
            "step": n + 1,
            "matrix": ";".join(",".join(str(v) for v in row) for row in step.matrix),
            "lengths": ";".join(repr(float(x)) for x in cur.lengths),
        })
    text = _csv_text(rows, ["step", "matrix", "lengths"])
    _write(args.out, text)
    return EXIT_OK


def _csv_text(rows, fields):
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_diagnose(args):
    surface = _load_surface(args)
    direction = parse_direction(args.direction, surface.field)
    prefix = args.out_prefix
    summary = {"mode": args.mode, "direction": args.direction}
    if args.mode == "tracker":
        trace = veech_tracker(surface, direction, args.alpha, args.steps)
        rows = [{"step": s["step"], "value": repr(s["distance"]),
                 "error": "", "log_norm": repr(s["log_norm"]),
                 "excursion": int(s["excursion"])} for s in trace.steps]
        _write(prefix + ".csv", _csv_text(rows, ["step", "value", "error",
                                                 "log_norm", "excursion"]))
        summary["alpha"] = args.alpha
        summary["final_distance"] = trace.steps[-1]["distance"] if trace.steps else None
        if args.plot:
            from .plotting import save_tracker_figure

            save_tracker_figure(trace, prefix + ".png")
    elif args.mode == "exclusion":
        schedule = [int(x) for x in args.schedule.split(",")]
        report = rigidity_exclusion_scan(surface, direction, args.epsilon,
                                         schedule,
                                         window=(args.window_lo, args.window_hi))
        rows = [{"lo": repr(a), "hi": repr(b), "config": i}
                for (a, b, i) in report.excluded]
        _write(prefix + ".csv", _csv_text(rows, ["lo", "hi", "config"]))
        summary.update({
            "epsilon": report.epsilon,
            "survivor_measure": report.survivor_measure(),
            "configs_used": [[float(v), float(s), str(L)]
                             for (v, s, L) in report.configs_used],
            "replay_sound": report.replay(),
        })
        if args.plot:
            from .plotting import save_exclusion_figure

            save_exclusion_figure(report, prefix + ".png")
    elif args.mode == "correlation":
        if args.seed is None:
            raise InputError("--seed is required for correlation mode")
        T_values = [float(t) for t in args.T_values.split(",")]
        curve = correlation_cesaro(surface, direction, args.f, args.g,
                                   max(T_values), n_samples=args.samples,
                                   seed=args.seed, T_values=T_values)
        rows = [{"T": repr(t), "value": repr(v), "error": repr(e)}
                for t, v, e in zip(curve.T_values, curve.cesaro_values,
                                   curve.stderrs)]
        _write(prefix + ".csv", _csv_text(rows, ["T", "value", "error"]))
        summary.update({
            "f": args.f, "g": args.g, "seed": args.seed,
            "nonergodic_suspected": curve.nonergodic_suspected,
        })
        if args.plot:
            from .plotting import save_correlation_figure

            save_correlation_figure(curve, prefix + ".png")
    else:
        raise InputError(f"unknown diagnose mode {args.mode}")
    _write(prefix + ".json", serialize.dump_canonical(summary))
    return EXIT_OK


def cmd_corpus(args):
    rows = []
    for name, poly in corpus_polygons():
        verdict = classify_polygon(poly)
        rows.append(_corpus_row(name, "polygon", verdict))
    for name, surface in corpus_surfaces():
        verdict = classify_surface(surface)
        rows.append(_corpus_row(name, "surface", verdict))
    fields = ["name", "type", "k", "weakly_mixing", "reason", "kernel_dim", "subtype"]
    text = _csv_text(rows, fields)
    if args.out_prefix:
        _write(args.out_prefix + ".csv", text)
        _write(args.out_prefix + ".json",
               serialize.dump_canonical({"rows": rows}))
        if args.plot:
            from .plotting import save_corpus_figure

            save_corpus_figure(rows, args.out_prefix + ".png")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _corpus_row(name, kind, verdict):
    return {
        "name": name,
        "type": kind,
        "k": verdict.k if verdict.k is not None else "",
        "weakly_mixing": verdict.weakly_mixing,
        "reason": verdict.reason,
        "kernel_dim": verdict.kernel_dim,
        "subtype": verdict.subtype or "",
    }


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="flatmix", description=__doc__)
    p.add_argument("--schema", action="store_true",
                   help="print the JSON schemas and exit")
    sub = p.add_subparsers(dest="command")

    def add_common(sp, surface=False, polygon=False):
        if polygon:
            sp.add_argument("--polygon", help="polygon JSON file")
            sp.add_argument("--triangle",
                            help="triangle shorthand, e.g. 1/2,1/4,1/4")
        if surface:
            sp.add_argument("--surface", help="surface JSON file")
        sp.add_argument("--out", default="-", help="output path (default stdout)")

    sp = sub.add_parser("validate", help="validate a polygon")
    add_common(sp, polygon=True)

    sp = sub.add_parser("unfold", help="unfold a polygon to a surface")
    add_common(sp, polygon=True)

    sp = sub.add_parser("periods", help="homology basis and period matrix")
    add_common(sp, surface=True, polygon=True)

    sp = sub.add_parser("classify", help="weak-mixing verdict")
    add_common(sp, surface=True, polygon=True)
    sp.add_argument("--cross-check", action="store_true",
                    help="also run the exact kernel on fast-path polygons")

    sp = sub.add_parser("rigidity", help="construct a rigidity configuration")
    add_common(sp, surface=True, polygon=True)
    sp.add_argument("--direction", required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--marked", type=int, default=None,
                    help="marked vertex class for smooth surfaces")
    sp.add_argument("--plot", help="PNG path for the report figure")

    sp = sub.add_parser("iet", help="first-return IET and induction steps")
    add_common(sp, surface=True, polygon=True)
    sp.add_argument("--direction", required=True)
    sp.add_argument("--transversal", help="cell,edge of the section")
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--exact", action="store_true")

    sp = sub.add_parser("diagnose", help="numerical weak-mixing diagnostics")
    sp.add_argument("--surface", help="surface JSON file")
    sp.add_argument("--polygon", help="polygon JSON file")
    sp.add_argument("--triangle")
    sp.add_argument("--mode", required=True,
                    choices=["tracker", "exclusion", "correlation"])
    sp.add_argument("--direction", required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=30)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--schedule", default="8,21,55")
    sp.add_argument("--window-lo", type=float, default=0.05)
    sp.add_argument("--window-hi", type=float, default=3.0)
    sp.add_argument("--f", default="bump:0,0.8")
    sp.add_argument("--g", default="bump:0,0.8")
    sp.add_argument("--T-values", default="10,100,1000")
    sp.add_argument("--samples", type=int, default=6)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--plot", action="store_true",
                    help="also write <prefix>.png")
    sp.add_argument("--out-prefix", required=True)

    sp = sub.add_parser("corpus", help="classify the built-in corpus")
    sp.add_argument("--out-prefix", default=None)
    sp.add_argument("--plot", action="store_true")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "unfold": cmd_unfold,
    "periods": cmd_periods,
    "classify": cmd_classify,
    "rigidity": cmd_rigidity,
    "iet": cmd_iet,
    "diagnose": cmd_diagnose,
    "corpus": cmd_corpus,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.schema:
        sys.stdout.write(serialize.dump_canonical(serialize.SCHEMAS))
        return EXIT_OK
    if not args.command:
        parser.print_usage()
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except PrecisionError as exc:
        sys.stderr.write(f"precision failure: {exc}\n")
        return EXIT_PRECISION
    except FlatmixError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
