"""Command-line interface: every computation reads JSON files and prints JSON.

Exit status: 0 success, 1 bad input, 2 internal consistency failure,
3 a check found violations or discrepancies.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from typing import Sequence

from . import io as tio

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_VIOLATIONS = 3

FAMILIES = ("hdim", "abs-chi", "total-dim")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _exponents(text: str) -> list:
    from .matching import parse_exponent

    try:
        return [parse_exponent(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _exponent(text: str):
    ps = _exponents(text)
    if len(ps) != 1:
        raise argparse.ArgumentTypeError(f"expected one exponent, got {text!r}")
    return ps[0]


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _orientation(text: str) -> str:
    if any(c not in "FB" for c in text):
        raise argparse.ArgumentTypeError(f"orientation must be a string of F and B, got {text!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triwass", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="interval barcode of a representation")
    p.add_argument("--rep", required=True)

    p = sub.add_parser("cohomology", help="cohomology and derived barcode of a complex")
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int, help="also emit the cohomology representation in this degree")

    p = sub.add_parser("cone", help="mapping cone of a chain morphism")
    p.add_argument("--morphism", required=True)

    p = sub.add_parser("weight", help="weight vector and its integral")
    p.add_argument("--object", required=True, help="complex or derived barcode (with quiver)")
    p.add_argument("--family", choices=FAMILIES, required=True)

    p = sub.add_parser("bounds", help="lower and upper bounds on the path distance")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--family", choices=FAMILIES, required=True)

    p = sub.add_parser("path-oracle", help="cheapest zigzag through a finite pool of complexes")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--pool", help="pool document; a and b are always included")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--max-len", type=_positive, default=4)
    p.add_argument("--candidates", type=_positive, default=6)

    p = sub.add_parser("wasserstein", help="optimal partial matching of two derived barcodes")
    p.add_argument("--a", help="complex or derived barcode")
    p.add_argument("--b", help="complex or derived barcode")
    p.add_argument("--costs", help="explicit cost table instead of --a/--b")
    p.add_argument("--p", type=_exponent, required=True)
    p.add_argument("--family", choices=FAMILIES, default="hdim")

    p = sub.add_parser("reflect", help="apply a reflection functor")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rep")
    group.add_argument("--barcode")
    p.add_argument("--vertex", type=_positive, required=True, help="1-based vertex")
    p.add_argument("--kind", choices=("sink", "source"), required=True)

    p = sub.add_parser("check-exact", help="random triangle test of the weight inequalities")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-max", type=_positive, default=5)
    p.add_argument("--max-terms", type=_positive, default=4)
    p.add_argument("--max-dim", type=_positive, default=3)

    p = sub.add_parser("isometry", help="compare weights and distances across reflections")
    p.add_argument("--family", choices=("abs-chi",), default="abs-chi")
    p.add_argument("--n-max", type=_positive, default=4)
    p.add_argument("--orientation", type=_orientation, help="only this orientation (default: all)")
    p.add_argument("--p", type=_exponents, default="1,2,inf", dest="ps")
    p.add_argument("--degrees", type=_int_list, default="0,1")
    p.add_argument("--wrong-transport", action="store_true",
                   help="drop the degree shift of the reflected simple (negative control)")
    return parser


def _load_object(path: str):
    """A complex, or a derived barcode with its quiver."""
    doc = tio.load_json(path)
    if isinstance(doc, dict) and "terms" in doc:
        return tio.complex_from_json(doc)
    bars, quiver = tio.derived_barcode_from_json(doc)
    if quiver is None:
        raise tio.InputError(f"{path}: barcode needs a quiver")
    return bars, quiver


def _bars_and_quiver(obj):
    from .complex import RepComplex, derived_barcode

    if isinstance(obj, RepComplex):
        return derived_barcode(obj), obj.quiver
    return obj


def _family(name: str):
    from .weights import WeightFamily

    return WeightFamily.from_name(name)


def _cmd_decompose(args) -> tuple[dict, int]:
    from .quiver import decompose

    m = tio.rep_from_json(tio.load_json(args.rep))
    return tio.barcode_to_json(decompose(m), m.quiver), EXIT_OK


def _cmd_cohomology(args) -> tuple[dict, int]:
    from .complex import cohomology, cohomology_dims, derived_barcode

    c = tio.complex_from_json(tio.load_json(args.complex))
    out = {
        "dims": {str(i): list(cohomology_dims(c, i)) for i in c.degrees()},
        "derived_barcode": tio.barcode_to_json(derived_barcode(c), c.quiver),
    }
    if args.degree is not None:
        out["degree"] = args.degree
        out["rep"] = tio.rep_to_json(cohomology(c, args.degree))
    return out, EXIT_OK


def _cmd_cone(args) -> tuple[dict, int]:
    from .complex import cone, derived_barcode

    f = tio.morphism_from_json(tio.load_json(args.morphism))
    c = cone(f)
    return {"cone": tio.complex_to_json(c),
            "derived_barcode": tio.barcode_to_json(derived_barcode(c), c.quiver)}, EXIT_OK


def _cmd_weight(args) -> tuple[dict, int]:
    from .weights import integrate, weight_vector

    obj = _load_object(args.object)
    # total-dim is not a derived invariant, so complexes are weighed as given
    target, quiver = obj if isinstance(obj, tuple) else (obj, obj.quiver)
    fam = _family(args.family)
    vec = weight_vector(target, fam, quiver)
    return {"family": fam.kind, "vector": list(vec), "integral": tio.rational(integrate(vec, quiver))}, EXIT_OK


def _cmd_bounds(args) -> tuple[dict, int]:
    from .metrics import bounds

    a, b = _load_object(args.a), _load_object(args.b)
    fam = _family(args.family)
    qa, qb = _bars_and_quiver(a)[1], _bars_and_quiver(b)[1]
    if qa != qb:
        raise tio.InputError("bounds: objects live over different quivers")
    a = a[0] if isinstance(a, tuple) else a
    b = b[0] if isinstance(b, tuple) else b
    bd = bounds(a, b, fam, qa)
    return {"family": fam.kind, "lower": tio.rational(bd.lower), "upper": tio.rational(bd.upper)}, EXIT_OK


def _cmd_path_oracle(args) -> tuple[dict, int]:
    from .metrics import bounds, restricted_path_metric

    a = tio.complex_from_json(tio.load_json(args.a))
    b = tio.complex_from_json(tio.load_json(args.b))
    if a.quiver != b.quiver:
        raise tio.InputError("path-oracle: objects live over different quivers")
    pool = [a, b]
    if args.pool:
        doc = tio.load_json(args.pool, tio.POOL_SCHEMA)
        for k, cdoc in enumerate(doc["complexes"]):
            c = tio.complex_from_json(cdoc, a.quiver)
            if c.quiver != a.quiver:
                raise tio.InputError(f"path-oracle: pool entry {k} lives over a different quiver")
            pool.append(c)
    fam = _family(args.family)
    value = restricted_path_metric(a, b, fam, pool, args.max_len, args.candidates)
    bd = bounds(a, b, fam)
    if value < bd.lower:
        raise ArithmeticError(f"path oracle {value} fell below the lower bound {bd.lower}")
    return {"family": fam.kind, "value": tio.extended(value), "pool_size": len(pool) + 1,
            "lower": tio.rational(bd.lower), "upper": tio.rational(bd.upper)}, EXIT_OK


def _cmd_wasserstein(args) -> tuple[dict, int]:
    from .matching import optimal_matching
    from .metrics import default_pair_distance, expand_bars, wasserstein

    if args.costs:
        if args.a or args.b:
            raise tio.InputError("wasserstein: give either --costs or --a/--b, not both")
        ab, a0, zb = tio.cost_table_from_json(tio.load_json(args.costs))
        return tio.matching_to_json(optimal_matching(ab, a0, zb, args.p)), EXIT_OK
    if not (args.a and args.b):
        raise tio.InputError("wasserstein: --a and --b are required without --costs")
    bars_a, qa = _bars_and_quiver(_load_object(args.a))
    bars_b, qb = _bars_and_quiver(_load_object(args.b))
    if qa != qb:
        raise tio.InputError("wasserstein: barcodes live over different quivers")
    fam = _family(args.family)
    res = wasserstein(bars_a, bars_b, args.p, default_pair_distance(fam, qa))
    out = tio.matching_to_json(res, expand_bars(bars_a), expand_bars(bars_b))
    out["family"] = fam.kind
    return out, EXIT_OK


def _cmd_reflect(args) -> tuple[dict, int]:
    from .derived_equiv import Reflection, reflect_derived, reflect_quiver, reflect_rep

    r = Reflection(args.vertex - 1, args.kind)
    if args.rep:
        m = tio.rep_from_json(tio.load_json(args.rep))
        r.check(m.quiver)
        return {"rep": tio.rep_to_json(reflect_rep(m, r))}, EXIT_OK
    bars, quiver = tio.derived_barcode_from_json(tio.load_json(args.barcode))
    if quiver is None:
        raise tio.InputError(f"{args.barcode}: barcode needs a quiver")
    r.check(quiver)
    return {"barcode": tio.barcode_to_json(reflect_derived(bars, quiver, r), reflect_quiver(quiver, r))}, EXIT_OK


def _cmd_check_exact(args) -> tuple[dict, int]:
    from .weights import check_exactness

    report = check_exactness(_family(args.family), args.trials, args.seed, args.n_max,
                             args.max_terms, args.max_dim)
    return report.to_dict(), EXIT_VIOLATIONS if report.violations else EXIT_OK


def _cmd_isometry(args) -> tuple[dict, int]:
    from .derived_equiv import all_orientations, indecomposable_objects, isometry_report, valid_reflections
    from .quiver import AnQuiver, Interval

    fam = _family(args.family)
    if args.orientation is not None:
        orients = [tuple(args.orientation)]
    else:
        orients = [o for n in range(1, args.n_max + 1) for o in all_orientations(n)]
    reports, total = [], 0
    for orient in orients:
        q = AnQuiver(len(orient) + 1, orient)
        base = indecomposable_objects(q, args.degrees)
        for r in valid_reflections(q):
            objects = base
            if args.wrong_transport:
                # a lone bar cannot see the missing shift; pair the reflected simple with every bar
                simple = Interval(r.vertex + 1, r.vertex + 1)
                objects = base + [Counter({(simple, d): 1}) + x for d in args.degrees for x in base]
            for p in args.ps:
                rep = isometry_report(objects, fam, q, r, p, shift_simple=not args.wrong_transport)
                total += len(rep.discrepancies)
                reports.append(rep.to_dict())
    out = {"family": fam.kind, "wrong_transport": args.wrong_transport, "degrees": args.degrees,
           "discrepancy_count": total, "reports": reports}
    return out, EXIT_VIOLATIONS if total else EXIT_OK


COMMANDS = {
    "decompose": _cmd_decompose,
    "cohomology": _cmd_cohomology,
    "cone": _cmd_cone,
    "weight": _cmd_weight,
    "bounds": _cmd_bounds,
    "path-oracle": _cmd_path_oracle,
    "wasserstein": _cmd_wasserstein,
    "reflect": _cmd_reflect,
    "check-exact": _cmd_check_exact,
    "isometry": _cmd_isometry,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, status = COMMANDS[args.command](args)
    except ArithmeticError as exc:
        print(f"triwass: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"triwass: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = tio.dumps(doc)
    if args.output:
        try:
            tio.write_atomic(args.output, text)
        except OSError as exc:
            print(f"triwass: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
