"""Command-line front end: chart, split, gu-split, leaves."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import errors
from .cgl import CGLData, bott_samelson_chart, gu_chart_pfaffian, skew_matrix, theorem_c_certificate
from .exact import check_prime
from .frobenius import is_splitting
from .leaves import enumerate_leaves, leaf_dimension
from .poly import format_poly
from .rootsys import RootSystem, format_gamma, format_word, parse_gamma, parse_word, subexpressions

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_INTERNAL = 0, 2, 3, 4

USAGE_ERRORS = (
    errors.ParseError,
    errors.LengthMismatch,
    errors.IndexOutOfRange,
    errors.NotPrime,
    errors.PrimeTooSmall,
    errors.InvalidDelta,
    errors.DimensionMismatch,
    errors.ArityMismatch,
    errors.DenominatorDivisibleByP,
)
UNSUPPORTED_ERRORS = (
    errors.UnsupportedType,
    errors.HypothesisFailed,
    errors.BadPrime,
    errors.EigenvalueZero,
    errors.JacobiFailure,
    errors.NotASplitting,
)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poissonsplit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prime=False, chart=True):
        p.add_argument("--type", dest="type_label", help="root system, e.g. A2 or G2")
        if chart:
            p.add_argument("--word", help="comma list of simple indices (default: normal form of w0)")
            p.add_argument("--gamma", help="comma list over {e,s}, or 'all' (default: all e)")
            p.add_argument("--cgl", help="JSON file with custom CGL data instead of a chart")
        if prime:
            p.add_argument("--prime", type=int, required=True)
        p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
        p.add_argument("--out", help="write the report to this file")

    common(sub.add_parser("chart", help="bracket table and torus weights of a Bott-Samelson chart"))
    sp = sub.add_parser("split", help="T-Pfaffian certificate and Frobenius splitting verdict")
    common(sp, prime=True)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for --gamma all")
    common(sub.add_parser("gu-split", help="T-Pfaffian splitting on the big cell of G/U"), prime=True, chart=False)
    lp = sub.add_parser("leaves", help="torus leaf index set (Bruhat pairs)")
    common(lp, chart=False)
    lp.add_argument("--space", default="GB", choices=["GB", "GU"])
    return parser


def _root_system(args) -> RootSystem:
    if not args.type_label:
        raise UsageError("--type is required")
    return RootSystem(args.type_label)


def _charts(args):
    """[(rs, word, gamma)] selected by --type/--word/--gamma."""
    rs = _root_system(args)
    word = parse_word(args.word, rs) if args.word is not None else rs.weyl.longest_element
    if args.gamma == "all":
        return [(rs, word, g) for g in subexpressions(word)]
    gamma_text = args.gamma if args.gamma is not None else ",".join("e" * len(word))
    return [(rs, word, parse_gamma(gamma_text, word))]


def _load_cgl(path: str) -> CGLData:
    try:
        with open(path) as fh:
            return CGLData.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read CGL data from {path}: {exc}") from exc


# -- chart ------------------------------------------------------------------

def chart_report(d: CGLData, header: dict) -> dict:
    rep = dict(header)
    rep["names"] = list(d.names)
    rep["coefficients"] = [[x if isinstance(x, int) else str(x) for x in row] for row in skew_matrix(d)]
    rep["eigenvalues"] = [d.pairing[i][i] for i in range(d.n)]
    rep["weights"] = [list(w) for w in d.weights]
    rep["cgl"] = d.to_json()
    return rep


def format_chart(rep: dict) -> str:
    names = rep["names"]
    lines = []
    if "type" in rep:
        lines.append(f"chart {rep['type']}  word {rep['word']}  gamma {rep['gamma']}")
    if not names or len(names) < 2:
        lines.append("bracket coefficients: (none)")
    else:
        lines.append("bracket coefficients c_ik with {z_i, z_k} = c_ik z_i z_k + ...:")
        width = max(4, max(len(str(x)) for row in rep["coefficients"] for x in row) + 1)
        lines.append(" " * 5 + "".join(f"{nm:>{width}}" for nm in names))
        for nm, row in zip(names, rep["coefficients"]):
            lines.append(f"{nm:>5}" + "".join(f"{x!s:>{width}}" for x in row))
    lines.append("torus weights (fundamental weight coordinates):")
    for nm, w, ev in zip(names, rep["weights"], rep["eigenvalues"]):
        lines.append(f"  {nm}: {tuple(w)}   eigenvalue {ev}")
    return "\n".join(lines)


def cmd_chart(args) -> str:
    if args.cgl:
        rep = chart_report(_load_cgl(args.cgl), {})
        reps = [rep]
    else:
        reps = []
        for rs, word, gamma in _charts(args):
            d, _ = bott_samelson_chart(rs, word, gamma)
            hdr = {"type": rs.label, "word": format_word(word), "gamma": format_gamma(gamma)}
            reps.append(chart_report(d, hdr))
    if args.json:
        return json.dumps(reps if len(reps) > 1 else reps[0], sort_keys=True)
    return "\n\n".join(format_chart(r) for r in reps)


# -- split ------------------------------------------------------------------

def split_report(d: CGLData, p: int, header: dict) -> dict:
    cand = theorem_c_certificate(d, p)
    report = is_splitting(cand.coefficient, p)
    rep = dict(header)
    rep.update(report.to_json())
    rep["prime"] = p
    rep["r"] = cand.r
    rep["h_indices"] = [i + 1 for i in cand.h_indices]
    rep["pfaffian"] = format_poly(cand.coefficient)
    return rep


def _split_job(job):
    label, word, flips, p = job
    rs = RootSystem(label)
    d, _ = bott_samelson_chart(rs, word, flips)
    gamma = ",".join("s" if f else "e" for f in flips)
    return split_report(d, p, {"type": label, "word": format_word(word), "gamma": gamma})


def format_split(rep: dict) -> str:
    lines = []
    if "type" in rep:
        lines.append(f"split {rep['type']}  word {rep['word']}  gamma {rep.get('gamma', '-')}  p={rep['prime']}")
    lines.append(f"  verdict:          {rep['verdict']}")
    lines.append(f"  pfaffian:         {rep['pfaffian']}")
    lines.append(f"  half rank r:      {rep['r']}   fields h: {rep['h_indices'] or '-'}")
    lines.append(f"  top coefficient:  {rep['top_coefficient']}")
    lines.append(f"  criterion value:  {rep['criterion_value']}   normalizer: {rep['normalizer']}")
    ideals = ["{" + ",".join(map(str, s)) + "}" for s in rep["compatible_ideals"]]
    lines.append(f"  compatible ideals: {' '.join(ideals) or '-'}")
    return "\n".join(lines)


def cmd_split(args) -> str:
    p = check_prime(args.prime)
    if args.cgl:
        reps = [split_report(_load_cgl(args.cgl), p, {})]
    else:
        jobs = [(rs.label, word, gamma.flips, p) for rs, word, gamma in _charts(args)]
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reps = list(pool.map(_split_job, jobs))
        else:
            reps = [_split_job(j) for j in jobs]
    if args.json:
        return json.dumps(reps if len(reps) > 1 else reps[0], sort_keys=True)
    return "\n\n".join(format_split(r) for r in reps)


def cmd_gu_split(args) -> str:
    rs = _root_system(args)
    p = check_prime(args.prime)
    cand = gu_chart_pfaffian(rs, p)
    report = is_splitting(cand.coefficient, p)
    rep = {"type": rs.label, "word": format_word(rs.weyl.longest_element), "prime": p}
    rep.update(report.to_json())
    rep["r"] = cand.r
    rep["h_indices"] = [i + 1 for i in cand.h_indices]
    rep["pfaffian"] = format_poly(cand.coefficient)
    rep["names"] = list(cand.names)
    if args.json:
        return json.dumps(rep, sort_keys=True)
    return format_split(rep).replace("split ", "gu-split ", 1)


def cmd_leaves(args) -> str:
    rs = _root_system(args)
    leaves = enumerate_leaves(rs, args.space)
    if args.json:
        return json.dumps([leaf.to_json() for leaf in leaves], sort_keys=True)
    lines = [f"{len(leaves)} leaves of {'G/B' if args.space == 'GB' else 'G/U'} for {rs.label}"]
    for leaf in leaves:
        lines.append(f"  u={format_word(leaf.u):<12} v={format_word(leaf.v):<12} dim={leaf_dimension(leaf)}")
    return "\n".join(lines)


COMMANDS = {"chart": cmd_chart, "split": cmd_split, "gu-split": cmd_gu_split, "leaves": cmd_leaves}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = COMMANDS[args.command](args)
    except (UsageError, *USAGE_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UNSUPPORTED_ERRORS as exc:
        print(f"unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
