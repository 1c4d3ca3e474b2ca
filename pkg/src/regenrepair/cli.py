"""Command-line front end.

Exit codes: 0 ok, 2 bad parameters, 3 search budget exceeded, 4 verification failure.
"""

import argparse
import csv
import json
import os
import random
import sys

from .core import (DEFAULT_BUDGET, BudgetExceeded, ConstructionFailed,
                   OperatingPoint, ParamOutOfRange, PreconditionViolated,
                   RankDeficient, SchemeViolation, UnsupportedField,
                   format_decimal, format_rational, parse_rational,
                   validate_params)
from .family import FamilyStructure
from .galois import field_from_size
from .gfr import (check_property1, check_property2, construct,
                  construct_family_plus, encode, load_code, node_subsets_ok,
                  random_message, reconstruct, repair)
from .ifg import Family, FamilyPlus, ScriptedAdversary, worst_case_search
from .tradeoff import (Partition, br_mbr, br_tradeoff_curve, family_plus_mbr,
                       family_plus_mincut, family_plus_partition,
                       family_plus_tradeoff_curve, fr_mbr, fr_mincut,
                       fr_tradeoff_curve, grouped_lrc_mbr,
                       helper_selection_beneficial)

EXIT_OK, EXIT_PARAMS, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4


class VerificationFailure(Exception):
    pass


def _partition(text):
    if not text:
        return None
    return Partition(tuple(int(x) for x in text.split(",")))


def _row(scheme, point, d, extra=None):
    g = point.gamma(d)
    row = {"scheme": scheme, "alpha": format_rational(point.alpha), "gamma": format_rational(g),
           "beta": format_rational(point.beta), "alpha_dec": format_decimal(point.alpha),
           "gamma_dec": format_decimal(g)}
    if extra:
        row = {**extra, **row}
    return row


def _emit(rows, fmt, out, meta=None, gnuplot=None):
    if gnuplot:
        x, y = gnuplot
        for r in rows:
            out.write(f"{float(parse_rational(r[x])):.6g} {float(parse_rational(r[y])):.6g}\n")
        return
    if fmt == "json":
        out.write(json.dumps({**(meta or {}), "rows": rows}, indent=1) + "\n")
        return
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def cmd_condition(a, cfg, out):
    v = helper_selection_beneficial(a.n, a.k, a.d)
    out.write(json.dumps({"n": a.n, "k": a.k, "d": a.d, "beneficial": v.beneficial,
                          "triggered_condition": v.condition}) + "\n")
    return EXIT_OK


def cmd_tradeoff(a, cfg, out):
    p = validate_params(a.n, a.k, a.d, parse_rational(a.file_size or cfg.get("file_size", "1")))
    budget = cfg.get("budget", DEFAULT_BUDGET)
    if a.scheme == "br":
        curve = br_tradeoff_curve(p)
    elif a.scheme == "fr":
        curve = fr_tradeoff_curve(p, budget)
    else:
        curve = family_plus_tradeoff_curve(p, _partition(a.partition), budget)
    rows = [_row(a.scheme, c, p.d) for c in curve.corners]
    meta = {"n": p.n, "k": p.k, "d": p.d, "file_size": format_rational(p.M)}
    _emit(rows, a.format, out, meta, ("alpha", "gamma") if a.gnuplot else None)
    return EXIT_OK


def _k_range(text, n):
    if not text:
        return range(1, n + 1)
    lo, _, hi = text.partition(":")
    return range(int(lo), int(hi or lo) + 1)


def cmd_mbr_sweep(a, cfg, out):
    schemes = a.schemes.split(",")
    M = parse_rational(a.file_size or cfg.get("file_size", "1"))
    rows, notes = [], []
    for k in _k_range(a.k_range, a.n):
        p = validate_params(a.n, k, a.d, M)
        for s in schemes:
            try:
                if s == "br":
                    pt = br_mbr(p)
                elif s == "fr":
                    pt = fr_mbr(p)
                elif s == "family-plus":
                    pt = family_plus_mbr(p)
                elif s == "grouped-lrc":
                    pt = grouped_lrc_mbr(p.n, p.k, p.d, p.M)
                else:
                    raise ParamOutOfRange(f"unknown scheme {s!r}")
            except PreconditionViolated as exc:
                notes.append(f"k={k} {s}: skipped ({exc})")
                continue
            rows.append(_row(s, pt, p.d, {"k": k}))
    for note in dict.fromkeys(notes):
        print(note, file=sys.stderr)
    if a.gnuplot:
        for s in schemes:
            out.write(f"# {s}\n")
            _emit([r for r in rows if r["scheme"] == s], None, out, gnuplot=("k", "gamma"))
            out.write("\n\n")
        return EXIT_OK
    _emit(rows, a.format, out, {"n": a.n, "d": a.d})
    return EXIT_OK


def _load_schedule(path):
    with open(path) as fh:
        events = json.load(fh)
    order = [int(e["fail"]) for e in events]
    helpers = [tuple(int(h) for h in e["helpers"]) if "helpers" in e else None for e in events]
    return order, helpers


def cmd_oracle(a, cfg, out):
    p = validate_params(a.n, a.k, a.d)
    pt = OperatingPoint(parse_rational(a.alpha), parse_rational(a.beta))
    budget = cfg.get("budget", DEFAULT_BUDGET)
    workers = int(os.environ.get("REGENREPAIR_WORKERS", cfg.get("workers", 1)))
    fr_value = fr_mincut(p, pt, budget)
    part = _partition(a.partition) or family_plus_partition(p.n, p.d)
    if a.schedule in ("exhaustive", "adversarial"):
        if a.scheme == "fr":
            scheme = Family(FamilyStructure(p.n, p.d))
            closed = fr_value
        else:
            scheme = FamilyPlus(part, p.d)
            closed = family_plus_mincut(p, pt, part, budget)
        res = worst_case_search(scheme, p, pt, a.schedule, workers, budget)
        scheme_name = a.scheme
    else:
        order, helpers = _load_schedule(a.schedule)
        if all(h is not None for h in helpers):
            scheme, scheme_name, closed = ScriptedAdversary(helpers), "scripted", None
        elif a.scheme == "fr":
            scheme, scheme_name, closed = Family(FamilyStructure(p.n, p.d)), "fr", fr_value
        else:
            scheme = FamilyPlus(part, p.d)
            scheme_name, closed = "family-plus", family_plus_mincut(p, pt, part, budget)
        res = worst_case_search(scheme, p, pt, [order], 1, budget)
    reference = closed if closed is not None else fr_value
    report = {
        "n": p.n, "k": p.k, "d": p.d, "alpha": format_rational(pt.alpha),
        "beta": format_rational(pt.beta), "scheme": scheme_name,
        "oracle": format_rational(res.value),
        "closed_form": format_rational(reference),
        "closed_form_scheme": scheme_name if closed is not None else "fr",
        "match": res.value == reference,
        "bound": "exact" if scheme_name == "fr" and a.schedule == "exhaustive" else "upper",
        "worst_schedule": list(res.schedule), "worst_collector": list(res.collector),
        "graphs_examined": res.graphs,
    }
    if closed is None:
        report["note"] = "scripted helpers differ from the FR scheme; a mismatch is expected"
    out.write(json.dumps(report, indent=1) + "\n")
    return EXIT_OK


def _write(text, path, out):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_gfr(a, cfg, out):
    if a.action == "build":
        F = field_from_size(a.field)
        part = _partition(a.partition)
        if part:
            code = construct_family_plus(a.n, a.k, a.d, part, F, a.seed)
        else:
            code = construct(a.n, a.k, a.d, F, a.seed)
        print(f"built after {code.retries} retries (seed {code.used_seed})", file=sys.stderr)
        _write(code.dumps() + "\n", a.out, out)
        return EXIT_OK
    code = load_code(a.code_file)
    if a.action == "verify":
        report = {"property1": True, "property2": None, "all_subsets": None}
        try:
            check_property1(code)
        except RankDeficient as exc:
            raise VerificationFailure(f"Property 1 violated: {exc}")
        p2 = check_property2(code, a.mode)
        report["property2"] = {"ok": p2.ok, "mode": p2.mode, "checked": p2.checked}
        if not p2.ok:
            raise VerificationFailure(f"Property 2 violated on subset {p2.failure}")
        if a.all_subsets:
            bad = node_subsets_ok(code)
            report["all_subsets"] = bad is None
            if bad is not None:
                raise VerificationFailure(f"reconstruction failed for nodes {bad}")
        out.write(json.dumps(report, indent=1) + "\n")
        return EXIT_OK
    rng = random.Random(a.message_seed)
    msg = random_message(code, a.width, rng)
    payloads = encode(code, msg)
    if a.action == "repair":
        res = repair(code, a.node, payloads)
        report = {
            "node": res.node, "helpers": list(res.helpers),
            "transfers": [{"helper": t.helper, "edge": [t.edge.i, t.edge.j], "kind": t.edge.kind,
                           "how": t.how, "coefficients": list(t.coefficients)}
                          for t in res.transfers],
            "identical": res.identical,
        }
        out.write(json.dumps(report, indent=1) + "\n")
        if not res.identical:
            raise VerificationFailure(f"repair of node {a.node} is not exact")
        return EXIT_OK
    nodes = [int(x) for x in a.nodes.split(",")]
    if len(nodes) != code.k:
        raise ParamOutOfRange(f"need exactly k={code.k} nodes")
    try:
        got = reconstruct(code, nodes, payloads)
    except RankDeficient as exc:
        raise VerificationFailure(str(exc))
    ok = got == msg
    out.write(json.dumps({"nodes": nodes, "decoded": ok, "M": code.M}) + "\n")
    if not ok:
        raise VerificationFailure("decoded message differs")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="regenrepair", description=__doc__)
    ap.add_argument("--config", help="JSON file with defaults (budget, file_size, workers)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def nkd(p):
        p.add_argument("n", type=int)
        p.add_argument("k", type=int)
        p.add_argument("d", type=int)

    p = sub.add_parser("condition", help="does helper selection beat blind repair?")
    nkd(p)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("tradeoff", help="corner points of a storage/bandwidth tradeoff curve")
    nkd(p)
    p.add_argument("--scheme", choices=["br", "fr", "family-plus"], default="fr")
    p.add_argument("--file-size")
    p.add_argument("--partition", help="group sizes, e.g. 8,6,5")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("mbr-sweep", help="MBR repair bandwidth versus k")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--k-range", help="lo:hi, inclusive")
    p.add_argument("--schemes", default="br,fr,family-plus,grouped-lrc")
    p.add_argument("--file-size")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_mbr_sweep)

    p = sub.add_parser("oracle", help="information-flow-graph min-cut search")
    nkd(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--scheme", choices=["fr", "family-plus"], default="fr")
    p.add_argument("--schedule", default="exhaustive",
                   help="exhaustive, adversarial, or a JSON file [{fail, helpers}]")
    p.add_argument("--partition")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gfr", help="generalized fractional repetition codes")
    p.add_argument("action", choices=["build", "verify", "repair", "reconstruct"])
    p.add_argument("code_file", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--field", type=int, default=256, help="field size 2^m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partition")
    p.add_argument("--out")
    p.add_argument("--mode", choices=["exhaustive", "sampled"])
    p.add_argument("--all-subsets", action="store_true")
    p.add_argument("--node", type=int)
    p.add_argument("--nodes")
    p.add_argument("--message-seed", type=int, default=0)
    p.add_argument("--width", type=int, default=4, help="symbols per packet")
    p.set_defaults(func=cmd_gfr)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAMS if exc.code else EXIT_OK
    cfg = {}
    if a.config:
        with open(a.config) as fh:
            cfg = json.load(fh)
    if a.cmd == "gfr":
        if a.action == "build" and None in (a.n, a.k, a.d):
            print("gfr build needs --n, --k and --d", file=sys.stderr)
            return EXIT_PARAMS
        if a.action != "build" and not a.code_file:
            print(f"gfr {a.action} needs a code file", file=sys.stderr)
            return EXIT_PARAMS
        if a.action == "repair" and a.node is None:
            print("gfr repair needs --node", file=sys.stderr)
            return EXIT_PARAMS
        if a.action == "reconstruct" and not a.nodes:
            print("gfr reconstruct needs --nodes", file=sys.stderr)
            return EXIT_PARAMS
    try:
        return a.func(a, cfg, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationFailure, ConstructionFailed, RankDeficient) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParamOutOfRange, PreconditionViolated, SchemeViolation, UnsupportedField,
            ValueError) as exc:
        print(f"bad parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS


def run():
    sys.exit(main())
