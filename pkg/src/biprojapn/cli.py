"""Command line front end: ``biprojapn <command> [options]``.

Exit codes: 0 success, 1 a checked property failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import apn, field, walsh
from .biproj import BiprojectivePair, ProjectivePolynomial, rootless_check
from .classify import classify_family, cross_family_sweep
from .equivalence import (bfs_orbit, centralizer_search, condition_c, decide_equivalence, group_order,
                          is_graph_equiv, orbit_and_stabilizer, preconditions)
from .errors import BiprojError
from .families import enumerate_params, make_family, normalize_tag, parse_instance, valid_k


class UsageError(Exception):
    pass


# --- shared helpers ---------------------------------------------------------

def _ctx(args) -> field.FieldCtx:
    if args.poly_config:
        field.set_poly_overrides(field.load_poly_config(args.poly_config))
    if args.m is None:
        raise UsageError("--m is required")
    return field.get_field(args.m, int(args.poly, 16) if args.poly else None)


def _emit(args, payload, text: str | None = None, csv_text: str | None = None) -> None:
    if args.csv and csv_text is not None:
        sys.stdout.write(csv_text)
    elif args.json or text is None:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="family instance, e.g. 'f4:k=1,B=0x2,a=1' or 'F1(m=5 k=1)'")
    p.add_argument("--pair", help="canonical pair text 'm=.. k=.. l=.. c0=.. c1=.. poly=..'")
    p.add_argument("--family", help="family tag (gold, carlet, taniguchi, zp, f1, f2, f4)")
    p.add_argument("--k", type=int, help="restrict to this k")


def _one(args, ctx) -> tuple[str, BiprojectivePair]:
    """The single function named by --instance, --pair or --family (first instance)."""
    if args.pair:
        P = BiprojectivePair.from_text(args.pair)
        if P.ctx != ctx:
            raise UsageError("--pair lives on a different field than --m/--poly")
        return P.to_text(), P
    if args.instance:
        inst = parse_instance(ctx, args.instance)
        return inst.label(), inst.pair
    if args.family:
        ks = [args.k] if args.k is not None else valid_k(args.family, ctx.m)
        for k, params in enumerate_params(args.family, ctx):
            if k in ks:
                inst = make_family(args.family, ctx, k, **params)
                return inst.label(), inst.pair
        raise UsageError(f"no {args.family} instance with k={args.k} at m={ctx.m}")
    raise UsageError("give one of --instance, --pair or --family")


# --- commands ---------------------------------------------------------------

def cmd_field_info(args) -> int:
    ctx = _ctx(args)
    m = ctx.m
    info = {"m": m, "poly": f"{ctx.poly:#x}", "generator": f"{ctx.generator:#x}", "order": ctx.order,
            "tables": ctx.has_tables, "primitive_prime_divisor": field.primitive_prime_divisor(m),
            "nonzero_cubes": ctx.order // 3 if ctx.order % 3 == 0 else ctx.order}
    if m % 2 == 0:
        info["omega"] = f"{ctx.omega():#x}"
    if args.k is not None:
        info["gcd_facts"] = field.gcd_exponent_facts(m, args.k).as_dict()
    text = "\n".join(f"{k:24s} {v}" for k, v in info.items())
    _emit(args, info, text)
    return 0


def _instances_for_check(args, ctx) -> list[tuple[str, int, int, tuple]]:
    """(label, k, l, 8 coefficients) for the functions apn-check should test."""
    if args.pair or args.instance:
        label, P = _one(args, ctx)
        return [(label, P.k, P.l, P.coeffs0 + P.coeffs1)]
    if not args.family:
        raise UsageError("give one of --instance, --pair or --family")
    ks = [args.k] if args.k is not None else valid_k(args.family, ctx.m)
    out, seen_k = [], set()
    for k, params in enumerate_params(args.family, ctx):
        if k not in ks or (not args.all_params and k in seen_k):
            continue
        seen_k.add(k)
        inst = make_family(args.family, ctx, k, **params)
        P = inst.pair
        out.append((inst.label(), P.k, P.l, P.coeffs0 + P.coeffs1))
    if not out:
        raise UsageError(f"no {args.family} instances selected at m={ctx.m}")
    return out


def cmd_apn_check(args) -> int:
    ctx = _ctx(args)
    items = _instances_for_check(args, ctx)
    ks = np.array([i[1] for i in items], dtype=np.int64)
    ls = np.array([i[2] for i in items], dtype=np.int64)
    cs = np.array([i[3] for i in items], dtype=np.int64)
    method = args.method
    if method == "auto":
        method = "both" if 2 * ctx.m <= 12 else "projective"
    t0 = time.perf_counter()
    proj = apn.apn_projective_batch(ctx, ks, ls, cs, args.threads) if method != "naive" else None
    naive = apn.apn_naive_batch(ctx, ks, ls, cs, args.threads) if method != "projective" else None
    rows, bad = [], 0
    for i, (label, *_rest) in enumerate(items):
        row = {"params": label}
        if proj is not None:
            row["apn_projective"] = bool(proj[i])
        if naive is not None:
            row["apn_naive"] = bool(naive[i])
        verdicts = [v for v in (row.get("apn_projective"), row.get("apn_naive")) if v is not None]
        row["apn"] = all(verdicts)
        if not all(verdicts) or len(set(verdicts)) > 1:
            bad += 1
        rows.append(row)
    elapsed = time.perf_counter() - t0
    if args.json:
        _emit(args, rows)
    elif args.csv:
        lines = ["params,apn_projective,apn_naive,apn"]
        for r in rows:
            lines.append(f"\"{r['params']}\",{r.get('apn_projective', '')},{r.get('apn_naive', '')},{r['apn']}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        for r in rows[:20]:
            print(f"{'APN' if r['apn'] else 'NOT APN':8s} {r['params']}")
        if len(rows) > 20:
            print(f"... {len(rows) - 20} more")
        print(f"{len(rows)} checked ({method}), {bad} failing, {elapsed:.2f}s")
    return 1 if bad else 0


def cmd_walsh(args) -> int:
    ctx = _ctx(args)
    label, P = _one(args, ctx)
    T = apn.to_truth_table(P)
    spec = walsh.extended_walsh_spectrum(T, args.threads)
    prof = walsh.image_profile(T)
    out = {"function": label, **spec.to_json(), "classical": walsh.is_classical(spec),
           "image": prof.to_json(), "three_to_one": walsh.three_to_one_check(T)}
    text = "\n".join([f"{label}  n={spec.n}",
                      "  |W|: " + ", ".join(f"{w}: {c}" for w, c in sorted(spec.counts.items())),
                      f"  classical: {out['classical']}",
                      f"  3-to-1: {out['three_to_one']}  image size {prof.image_size}"])
    _emit(args, out, text)
    return 0


def _is_pair_text(text: str) -> bool:
    return text.lstrip().startswith("m=")


def cmd_equiv(args) -> int:
    ctx = _ctx(args)
    A = None if _is_pair_text(args.a) else parse_instance(ctx, args.a)
    B = None if _is_pair_text(args.b) else parse_instance(ctx, args.b)
    PA = A.pair if A else BiprojectivePair.from_text(args.a)
    PB = B.pair if B else BiprojectivePair.from_text(args.b)
    v = decide_equivalence(PA, PB, use_invariants=not args.no_invariants)
    out = {"a": A.label() if A else PA.to_text(), "b": B.label() if B else PB.to_text(), **v.to_json()}
    code = 0
    if v.witness is not None:
        out["verified"] = is_graph_equiv(PA, PB, v.witness) if 2 * ctx.m <= 24 else None
        if out["verified"] is False:
            code = 1
    text = f"{out['a']} vs {out['b']}: " + {True: "equivalent", False: "inequivalent",
                                             None: "undecided"}[v.equivalent] + f" ({v.justification})"
    if v.witness is not None:
        text += f"\n  witness {v.witness.to_text()}\n  verified on the graph: {out['verified']}"
    _emit(args, out, text)
    return code


def _parse_orbit_coeffs(ctx, k: int, text: str) -> tuple[int, int, int, int]:
    """Coefficients with at most one symbol 'u', replaced by the least u making f rootless."""
    words = [w.strip() for w in text.split(",")]
    if len(words) != 4:
        raise UsageError("--poly-coeffs needs four entries")
    if "u" not in words:
        return tuple(field.parse_elements(ctx, words))  # type: ignore[return-value]
    pos = words.index("u")
    fixed = [0 if w == "u" else field.parse_elements(ctx, [w])[0] for w in words]
    for u in ctx.nonzero():
        fixed[pos] = u
        if fixed[0] and rootless_check(ProjectivePolynomial(ctx, k, tuple(fixed))):
            return tuple(fixed)  # type: ignore[return-value]
    raise UsageError(f"no u makes {text} rootless at m={ctx.m}")


def cmd_orbit(args) -> int:
    ctx = _ctx(args)
    k = 1 if args.k is None else args.k
    coeffs = _parse_orbit_coeffs(ctx, k, args.poly_coeffs)
    f = ProjectivePolynomial(ctx, k, coeffs)
    orbit, stab = orbit_and_stabilizer(f)
    out = {"m": ctx.m, "k": k, "coeffs": [f"{c:#x}" for c in coeffs], "group_order": group_order(ctx.m),
           "orbit": orbit, "stabilizer": stab}
    code = 0
    if args.bfs:
        out["orbit_bfs"] = bfs_orbit(f)
        code = int(out["orbit_bfs"] != orbit)
    text = f"f = ({', '.join(out['coeffs'])})_{1 << k}: orbit {orbit}, stabilizer {stab}"
    if args.bfs:
        text += f", BFS orbit {out['orbit_bfs']}"
    _emit(args, out, text)
    return code


def cmd_centralizer(args) -> int:
    ctx = _ctx(args)
    label, P = _one(args, ctx)
    bad = preconditions(P)
    if bad:
        raise UsageError(f"{label}: " + "; ".join(bad))
    methods = ["normalized", "exhaustive"] if args.method == "both" else [args.method]
    reps = [centralizer_search(P, method=m) for m in methods]
    ok, info = condition_c(P)
    out = {"function": label, "reports": [r.to_json() for r in reps], "condition_c": ok, "condition_c_info": info}
    code = 0
    if len(reps) == 2:
        agree = reps[0].size == reps[1].size and reps[0].classes == reps[1].classes
        out["methods_agree"] = agree
        code = int(not agree)
    lines = [label]
    for r in reps:
        cls = ", ".join(f"{k}: {v}" for k, v in r.classes.items() if v)
        lines.append(f"  {r.method:10s} |C_F| = {r.size}, index {r.index}  ({cls})")
    lines.append(f"  condition (C): {ok} ({info})")
    _emit(args, out, "\n".join(lines))
    return code


def cmd_enumerate(args) -> int:
    ctx = _ctx(args)
    if not args.family:
        raise UsageError("--family is required")
    tag = normalize_tag(args.family)
    if args.list:
        rows = [make_family(tag, ctx, k, **p).label() for k, p in enumerate_params(tag, ctx)
                if args.k is None or k == args.k]
        _emit(args, {"family": tag, "m": ctx.m, "instances": rows}, "\n".join(rows),
              "instance\n" + "".join(f"\"{r}\"\n" for r in rows))
        return 0
    rep = classify_family(tag, ctx.m, ctx.poly, use_invariants=not args.no_invariants)
    out = rep.to_json()
    if not args.verdicts:
        out.pop("verdicts")
    lines = [f"{rep.family} m={rep.m}: {rep.instance_count} instances, {rep.class_count} classes"]
    for i, (r, s) in enumerate(zip(rep.representatives, rep.class_sizes)):
        lines.append(f"  class {i}: {r}  ({s} instances)")
    if rep.justifications:
        lines.append("  inequivalence: " + ", ".join(f"{k} x{v}" for k, v in rep.justifications.items()))
    if rep.undecided:
        lines.append(f"  undecided pairs: {rep.undecided}")
    if rep.bounds:
        lines.append(f"  bounds: {rep.bounds['lower']} <= N <= {rep.bounds['upper']}")
    lines += [f"  note: {n}" for n in rep.notes]
    _emit(args, out, "\n".join(lines), rep.to_csv())
    return 0


def cmd_sweep(args) -> int:
    ctx = _ctx(args)
    fams = args.families.split(",") if args.families else None
    rep = cross_family_sweep(ctx.m, fams, ctx.poly, use_invariants=not args.no_invariants)
    out = rep.to_json()
    lines = [f"cross-family sweep m={rep.m}: {rep.instance_count} representatives, {rep.class_count} classes"]
    for v in rep.verdicts:
        word = {True: "EQUIV", False: "inequiv", None: "undecided"}[v["equivalent"]]
        lines.append(f"  {word:9s} {v['justification']:24s} {v['a']}  /  {v['b']}")
    lines.append("  inequivalence: " + ", ".join(f"{k} x{v}" for k, v in rep.justifications.items()))
    lines.append(f"  undecided pairs: {rep.undecided}")
    lines += [f"  note: {n}" for n in rep.notes]
    csv_lines = ["a,b,equivalent,justification"] + [
        f"\"{v['a']}\",\"{v['b']}\",{v['equivalent']},{v['justification']}" for v in rep.verdicts]
    _emit(args, out, "\n".join(lines), "\n".join(csv_lines) + "\n")
    return 0


def cmd_properties(args) -> int:
    from .properties import format_report, run_suites

    rep = run_suites(args.samples, args.seed, args.suite)
    _emit(args, rep.to_json(), format_report(rep))
    return 0 if rep.ok else 1


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--m", type=int, help="extension degree of M = GF(2^m)")
    g.add_argument("--poly", help="defining polynomial as a hex bit mask (default: built-in table)")
    g.add_argument("--poly-config", help="file of '<m> = <hex>' defining-polynomial overrides")
    g.add_argument("--json", action="store_true", help="JSON output")
    g.add_argument("--csv", action="store_true", help="CSV output where available")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--seed", type=int, default=0, help="seed for sampled property suites")

    ap = argparse.ArgumentParser(prog="biprojapn", description="Biprojective APN functions: APN tests, "
                                 "Walsh spectra and equivalence classification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", parents=[common], help="field parameters and gcd facts")
    p.add_argument("--k", type=int, help="also report gcd facts for this k (m = 2 mod 4)")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("apn-check", parents=[common], help="APN verdicts by both methods")
    _instance_args(p)
    p.add_argument("--all-params", action="store_true", help="every admissible parameter set, not one per k")
    p.add_argument("--method", choices=["auto", "projective", "naive", "both"], default="auto")
    p.set_defaults(func=cmd_apn_check)

    p = sub.add_parser("walsh", parents=[common], help="extended Walsh spectrum and image profile")
    _instance_args(p)
    p.set_defaults(func=cmd_walsh)

    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two functions")
    p.add_argument("--a", required=True, help="instance label/short form or canonical pair text")
    p.add_argument("--b", required=True)
    p.add_argument("--no-invariants", action="store_true", help="do not fall back to invariants")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("orbit", parents=[common], help="orbit and stabilizer of a projective polynomial")
    p.add_argument("--poly-coeffs", required=True, help="p1,p2,p3,p4; one entry may be 'u' (least rootless choice)")
    p.add_argument("--k", type=int, help="q = 2^k (default 1)")
    p.add_argument("--bfs", action="store_true", help="also count the orbit by BFS")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("centralizer", parents=[common], help="centralizer of the Z-subgroup in Aut_EL(F)")
    _instance_args(p)
    p.add_argument("--method", choices=["normalized", "exhaustive", "both"], default="normalized")
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate and classify one family")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=int, help="with --list: restrict to this k")
    p.add_argument("--list", action="store_true", help="only list the instances")
    p.add_argument("--verdicts", action="store_true", help="include pairwise verdicts in JSON")
    p.add_argument("--no-invariants", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", parents=[common], help="cross-family inequivalence sweep")
    p.add_argument("--families", help="comma-separated tags (default: all existing at m)")
    p.add_argument("--no-invariants", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("properties", parents=[common], help="run the sampled property suites")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--suite", action="append", help="field, bidegree, g-action or parseval")
    p.set_defaults(func=cmd_properties)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        ap.error(str(e))
    except (BiprojError, KeyError) as e:
        msg = f"missing parameter {e}" if isinstance(e, KeyError) else str(e)
        print(f"biprojapn: error: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
