"""Batch command-line front end.

Exit codes: 0 = PASS / success, 1 = input or usage error, 2 = an axiom or
comparison check FAILED (with witnesses in the report).  Every command
writes a canonical JSON report under --out; bundled demonstration spaces
are materialized to plain files on first use and loaded from those files
afterwards.
"""

import argparse
import json
import sys
from pathlib import Path

from . import demos, reports
from . import axioms as ax
from . import sections as sec
from .deligne import (build_ic, check_decomposition, clc_coarsen,
                      compare_stratifications, default_costalk_sample)
from .fields import field_by_name
from .sheaves import SheafError, make_local_system
from .simplicial import ComplexError, load_complex
from .stratify import (StratificationError, compute_open_filtration,
                       naive_filtration, validate_stratification,
                       verify_filtration_identities)


class InputError(Exception):
    pass


def _parser():
    p = argparse.ArgumentParser(prog="icsheaf", description=__doc__)
    p.add_argument("command", choices=[
        "validate", "filtration", "build", "check-ax1", "check-ax2",
        "check-classic-ax2", "hyperco", "stalks", "costalks", "compare",
        "coarsen", "demo"])
    p.add_argument("space", help="demo:<name>, a demo name (for the demo command), "
                                 "or a directory with complex.json/stratification.json")
    p.add_argument("--complex", dest="complex_file", help="complex JSON file")
    p.add_argument("--stratification", dest="strat_file", help="stratification JSON file")
    p.add_argument("--local-system", dest="local_system", help="local system JSON file")
    p.add_argument("--field", default="q", help="coefficients: q or fp:<p>")
    p.add_argument("--cleanup", choices=["on", "off"], default="on")
    p.add_argument("--check-links", action="store_true",
                   help="advisory link-homology heuristic during validation")
    p.add_argument("--out", default="icsheaf-out", help="report/output directory")
    p.add_argument("--refine", action="append", default=[],
                   help="refinement recipe for compare (repeatable)")
    p.add_argument("--naive", action="store_true",
                   help="use the stepwise-simultaneous (non-canonical) filtration")
    p.add_argument("--sample", default=None,
                   help="costalk sample: an integer budget or 'all'")
    p.add_argument("--at", default=None, help="single simplex (comma-separated vertices)")
    return p


def demo_files(name, out):
    """Materialize a bundled space to plain files (cached)."""
    if name not in demos.DEMO_NAMES:
        raise InputError("unknown demo %r (available: %s)"
                         % (name, ", ".join(demos.DEMO_NAMES)))
    d = Path(out) / "demos" / name
    cpath, spath = d / "complex.json", d / "stratification.json"
    if not (cpath.exists() and spath.exists()):
        K, doc = demos.demo_space(name)
        from .simplicial import complex_to_doc
        d.mkdir(parents=True, exist_ok=True)
        cpath.write_text(reports.canonical_json(complex_to_doc(K)))
        spath.write_text(reports.canonical_json(doc))
    return cpath, spath


def load_space(args):
    """Resolve the space argument to (complex, stratification, input record)."""
    inputs = {}
    if args.space.startswith("demo:"):
        cpath, spath = demo_files(args.space[5:], args.out)
        inputs["space"] = args.space
    else:
        base = Path(args.space)
        cpath = Path(args.complex_file) if args.complex_file else base / "complex.json"
        spath = Path(args.strat_file) if args.strat_file else base / "stratification.json"
        inputs["space"] = str(base)
    if args.complex_file:
        cpath = Path(args.complex_file)
    if args.strat_file:
        spath = Path(args.strat_file)
    inputs["complex"] = str(cpath)
    inputs["stratification"] = str(spath)
    try:
        K = load_complex(json.loads(cpath.read_text()))
        strat = validate_stratification(K, json.loads(spath.read_text())["levels"])
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise InputError("cannot read inputs: %s" % e)
    return K, strat, inputs


def load_system(args, F, filt):
    if not args.local_system:
        return None
    try:
        doc = json.loads(Path(args.local_system).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError("cannot read local system: %s" % e)
    K = filt.stratification.complex
    if "rank" in doc:
        return make_local_system(F, K, filt.U[1], {"rank": doc["rank"]})
    stalk_dim = {K.id_of(_parse_simplex(k)): d for k, d in doc["stalk_dims"].items()}
    matrices = {}
    for key, m in doc.get("matrices", {}).items():
        a, b = key.split("|")
        matrices[(K.id_of(_parse_simplex(a)), K.id_of(_parse_simplex(b)))] = \
            [[F.parse(x) for x in row] for row in m]
    return make_local_system(F, K, filt.U[1],
                             {"stalk_dim": stalk_dim, "matrices": matrices})


def _parse_simplex(text):
    out = []
    for part in text.replace(",", " ").split():
        try:
            out.append(int(part))
        except ValueError:
            out.append(part)
    return out


def _manifest(args, inputs, extra=None):
    m = {"format": reports.FORMAT_TAG, "command": args.command, "inputs": inputs,
         "field": args.field,
         "options": {"cleanup": args.cleanup, "check_links": bool(args.check_links),
                     "naive": bool(args.naive), "refine": list(args.refine),
                     "sample": args.sample}}
    if extra:
        m["options"].update(extra)
    return m


def _link_heuristic(strat):
    """Advisory: normal links of top stratum simplices within each closure.

    A necessary (never sufficient) cone condition: the link of a top-
    dimensional simplex of a stratum, taken inside the closure of each
    open-stratum family it meets, should have the rational homology of a
    sphere of the matching dimension.  Warnings only.
    """
    from .sheaves import constant_complex
    from .fields import QQ
    K = strat.complex
    filt = compute_open_filtration(strat)
    warnings = []
    for st in strat.strata:
        kdim = st.complex_dim
        tops = [i for i in sorted(st.simplex_set.ids) if K.sdim(i) == 2 * kdim]
        for sid in tops[:2]:
            for m, xm in sorted(filt.X_m.items()):
                if sid not in xm.ids or m == kdim:
                    continue
                sub, to_parent, from_parent = K.subcomplex(xm)
                link = sub.link_of(K.simplices[sid])
                expect_dim = 2 * m - 2 * kdim - 1
                expected = {0: 1} if expect_dim == 0 else {0: 1, expect_dim: 1}
                if expect_dim == 0:
                    expected = {0: 2}
                if link is None:
                    got = {}
                else:
                    S = constant_complex(QQ, link, link.full_set())
                    got = sec.hypercohomology(S)
                if got != expected:
                    warnings.append(
                        "stratum %d simplex %s: link homology inside X^%d is %s, "
                        "sphere of dimension %d would give %s"
                        % (st.index, list(K.simplices[sid]), m,
                           {str(k): v for k, v in got.items()}, expect_dim,
                           {str(k): v for k, v in expected.items()}))
    return warnings


def run(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 1
    out = Path(args.out)
    try:
        F = field_by_name(args.field)
    except ValueError as e:
        print("error:", e, file=sys.stderr)
        return 1
    cleanup = args.cleanup == "on"

    try:
        if args.command == "demo":
            name = args.space[5:] if args.space.startswith("demo:") else args.space
            cpath, spath = demo_files(name, args.out)
            print("complex:        ", cpath)
            print("stratification: ", spath)
            return 0

        K, strat, inputs = load_space(args)
        manifest = _manifest(args, inputs)

        if args.command == "validate":
            from .stratify import TRUST_NOTE
            payload = {"valid": True, "n": strat.n,
                       "strata": [{"index": s.index, "complex_dim": s.complex_dim,
                                   "open": s.is_open, "size": len(s.simplex_set)}
                                  for s in strat.strata],
                       "trust_note": TRUST_NOTE}
            if args.check_links:
                payload["link_warnings"] = _link_heuristic(strat)
            reports.write_report(out / "validate-report.json", manifest, payload)
            print("stratification valid: %d strata, n = %d" % (len(strat.strata), strat.n))
            for w in payload.get("link_warnings", []):
                print("advisory:", w)
            return 0

        if args.command == "filtration":
            filt = naive_filtration(strat) if args.naive else compute_open_filtration(strat)
            errors = verify_filtration_identities(filt) if filt.canonical else []
            payload = reports.filtration_doc(filt, errors)
            reports.write_report(out / "filtration-report.json", manifest, payload)
            print(reports.filtration_table_text(filt, errors))
            return 0 if not errors else 2

        filt = naive_filtration(strat) if args.naive else compute_open_filtration(strat)
        L = load_system(args, F, filt)
        if args.command != "compare":
            bundle = build_ic(strat, L, field=F, naive=args.naive, cleanup=cleanup)

        if args.command == "build":
            payload = reports.bundle_doc(bundle)
            reports.write_report(out / "ic-bundle.json", manifest, payload)
            table = bundle.stalk_table()
            sing = strat.level(strat.n - 1) if strat.n else None
            shown = sorted(sing.ids)[:8] if sing else []
            print("built %s complex; construction steps: %s"
                  % ("naive" if args.naive else "canonical",
                     [(s["step"], s["cutoff"]) for s in bundle.log]))
            for sid in shown:
                print("  stalk at %-14s %s"
                      % (reports.simplex_key(K, sid),
                         reports.dims_doc(table.get(sid, {}))))
            return 0

        if args.command == "hyperco":
            payload = {"hypercohomology": reports.dims_doc(sec.hypercohomology(bundle.ic)),
                       "naive": args.naive}
            reports.write_report(out / "hyperco-report.json", manifest, payload)
            print("hypercohomology:", payload["hypercohomology"])
            return 0

        if args.command == "stalks":
            table = bundle.stalk_table()
            if args.at:
                sid = K.id_of(_parse_simplex(args.at))
                table = {sid: table.get(sid, {})}
            payload = {"stalks": reports.table_doc(K, table)}
            reports.write_report(out / "stalks-report.json", manifest, payload)
            for key, row in sorted(payload["stalks"].items()):
                print("  %-16s %s" % (key, row))
            return 0

        if args.command == "costalks":
            if args.at:
                sample = [K.id_of(_parse_simplex(args.at))]
            elif args.sample in (None, "", "all"):
                sample = sorted(K.full_set().ids)
            else:
                sample = default_costalk_sample(strat, limit=int(args.sample))
            table = {sid: sec.cell_costalk(bundle.ic, sid) for sid in sample}
            payload = {"costalks": reports.table_doc(K, table)}
            reports.write_report(out / "costalks-report.json", manifest, payload)
            shown = list(sorted(payload["costalks"].items()))[:10]
            for key, row in shown:
                print("  %-16s %s" % (key, row))
            return 0

        if args.command in ("check-ax1", "check-ax2", "check-classic-ax2"):
            costalks = {sid: sec.cell_costalk(bundle.ic, sid)
                        for sid in sorted(K.full_set().ids)}
            if args.command == "check-ax1":
                report = ax.check_ax1(bundle.ic, strat)
            elif args.command == "check-ax2":
                report = ax.check_ax2(bundle.ic, strat, costalks=costalks)
            else:
                report = ax.check_classic_ax2(bundle.ic, costalks=costalks)
            payload = report.to_json()
            payload["checked_complex"] = "naive build" if args.naive else "canonical build"
            reports.write_report(out / ("%s-report.json" % args.command), manifest, payload)
            print("%s: %s" % (report.axiom_id, "PASS" if report.passed else "FAIL"))
            for c in report.clauses:
                print("  clause (%s): %s" % (c.clause, "pass" if c.passed else "FAIL"))
                for w in c.witnesses[:3]:
                    print("    witness: degree %s, locus of %d simplices, complex dim %s (bound %s)"
                          % (w.degree, len(w.simplex_ids), w.observed_dim, w.bound))
            return 0 if report.passed else 2

        if args.command == "compare":
            recipes = args.refine or ["extra-point"]
            others = [strat if r == "self" else demos.refine_stratification(strat, r)
                      for r in recipes]
            payload = {"comparisons": []}
            all_pass = True
            for recipe, other in zip(recipes, others):
                rep, b1, b2 = compare_stratifications(
                    strat, other, L1=L, field=F, cleanup=cleanup,
                    naive_first=args.naive)
                witnesses = rep["witnesses"]
                payload["comparisons"].append(
                    {"refine": recipe, "passed": rep["passed"],
                     "hypercohomology": reports.dims_doc(rep["hypercohomology"]),
                     "witnesses": witnesses})
                all_pass = all_pass and rep["passed"]
                print("compare vs %-16s %s" % (recipe, "PASS" if rep["passed"] else "FAIL"))
            reports.write_report(out / "compare-report.json", manifest, payload)
            return 0 if all_pass else 2

        if args.command == "coarsen":
            state = clc_coarsen(strat, bundle.ic)
            payload = {"levels": state.levels_doc(),
                       "merge_level": {str(k): v for k, v in sorted(state.merge_level.items())},
                       "steps": state.steps, "note": state.note}
            reports.write_report(out / "coarsen-report.json", manifest, payload)
            print("coarsened levels:",
                  {k: len(v) for k, v in sorted(state.levels.items())})
            return 0

        raise InputError("unknown command %r" % args.command)
    except (InputError, ComplexError, StratificationError, SheafError,
            ax.AxiomInputError) as e:
        print("error:", e, file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
