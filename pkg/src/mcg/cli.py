"""Command-line entry point: verify, selfcheck, shiftmap, project, normalize.

Exit codes: 0 all checks passed, 1 an assertion or property failed (Unknown
verdicts included), 2 configuration, parse or model errors. The default
rewrite budget can be overridden with the MCG_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
from importlib import resources
from pathlib import Path

from .errors import McgError, ScriptError, WindowTooSmall
from .homology import TruncatedBasis, transvection_selftest, word_matrix
from .modelfile import load_model, parse_model_file
from .permgroup import Permutation, certify_full_symmetric, group_order, project
from .replay import ReplayReport, replay
from .report import render_json, render_text, write_report_dir
from .rewrite import DEFAULT_BUDGET, DEFAULT_WINDOW, normalize
from .script import CONVENTIONS_TEXT, EvalContext, eval_word, parse
from .shiftmap import check_shift_properties
from .sweeps import homology_property_sweep, pairing_preservation_sweep

BUILTIN_SCRIPTS = ("thmA", "thmB", "thmC", "thmD")


def _budget_default() -> int:
    env = os.environ.get("MCG_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _load_script_text(name: str) -> tuple[str, str]:
    if name in BUILTIN_SCRIPTS:
        return (
            resources.files("mcg.data.scripts").joinpath(name + ".mcg").read_text(encoding="utf-8"),
            name + ".mcg",
        )
    path = Path(name)
    return path.read_text(encoding="utf-8"), str(path)


def _run_one(args: tuple[str, int | None, int, int, str | None]) -> ReplayReport:
    name, n, budget, window, model_file = args
    text, path = _load_script_text(name)
    script = parse(text, path)
    model = None
    if model_file:
        model = parse_model_file(model_file, n=n if n is not None else script.default_n())
        if model.kind != script.kind:
            raise McgError(f"model file kind {model.kind!r} does not match the script ({script.kind})")
    return replay(script, n=n, budget=budget, window=window, model=model)


def cmd_verify(args: argparse.Namespace) -> int:
    names = args.scripts or list(BUILTIN_SCRIPTS)
    jobs: list[tuple[str, int | None, int, int, str | None]] = []
    try:
        for name in names:
            text, path = _load_script_text(name)
            script = parse(text, path)
            if args.n is None and script.kind == "sn" and script.param:
                # a script may declare several default n values (one per parity
                # quirk it wants covered); run all of them
                for n in script.param.defaults:
                    jobs.append((name, n, args.budget, args.window, args.model_file))
            else:
                jobs.append((name, args.n, args.budget, args.window, args.model_file))
        if args.jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_run_one, jobs))
        else:
            reports = [_run_one(j) for j in jobs]
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (WindowTooSmall, McgError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    text = render_json(reports) if args.format == "json" else render_text(reports)
    if args.quiet and args.format == "text":
        text = "\n".join(
            line for line in text.splitlines() if line.startswith(("==", "  RESULT", "OVERALL"))
        ) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.report_dir:
        files = write_report_dir(reports, args.report_dir)
        print(f"report files: {', '.join(map(str, files))}", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def cmd_selfcheck(args: argparse.Namespace) -> int:
    if args.window < 2:
        print("error: window below displacement bound (need >= 2)", file=sys.stderr)
        return 2
    failures = 0

    def run(title: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        print(f"[{'ok' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else ""))
        failures += 0 if ok else 1

    try:
        transvection_selftest()
        run("transvection sign convention self-test", True)
    except AssertionError as e:
        run("transvection sign convention self-test", False, str(e))

    models = []
    if args.model_file:
        try:
            models.append(parse_model_file(args.model_file, n=args.n))
        except McgError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    else:
        models = [load_model("sn", 16), load_model("sn", 17), load_model("jacob"), load_model("lochness")]

    for model in models:
        rep = model.validate(args.window)
        run(f"validate {model.describe()} at window {args.window}", rep.ok, str(rep) if not rep.ok else "")
        sweep = homology_property_sweep(model, min(args.window, 12))
        run(f"homology/intersection sweep {model.describe()}", sweep.ok, str(sweep) if not sweep.ok else "")
        psweep = pairing_preservation_sweep(model, min(args.window, 12))
        run(f"pairing preservation {model.describe()}", psweep.ok, str(psweep) if not psweep.ok else "")

    order = group_order(
        [Permutation.from_cycles(5, "(1 2 3 4 5)"), Permutation.from_cycles(5, "(1 2)")]
    )
    run("BSGS order of <5-cycle, transposition> = 120", order == 120, str(order))
    klein = group_order(
        [Permutation.from_cycles(4, "(1 2)(3 4)"), Permutation.from_cycles(4, "(1 3)(2 4)")]
    )
    run("BSGS order of the Klein four-group = 4", klein == 4, str(klein))
    for n in (16, 17):
        ncyc = Permutation.from_cycles(n, "(" + " ".join(map(str, range(1, n + 1))) + ")")
        ok, got = certify_full_symmetric([ncyc, Permutation.from_cycles(n, "(1 2)")], n)
        run(f"BSGS certifies Sym_{n} from n-cycle and transposition", ok, f"order {got}")

    shift = check_shift_properties()
    run("shift-map strip formula", shift.ok, str(shift) if not shift.ok else "")
    return 0 if failures == 0 else 1


def cmd_shiftmap(args: argparse.Namespace) -> int:
    report = check_shift_properties(args.samples)
    print(report)
    return 0 if report.ok else 1


def _word_from_text(args: argparse.Namespace):
    model = load_model(args.model, args.n if args.model == "sn" else None)
    script_text = f"MODEL {args.model}\nLET w = {args.word}\n"
    sc = parse(script_text, "<cli>")
    ctx = EvalContext(model, args.n or model.n)
    return model, eval_word(sc.statements[0].expr, ctx)  # type: ignore[union-attr]


def cmd_project(args: argparse.Namespace) -> int:
    try:
        model, w = _word_from_text(args)
    except (ScriptError, McgError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(project(w).cycle_notation())
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    try:
        model, w = _word_from_text(args)
    except (ScriptError, McgError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    res = normalize(w, args.budget)
    print(res.word if len(res.word) else "ID")
    if args.trace:
        print("trace:", " ".join(res.trace) or "(none)")
        print(f"budget used: {res.budget_used}")
    if not res.normalized:
        print("NOT NORMALIZED: budget exhausted", file=sys.stderr)
        return 1
    if args.matrix:
        basis = TruncatedBasis(model, args.matrix_window)
        print(word_matrix(basis, w).grid())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mcg",
        description="replay and verify generating-set derivations for big mapping class groups",
        epilog=f"conventions: {CONVENTIONS_TEXT}",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="replay proof scripts and verdict every assertion")
    v.add_argument("scripts", nargs="*", help=f"script paths or builtin names {BUILTIN_SCRIPTS}")
    v.add_argument("--n", type=int, default=None, help="end count for sn scripts")
    v.add_argument("--budget", type=int, default=_budget_default(), help="rewrite applications per assertion")
    v.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="homology truncation window")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")
    v.add_argument("--report-dir", default=None, help="write report.json, statements.csv and figures here")
    v.add_argument("--jobs", type=int, default=1, help="replay scripts in parallel worker processes")
    v.add_argument("--model-file", default=None, help="substitute this model file for the builtin model")
    v.add_argument("--quiet", action="store_true", help="print only per-script results")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selfcheck", help="model validation, oracle self-tests, BSGS sanity")
    s.add_argument("--window", type=int, default=20)
    s.add_argument("--model-file", default=None, help="validate this model file instead of the builtins")
    s.add_argument("--n", type=int, default=17, help="n for --model-file when it is an sn model")
    s.set_defaults(func=cmd_selfcheck)

    m = sub.add_parser("shiftmap", help="check the strip model of the handle shift exactly")
    m.add_argument("--check", action="store_true", help="run the checks (default action)")
    m.add_argument("--samples", type=int, default=24, help="rational rows sampled per check")
    m.set_defaults(func=cmd_shiftmap)

    p = sub.add_parser("project", help="print the image of a word in Sym_n")
    p.add_argument("word")
    p.add_argument("--model", choices=("sn", "jacob", "lochness"), default="sn")
    p.add_argument("--n", type=int, default=17)
    p.set_defaults(func=cmd_project)

    nrm = sub.add_parser("normalize", help="print the canonical form of a word")
    nrm.add_argument("word")
    nrm.add_argument("--model", choices=("sn", "jacob", "lochness"), default="sn")
    nrm.add_argument("--n", type=int, default=17)
    nrm.add_argument("--budget", type=int, default=_budget_default())
    nrm.add_argument("--trace", action="store_true", help="print the rewrite trace")
    nrm.add_argument("--matrix", action="store_true", help="print the homology matrix grid")
    nrm.add_argument("--matrix-window", type=int, default=4)
    nrm.set_defaults(func=cmd_normalize)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScriptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except McgError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
