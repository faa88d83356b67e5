"""Command-line interface: ``garland <subcommand> ...``.

Exit codes: 0 success, 1 soundness failure in an experiment, 2 bad input
or parse error, 3 invalid complex (validation or purity), 4 Garland axiom
or monodromy failure, 5 eigensolver non-convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import generators as gen
from .cohomology import CocycleError, cohomology_report, theorem_check
from .complex import (
    ComplexError, InvalidComplexError, ParseError, face_poset, parse_complex, serialize_complex,
    validate,
)
from .exactness import analyze as exactness_analyze
from .exactness import assemble
from .experiment import TrialError, run_experiment, summarize, to_csv
from .poset import (
    AxiomError, ObstructionError, PurityError, build_garland, check_axioms, check_monodromy_free,
    link_components,
)
from .spectral import ConvergenceError, IsolatedVertexError, evaluate_criterion, spectral_report

EXIT_PARSE, EXIT_VALIDATE, EXIT_AXIOM, EXIT_NUMERIC, EXIT_UNSOUND = 2, 3, 4, 5, 1

GLOBAL_DEFAULTS = {
    "tol": 1e-9, "band": 1e-7, "rank_mode": "exact", "seed": 0, "out": None, "full_spectra": False,
}


class CliError(Exception):
    def __init__(self, stage, code, message):
        self.stage, self.code = stage, code
        super().__init__(message)


def _add_globals(p):
    s = argparse.SUPPRESS
    p.add_argument("--tol", type=float, default=s, help="numerical tolerance (default 1e-9)")
    p.add_argument("--band", type=float, default=s, help="inconclusive band around thresholds (default 1e-7)")
    p.add_argument("--rank-mode", choices=["exact", "modular"], default=s, help="rank arithmetic (default exact)")
    p.add_argument("--seed", type=int, default=s, help="random seed (default 0)")
    p.add_argument("--out", default=s, help="output file (default stdout)")
    p.add_argument("--full-spectra", action="store_true", default=s, help="include eigenvalue lists")


def _load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError("input", EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_complex(text)
    except ParseError as exc:
        raise CliError("parse", EXIT_PARSE, str(exc)) from None


def _poset(c):
    try:
        return face_poset(c)
    except InvalidComplexError as exc:
        raise CliError("validate", EXIT_VALIDATE, str(exc)) from None


def _level(args, fp):
    level = fp.dim - 1 if args.level is None else args.level
    if level < 0:
        raise CliError("validate", EXIT_VALIDATE, f"a {fp.dim}-dimensional complex has no level to analyze")
    return level


def _emit(args, payload, text=False):
    out = payload if text else json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def cmd_build(args):
    g = args.gen
    try:
        if g == "torus-cubical":
            c = gen.torus_cubical(args.m, args.n)
        elif g == "torus-simplicial":
            c = gen.torus_simplicial(args.m, args.n)
        elif g == "cycle":
            c = gen.cycle(args.n)
        elif g == "cube-skeleton":
            c = gen.cube_skeleton(args.r)
        elif g == "cross-polytope":
            c = gen.cross_polytope(args.n)
        elif g in ("simplex", "cube"):
            c = gen.small_library(g, args.d)
        elif g == "moment-angle":
            if not args.input:
                raise CliError("input", EXIT_PARSE, "--gen moment-angle needs --input K.json")
            c = gen.moment_angle(_load(args.input))
        else:
            c = gen.sample(gen.RandomModelParams(g, args.h, args.d, args.k, args.seed)).complex
    except gen.GeneratorError as exc:
        raise CliError("generate", EXIT_VALIDATE, str(exc)) from None
    _emit(args, serialize_complex(c) + "\n", text=True)


def cmd_validate(args):
    report = validate(_load(args.file))
    _emit(args, report.to_dict())
    return 0 if report.ok else EXIT_VALIDATE


def _analysis(args, fp, level):
    lg = link_components(fp, level)
    g = build_garland(fp, level, lg, check=False)
    axioms = check_axioms(g)
    if not axioms.ok:
        raise AxiomError(axioms)
    return lg, g, axioms


def cmd_analyze(args):
    fp = _poset(_load(args.file))
    level = _level(args, fp)
    lg, g, axioms = _analysis(args, fp, level)
    spec = spectral_report(lg, args.tol)
    verdict = evaluate_criterion(lg, level, fp.kind, args.band, args.tol, report=spec)
    out = {"level": level, "kind": fp.kind, **g.to_dict(), "axioms": axioms.to_dict()}
    if fp.kind == "cubical":
        out["monodromy"] = check_monodromy_free(fp, level, lg).to_dict()
    out["spectral"] = spec.to_dict(args.full_spectra)
    out["criterion"] = verdict.to_dict()
    out["minGap"] = out["spectral"]["minGap"]
    out["threshold"] = str(verdict.threshold)
    out["verdict"] = verdict.overall
    _emit(args, out)


def cmd_spectra(args):
    fp = _poset(_load(args.file))
    level = _level(args, fp)
    lg = link_components(fp, level)
    _emit(args, {"level": level, **spectral_report(lg, args.tol).to_dict(args.full_spectra)})


def cmd_cohomology(args):
    fp = _poset(_load(args.file))
    level = _level(args, fp)
    tc = theorem_check(fp, level, mode=args.rank_mode, band=args.band, tol=args.tol)
    _emit(args, {**tc.report.to_dict(), "verdict": tc.verdict.overall,
                 "criterionConsistent": tc.criterion_ok})


def cmd_verify(args):
    fp = _poset(_load(args.file))
    level = _level(args, fp)
    _analysis(args, fp, level)
    e = assemble(build_garland(fp, level))
    rep = exactness_analyze(e, identities=True, mode=args.rank_mode, tol=args.tol, seed=args.seed)
    width = max(len(i.name) for i in rep.identities)
    for i in rep.identities:
        print(f"{i.name:<{width}}  {'PASS' if i.passed else 'FAIL'}  {i.residual:.3e}", file=sys.stderr)
    _emit(args, rep.to_dict())
    return 0 if all(i.passed for i in rep.identities) else EXIT_UNSOUND


def cmd_experiment(args):
    try:
        records = run_experiment(args.model, args.h, args.d, args.k, args.trials, args.seed,
                                 threads=args.threads, rank_mode=args.rank_mode,
                                 band=args.band, tol=args.tol)
    except TrialError as exc:
        raise CliError(exc.stage, EXIT_VALIDATE, str(exc)) from None
    summary = summarize(records)
    summary.update({"model": args.model, "h": args.h, "d": args.d, "k": args.k, "seed": args.seed})
    _emit(args, to_csv(records), text=True)
    text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        Path(args.summary).write_text(text)
    else:
        sys.stderr.write(text)
    return 0 if summary["allConsistent"] else EXIT_UNSOUND


def cmd_moment_angle(args):
    K = _load(args.file)
    try:
        level = args.level if args.level is not None else gen.moment_angle(K).dim - 1
        res = gen.moment_angle_check(K, level)
    except gen.GeneratorError as exc:
        raise CliError("generate", EXIT_VALIDATE, str(exc)) from None
    _emit(args, res)
    return 0 if res["match"] and res["monodromyFree"] else EXIT_AXIOM


def build_parser():
    parser = argparse.ArgumentParser(prog="garland", description="Garland-method spectral criteria for cell complexes.")
    _add_globals(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, file_arg=True, level=True):
        p = sub.add_parser(name, help=help_text)
        _add_globals(p)
        if file_arg:
            p.add_argument("file", help="complex JSON file")
        if level:
            p.add_argument("--level", type=int, default=None, help="level k (default dim - 1)")
        p.set_defaults(func=fn)
        return p

    b = add("build", cmd_build, "generate a complex", file_arg=False, level=False)
    b.add_argument("--gen", required=True, choices=[
        "torus-cubical", "torus-simplicial", "moment-angle", "ydelta", "ybox", "zbox",
        "cycle", "cube-skeleton", "cross-polytope", "simplex", "cube"])
    b.add_argument("--m", type=int, default=4)
    b.add_argument("--n", type=int, default=4)
    b.add_argument("--r", type=int, default=3)
    b.add_argument("--h", type=int, default=4)
    b.add_argument("--d", type=int, default=3)
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--input", help="simplicial complex K for moment-angle")
    add("validate", cmd_validate, "validate a complex file", level=False)
    add("analyze", cmd_analyze, "Garland poset, spectra and criterion")
    add("spectra", cmd_spectra, "link-graph spectra")
    add("cohomology", cmd_cohomology, "Betti numbers, L, T and H^0(B)")
    add("verify", cmd_verify, "exactness-lab identity suite")
    add("moment-angle", cmd_moment_angle, "check the link graph of X_K against its predicted pieces")
    x = add("experiment", cmd_experiment, "seeded random-model trials", file_arg=False, level=False)
    x.add_argument("--model", required=True, choices=["ydelta", "ybox", "zbox"])
    x.add_argument("--h", type=int, required=True)
    x.add_argument("--d", type=int, required=True)
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--trials", type=int, default=100)
    x.add_argument("--threads", type=int, default=None, help="worker processes (default $GARLAND_THREADS or 1)")
    x.add_argument("--summary", help="summary JSON path (default stderr)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args) or 0
    except CliError as exc:
        stage, code, msg = exc.stage, exc.code, str(exc)
    except (PurityError, InvalidComplexError) as exc:
        stage, code, msg = "validate", EXIT_VALIDATE, str(exc)
    except (AxiomError, ObstructionError, CocycleError) as exc:
        stage, code, msg = "garland", EXIT_AXIOM, str(exc)
    except (ConvergenceError, IsolatedVertexError) as exc:
        stage, code, msg = "spectral", EXIT_NUMERIC, str(exc)
    except ComplexError as exc:
        stage, code, msg = "validate", EXIT_VALIDATE, str(exc)
    print(f"garland: {stage} error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
