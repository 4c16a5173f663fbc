"""Command-line interface: ``epkit {pinv,classify,blockrep,verify,witness}``.

Exit codes: 0 success, 1 usage / IO / parse error, 2 characterization
consensus failure or implication-audit violation.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .audit import implication_audit
from .blockrep import SingularBlock, orthodecompose, pinv_from_blocks, rep_criterion
from .classes import CharacterizationSkipped, ConsensusFailure, classify
from .io import (
    MatrixFileError,
    class_report_to_dict,
    decimal,
    dumps,
    load_matrix,
    matrix_to_dict,
    poly_to_str,
    tol_to_dict,
)
from .matrix import Matrix, Tolerance, agree, rank
from .parser import ParseError, parse_polynomial
from .pinv import moore_penrose, penrose_residuals
from .scalar import BACKENDS
from .witness import FIXTURE_MATRICES, QueryError, SeparationQuery, fixture, search_separation

EXIT_OK, EXIT_USAGE, EXIT_CONSENSUS = 0, 1, 2
ENV_BACKEND = "EPKIT_DEFAULT_BACKEND"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return dims


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=BACKENDS, default=None,
                        help=f"arithmetic backend (default: ${ENV_BACKEND}, else the input file's own type; exact for witness)")
    common.add_argument("--tol-rank", type=float, default=Tolerance.rank_rel,
                        help="relative singular-value cutoff for float rank")
    common.add_argument("--tol-residual", type=float, default=Tolerance.residual_rel,
                        help="relative residual for float identity checks")
    common.add_argument("--tol-psd", type=float, default=Tolerance.psd_rel,
                        help="relative eigenvalue slack for float PSD tests")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")

    parser = _Parser(prog="epkit", description="EP-type operator classes for finite matrices.")
    parser.add_argument("--version", action="version", version=f"epkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pinv", parents=[common], help="Moore-Penrose inverse and Penrose residuals")
    p.add_argument("matrix", type=Path, help="matrix file or directory of matrix files")

    p = sub.add_parser("classify", parents=[common], help="class verdicts with every characterization")
    p.add_argument("matrix", type=Path)
    p.add_argument("--poly", default=None)
    p.add_argument("--n", type=_positive_int, default=None)

    p = sub.add_parser("blockrep", parents=[common], help="block form over R(T*) (+) N(T)")
    p.add_argument("matrix", type=Path)
    p.add_argument("--poly", default=None)

    p = sub.add_parser("verify", parents=[common], help="consensus, block criterion and implication audit")
    p.add_argument("matrix", type=Path)
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=_positive_int, default=3)

    p = sub.add_parser("witness", parents=[common], help="search for a matrix satisfying a class query")
    p.add_argument("--query", required=True, help='e.g. "p-HEP & !HEP"')
    p.add_argument("--dims", type=_dims, default=(3, 4))
    p.add_argument("--budget", type=_positive_int, default=10_000)
    p.add_argument("--seed", default="0", help='non-negative integer, or "fixture" to try the built-in matrices first')
    p.add_argument("--poly", default=None)
    p.add_argument("--n", type=_positive_int, default=1)
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


# report assembly


def _tol(args) -> Tolerance:
    try:
        return Tolerance(args.tol_rank, args.tol_residual, args.tol_psd)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _backend(args) -> Optional[str]:
    if args.backend:
        return args.backend
    env = os.environ.get(ENV_BACKEND)
    if env:
        if env not in BACKENDS:
            raise UsageError(f"{ENV_BACKEND} must be one of {', '.join(BACKENDS)}, got {env!r}")
        return env
    return None


def _poly(text: Optional[str]):
    if text is None:
        return None
    return parse_polynomial(text)


def _header(args, tol: Tolerance, **extra) -> dict:
    out = {"tool": "epkit", "version": __version__, "command": args.command, "tolerances": tol_to_dict(tol)}
    out.update(extra)
    return out


def _residuals_dict(res) -> dict:
    return {k: decimal(v) for k, v in res._asdict().items()}


def cmd_pinv(args, T: Matrix, tol: Tolerance) -> tuple[dict, int]:
    X = moore_penrose(T, tol)
    return {
        "rank": rank(T, tol),
        "pinv": matrix_to_dict(X),
        "penrose_residuals": _residuals_dict(penrose_residuals(T, X)),
    }, EXIT_OK


def cmd_classify(args, T: Matrix, tol: Tolerance) -> tuple[dict, int]:
    p = _poly(args.poly)
    try:
        report = classify(T, p, args.n, tol, strict=True)
    except ConsensusFailure as exc:
        return {"error": "consensus failure", "detail": str(exc)}, EXIT_CONSENSUS
    return {"classification": class_report_to_dict(report)}, EXIT_OK


def cmd_blockrep(args, T: Matrix, tol: Tolerance) -> tuple[dict, int]:
    p = _poly(args.poly)
    if not T.is_square:
        raise UsageError("blockrep needs a square matrix")
    try:
        rep = orthodecompose(T, tol)
    except SingularBlock as exc:
        return {"error": "singular block", "detail": str(exc)}, EXIT_CONSENSUS
    ok, res = agree(pinv_from_blocks(rep), moore_penrose(T, tol), tol)
    out = {
        "rank": rep.r,
        "basis": matrix_to_dict(rep.basis),
        "gram": [str(g) if T.exact else decimal(g) for g in rep.gram],
        "T1": matrix_to_dict(rep.T1),
        "T2": matrix_to_dict(rep.T2),
        "D": matrix_to_dict(rep.D),
        "leak": decimal(rep.leak),
        "pinv_reconstruction": {"agrees": ok, "residual": decimal(res)},
    }
    code = EXIT_OK if ok else EXIT_CONSENSUS
    if p is not None:
        try:
            rc = rep_criterion(T, p, tol, strict=True)
        except ConsensusFailure as exc:
            out["rep_criterion"] = {"error": "consensus failure", "detail": str(exc)}
            return out, EXIT_CONSENSUS
        out["rep_criterion"] = _rep_dict(rc)
    return out, code


def _rep_dict(rc) -> dict:
    return {
        "holds": rc.holds,
        "residual": decimal(rc.residual),
        "gram_identity": {"holds": rc.gram_identity[0], "residual": decimal(rc.gram_identity[1])},
        "adjoint_identity": {"holds": rc.adjoint_identity[0], "residual": decimal(rc.adjoint_identity[1])},
        "definition": rc.definition,
        "class_consensus": rc.class_consensus,
        "agree": rc.agree,
    }


def cmd_verify(args, T: Matrix, tol: Tolerance) -> tuple[dict, int]:
    p = _poly(args.poly)
    if not T.is_square:
        raise UsageError("verify needs a square matrix")
    X = moore_penrose(T, tol)
    res = penrose_residuals(T, X)
    out: dict = {"penrose_residuals": _residuals_dict(res)}
    code = EXIT_OK
    try:
        out["classification"] = class_report_to_dict(classify(T, p, args.n, tol, strict=True))
        out["rep_criterion"] = _rep_dict(rep_criterion(T, p, tol, strict=True))
    except ConsensusFailure as exc:
        out["error"] = "consensus failure"
        out["detail"] = str(exc)
        return out, EXIT_CONSENSUS
    audit = implication_audit(T, p, args.n, tol)
    out["audit"] = {
        "ok": audit.ok,
        "counts": {s: audit.count(s) for s in ("pass", "fail", "vacuous", "n/a")},
        "rows": [{"name": r.name, "hypothesis": r.hypothesis, "conclusion": r.conclusion, "status": r.status}
                 for r in audit.rows],
    }
    if not audit.ok:
        out["error"] = "implication audit violation"
        out["detail"] = audit.violation.name
        code = EXIT_CONSENSUS
    return out, code


def cmd_witness(args, tol: Tolerance) -> tuple[dict, int]:
    from .scalar import EXACT

    use_fixtures = args.seed == "fixture"
    try:
        seed = 0 if use_fixtures else int(args.seed)
    except ValueError:
        raise UsageError(f'--seed must be an integer or "fixture", got {args.seed!r}') from None
    if seed < 0 or seed >= 2**64:
        raise UsageError("--seed must fit in an unsigned 64-bit integer")
    p = _poly(args.poly)
    backend = _backend(args) or EXACT
    fixtures = []
    if use_fixtures:
        fixtures = [fixture(name) for name in FIXTURE_MATRICES if fixture(name).rows in args.dims]
        if backend != EXACT:
            fixtures = [F.to_float() for F in fixtures]
    query = SeparationQuery(args.query, args.dims, args.budget, seed, args.n)
    w = search_separation(query, p, tol, fixtures, backend, workers=args.workers)
    body = {
        "query": args.query,
        "dims": list(args.dims),
        "budget": args.budget,
        "seed": args.seed,
        "poly": poly_to_str(p),
        "n": args.n,
        "backend": backend,
    }
    if w is None:
        return {"search": body, "found": False, "result": "not found"}, EXIT_OK
    return {
        "search": body,
        "found": True,
        "source": w.source,
        "index": w.index,
        "matrix": matrix_to_dict(w.matrix),
        "classification": class_report_to_dict(w.report),
    }, EXIT_OK


_MATRIX_COMMANDS: dict[str, Callable] = {
    "pinv": cmd_pinv,
    "classify": cmd_classify,
    "blockrep": cmd_blockrep,
    "verify": cmd_verify,
}


def _run_one(args, path: Path, tol: Tolerance) -> tuple[dict, int]:
    T = load_matrix(path, _backend(args))
    body, code = _MATRIX_COMMANDS[args.command](args, T, tol)
    return {"input": {"path": str(path), "matrix": matrix_to_dict(T)}, **body}, code


def run(args) -> tuple[dict, int]:
    tol = _tol(args)
    extra = {}
    if getattr(args, "poly", None) is not None:
        extra["poly"] = args.poly
    if getattr(args, "n", None) is not None:
        extra["n"] = args.n
    if args.command == "witness":
        body, code = cmd_witness(args, tol)
        return {**_header(args, tol, **extra), **body}, code
    path: Path = args.matrix
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise UsageError(f"{path}: no .json matrix files")
        batch, code = {}, EXIT_OK
        for f in files:
            batch[f.name], c = _run_one(args, f, tol)
            code = max(code, c)
        return {**_header(args, tol, **extra), "batch": batch}, code
    body, code = _run_one(args, path, tol)
    return {**_header(args, tol, **extra), **body}, code


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CharacterizationSkipped)
            report, code = run(args)
    except (UsageError, MatrixFileError, ParseError, QueryError, ValueError) as exc:
        print(f"epkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(report)
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"epkit: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
