"""Command-line surface for the kernel.

Every command builds a request model and runs the shared service
handler, in process by default or against a running HTTP service when
--server URL is given; results render identically either way.  Output on
stdout is deterministic for fixed inputs and flags (bench wall times
excepted); diagnostics go to stderr.

Exit codes: 0 success, 1 usage or I/O trouble, 2 malformed input,
3 precondition violation, 4 verification mismatch, 5 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import __version__
from .errors import (
    ConstantTermError,
    ContextMismatchError,
    DegreeOverflowError,
    DuplicateTermError,
    FormatError,
    KernelError,
    NonIdentityLinearPartError,
    PreconditionError,
    ResourceCapError,
    SingularLinearPartError,
    VerificationError,
)
from .fileformat import emit_series, parse_series
from .service import handlers, models
from .service.models import map_to_payload, payload_to_map

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY = 4
EXIT_RESOURCE = 5

_CODE_TO_ERROR = {
    cls.code: cls
    for cls in (
        FormatError,
        DuplicateTermError,
        DegreeOverflowError,
        PreconditionError,
        ConstantTermError,
        ContextMismatchError,
        NonIdentityLinearPartError,
        SingularLinearPartError,
        VerificationError,
        ResourceCapError,
        KernelError,
    )
}


def _exit_code(exc: KernelError) -> int:
    if isinstance(exc, FormatError):
        return EXIT_FORMAT
    if isinstance(exc, PreconditionError):
        return EXIT_PRECONDITION
    if isinstance(exc, VerificationError):
        return EXIT_VERIFY
    if isinstance(exc, ResourceCapError):
        return EXIT_RESOURCE
    return EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dispatch(server: str | None, path: str, req, resp_cls):
    """Run a request in process, or POST it to the service."""
    if not server:
        _, fn, _ = handlers.HANDLERS[path]
        return fn(req)
    url = server.rstrip("/") + path
    r = httpx.post(url, json=req.model_dump(), timeout=600.0)
    if r.status_code >= 400:
        code, message = "KERNEL_ERROR", r.text
        try:
            detail = r.json().get("detail")
            if isinstance(detail, dict):
                code = detail.get("code", code)
                message = detail.get("message", message)
        except ValueError:
            pass
        raise _CODE_TO_ERROR.get(code, KernelError)(message)
    return resp_cls.model_validate(r.json())


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None


def _file_payload(path: str) -> models.SeriesPayload:
    return map_to_payload(parse_series(_read_text(path)))


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE) from None


def _payload_lines(p) -> list:
    return [
        f"comp {t.component}: {' '.join(str(a) for a in t.exponents)} -> {t.coefficient}"
        for t in p.terms
    ]


def _series_text(p: models.SeriesPayload) -> str:
    return emit_series(payload_to_map(p))


def _series_json(p: models.SeriesPayload) -> str:
    return json.dumps(p.model_dump(), indent=2, sort_keys=True) + "\n"


def _cmd_invert(args) -> int:
    req = models.InvertRequest(
        series=_file_payload(args.infile), degree=args.degree, method=args.method
    )
    resp = _dispatch(args.server, "/invert", req, models.InvertResponse)
    text = _series_json(resp.inverse) if args.json else _series_text(resp.inverse)
    _emit(text, args.out)
    return EXIT_OK


def _cmd_compose(args) -> int:
    req = models.ComposeRequest(
        outer=_file_payload(args.outer),
        inner=_file_payload(args.inner),
        degree=args.degree,
    )
    resp = _dispatch(args.server, "/compose", req, models.SeriesResponse)
    _emit(_series_text(resp.series), None)
    return EXIT_OK


def _cmd_iterate(args) -> int:
    req = models.IterateRequest(
        series=_file_payload(args.infile), times=args.times, degree=args.degree
    )
    resp = _dispatch(args.server, "/iterate", req, models.SeriesResponse)
    _emit(_series_text(resp.series), None)
    return EXIT_OK


def _cmd_phi_seq(args) -> int:
    req = models.DifferenceTermsRequest(
        series=_file_payload(args.infile), m=args.m, degree=args.degree
    )
    resp = _dispatch(args.server, "/difference-terms", req, models.DifferenceTermsResponse)
    first = resp.terms[0].series
    lines = [f"vars {first.nvars}", f"degree {first.degree}"]
    for rec in resp.terms:
        o = "inf" if rec.order is None else str(rec.order)
        lines.append(f"term m={rec.m} order={o}")
        lines.extend(_payload_lines(rec.series))
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _cmd_tail_test(args) -> int:
    p = _file_payload(args.infile)
    req = models.TailTestRequest(
        series=models.PolynomialPayload(nvars=p.nvars, terms=p.terms),
        max_m=args.max_m,
        max_degree=args.max_degree,
        max_terms=args.max_terms,
    )
    resp = _dispatch(args.server, "/tail-test", req, models.TailTestResponse)
    lines = [
        f"searched_upto {resp.searched_upto}",
        f"vanishing_m0 {resp.vanishing_m0 if resp.vanishing_m0 is not None else 'none'}",
    ]
    for rec in resp.records:
        d = "none" if rec.degree is None else str(rec.degree)
        lines.append(f"m={rec.m} degree={d} terms={rec.terms} zero={str(rec.zero).lower()}")
    if resp.certificate_inverse is not None:
        cert = resp.certificate_inverse
        deg = max((sum(t.exponents) for t in cert.terms), default=1)
        lines.append("certificate:")
        lines.append(f"vars {cert.nvars}")
        lines.append(f"degree {deg}")
        lines.extend(_payload_lines(cert))
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _cmd_jacobian_check(args) -> int:
    req = models.JacobianCheckRequest(
        series=_file_payload(args.infile), m=args.m, degree=args.degree
    )
    resp = _dispatch(args.server, "/jacobian-check", req, models.JacobianCheckResponse)
    lines = [
        f"holds {str(resp.holds).lower()}",
        f"m {resp.m}",
        f"degree {resp.degree}",
    ]
    for ent in resp.residual:
        exps = " ".join(str(a) for a in ent.exponents)
        lines.append(f"residual {ent.row} {ent.col}: {exps} -> {ent.coefficient}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def _cmd_matrix(args) -> int:
    req = models.MatrixRequest(
        series=_file_payload(args.infile), degree=args.degree, exponential=args.exp
    )
    resp = _dispatch(args.server, "/matrix", req, models.MatrixResponse)
    lines = []
    for e in resp.entries:
        ar = " ".join(str(a) for a in e.row_index)
        ac = " ".join(str(a) for a in e.col_index)
        lines.append(f"{e.row_weight} {e.col_weight} | {ar} | {ac} | {e.value}")
    _emit("\n".join(lines) + ("\n" if lines else ""), None)
    return EXIT_OK


def _cmd_bench(args) -> int:
    req = models.BenchRequest(nvars=args.n, degree=args.degree, seed=args.seed)
    resp = _dispatch(args.server, "/bench", req, models.BenchResponse)
    lines = [f"input_terms {resp.input_terms}"]
    for run in resp.runs:
        lines.append(
            f"method={run.method} seconds={run.seconds:.6f} peak_terms={run.peak_terms}"
        )
    lines.append(f"methods_agree {str(resp.methods_agree).lower()}")
    lines.append(f"composition_verified {str(resp.composition_verified).lower()}")
    _emit("\n".join(lines) + "\n", None)
    if not (resp.methods_agree and resp.composition_verified):
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revser", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"revser {__version__}")
    parser.add_argument(
        "--server",
        metavar="URL",
        default=None,
        help="send requests to a running service instead of computing in process",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invert", help="invert a unit-tangent map, cross-checking methods")
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.add_argument(
        "--method",
        choices=["neumann", "recurrence", "fixpoint", "all"],
        default="all",
    )
    p.add_argument("--out", default=None, metavar="F2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("compose", help="substitute one map into another")
    p.add_argument("--outer", required=True, metavar="F1")
    p.add_argument("--inner", required=True, metavar="F2")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("iterate", help="k-fold self-composition")
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--times", type=int, required=True, metavar="K")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser(
        "phi-seq", help="difference-sequence terms of the inversion series"
    )
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--m", type=int, required=True, metavar="M")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.set_defaults(func=_cmd_phi_seq)

    p = sub.add_parser(
        "tail-test", help="exact tail-vanishing sweep for a polynomial map"
    )
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--max-m", dest="max_m", type=int, required=True, metavar="M")
    p.add_argument("--max-terms", dest="max_terms", type=int, default=200_000, metavar="T")
    p.add_argument("--max-degree", dest="max_degree", type=int, default=512, metavar="G")
    p.set_defaults(func=_cmd_tail_test)

    p = sub.add_parser(
        "jacobian-check", help="Jacobian form of the term-m vanishing condition"
    )
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--m", type=int, required=True, metavar="M")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.set_defaults(func=_cmd_jacobian_check)

    p = sub.add_parser("matrix", help="dump the block matrix of a map")
    p.add_argument("--in", dest="infile", required=True, metavar="F")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.add_argument(
        "--exp",
        action="store_true",
        help="dump the symmetric-product exponential instead",
    )
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("bench", help="time the three inversion methods on seeded input")
    p.add_argument("--n", type=int, required=True, metavar="N")
    p.add_argument("--degree", type=int, required=True, metavar="D")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except KernelError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        raise SystemExit(_exit_code(exc)) from None
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    raise SystemExit(rc)


if __name__ == "__main__":
    main()
