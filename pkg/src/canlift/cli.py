"""Command-line front end.

Subcommands: lift, table, check, hd, gamma, selftest.  Exit status 0 on
success, 1 on a precondition violation (singular, non-ordinary, p | N+1),
2 on unparsable input, 3 when two independent computations disagree.

Text grammars
-------------
field element   integer (n = 1) or ``c0,c1,...`` coefficients in the generator y
Witt vector     ``(a0|a1)`` with field-element coordinates; for n = 1 a bare
                integer is read in Z/p^2 through the isomorphism
polynomial      term (('+'|'-') term)*, term := [coeff '*'] factor ('*' factor)*,
                factor := 'x' index ['^' exponent], coeff := integer | Witt literal
                (``[c0,c1]`` field literals over k); whitespace ignored
dual element    the same with negative exponents, e.g. ``x0^-2*x1^-2*x2^-2``
modulus         polynomial in y, e.g. ``y^2+1``
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, TextIO

from .arith import FieldElement, FieldSpec, parse_field_element, parse_modulus, parse_witt, witt_prime_iso
from .dwork import (
    DworkParams,
    PreconditionError,
    UniquenessFailure,
    canonical_eta,
    closed_form_obstruction,
    dwork_context,
    dwork_ordinary,
    dwork_smooth,
    hd_def,
    pipeline_obstruction,
)
from .obstruction import (
    CrossCheckError,
    HypersurfaceContext,
    flag_inconclusive,
    is_canonical,
    obstruction_report,
)
from .poly import InhomogeneousError, ParseError, parse_poly

SCHEMA_VERSION = 1
EXIT_OK, EXIT_PRECONDITION, EXIT_PARSE, EXIT_CROSSCHECK = 0, 1, 2, 3
COMMANDS = ("lift", "table", "check", "hd", "gamma", "selftest")
LIFT_FIELDS = ("p", "n", "N", "lambda", "smooth", "ordinary", "eta_witt", "eta_zp2",
               "cross_checked", "inconclusive_n2", "timing_ms")
SMOOTHNESS_NOTE = "f is assumed smooth over W_2(k); smoothness is not verified"


class InputError(ValueError):
    """Malformed command-line input (exit status 2)."""


@dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    n: int = 1
    N: Optional[int] = None
    modulus: Optional[str] = None
    lam: Optional[str] = None
    eta: Optional[str] = None
    f: Optional[str] = None
    m: int = 1
    output: str = "text"
    threads: int = 1
    verify: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.output not in ("json", "csv", "text"):
            raise InputError(f"unknown output mode {self.output!r}")
        need = {"lift": ("p", "N", "lam"), "table": ("p", "N"), "check": ("p",),
                "hd": ("p", "N"), "gamma": ("p", "f")}.get(self.command, ())
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            flags = ", ".join("--lambda" if k == "lam" else f"--{k}" for k in missing)
            raise InputError(f"{self.command} requires {flags}")
        if self.command == "check" and self.f is None and (self.eta is None or self.N is None):
            raise InputError("check requires --f, or --N with --eta")


@dataclass
class LiftReport:
    p: int
    n: int
    N: int
    lam: str
    smooth: bool
    ordinary: bool
    eta_witt: Optional[str] = None
    eta_zp2: Optional[int] = None
    cross_checked: bool = False
    inconclusive_n2: bool = False
    timing_ms: float = 0.0
    error: Optional[str] = field(default=None, compare=False)

    def to_json(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d.pop("error")
        return {k: d[k] for k in LIFT_FIELDS}


# ---------------------------------------------------------------------------
# building blocks


def make_spec(cfg: RunConfig) -> FieldSpec:
    modulus = None
    if cfg.modulus is not None:
        try:
            modulus = parse_modulus(cfg.modulus, cfg.p)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        return FieldSpec(cfg.p, cfg.n, modulus)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None


def _parse_lambda(text: str, spec: FieldSpec) -> FieldElement:
    try:
        return parse_field_element(text, spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_eta(text: str, spec: FieldSpec):
    text = text.strip()
    try:
        if text.startswith("("):
            return parse_witt(text, spec)
        if spec.n == 1:
            return spec.ring_to_witt(spec.w2.from_int(int(text)))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"eta {text!r} must be a Witt literal (a0|a1)")


def solve_one(spec: FieldSpec, N: int, lam: FieldElement, verify: bool = True) -> LiftReport:
    """One LiftReport; raises CrossCheckError if the independent checks disagree."""
    t0 = time.perf_counter()
    params = DworkParams(spec, N, lam)
    smooth = dwork_smooth(params)
    ordinary = dwork_ordinary(params) if smooth else False
    rep = LiftReport(spec.p, spec.n, N, str(lam), smooth, ordinary)
    if smooth and ordinary:
        try:
            eta = canonical_eta(spec, N, lam, verify=False)
        except UniquenessFailure as exc:
            rep.error = str(exc)
            raise CrossCheckError(f"lambda={lam}: {exc}") from None
        rep.eta_witt = str(eta)
        rep.eta_zp2 = witt_prime_iso(eta) if spec.n == 1 else None
        if verify:
            sol = params.with_eta(eta)
            ctx = dwork_context(sol)
            if pipeline_obstruction(sol, ctx) != closed_form_obstruction(sol):
                raise CrossCheckError(f"lambda={lam}: closed form and pipeline disagree")
            verdict = is_canonical(ctx)
            if not verdict.canonical:
                raise CrossCheckError(f"lambda={lam}: solved eta={eta} fails the obstruction test")
            rep.cross_checked = True
            rep.inconclusive_n2 = flag_inconclusive(ctx, verdict.canonical)
    rep.timing_ms = round((time.perf_counter() - t0) * 1e3, 3)
    return rep


def table_rows(spec: FieldSpec, N: int, lams: Sequence[FieldElement], verify: bool,
               threads: int) -> list[LiftReport]:
    work = lambda lam: solve_one(spec, N, lam, verify)  # noqa: E731
    if threads <= 1:
        return [work(lam) for lam in lams]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, lams))


# ---------------------------------------------------------------------------
# output


def _text_block(d: dict) -> str:
    return "\n".join(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) or v is None else v}"
                     for k, v in d.items())


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def format_report(report, mode: str) -> str:
    """Serialize a LiftReport, a list of them (table), or a plain dict."""
    if isinstance(report, LiftReport):
        rows, single = [report.to_json()], True
    elif isinstance(report, list):
        rows, single = [r.to_json() for r in report], False
    else:
        rows, single = [dict(report)], True
    if mode == "json":
        if single:
            return json.dumps({"schema_version": SCHEMA_VERSION, **rows[0]})
        return json.dumps({"schema_version": SCHEMA_VERSION, "rows": rows})
    if mode == "csv":
        cols = list(LIFT_FIELDS) if isinstance(report, (LiftReport, list)) else list(rows[0])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_csv_value(r.get(c)) for c in cols])
        return buf.getvalue().rstrip("\n")
    return "\n\n".join(_text_block(r) for r in rows)


# ---------------------------------------------------------------------------
# commands


def _cmd_lift(cfg: RunConfig, out: TextIO) -> int:
    spec = make_spec(cfg)
    lam = _parse_lambda(cfg.lam, spec)
    if (cfg.N + 1) % spec.p == 0:
        rep = LiftReport(spec.p, spec.n, cfg.N, str(lam), False, False)
        print(format_report(rep, cfg.output), file=out)
        print(f"error: p={spec.p} divides N+1={cfg.N + 1}", file=sys.stderr)
        return EXIT_PRECONDITION
    rep = solve_one(spec, cfg.N, lam, cfg.verify)
    print(format_report(rep, cfg.output), file=out)
    if not rep.smooth:
        print(f"error: X({lam}) is singular", file=sys.stderr)
        return EXIT_PRECONDITION
    if not rep.ordinary:
        print(f"error: X({lam}) is not ordinary", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


def _cmd_table(cfg: RunConfig, out: TextIO) -> int:
    spec = make_spec(cfg)
    if cfg.lam:
        lams = [_parse_lambda(t, spec) for t in cfg.lam.split(";") if t.strip()]
    else:
        lams = list(spec.elements())
    rows = table_rows(spec, cfg.N, lams, cfg.verify, cfg.threads)
    print(format_report(rows, cfg.output), file=out)
    return EXIT_OK


def _obstruction_json(ctx: HypersurfaceContext, cfg: RunConfig, extra: dict | None = None) -> dict:
    rep = obstruction_report(ctx, verify=cfg.verify).to_json()
    d = {"schema_version": SCHEMA_VERSION, **rep}
    if extra:
        d.update(extra)
    return d


def _emit(d: dict, cfg: RunConfig, out: TextIO) -> None:
    if cfg.output == "json":
        print(json.dumps(d), file=out)
    elif cfg.output == "csv":
        print(format_report({k: v for k, v in d.items() if k != "schema_version"}, "csv"), file=out)
    else:
        print(_text_block(d), file=out)


def _parse_f(cfg: RunConfig, spec: FieldSpec):
    try:
        return parse_poly(cfg.f, spec, "w2")
    except (ParseError, InhomogeneousError) as exc:
        raise InputError(str(exc)) from None


def _cmd_check(cfg: RunConfig, out: TextIO) -> int:
    spec = make_spec(cfg)
    if cfg.f is not None:
        ctx = HypersurfaceContext(_parse_f(cfg, spec))
        _emit(_obstruction_json(ctx, cfg), cfg, out)
        return EXIT_OK
    eta = _parse_eta(cfg.eta, spec)
    params = DworkParams(spec, cfg.N, eta.a0, eta)
    if (cfg.N + 1) % spec.p == 0:
        raise PreconditionError(f"p={spec.p} divides N+1={cfg.N + 1}")
    if not dwork_smooth(params):
        raise PreconditionError(f"X({eta.a0}) is singular")
    ctx = dwork_context(params)
    if pipeline_obstruction(params, ctx) != closed_form_obstruction(params):
        raise CrossCheckError("closed form and pipeline disagree")
    _emit(_obstruction_json(ctx, cfg), cfg, out)
    return EXIT_OK


def _cmd_gamma(cfg: RunConfig, out: TextIO) -> int:
    spec = make_spec(cfg)
    ctx = HypersurfaceContext(_parse_f(cfg, spec))
    _emit(_obstruction_json(ctx, cfg, {"precondition": SMOOTHNESS_NOTE}), cfg, out)
    return EXIT_OK


def _cmd_hd(cfg: RunConfig, out: TextIO) -> int:
    if cfg.m not in (1, 2):
        raise InputError("--m must be 1 or 2")
    p = cfg.p
    make_spec(cfg)
    if (cfg.N + 1) % p == 0:
        raise PreconditionError(f"p={p} divides N+1={cfg.N + 1}")
    hd = hd_def(cfg.N + 1, cfg.m * p - 1)
    q = p * p
    if cfg.output == "json":
        d = {"schema_version": SCHEMA_VERSION, "M": hd.M, "P": hd.P,
             "exact": {str(e): c for e, c in hd.items()},
             "mod_p2": {str(e): c for e, c in hd.reduce(q).items()},
             "modulus": q}
        print(json.dumps(d), file=out)
    elif cfg.output == "csv":
        print("exponent,exact,mod_p2", file=out)
        for e, c in hd.items():
            print(f"{e},{c},{c % q}", file=out)
    else:
        print(hd.to_text(), file=out)
        print(hd.to_text_mod(q), file=out)
    return EXIT_OK


def _cmd_selftest(cfg: RunConfig, out: TextIO) -> int:
    from .selftest import run_selftest

    results = run_selftest()
    if cfg.output == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION,
                          "checks": [{"name": n, "pass": ok, "ms": round(ms, 1)} for n, ok, ms in results]}),
              file=out)
    else:
        width = max(len(n) for n, _, _ in results)
        for name, ok, ms in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name.ljust(width)}  {ms:8.1f} ms", file=out)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_CROSSCHECK


HANDLERS = {
    "lift": _cmd_lift,
    "table": _cmd_table,
    "check": _cmd_check,
    "hd": _cmd_hd,
    "gamma": _cmd_gamma,
    "selftest": _cmd_selftest,
}


def run(cfg: RunConfig, out: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    try:
        return HANDLERS[cfg.command](cfg, out)
    except InputError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CrossCheckError as exc:
        print(f"internal cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK


# ---------------------------------------------------------------------------
# argument parsing


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CANLIFT_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="odd prime characteristic")
    common.add_argument("--n-ext", type=int, default=1, dest="n_ext", help="extension degree of k over F_p")
    common.add_argument("--modulus", help="monic irreducible in y defining k, e.g. 'y^2+1'")
    common.add_argument("--N", type=int, help="ambient projective dimension")
    common.add_argument("--lambda", dest="lam", help="parameter in k (table: ';'-separated list)")
    common.add_argument("--eta", help="parameter in W_2(k): '(a0|a1)', or an integer mod p^2 when n=1")
    common.add_argument("--f", help="homogeneous polynomial over W_2(k)")
    common.add_argument("--m", type=int, default=1, help="hd: compute HD^(mp-1)")
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for table (default $CANLIFT_THREADS or 1)")
    common.add_argument("--no-verify", action="store_true",
                        help="skip re-checking answers through the obstruction pipeline")
    parser = argparse.ArgumentParser(prog="canlift", description=__doc__.split("\n\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     epilog=__doc__.split("\n\n", 1)[1])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "lift": "solve for the canonical Dwork parameter eta over lambda",
        "table": "solve for every lambda in k (or a supplied list)",
        "check": "obstruction report for a candidate lift (--f, or --N with --eta)",
        "hd": "print HD^(mp-1)_(N+1) exactly and modulo p^2",
        "gamma": "obstruction test for an arbitrary hypersurface --f",
        "selftest": "run the invariant suite",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    threads = ns.threads if ns.threads is not None else _default_threads()
    return RunConfig(command=ns.command, p=ns.p, n=ns.n_ext, N=ns.N, modulus=ns.modulus,
                     lam=ns.lam, eta=ns.eta, f=ns.f, m=ns.m, output=ns.output,
                     threads=max(1, threads), verify=not ns.no_verify)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
