"""Command-line interface.

Exit codes: 0 pass / verified, 1 violation found, 2 indeterminate, 3 input or usage error.
Every command writes a JSON report (schema 1) to ``--out`` or to standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from . import characterization as ch
from . import instances as inst
from . import perturbation as pt
from . import regions as rg
from .core import FundamentalSymmetry, KreinOperator, is_selfadjoint
from .errors import KreinError, PreconditionError
from .io import Manifest, dumps_report, write_csv, write_manifest, write_matrix
from .spectral import INFINITY, decompose, growth_order_at
from .tolerances import DEFAULT, Tolerances, from_env

EXIT = {ch.Verdict.PASS: 0, ch.Verdict.FAIL: 1, ch.Verdict.INDETERMINATE: 2}
INPUT_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2, which means "indeterminate" here
        raise UsageError(message)


# -- serialisation helpers -------------------------------------------------------------------


def _condition(c: ch.Condition) -> dict[str, Any]:
    return {"verdict": c.verdict.value, "evidence": c.evidence, "notes": list(c.notes)}


def _nonneg(v: ch.NonnegVerdict) -> dict[str, Any]:
    return {
        "theorem": v.theorem,
        "verdict": v.verdict.value,
        "is_nonnegative": v.is_nonnegative,
        "agrees_with_direct": v.agrees_with_direct,
        "min_gram_eig": v.min_gram_eig,
        "uniformly_positive": v.uniformly_positive,
        "lower_bound_gamma": v.lower_bound_gamma,
        "conditions": {k: _condition(c) for k, c in v.conditions.items()},
    }


def _region(K) -> dict[str, Any]:
    return rg.region_to_dict(K)


def _certificate(c: pt.EnclosureCertificate) -> dict[str, Any]:
    return {
        "theorem": c.theorem,
        "region": _region(c.region),
        "status": c.status.value,
        "verified": c.verified,
        "violations": [{"eigenvalue": z, "reason": r} for z, r in c.violations],
        "indeterminate": [{"eigenvalue": z, "reason": r} for z, r in c.indeterminate],
        "eigenvalues": [
            {"re": e.value.real, "im": e.value.imag, "location": e.location, "type": e.sign, "signed_distance": e.signed_distance}
            for e in c.eigenvalues
        ],
        "boundary_gap": c.boundary_gap,
        "margin": c.margin,
        "theorem_4_5": c.theorem_4_5,
        "infinity_regular_note": c.infinity_regular_note,
        "parameters": c.parameters,
        "notes": list(c.notes),
    }


def _growth(g) -> dict[str, Any]:
    return {
        "point": g.point,
        "estimated_order": g.estimated_order,
        "algebraic_order": g.algebraic_order,
        "constant_M": g.constant_M,
        "order2_ok": g.order2_ok,
        "direction_M": g.direction_M,
        "samples": [{"lambda": l, "resolvent_norm": r} for l, r in g.samples],
        "notes": list(g.notes),
    }


def _tau(t: pt.TauResult) -> dict[str, Any]:
    return {
        "tau": t.tau,
        "route": t.route,
        "cross_residual": t.cross_residual,
        "cross_ok": t.cross_ok,
        "involution_residual": t.involution_residual,
        "quadrature_nodes": t.quadrature_nodes,
        "gap_at_zero": t.gap,
        "J_tilde": t.J_tilde,
    }


def _status_of(certs: list[pt.EnclosureCertificate]) -> ch.Verdict:
    return ch.Verdict.combine([c.status for c in certs])


# -- commands ---------------------------------------------------------------------------------


class Context:
    def __init__(self, manifest: Manifest | None, tol: Tolerances):
        self.manifest = manifest
        self.tol = tol
        self._mats = manifest.matrices() if manifest is not None else {}

    @property
    def symmetry(self) -> FundamentalSymmetry:
        return FundamentalSymmetry(self._mats["J"], tol=self.tol)

    def operator(self, role: str = "A") -> KreinOperator:
        if role not in self._mats:
            raise UsageError(f"manifest has no {role!r} matrix")
        return KreinOperator(self._mats[role], self.symmetry)

    def has(self, role: str) -> bool:
        return role in self._mats


def cmd_check(args, ctx: Context):
    J = ctx.symmetry
    A = ctx._mats["A"]
    ok, res = is_selfadjoint(A, J, ctx.tol.struct)
    w = np.linalg.eigvals(A)
    sym = float(np.max(np.min(np.abs(w[:, None] - w.conj()[None, :]), axis=1))) if w.size else 0.0
    out = {
        "selfadjoint": ok,
        "residual": res,
        "threshold": ctx.tol.struct * (1.0 + float(np.linalg.norm(A, 2))),
        "conjugation_symmetry_residual": sym,
    }
    return (ch.Verdict.PASS if ok else ch.Verdict.FAIL), out


def _spectrum_rows(D) -> list[dict[str, Any]]:
    rows = []
    for (c, alg, geo), cl in zip(D.eigenvalues, D.classifications):
        rows.append(
            {
                "re": c.real,
                "im": c.imag,
                "algebraic": alg,
                "geometric": geo,
                "type": cl.sign.value,
                "gram_eigenvalues": cl.gram_eigenvalues,
            }
        )
    return rows


def cmd_classify(args, ctx: Context):
    A = ctx.operator().require_selfadjoint()
    D = decompose(A)
    rows = _spectrum_rows(D)
    if args.spectrum_csv:
        write_csv(args.spectrum_csv, ["re", "im", "type"], [(r["re"], r["im"], r["type"]) for r in rows])
    return ch.Verdict.PASS, {"eigenvalues": rows, "diagnostics": D.diagnostics(), "cluster_tol": D.cluster_tol}


def cmd_nonneg(args, ctx: Context):
    A = ctx.operator().require_selfadjoint()
    D = decompose(A)
    direct = ch.is_nonnegative_direct(A)
    v32 = ch.check_theorem_3_2(A, D)
    v34 = ch.check_theorem_3_4(A, D)
    verdict = v32.verdict
    if v32.agrees_with_direct is False or v34.agrees_with_direct is False:
        verdict = ch.Verdict.INDETERMINATE
    out = {"direct": _nonneg(direct), "theorem_3_2": _nonneg(v32), "theorem_3_4": _nonneg(v34)}
    return verdict, out


def cmd_similar(args, ctx: Context):
    A = ctx.operator().require_selfadjoint()
    try:
        s = ch.similarity_transform(A)
    except PreconditionError as exc:
        return ch.Verdict.FAIL, {"refused": True, "blocking": exc.blocking, "message": str(exc)}
    out = {
        "refused": False,
        "J_A": s.J_A,
        "min_eig_G": s.min_eig_G,
        "selfadjoint_residual": s.selfadjoint_residual,
        "involution_residual": s.involution_residual,
    }
    return ch.Verdict.PASS, out


def _parse_point(p: str):
    if p.lower() in ("inf", "infinity"):
        return INFINITY
    return float(p)


def cmd_growth(args, ctx: Context):
    A = ctx.operator().require_selfadjoint()
    D = decompose(A)
    points = args.point or ["0", "inf"]
    reports, verdicts = {}, []
    for p in points:
        x = _parse_point(p)
        g = growth_order_at(A, x, decades=args.decades, D=D)
        reports[str(p)] = _growth(g)
        verdicts.append({True: ch.Verdict.PASS, False: ch.Verdict.FAIL, None: ch.Verdict.INDETERMINATE}[g.order2_ok])
        if args.csv:
            path = Path(args.csv)
            if len(points) > 1:
                path = path.with_name(f"{path.stem}_{p}{path.suffix}")
            write_csv(path, ["y", "resolvent_norm"], [(l.imag, r) for l, r in g.samples])
    return ch.Verdict.combine(verdicts), {"growth": reports}


def cmd_tau(args, ctx: Context):
    A = ctx.operator().require_selfadjoint()
    t = pt.compute_tau(A)
    return (ch.Verdict.PASS if t.cross_ok else ch.Verdict.FAIL), {"tau": _tau(t)}


def cmd_perturb(args, ctx: Context):
    A = ctx.operator("A").require_selfadjoint()
    V = ctx.operator("V").require_selfadjoint()
    th = args.theorem
    out: dict[str, Any] = {"theorem": th}
    if th == "5.1":
        certs = [pt.theorem_5_1_region(A, V)]
        B = pt.split_blocks(V)
        out["block_norms"] = dict(zip(("V_plus", "V_minus", "V_zero"), B.norms))
    else:
        tau = pt.compute_tau(A)
        out["tau"] = _tau(tau)
        if th == "5.3":
            certs = [pt.theorem_5_3_region(A, V, tau)]
        else:
            bound = pt.fit_relative_bound(A, V, tau, [args.b])[0]
            out["relative_bound"] = asdict(bound)
            certs = pt.theorem_5_4_region(A, V, tau, bound, refined=(th == "5.4r") or False)
    out["certificates"] = [_certificate(c) for c in certs]
    if args.region_csv:
        if not isinstance(certs[-1].region, rg.Empty):
            rg.export_csv(certs[-1].region, args.region_csv, args.count)
    return _status_of(certs), out


def cmd_verify(args, ctx: Context):
    A = ctx.operator("A").require_selfadjoint()
    op = A + ctx.operator("V") if ctx.has("V") else A
    K = rg.parse_region(args.region)
    cert = pt.verify_enclosure(op, K, "given")
    return cert.status, {"operator": "A+V" if ctx.has("V") else "A", "certificate": _certificate(cert)}


def cmd_region(args, ctx: Context):
    K = rg.parse_region(args.spec)
    out: dict[str, Any] = {"region": _region(K)}
    if not isinstance(K, rg.Empty):
        out["diameter"] = K.diameter
        if args.export:
            rg.export_csv(K, args.export, args.count)
            out["export"] = {"path": str(args.export), "count": args.count}
    return ch.Verdict.PASS, out


def _parse_params(items: list[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def cmd_gen(args, ctx: Context):
    spec = inst.InstanceSpec(args.kind, args.seed, args.dim, _parse_params(args.param))
    I = inst.generate(spec)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    roles = {"J": "J.mtx", "A": "A.mtx"}
    write_matrix(outdir / "J.mtx", I.J)
    write_matrix(outdir / "A.mtx", I.A)
    if I.V is not None:
        write_matrix(outdir / "V.mtx", I.V)
        roles["V"] = "V.mtx"
    write_manifest(outdir / "manifest.json", roles, seeds=[args.seed], extra={"instance": spec.as_dict()})
    return ch.Verdict.PASS, {"instance": spec.as_dict(), "files": sorted(roles.values()) + ["manifest.json"]}


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "classify": cmd_classify,
    "nonneg": cmd_nonneg,
    "similar": cmd_similar,
    "growth": cmd_growth,
    "tau": cmd_tau,
    "perturb": cmd_perturb,
    "verify": cmd_verify,
    "region": cmd_region,
    "gen": cmd_gen,
}
NEEDS_MANIFEST = {"check", "classify", "nonneg", "similar", "growth", "tau", "perturb", "verify"}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kreintools", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"kreintools {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, manifest=True, out=True):
        if manifest:
            sp.add_argument("manifest", nargs="+", help="JSON manifest(s) naming J, A and optionally V")
            sp.add_argument("--jobs", type=int, default=1, help="parallel workers over several manifests")
        if out:
            sp.add_argument("--out", help="report path (default: standard output)")
        sp.add_argument("--tol", action="append", metavar="KEY=VALUE", help="tolerance override")
        sp.add_argument("--no-timing", action="store_true", help="omit wall time from the report")

    common(sub.add_parser("check", help="J-self-adjointness"))
    sp = sub.add_parser("classify", help="eigenvalues and sign types")
    common(sp)
    sp.add_argument("--spectrum-csv", help="write re,im,type rows")
    common(sub.add_parser("nonneg", help="direct test and both spectral characterizations"))
    common(sub.add_parser("similar", help="similarity to a Hilbert-space self-adjoint operator"))
    sp = sub.add_parser("growth", help="resolvent growth at real points and infinity")
    common(sp)
    sp.add_argument("--point", action="append", help="real point or 'inf' (repeatable; default 0 and inf)")
    sp.add_argument("--decades", type=int, default=3)
    sp.add_argument("--csv", help="write y,resolvent_norm samples")
    common(sub.add_parser("tau", help="norm of the induced fundamental symmetry"))
    sp = sub.add_parser("perturb", help="enclosure region for A+V and its verification")
    common(sp)
    sp.add_argument("--theorem", required=True, choices=["5.1", "5.3", "5.4", "5.4r"])
    sp.add_argument("--b", type=float, default=0.0, help="relative-bound coefficient b in [0, 1)")
    sp.add_argument("--region-csv", help="export the region boundary")
    sp.add_argument("--count", type=int, default=256)
    sp = sub.add_parser("verify", help="non-negativity over the complement of a given region")
    common(sp)
    sp.add_argument("--region", required=True, help="capsule:p,q,r | ballunion:gamma,c0,c1 | empty")
    sp = sub.add_parser("region", help="region geometry and boundary export")
    common(sp, manifest=False)
    sp.add_argument("spec", help="capsule:p,q,r | ballunion:gamma,c0,c1 | empty")
    sp.add_argument("--export", help="boundary CSV path")
    sp.add_argument("--count", type=int, default=256)
    sp = sub.add_parser("gen", help="write a generated instance")
    common(sp, manifest=False, out=False)
    sp.add_argument("--out", required=True, help="directory for J.mtx, A.mtx, V.mtx and manifest.json")
    sp.add_argument("--kind", required=True, choices=[k.value for k in inst.Kind])
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter (JSON value)")
    return p


def _cli_tolerances(items: list[str] | None) -> dict[str, float]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = float(v)
    return out


def _error(exc: BaseException) -> dict[str, Any]:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, PreconditionError):
        err["blocking"] = exc.blocking
    return err


def run_one(command: str, args, manifest_path: str | None) -> tuple[int, dict[str, Any]]:
    t0 = time.perf_counter()
    report: dict[str, Any] = {"schema": 1, "tool_version": __version__, "command": command}
    try:
        overrides = _cli_tolerances(args.tol)
        if manifest_path is not None:
            m = Manifest.load(manifest_path)
            tol = m.resolved_tolerances(overrides)
            report["inputs"] = {"manifest": str(manifest_path), "sha256": m.digests()}
            report["seeds"] = list(m.seeds)
        else:
            m = None
            tol = from_env(DEFAULT).merged(overrides)
        report["tolerances"] = tol.as_dict()
        ctx = Context(m, tol)
        verdict, results = COMMANDS[command](args, ctx)
        code = EXIT[verdict]
        report["verdict"] = verdict.value
        report["results"] = results
    except (KreinError, UsageError, ValueError, OSError, KeyError) as exc:
        code = INPUT_ERROR
        report["verdict"] = "error"
        report["error"] = _error(exc)
    report["exit_code"] = code
    if not args.no_timing:
        report["timing"] = {"wall_time_s": time.perf_counter() - t0}
    return code, report


def _manifest_output(path: str, command: str) -> Path | None:
    """Report path from the manifest's ``output`` directory, if it names one."""
    try:
        m = Manifest.load(path)
    except (OSError, ValueError):
        return None
    return None if m.output is None else m.output / f"{command}.json"


def _run_packed(packed):
    command, args, path = packed
    return run_one(command, args, path)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
    except UsageError as exc:
        sys.stdout.write(dumps_report({"schema": 1, "verdict": "error", "exit_code": INPUT_ERROR, "error": _error(exc)}))
        return INPUT_ERROR
    command = args.command
    if command in NEEDS_MANIFEST:
        paths = list(args.manifest)
        if len(paths) == 1:
            code, report = run_one(command, args, paths[0])
        else:
            jobs = max(1, args.jobs)
            packed = [(command, args, p) for p in paths]
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as ex:
                    results = list(ex.map(_run_packed, packed))
            else:
                results = [_run_packed(x) for x in packed]
            code = max(c for c, _ in results)
            report = {"schema": 1, "tool_version": __version__, "command": command, "batch": [r for _, r in results], "exit_code": code}
    else:
        code, report = run_one(command, args, None)
    text = dumps_report(report)
    out = None if command == "gen" else args.out
    if out is None and command in NEEDS_MANIFEST and len(args.manifest) == 1:
        out = _manifest_output(args.manifest[0], command)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
