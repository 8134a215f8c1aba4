"""Command-line front end.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from sympy import isprime

from .cohomology import (
    derbar_lattice,
    graded_commutativity,
    h0_algebra,
    h0_stable,
    h1_free_rank_rule,
    h1_group,
    innbar_lattice,
)
from .errors import ConditionViolation, LambdaRingError, WindowError
from .reproduce import TARGETS, reproduce
from .structures import DEFAULT_WINDOW, AdamsSpec, spec_from_document, verify_wilkerson
from .truncpoly import EndoMatrix

SCHEMA = 1
INT64_MAX = 2**63 - 1


class InputError(Exception):
    """Malformed command-line input; maps to exit status 2."""


# ----------------------------------------------------------------------------
# report assembly and rendering


def encode(obj: Any) -> Any:
    """JSON-ready copy with matrices as nested lists and big integers as decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > INT64_MAX else obj
    if isinstance(obj, EndoMatrix):
        return encode(obj.rows())
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return str(obj)


def make_report(command: str, spec: Optional[dict], primes, results: dict, checks: list, provenance: dict) -> dict:
    return encode({
        "schema": SCHEMA,
        "command": command,
        "spec": spec,
        "primes": list(primes),
        "results": results,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "provenance": provenance,
    })


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_matrix(rows: Sequence[Sequence[Any]]) -> str:
    """Fixed-width matrix with zero entries left blank."""
    cells = [[("" if str(v) in ("0", "") else str(v)) for v in r] for r in rows]
    width = max((len(c) for r in cells for c in r), default=1) or 1
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)


def _is_matrix(v: Any) -> bool:
    return (
        isinstance(v, list)
        and v
        and all(isinstance(r, list) and len(r) == len(v) for r in v)
        and all(not isinstance(x, (list, dict)) for r in v for x in r)
    )


def _md_value(key: str, value: Any, out: list[str], depth: int = 0) -> None:
    pad = "  " * depth
    if _is_matrix(value):
        out.append(f"{pad}- {key}:")
        out.append("")
        out.append("```")
        out.append(render_matrix(value))
        out.append("```")
        out.append("")
    elif isinstance(value, list) and value and all(_is_matrix(m) for m in value):
        out.append(f"{pad}- {key}:")
        out.append("")
        out.append("```")
        out.append("\n\n".join(render_matrix(m) for m in value))
        out.append("```")
        out.append("")
    elif isinstance(value, dict):
        out.append(f"{pad}- {key}:")
        for k in sorted(value):
            _md_value(k, value[k], out, depth + 1)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        out.append(f"{pad}- {key}:")
        for i, v in enumerate(value):
            _md_value(str(i), v, out, depth + 1)
    else:
        out.append(f"{pad}- {key}: {json.dumps(value)}")


def to_markdown(report: dict) -> str:
    out = [f"# {report['command']}", ""]
    if report.get("spec"):
        out.append(f"- spec: `{json.dumps(report['spec'], sort_keys=True)}`")
    out.append(f"- primes: {', '.join(str(p) for p in report['primes'])}")
    out.append(f"- passed: {'yes' if report['passed'] else 'no'}")
    out.append("")
    if report["checks"]:
        out += ["## Checks", "", "| check | result | witness |", "|---|---|---|"]
        for c in report["checks"]:
            out.append(f"| {c['name']} | {'pass' if c['passed'] else 'FAIL'} | {c['witness']} |")
        out.append("")
    out += ["## Results", ""]
    for k in sorted(report["results"]):
        _md_value(k, report["results"][k], out)
    out += ["", "## Provenance", ""]
    for k in sorted(report["provenance"]):
        _md_value(k, report["provenance"][k], out)
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# commands


def _load(path: str, strict: bool = True) -> tuple[dict, AdamsSpec]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return doc, spec_from_document(doc, strict=strict)
    except ConditionViolation:
        raise
    except (KeyError, TypeError, ValueError, SyntaxError) as exc:
        raise InputError(f"malformed ring spec in {path}: {exc!r}") from exc


def _primes(args, spec: Optional[AdamsSpec]) -> tuple[int, ...]:
    if args.primes is not None:
        return args.primes
    return tuple(spec.default_primes) if spec is not None else DEFAULT_WINDOW


def _check(name: str, passed: bool, witness: str = "") -> dict:
    return {"name": name, "passed": bool(passed), "witness": witness}


def cmd_ring_build(args) -> dict:
    try:
        doc, spec = _load(args.spec, strict=False)
    except ConditionViolation as exc:
        with open(args.spec, encoding="utf-8") as fh:
            doc = json.load(fh)
        chk = [_check(f"condition: {exc.condition}", False, str(exc))]
        return make_report("ring build", doc, args.primes or DEFAULT_WINDOW, {}, chk, {"result": "construction"})
    primes = _primes(args, spec)
    checks = [_check(f"condition: {v.condition}", False, str(v)) for v in spec.violations]
    if not checks:
        checks.append(_check("family conditions", True))
    psi = {}
    for p in primes:
        try:
            psi[str(p)] = list(spec.psi_gen(p).coeffs)
        except LambdaRingError as exc:
            checks.append(_check(f"psi^{p} defined", False, str(exc)))
    results = {"label": spec.label, "n": spec.n, "family": spec.family, "meta": dict(spec.meta), "psi": psi}
    prov = {"result": "construction and family conditions", "G_stable": spec.meta.get("G_stable")}
    return make_report("ring build", doc, primes, results, checks, prov)


def cmd_ring_verify(args) -> dict:
    doc, spec = _load(args.spec, strict=False)
    primes = _primes(args, spec)
    rep = verify_wilkerson(spec, primes, composite_bound=args.lambda_depth)
    checks = [_check(c.name, c.passed, c.witness) for c in rep.checks]
    results = {"label": spec.label, "overall": rep.overall}
    prov = {"result": "Adams-operation axioms, Newton integrality and lambda axioms", "lambda_depth": args.lambda_depth}
    return make_report("ring verify", doc, primes, results, checks, prov)


def cmd_coh_h0(args) -> dict:
    doc, spec = _load(args.spec)
    primes = _primes(args, spec)
    checks = []
    results: dict[str, Any] = {"label": spec.label}
    try:
        alg = h0_algebra(spec, primes)
        checks.append(_check("closed under composition", True))
        results.update(
            rank=alg.rank,
            basis=list(alg.basis),
            table=[[list(c) for c in row] for row in alg.table],
            unit=list(alg.unit),
            commutative=alg.commutative,
        )
    except LambdaRingError as exc:
        checks.append(_check("closed under composition", False, str(exc)))
    stable = h0_stable(spec, primes)
    warnings = []
    if stable is None:
        warnings.append("window cannot be extended for a table spec; H^0 may be over-counted")
    elif not stable:
        warnings.append("H^0 changes when the window grows by three primes")
    results["stable"] = stable
    prov = {"result": "H^0 as the centralizer of the Adams operations in Endbar", "stable": stable, "warnings": warnings}
    return make_report("coh h0", doc, primes, results, checks, prov)


def cmd_coh_h1(args) -> dict:
    doc, spec = _load(args.spec)
    primes = _primes(args, spec)
    checks = []
    results: dict[str, Any] = {"label": spec.label}
    try:
        h1 = h1_group(spec, primes)
        checks.append(_check("coboundaries are cocycles", True))
        rule = h1_free_rank_rule(spec, primes)
        results.update(
            invariants=str(h1),
            torsion=list(h1.torsion),
            free_rank=h1.free_rank,
            free_rank_rule=str(rule) if rule else None,
            cocycle_rank=derbar_lattice(spec, primes).rank,
            coboundary_rank=innbar_lattice(spec, primes).rank,
        )
    except LambdaRingError as exc:
        checks.append(_check("coboundaries are cocycles", False, str(exc)))
    prov = {"result": "H^1 as cocycles modulo coboundaries over the prime window"}
    return make_report("coh h1", doc, primes, results, checks, prov)


def cmd_coh_product(args) -> dict:
    doc, spec = _load(args.spec)
    primes = _primes(args, spec)
    res = graded_commutativity(spec, primes)
    results: dict[str, Any] = {
        "label": spec.label,
        "commutative": res.commutative,
        "h0_commutative": res.h0_commutative,
    }
    if not res.commutative and res.witness_g is not None:
        results["witness"] = {
            "g": res.witness_g,
            "f": {str(p): m for p, m in res.witness_f.f.items()},
            "class_order": res.witness_class.order,
            "closed_form": res.explicit,
        }
    prov = {"result": "graded commutativity of H^0 + H^1 under composition"}
    return make_report("coh product", doc, primes, results, [], prov)


def cmd_reproduce(args) -> dict:
    primes = args.primes or DEFAULT_WINDOW
    rep = reproduce(args.target, primes)
    results = {"target": rep.target, "claim": rep.claim, **rep.results}
    prov = {"result": rep.claim, "target": rep.target}
    return make_report(f"reproduce {rep.target}", None, primes, results, rep.checks, prov)


# ----------------------------------------------------------------------------
# argument parsing


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid prime list {text!r}") from None
    if not primes or not all(isprime(p) for p in primes):
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of primes")
    if len(set(primes)) != len(primes):
        raise argparse.ArgumentTypeError(f"{text!r} repeats a prime")
    return primes


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--markdown", dest="format", action="store_const", const="markdown", help="Markdown report")
    common.add_argument("--primes", type=parse_primes, default=None, help="prime window, e.g. 2,3,5,7")

    parser = argparse.ArgumentParser(
        prog="truncated-lambda",
        description="Filtered lambda-ring structures on Z[x]/(x^n) and their low-degree cohomology.",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    ring = sub.add_parser("ring", help="construct and verify structures").add_subparsers(dest="action", required=True)
    p = ring.add_parser("build", parents=[common], help="construct a spec and check its family conditions")
    p.add_argument("spec")
    p.set_defaults(func=cmd_ring_build)
    p = ring.add_parser("verify", parents=[common], help="Adams axioms, Newton integrality, lambda axioms")
    p.add_argument("spec")
    p.add_argument("--lambda-depth", type=int, default=6)
    p.set_defaults(func=cmd_ring_verify)

    coh = sub.add_parser("coh", help="cohomology computations").add_subparsers(dest="action", required=True)
    for name, func, text in (
        ("h0", cmd_coh_h0, "basis, rank and multiplication table of H^0"),
        ("h1", cmd_coh_h1, "invariant factors and free rank of H^1"),
        ("product", cmd_coh_product, "graded commutativity with a witness"),
    ):
        p = coh.add_parser(name, parents=[common], help=text)
        p.add_argument("spec")
        p.set_defaults(func=func)

    p = sub.add_parser("reproduce", parents=[common], help="golden reproduction targets")
    p.add_argument("target", choices=sorted(TARGETS))
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (ConditionViolation, WindowError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    stdout.write(to_markdown(report) if args.format == "markdown" else to_json(report))
    return 0 if report["passed"] else 1


def main() -> None:
    sys.exit(run())
