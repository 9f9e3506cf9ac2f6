"""Command-line front end.

Every subcommand prints one RunReport as JSON (UTF-8, sorted keys) on stdout.
Exit codes: 0 all checks passed, 1 a check failed, 2 malformed input,
3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Sequence

from .errors import LinsiteError, TooLarge, Unstable, Unsupported, WindowOverflow
from .lincat import FinLinearCategory, validate
from .presheaf import Presheaf
from .pretop import Pretopology, is_sheaf_via, top_of
from .sheafify import is_separated, is_sheaf, sheafify_op
from .topology import Topology, axiom_check, enumerate_topologies

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable or malformed input file."""


class _Run:
    """Accumulates inputs, results and warnings for one report."""

    def __init__(self, command: str):
        self.command = command
        self.inputs: dict = {}
        self.results: dict = {}
        self.warnings: list = []
        self.failed = False

    def load(self, role: str, path: str) -> dict:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"{role}: cannot read {path}: {exc.strerror}") from exc
        self.inputs[role] = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"{role}: malformed JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise InputError(f"{role}: expected a JSON object")
        return doc

    def report(self, code: int) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
            "exitCode": code,
        }


def _category(run: _Run, path: str) -> FinLinearCategory:
    c = FinLinearCategory.from_json(run.load("category", path))
    rep = validate(c)
    if not rep.ok:
        raise InputError("category: " + "; ".join(rep.violations[:5]))
    return c


def _presheaf(run: _Run, c: FinLinearCategory, path: str) -> Presheaf:
    return Presheaf.from_json(c, run.load("presheaf", path))


def _topology(run: _Run, c: FinLinearCategory, path: str) -> Topology:
    return Topology.from_json(c, run.load("topology", path))


def _pretopology(run: _Run, c: FinLinearCategory, path: str, depth: int) -> Pretopology:
    s = Pretopology.from_json(c, run.load("pretopology", path))
    s.search_depth = depth
    return s


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(run: _Run, args) -> None:
    c = _category(run, args.category)
    run.results = {"objects": list(c.objects), "homDims": {f"{a}|{b}": c.hom_dim(a, b) for a in c.objects for b in c.objects}, "valid": True}


def cmd_top(run: _Run, args) -> None:
    c = _category(run, args.category)
    s = _pretopology(run, c, args.pretopology, args.depth)
    res = top_of(s)
    run.results = res.to_json()
    run.warnings.extend(res.warnings)


def cmd_sheafify(run: _Run, args) -> None:
    c = _category(run, args.category)
    t = _topology(run, c, args.topology)
    f = _presheaf(run, c, args.presheaf)
    res = sheafify_op(t, f)
    F = c.field
    run.results = {
        "sheaf": res.sheaf.to_json(),
        "unit": {a: [[F.scalar_to_json(x) for x in r] for r in res.unit.components[a]] for a in c.objects},
        "unitIsIso": res.unit.is_iso(),
    }


def cmd_check_sheaf(run: _Run, args) -> None:
    c = _category(run, args.category)
    f = _presheaf(run, c, args.presheaf)
    out = {}
    if args.topology:
        t = _topology(run, c, args.topology)
        out["isSheaf"] = is_sheaf(t, f)
        out["isSeparated"] = is_separated(t, f)
    if args.pretopology:
        s = _pretopology(run, c, args.pretopology, args.depth)
        out["isSheafVia"] = is_sheaf_via(s, f)
        if "isSheaf" not in out:
            res = top_of(s, check=False)
            out["isSheaf"] = is_sheaf(res.topology, f)
        if out["isSheafVia"] != out["isSheaf"]:
            run.failed = True
            run.warnings.append("sheaf predicate via the pretopology disagrees with the generated topology")
    if not out:
        raise InputError("check-sheaf needs --topology or --pretopology")
    run.results = out


def cmd_enumerate(run: _Run, args) -> None:
    c = _category(run, args.category)
    ts = enumerate_topologies(c, sieve_cap=args.max_sieves)
    bad = [k for k, t in enumerate(ts) if not axiom_check(t, sieve_cap=args.max_sieves).ok]
    run.failed = bool(bad)
    run.results = {"count": len(ts), "topologies": [t.to_json() for t in ts], "axiomFailures": bad}


def cmd_props(run: _Run, args) -> None:
    from .properties import topology_report

    c = _category(run, args.category)
    t = _topology(run, c, args.topology)
    rank_in = enumerate_topologies(c, sieve_cap=args.max_sieves) if args.rank and c.field.is_finite else None
    rep = topology_report(t, monoidal=args.monoidal, rank_in=rank_in)
    run.results = rep.to_json()
    if rep.monoidal is not None and rep.monoidal.clipped:
        run.warnings.append(f"monoidal check clipped {len(rep.monoidal.clipped)} pairs at the window boundary")
    if not rep.subcanonical.cross_check:
        run.failed = True
        run.warnings.append("subcanonical cross-check disagrees")


def cmd_proj_hom(run: _Run, args) -> None:
    from .monoidal import proj_hom

    res = proj_hom(args.n, args.d, window=args.window, max_stage=args.max_stage)
    run.results = res
    run.warnings.extend(res.get("warnings", []))


def cmd_verify(run: _Run, args) -> None:
    from .harness import HarnessConfig, run_suites, suite_names

    names = [args.suite] if args.suite == "all" else args.suite.split(",")
    unknown = [n for n in names if n != "all" and n not in suite_names()]
    if unknown:
        raise InputError(f"unknown suite(s) {unknown}; choose from {suite_names() + ['all']}")
    cfg = HarnessConfig(seed=args.seed, max_dim=args.max_dim, max_sieves=args.max_sieves, depth=args.depth, samples=args.samples)
    results = run_suites(names, cfg)
    run.results = {r.suite: r.to_json() for r in results}
    run.failed = not all(r.ok for r in results)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--max-dim", type=int, default=2, help="presheaf value dimension cap")
    common.add_argument("--max-sieves", type=int, default=10_000, help="sieve enumeration cap per object")
    common.add_argument("--depth", type=int, default=4, help="composite covering search depth")

    p = argparse.ArgumentParser(prog="linsite", description="Additive Grothendieck topologies on finite linear categories.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a category file")
    s.add_argument("category")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("top", parents=[common], help="topology generated by a pretopology")
    s.add_argument("--pretopology", required=True)
    s.add_argument("category")
    s.set_defaults(fn=cmd_top)

    s = sub.add_parser("sheafify", parents=[common], help="sheafify a presheaf")
    s.add_argument("--topology", required=True)
    s.add_argument("--presheaf", required=True)
    s.add_argument("category")
    s.set_defaults(fn=cmd_sheafify)

    s = sub.add_parser("check-sheaf", parents=[common], help="sheaf and separation predicates")
    s.add_argument("--topology")
    s.add_argument("--pretopology")
    s.add_argument("--presheaf", required=True)
    s.add_argument("category")
    s.set_defaults(fn=cmd_check_sheaf)

    s = sub.add_parser("enumerate-topologies", parents=[common], help="all topologies over a finite field")
    s.add_argument("category")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("props", parents=[common], help="subcanonical, bounded and monoidal properties")
    s.add_argument("--topology", required=True)
    s.add_argument("--monoidal", action="store_true", help="also run the monoidal check")
    s.add_argument("--rank", action="store_true", help="count enumerated topologies finer than the input")
    s.add_argument("category")
    s.set_defaults(fn=cmd_props)

    s = sub.add_parser("proj-hom", parents=[common], help="sheaf homs S<0> -> S<-d> on the graded window")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--window", type=int, default=10)
    s.add_argument("--max-stage", type=int, default=None)
    s.set_defaults(fn=cmd_proj_hom)

    s = sub.add_parser("verify", parents=[common], help="run verification suites on the bundled corpus")
    s.add_argument("--suite", required=True, help="suite name, comma-separated names, or 'all'")
    s.add_argument("--samples", type=int, default=100, help="sampled pairs per instance")
    s.set_defaults(fn=cmd_verify)
    return p


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=1)


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and print its report; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    run = _Run(args.command)
    try:
        args.fn(run, args)
        code = EXIT_CHECK if run.failed else EXIT_OK
    except InputError as exc:
        run.results, code = {"error": str(exc)}, EXIT_INPUT
    except (TooLarge, Unstable, WindowOverflow) as exc:
        run.results, code = {"error": f"{type(exc).__name__}: {exc}"}, EXIT_RESOURCE
    except Unsupported as exc:
        run.results, code = {"error": f"Unsupported: {exc}"}, EXIT_INPUT
    except LinsiteError as exc:
        run.results, code = {"error": f"{type(exc).__name__}: {exc}"}, EXIT_INPUT
    if code == EXIT_INPUT:
        print(f"linsite: {run.results['error']}", file=sys.stderr)
    sys.stdout.write(dumps(run.report(code)) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
