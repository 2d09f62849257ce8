"""``qel`` command line: verify inequalities, generate objects, run the suite.

Exit codes: 0 when everything holds, 1 when an inequality (or acceptance
criterion) is violated, 2 on bad input or invocation.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import holevo, io, sampling, suite, verifiers
from .batch import run_trials, thread_count
from .channels import random_channel, random_ensemble, random_povm
from .equality import make_markov_state, make_product_split_state, random_markov_distribution
from .errors import QelError
from .tensor import MultipartiteState

log = logging.getLogger("qel")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
LN2 = math.log(2.0)


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"dimensions must be positive, got '{text}'")
    return values


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _in_bits(report: dict) -> dict:
    """Convert the entropic fields of a serialized report from nats to bits."""
    out = dict(report)
    for key in ("lhs", "rhs", "gap"):
        if isinstance(out.get(key), float):
            out[key] = out[key] / LN2
    out.setdefault("meta", {})
    out["meta"] = dict(out["meta"], units="bits")
    return out


# verify ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    check = verifiers.CHECKS[args.check]
    log.debug("verify %s with %d input file(s)", check.name, len(args.inputs))
    if args.inputs:
        inputs = verifiers.load_inputs(check, args.inputs)
        runs = [(0, inputs)]
    else:
        if args.gen not in check.modes:
            raise UsageError(f"check '{check.name}' supports --gen {', '.join(check.modes)}")
        cfg = verifiers.GenConfig(args.gen, args.dims, args.dim)
        runs = run_trials(lambda g, i: (i, check.generate(g, cfg)), args.trials, args.seed)

    def one(item):
        i, inputs = item
        report = check.run(inputs, args.tol)
        entry = report.to_json()
        if args.bits and check.name in verifiers.ENTROPIC:
            entry = _in_bits(entry)
        entry["trial"] = i
        if args.eq_tol is not None:
            entry["equality"] = math.isfinite(report.gap) and abs(report.gap) <= args.eq_tol
        if not report.holds:
            entry["inputs"] = verifiers.dump_inputs(check, inputs)
        return report, entry

    results = [one(item) for item in runs]
    violations = sum(1 for r, _ in results if not r.holds)
    gaps = [r.gap for r, _ in results]
    finite = [g for g in gaps if math.isfinite(g)]
    doc = {
        "command": "verify",
        "check": check.name,
        "config": {
            "gen": None if args.inputs else args.gen,
            "inputs": list(args.inputs),
            "dims": list(args.dims) if args.dims else None,
            "dim": args.dim, "seed": args.seed,
            "trials": len(results), "tol": args.tol, "eq_tol": args.eq_tol,
            "units": "bits" if args.bits else "nats",
        },
        "summary": {
            "trials": len(results),
            "violations": violations,
            "min_gap": min(finite) if finite else None,
            "max_gap": max(finite) if finite else None,
        },
        "gaps": gaps,
        "trials": [e for _, e in results],
        "timestamp": _timestamp(),
    }
    if args.format == "json":
        _write(io.dumps(doc), args.output)
    else:
        lines = [
            f"{check.name} trial {e['trial']}: {'holds' if e['holds'] else 'VIOLATED'} "
            f"gap={_fmt(e['gap'])} lhs={_fmt(e['lhs'])} rhs={_fmt(e['rhs'])}"
            for _, e in results
        ]
        s = doc["summary"]
        lines.append(f"{check.name}: {s['trials']} trial(s), {violations} violation(s), "
                     f"min gap {_fmt(s['min_gap'])}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_VIOLATION if violations else EXIT_OK


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


# gen -------------------------------------------------------------------------


def _need_dims(args, n: int | None, default):
    dims = args.dims or default
    if n is not None and len(dims) != n:
        raise UsageError(f"--dims needs {n} values, got {list(dims)}")
    return tuple(dims)


def cmd_gen(args) -> int:
    g = sampling.rng(args.seed)
    kind = args.kind
    if kind == "state":
        dims = _need_dims(args, None, (args.dim or 2,))
        doc = io.state_to_json(MultipartiteState(sampling.random_density(int(np.prod(dims)), g), dims))
    elif kind == "markov":
        dims = _need_dims(args, 3, (2, 2, 2))
        doc = io.state_to_json(make_markov_state(random_markov_distribution(dims, g)))
    elif kind == "product-split":
        d1, d2a, d2b, d3 = _need_dims(args, 4, (2, 2, 2, 2))
        a = MultipartiteState(sampling.random_density(d1 * d2a, g), (d1, d2a))
        b = MultipartiteState(sampling.random_density(d2b * d3, g), (d2b, d3))
        doc = io.state_to_json(make_product_split_state(a, b))
    elif kind == "channel":
        d = args.dim or 2
        out = args.out_dim or d
        m = args.kraus or 2
        doc = io.channel_to_json(random_channel(d, out, m, g))
    elif kind == "povm":
        doc = io.povm_to_json(random_povm(args.dim or 2, args.outcomes or 2, g))
    else:
        doc = io.ensemble_to_json(random_ensemble(args.dim or 2, args.n or 2, g))
    _write(io.dumps(doc), args.output)
    return EXIT_OK


# holevo ----------------------------------------------------------------------


def cmd_holevo(args) -> int:
    if args.inputs:
        if len(args.inputs) != 2:
            raise UsageError("holevo takes an ensemble file and a POVM file")
        E = io.ensemble_from_json(io.load(args.inputs[0]))
        M = io.povm_from_json(io.load(args.inputs[1]))
    else:
        g = sampling.rng(args.seed)
        d = args.dim or 2
        E = random_ensemble(d, args.n or 2, g)
        M = random_povm(d, args.outcomes or 2, g)
    info = holevo.info_report(E, M, holevo.HOLEVO_TOL if args.tol is None else args.tol)
    doc = info.to_json()
    ok, norm = holevo.commutes(E)
    doc["commuting"] = {"commutes": ok, "max_commutator": norm}
    doc["qc_monotonicity"] = holevo.qc_monotonicity_check(E, M).to_json()
    if args.bits:
        for key in ("accessible_info", "chi", "hall_bound"):
            doc[key] = doc[key] / LN2
        doc["gaps"] = {k: v / LN2 for k, v in doc["gaps"].items()}
        doc["units"] = "bits"
    doc["timestamp"] = _timestamp()
    if args.format == "json":
        _write(io.dumps(doc), args.output)
    else:
        unit = "bits" if args.bits else "nats"
        _write(
            f"accessible information  {doc['accessible_info']:.10f} {unit}\n"
            f"Holevo chi              {doc['chi']:.10f} {unit}\n"
            f"Hall bound              {doc['hall_bound']:.10f} {unit}\n"
            f"bounds hold: {info.holds}\n",
            args.output,
        )
    return EXIT_OK if info.holds else EXIT_VIOLATION


# suite / report --------------------------------------------------------------


def cmd_suite(args) -> int:
    threads = thread_count()
    try:
        results = suite.run_suite(suite.SuiteConfig(args.seed, args.tol, threads), args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for r in results:
        print(r.line())
    ledger = {
        "command": "suite",
        "config": {"seed": args.seed, "tol": args.tol, "only": args.only, "threads": threads},
        "criteria": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
        "timestamp": _timestamp(),
    }
    if args.output:
        Path(args.output).write_text(io.dumps(ledger))
    elif args.format == "json":
        sys.stdout.write(io.dumps(ledger))
    return EXIT_OK if ledger["passed"] else EXIT_VIOLATION


def cmd_report(args) -> int:
    """Summarize a JSON report written by ``verify``, ``holevo`` or ``suite``."""
    doc = io.load(args.report)
    if not isinstance(doc, dict):
        raise UsageError("not a qel report")
    lines = []
    if doc.get("command") == "suite":
        for c in doc["criteria"]:
            lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['criterion']:>2}. {c['title']}")
        ok = doc["passed"]
    elif doc.get("command") == "verify":
        s = doc["summary"]
        lines.append(f"{doc['check']}: {s['trials']} trial(s), {s['violations']} violation(s), "
                     f"min gap {_fmt(s['min_gap'])}")
        for t in doc["trials"]:
            if not t["holds"]:
                lines.append(f"  trial {t['trial']}: gap {_fmt(t['gap'])}")
        ok = s["violations"] == 0
    elif "accessible_info" in doc:
        lines.append(f"I={doc['accessible_info']} chi={doc['chi']} hall={doc['hall_bound']}")
        ok = doc["holds"]
    else:
        raise UsageError("unrecognized report layout")
    if args.format == "json":
        stripped = {k: v for k, v in doc.items() if k != "timestamp"}
        sys.stdout.write(io.dumps(stripped))
    else:
        print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATION


# parser ----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dims", type=_int_list, help="comma-separated subsystem dimensions")
    p.add_argument("--dim", type=_positive_int, help="Hilbert space dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qel", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check an inequality on given or generated inputs")
    p.add_argument("check", choices=sorted(verifiers.CHECKS))
    p.add_argument("inputs", nargs="*", help="JSON input files, in the order the check expects")
    p.add_argument("--gen", choices=("random", "markov", "product-split"), default="random")
    p.add_argument("--trials", type=_positive_int, default=1)
    p.add_argument("--tol", type=float, help="violation tolerance (default scales with dimension)")
    p.add_argument("--eq-tol", type=float, help="classify |gap| <= EQ_TOL as equality")
    p.add_argument("--bits", action="store_true", help="report entropies in bits")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random or constructed object")
    p.add_argument("kind", choices=("state", "markov", "product-split", "channel", "povm", "ensemble"))
    p.add_argument("--outcomes", type=_positive_int, help="POVM outcomes")
    p.add_argument("--n", type=_positive_int, help="ensemble size")
    p.add_argument("--kraus", type=_positive_int, help="number of Kraus operators")
    p.add_argument("--out-dim", type=_positive_int, help="channel output dimension")
    _common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("holevo", help="accessible information, chi and Hall's bound")
    p.add_argument("inputs", nargs="*", help="ensemble JSON and POVM JSON")
    p.add_argument("--outcomes", type=_positive_int)
    p.add_argument("--n", type=_positive_int, help="ensemble size")
    p.add_argument("--tol", type=float)
    p.add_argument("--bits", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("suite", help="run the acceptance criteria")
    p.add_argument("--only", action="append", help="criterion number or group (repeatable)")
    p.add_argument("--tol", type=float, help="replace every violation tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("-o", "--output", help="write the JSON ledger here")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("report", help="summarize a saved JSON report")
    p.add_argument("report")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except (QelError, UsageError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"qel: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
