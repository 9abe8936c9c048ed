"""Command-line interface: ``nilmodels <command> ...``.

Inputs are JSON files in the algebra schema, ``-`` for stdin, or a registry
label such as ``L6_15`` or ``L6_8[a=-1]``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .algebra import AlgebraError, BadDimension, NotClosed, NotNilpotent, load_json, validate
from .classify import (
    ClassifyError,
    FAMILIES,
    REGISTRY,
    UnreachableSignature,
    canonical_model,
    classify,
    enumerate_classes,
    parse_label,
)
from .field import FieldError, FieldMode
from .oracle import invariance_trial, write_jsonl
from .symplectic import UnsupportedMode, decide_symplectic

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(ValueError):
    pass


@dataclass
class Report:
    command: list
    digest: str | None
    results: dict
    lines: list = dc_field(default_factory=list)

    def machine(self) -> str:
        doc = {"command": self.command, "input_digest": self.digest, "results": self.results}
        return json.dumps(doc, sort_keys=True, indent=2, default=str)

    def human(self) -> str:
        return "\n".join(self.lines)


def _fmt_tuple(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def _fmt_matrix(g, mode: FieldMode) -> list:
    return [[mode.format(x) for x in row] for row in g]


def _read(source: str, mode: str | None):
    """Return (algebra, digest)."""
    if source == "-":
        data = sys.stdin.buffer.read()
    else:
        path = Path(source)
        if not path.exists():
            try:
                label = parse_label(source, mode or "Q")
            except ClassifyError as exc:
                raise InputError(f"{source}: no such file or class label") from exc
            alg = canonical_model(label, mode or "Q")
            return alg, hashlib.sha256(source.encode()).hexdigest()
        data = path.read_bytes()
    try:
        doc = json.loads(data)
        alg = load_json(doc, mode)
    except (NotClosed, NotNilpotent):
        raise
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"cannot parse {source}: {exc}") from exc
    return validate(alg), hashlib.sha256(data).hexdigest()


def cmd_classify(args) -> Report:
    alg, digest = _read(args.file, args.field)
    res = classify(alg)
    mode = alg.mode
    lab = res.label
    results = {
        "label": str(lab),
        "name": lab.name,
        "parameter": None if lab.parameter is None else str(lab.parameter),
        "signature": list(lab.signature),
        "matrix": _fmt_matrix(res.matrix, mode),
        "target": res.target.rows(),
        "witness_complete": res.witness_complete,
    }
    lines = [f"{lab} {_fmt_tuple(lab.signature)}"]
    if not res.witness_complete:
        lines.append(f"matrix reaches the rational model {res.target.rows()} (irrational rescaling omitted)")
    lines += ["  " + " ".join(r) for r in results["matrix"]]
    return Report(args.argv, digest, results, lines)


def _table_rows(dim: int, mode: FieldMode):
    for lab in enumerate_classes(mode, dim):
        if lab.symbolic:
            # Invariants below do not depend on the parameter; -1 is a nonsquare over Q.
            alg = canonical_model(f"{lab.name}[a=-1]", mode)
            shown = _symbolic_rows(lab.name)
        else:
            alg = canonical_model(lab, mode)
            shown = alg.rows()
        yield lab, alg, shown


def _symbolic_rows(name: str) -> list:
    dim, _, rows = REGISTRY[name]
    return [rows.get(i, "") or "" for i in range(1, dim + 1)]


def cmd_tables(args) -> Report:
    mode = FieldMode.parse(args.field or "Q")
    if not 2 <= args.dim <= 6:
        raise InputError("--dim must be between 2 and 6")
    rows = []
    lines = []
    for lab, alg, shown in _table_rows(args.dim, mode):
        row = {"label": str(lab), "diffs": shown, "signature": list(alg.filtration.signature),
               "betti": list(alg.betti)}
        if alg.n % 2 == 0:
            try:
                row["symplectic"] = decide_symplectic(alg).symplectic
            except UnsupportedMode:
                row["symplectic"] = None
        rows.append(row)
        b = alg.betti
        sym = {True: "symplectic", False: "not symplectic", None: "-"}[row.get("symplectic")]
        diffs = ", ".join(f"d{i + 1}={d}" for i, d in enumerate(shown) if d and d != "0")
        lines.append(f"{str(lab):14s} {_fmt_tuple(alg.filtration.signature):12s} "
                     f"b={_fmt_tuple(b):24s} {sym:15s} {diffs}")
    lines.append(f"{len(rows)} classes in dimension {args.dim} over {mode}")
    return Report(args.argv, None, {"field": str(mode), "dim": args.dim, "count": len(rows), "rows": rows}, lines)


def cmd_homotopy(args) -> Report:
    a, da = _read(args.file_a, None)
    b, db = _read(args.file_b, None)
    mode = FieldMode.parse(args.field or "Q")
    for alg, src in ((a, args.file_a), (b, args.file_b)):
        if alg.mode.is_prime:
            raise InputError(f"{src}: homotopy comparison needs a rational model")
    if a.n != b.n:
        verdict, why = False, "dimension"
        la = lb = None
    else:
        la, lb = classify(a, mode).label, classify(b, mode).label
        verdict = la == lb
        if verdict:
            why = "label"
        elif la.signature != lb.signature:
            why = "signature"
        elif la.name != lb.name:
            why = "class"
        elif la.name in FAMILIES:
            why = "parameter square class"
        else:
            why = "class"
    digest = hashlib.sha256((da + db).encode()).hexdigest()
    results = {"equivalent": verdict, "field": str(mode), "decided_by": why,
               "labels": [str(la) if la else None, str(lb) if lb else None]}
    word = "equivalent" if verdict else "not equivalent"
    lines = [f"{word} over {mode} ({why}: {results['labels'][0]} vs {results['labels'][1]})"]
    return Report(args.argv, digest, results, lines)


def cmd_symplectic(args) -> Report:
    alg, digest = _read(args.file, args.field)
    if alg.n % 2:
        results = {"symplectic": False, "certificate": "odd-dimension"}
        return Report(args.argv, digest, results, ["not symplectic (odd dimension)"])
    v = decide_symplectic(alg)
    results = v.to_json(alg.field)
    line = f"symplectic: omega = {v.omega}" if v.symplectic else f"not symplectic ({v.certificate})"
    return Report(args.argv, digest, results, [line])


def cmd_betti(args) -> Report:
    alg, digest = _read(args.file, args.field)
    b = alg.betti
    return Report(args.argv, digest, {"betti": list(b), "total": sum(b)}, [f"{_fmt_tuple(b)} total {sum(b)}"])


def cmd_fuzz(args) -> Report:
    mode = FieldMode.parse(args.field or "Q")
    rng = random.Random(args.seed)
    pool = []
    for dim in range(2, 7):
        for lab in enumerate_classes("R" if not mode.is_prime else mode, dim):
            pool.append(canonical_model(lab, mode if mode.is_prime else "Q").with_mode(mode))
    log = []
    for t in range(args.trials):
        alg = rng.choice(pool)
        rec = invariance_trial(alg, rng.randrange(2**32), str(classify(alg, mode).label))
        log.append({"trial": t, **rec})
    passed = sum(r["ok"] for r in log)
    failed = len(log) - passed
    unreachable = sum(r["unreachable"] for r in log)
    if args.log:
        with open(args.log, "w") as fh:
            write_jsonl(log, fh)
    results = {"trials": args.trials, "seed": args.seed, "field": str(mode), "passed": passed,
               "failed": failed, "unreachable": unreachable}
    lines = [f"fuzz over {mode}: {passed}/{args.trials} passed, {failed} failed, {unreachable} unreachable"]
    lines += [f"  FAIL trial {r['trial']}: {r['expected']} -> {r['got']}" for r in log if not r["ok"]]
    return Report(args.argv, None, results, lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q, R, C or F<p> (default: the input's own field)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="nilmodels", description="Minimal models of nilmanifolds up to dimension 6.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="canonical label and change of basis")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("tables", parents=[common], help="list every class in a dimension")
    s.add_argument("--dim", type=int, default=6)
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("homotopy", parents=[common], help="compare two rational models over a field")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.set_defaults(func=cmd_homotopy)

    s = sub.add_parser("symplectic", parents=[common], help="symplectic form or certificate of none")
    s.add_argument("file")
    s.set_defaults(func=cmd_symplectic)

    s = sub.add_parser("betti", parents=[common], help="Betti numbers")
    s.add_argument("file")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("fuzz", parents=[common], help="scramble-classify invariance trials")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--log", help="write per-trial JSONL here")
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        report = args.func(args)
    except (NotClosed, NotNilpotent) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnreachableSignature as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, AlgebraError, BadDimension, ClassifyError, FieldError, UnsupportedMode) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(report.machine() if args.json else report.human())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
