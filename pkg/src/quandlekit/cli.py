"""Command-line interface: ``quandlekit <command> ...`` (also ``python -m quandlekit``).

Exit codes: 0 success, 1 a domain check failed, 2 usage, parse or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import __version__
from .algebra import (FiniteAbelianGroup, GroupRingElement, Quandle, QuandleError, are_isomorphic,
                      check_quandle, conjugation_quandle, make_quandle, parse_quandle, quaternion_group,
                      subquandle)
from .chains import ChainComplexError, Cochain, cohomology, delta, homology, parse_sparse, xi_cocycle
from .diagram import BraidWord, Diagram, DiagramError, braid_closure, build_diagram, family, parse_pd
from .extensions import (ExtensionError, extend, lift_projection, lift_quandle, obstruction_cocycle,
                         obstruction_witness, parse_section, parse_ses)
from .invariants import InvariantError, cocycle_invariant, colorings, shadow_invariant

log = logging.getLogger("quandlekit")

DOMAIN, USAGE = 1, 2


class UsageError(Exception):
    pass


# -- inputs ------------------------------------------------------------------------

def resolve(path: str) -> Path:
    """A file path, falling back to the bundled fixtures for bare names like ``r3.qnd``."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("quandlekit") / "data" / path
    if bundled.is_file():
        return Path(str(bundled))
    raise UsageError(f"no such file: {path}")


def read_text(path: str) -> str:
    try:
        return resolve(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def load_quandle(path: str) -> Quandle:
    return parse_quandle(read_text(path))


def load_cochain(ref: str, X: Quandle) -> Cochain:
    if ref == "xi":
        xi = xi_cocycle()
        if xi.quandle.table != X.table:
            raise UsageError("the built-in xi is a cocycle of the dihedral quandle of order 3")
        return xi
    c = parse_sparse(read_text(ref), X)
    if not isinstance(c, Cochain):
        raise UsageError(f"{ref} holds a chain, expected a cochain")
    return c


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit(args, text: str, record: dict, csv_rows: list[list] | None = None) -> None:
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    elif args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


# -- quandle ------------------------------------------------------------------------

def _make(kind: str, params: list[str]) -> Quandle:
    if kind in ("trivial", "dihedral"):
        return make_quandle(kind, int(params[0]))
    if kind == "alexander":
        return make_quandle(kind, int(params[0]), [int(v) for v in params[1].split(",")])
    if kind in ("quaternion", "q6"):
        table, names = quaternion_group()
        Q8 = conjugation_quandle(table)
        if kind == "quaternion":
            return Q8
        return subquandle(Q8, [names.index(x) for x in ("i", "-i", "j", "-j", "k", "-k")], "Q6")
    raise UsageError(f"unknown quandle kind {kind!r}")


def cmd_quandle(args) -> int:
    if args.action == "make":
        try:
            X = _make(args.kind, args.params)
        except (IndexError, ValueError) as exc:
            raise UsageError(f"bad parameters for {args.kind}: {exc}") from exc
        if args.output:
            write_atomic(Path(args.output), X.to_text())
        emit(args, X.to_text().rstrip(), {"order": len(X), "table": [list(r) for r in X.table]})
        return 0
    if args.action == "check":
        X = parse_quandle(read_text(args.files[0]), unchecked=True)
        report = check_quandle(X.table)
        emit(args, str(report), {"valid": report.valid, "axioms": report.axioms,
                                 "witnesses": {k: list(v) for k, v in report.witnesses.items()}})
        return 0 if report.valid else DOMAIN
    if args.action == "iso":
        if len(args.files) != 2:
            raise UsageError("iso needs two quandle files")
        X, Y = (load_quandle(f) for f in args.files)
        f = are_isomorphic(X, Y)
        if f is None:
            emit(args, "not isomorphic", {"isomorphic": False})
            return DOMAIN
        text = "isomorphic\n" + "\n".join(f"{a} -> {b}" for a, b in enumerate(f.map))
        emit(args, text, {"isomorphic": True, "map": list(f.map)})
        return 0
    raise UsageError(f"unknown action {args.action}")


# -- homology -------------------------------------------------------------------------

def cmd_homology(args) -> int:
    X = load_quandle(args.quandle)
    coeff = args.coeff.upper()
    if coeff != "Z" and not coeff.lstrip("Z_").isdigit():
        raise UsageError(f"coefficients must be Z or Z<m>, got {args.coeff}")
    fn = cohomology if args.cohomology else homology
    H = fn(X, args.theory, args.degree, coeff)
    record = {"theory": args.theory, "degree": args.degree, "coeff": coeff,
              "cohomology": args.cohomology, "rank": H.rank, "torsion": list(H.torsion),
              "group": str(H)}
    emit(args, str(H), record, [["group"], [str(H)]])
    return 0


# -- invariants -------------------------------------------------------------------------

def diagram_from_args(args) -> tuple[str, Diagram]:
    sources = [x for x in (args.pd, args.braid, args.family) if x is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --pd, --braid, --family")
    if args.pd is not None:
        text = read_text(args.pd[1:]) if args.pd.startswith("@") else args.pd
        name, D = "pd", build_diagram(parse_pd(text))
    elif args.braid is not None:
        w = BraidWord.parse(args.braid, args.strands)
        name, D = f"braid:{w}", braid_closure(w)
    else:
        name, D = args.family, family(args.family)
    if args.mirror:
        D = D.mirror()
    return name, D


@dataclass(frozen=True)
class InvariantJob:
    name: str
    pd: str
    quandle: tuple
    cocycle: str
    shadow: bool
    mirror: bool

    def digest(self) -> str:
        payload = json.dumps([self.pd, self.quandle, self.cocycle, self.shadow, self.mirror, __version__])
        return hashlib.sha256(payload.encode()).hexdigest()


def value_record(v: GroupRingElement) -> list[dict]:
    return [{"exp": g[0] if len(g) == 1 else list(g), "coeff": c} for g, c in v.terms()]


def value_from_record(terms: list[dict], m: int) -> GroupRingElement:
    A = FiniteAbelianGroup((m,))
    return GroupRingElement(A, {(t["exp"],) if isinstance(t["exp"], int) else tuple(t["exp"]): t["coeff"]
                                for t in terms})


def evaluate(D: Diagram, X: Quandle, c: Cochain, shadow: bool) -> tuple[GroupRingElement, int]:
    if shadow and c.degree != 3:
        raise UsageError("--shadow needs a 3-cocycle")
    if not shadow and c.degree != 2:
        raise UsageError("without --shadow the cocycle must have degree 2")
    value = shadow_invariant(D, X, c) if shadow else cocycle_invariant(D, X, c)
    return value, len(colorings(D, X))


def invariant_record(name, X_label, cocycle_ref, shadow, mirror, value, n_colorings, modulus):
    return {"name": name, "quandle": X_label, "cocycle": cocycle_ref, "shadow": shadow,
            "mirror": mirror, "modulus": modulus, "value": value_record(value),
            "colorings": n_colorings}


def render_record(record: dict) -> str:
    """Text form of an invariant record; the JSON output round-trips through this."""
    return str(value_from_record(record["value"], record["modulus"]))


def cmd_invariant(args) -> int:
    X = load_quandle(args.quandle)
    c = load_cochain(args.cocycle, X)
    name, D = diagram_from_args(args)
    value, n = evaluate(D, X, c, args.shadow)
    record = invariant_record(name, args.quandle, args.cocycle, args.shadow, args.mirror,
                              value, n, c.modulus)
    emit(args, str(value), record, [["name", "value", "colorings"], [name, str(value), n]])
    return 0


# -- knot tables ----------------------------------------------------------------------

def cache_dir(args) -> Path:
    if args.cache_dir:
        return Path(args.cache_dir)
    return Path(os.environ.get("CACHE_DIR", ".quandlekit-cache"))


def _run_job(job: InvariantJob) -> dict:
    X = Quandle(job.quandle)
    try:
        D = build_diagram(parse_pd(job.pd))
        if job.mirror:
            D = D.mirror()
        c = xi_cocycle() if job.cocycle == "xi" else parse_sparse(job.cocycle, X)
        value, n = evaluate(D, X, c, job.shadow)
    except (DiagramError, ChainComplexError, InvariantError, UsageError) as exc:
        return {"name": job.name, "error": str(exc)}
    return {"name": job.name, "value": value_record(value), "modulus": c.modulus,
            "colorings": n, "error": ""}


def cmd_table(args) -> int:
    X = load_quandle(args.quandle)
    cocycle_text = "xi" if args.cocycle == "xi" else read_text(args.cocycle)
    load_cochain(args.cocycle, X)  # fail early on an unusable cocycle
    try:
        with resolve(args.input).open(newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    if rows and not {"name", "pd"} <= set(rows[0]):
        raise UsageError("table needs a header 'name,pd'")
    jobs = [InvariantJob(r["name"], r["pd"], X.table, cocycle_text, args.shadow, args.mirror)
            for r in rows]
    cdir = cache_dir(args)
    results: list[dict | None] = []
    hits = 0
    for job in jobs:
        path = cdir / f"{job.digest()}.json"
        if path.exists():
            try:
                record = json.loads(path.read_text())
                results.append(dict(record["payload"], name=job.name))
                hits += 1
                continue
            except (OSError, ValueError, KeyError):
                log.warning("ignoring unreadable cache record %s", path)
        results.append(None)
    todo = [j for j, r in zip(jobs, results) if r is None]
    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            fresh = list(pool.map(_run_job, todo))
    else:
        fresh = [_run_job(j) for j in todo]
    fresh_iter = iter(fresh)
    for k, job in enumerate(jobs):
        if results[k] is not None:
            continue
        results[k] = next(fresh_iter)
        if not results[k]["error"]:
            record = {"digest": job.digest(), "payload": results[k], "version": __version__,
                      "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
            write_atomic(cdir / f"{job.digest()}.json", json.dumps(record, sort_keys=True))
    if args.verbose:
        print(f"cache hits: {hits}/{len(jobs)}", file=sys.stderr)
    failed = any(r["error"] for r in results)
    table_rows = [["name", "value", "colorings", "error"]]
    for r in results:
        if r["error"]:
            table_rows.append([r["name"], "", "", r["error"]])
        else:
            table_rows.append([r["name"], render_record(r), r["colorings"], ""])
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(table_rows)
    if args.out:
        write_atomic(Path(args.out), buf.getvalue())
    if args.format == "json":
        out = []
        for r in results:
            if r["error"]:
                out.append({"name": r["name"], "error": r["error"]})
            else:
                out.append(dict(invariant_record(r["name"], args.quandle, args.cocycle, args.shadow,
                                                 args.mirror, value_from_record(r["value"], r["modulus"]),
                                                 r["colorings"], r["modulus"]), error=""))
        print(json.dumps(out, sort_keys=True))
    elif not args.out or args.format == "csv":
        sys.stdout.write(buf.getvalue())
    return DOMAIN if failed else 0


# -- extensions -----------------------------------------------------------------------

def cmd_extend(args) -> int:
    X = load_quandle(args.quandle)
    A = FiniteAbelianGroup.parse(args.group)
    if not A.is_cyclic() or A.order == 1:
        raise UsageError("--group must be a single cyclic order")
    phi = load_cochain(args.cocycle, X)
    E = extend(X, A, phi)
    if args.output:
        write_atomic(Path(args.output), E.to_text())
    emit(args, E.to_text().rstrip(), {"order": len(E), "table": [list(r) for r in E.table]})
    return 0


def cmd_obstruction(args) -> int:
    X = load_quandle(args.quandle)
    ses = parse_ses(args.ses)
    s = parse_section(args.section, ses)
    phi = load_cochain(args.cocycle, X)
    theta = obstruction_cocycle(X, phi, ses, s)
    xi = obstruction_witness(theta)
    closed = delta(theta).is_zero()
    lines = ["theta:", theta.to_text().rstrip(), f"delta(theta) = 0: {'yes' if closed else 'no'}",
             f"coboundary: {'yes' if xi is not None else 'no'}"]
    record = {"theta": {" ".join(map(str, t)): v for t, v in theta.values.items()},
              "cocycle": closed, "coboundary": xi is not None}
    if xi is not None:
        if args.witness_out:
            write_atomic(Path(args.witness_out), xi.to_text())
        L = lift_quandle(X, phi, ses, s, xi)
        ok = check_quandle(L.table).valid
        hom = lift_projection(L, extend(X, ses.A, phi), X, ses).is_homomorphism()
        lines += [f"lift: order {len(L)}, quandle axioms {'ok' if ok else 'FAILED'}, "
                  f"projection homomorphism {'yes' if hom else 'no'}"]
        record.update(lift_order=len(L), lift_valid=ok, projection_homomorphism=hom)
        if args.lift_out:
            write_atomic(Path(args.lift_out), L.to_text())
    emit(args, "\n".join(lines), record)
    return 0


# -- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="quandlekit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quandle", parents=[common], help="make, check or compare quandles")
    q.add_argument("action", choices=("make", "check", "iso"))
    q.add_argument("files", nargs="*", help="make: KIND PARAMS...; check: FILE; iso: FILE FILE")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_quandle)

    h = sub.add_parser("homology", parents=[common], help="quandle (co)homology groups")
    h.add_argument("--quandle", required=True)
    h.add_argument("--theory", choices=("R", "D", "Q"), default="Q")
    h.add_argument("--degree", type=int, required=True)
    h.add_argument("--coeff", default="Z")
    h.add_argument("--cohomology", action="store_true")
    h.set_defaults(func=cmd_homology)

    i = sub.add_parser("invariant", parents=[common], help="cocycle invariant of one diagram")
    i.add_argument("--pd", help="PD code, or @FILE")
    i.add_argument("--braid")
    i.add_argument("--strands", type=int)
    i.add_argument("--family", help="torus2:N, torus3:N, doubled:N or tprime:N")
    i.add_argument("--quandle", required=True)
    i.add_argument("--cocycle", required=True, help="cochain file, or 'xi'")
    i.add_argument("--shadow", action="store_true")
    i.add_argument("--mirror", action="store_true")
    i.set_defaults(func=cmd_invariant)

    t = sub.add_parser("table", parents=[common], help="batch invariants over a knot table")
    t.add_argument("action", choices=("run",))
    t.add_argument("--input", required=True)
    t.add_argument("--quandle", required=True)
    t.add_argument("--cocycle", required=True)
    t.add_argument("--shadow", action="store_true")
    t.add_argument("--mirror", action="store_true")
    t.add_argument("--out")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--cache-dir")
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("extend", parents=[common], help="abelian extension E(X, A, phi)")
    e.add_argument("--quandle", required=True)
    e.add_argument("--group", required=True)
    e.add_argument("--cocycle", required=True)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_extend)

    o = sub.add_parser("obstruction", parents=[common], help="obstruction to lifting an extension")
    o.add_argument("--quandle", required=True)
    o.add_argument("--ses", required=True, help="N,G,A cyclic orders, e.g. 2,4,2")
    o.add_argument("--section", required=True, help="e.g. 0:0,1:1")
    o.add_argument("--cocycle", required=True)
    o.add_argument("--witness-out")
    o.add_argument("--lift-out")
    o.set_defaults(func=cmd_obstruction)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "quandle" and args.action == "make":
        if not args.files:
            parser.error("quandle make needs a KIND")
        args.kind, args.params = args.files[0], args.files[1:]
    elif args.command == "quandle" and not args.files:
        parser.error(f"quandle {args.action} needs file arguments")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (QuandleError, DiagramError, ChainComplexError) as exc:
        # malformed input files and diagrams
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (InvariantError, ExtensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN
