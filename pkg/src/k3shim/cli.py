"""Command-line interface: ``k3shim classify|verify|search|igusa|catalog``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 nothing found.  JSON output is deterministic (fixed key order, no
timestamps); search progress goes to stderr as JSON lines.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exactalg.errors import InvalidPrime, K3ShimError, VerificationFailed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_FOUND = 0, 1, 2, 3
SEARCH_LEVELS = (6, 14, 57)


class UsageError(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    input: str | None = None
    format: str = "text"
    verbosity: int = 0
    threads: int = 1
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        from .formats import FormatError, validate

        try:
            validate(asdict(self), "jobspec")
        except FormatError as e:
            raise UsageError(str(e)) from e


def _threads(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("K3SHIM_THREADS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise UsageError(f"K3SHIM_THREADS must be a positive integer, got {env!r}") from None
    if n < 1:
        raise UsageError(f"K3SHIM_THREADS must be a positive integer, got {env!r}")
    return n


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(job: JobSpec) -> int:
    from .ellsurf import fiber_configuration
    from .formats import FormatError, dumps, parse_json, surface_from_json

    try:
        text = Path(job.input).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {job.input}: {e.strerror}") from e
    try:
        S = surface_from_json(parse_json(text, "surface"))
    except FormatError as e:
        raise UsageError(f"{job.input}: {e}") from e
    cfg = fiber_configuration(S)
    fibers = [{"place": f.place.label(), "kodaira": f.kodaira, "euler": f.euler, "count": f.count,
               "lattice": f.lattice_label} for f in cfg.fibers]
    if job.format == "json":
        _out(dumps({"fibers": fibers, "root_lattice": str(cfg.root_lattice), "rank": cfg.root_lattice.rank,
                    "euler_total": cfg.euler_total}))
    else:
        for f in cfg.fibers:
            _out(f.describe())
        _out(f"R = {cfg.root_lattice} (rank {cfg.root_lattice.rank})")
        _out(f"Euler numbers sum to {cfg.euler_total}")
    return EXIT_OK


def cmd_verify(job: JobSpec) -> int:
    from .checklist import run_checks
    from .formats import dumps

    results = run_checks(job.options["case"])
    counts = {s: sum(r.status == s for r in results) for s in ("PASS", "FAIL", "ERRATUM")}
    ok = counts["FAIL"] == 0
    if job.format == "json":
        _out(dumps({"case": job.options["case"], "checks": [r.as_dict() for r in results],
                    "summary": counts, "ok": ok}))
    else:
        for r in results:
            _out(r.line())
        _out(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['ERRATUM']} errata")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(job: JobSpec) -> int:
    from .cases.catalog import involution, record_summary, verify_cm_record
    from .cmsearch import NotFound, SearchSpec, find_cm_point
    from .formats import dumps, rat, record_json

    o = job.options
    N, D = o["level"], o["disc"]
    if N not in SEARCH_LEVELS:
        raise UsageError(f"--level must be one of {', '.join(map(str, SEARCH_LEVELS))}")
    if D >= 0:
        raise UsageError("--disc must be negative")
    if o.get("precision") is not None and o["precision"] < 1:
        raise UsageError("--precision must be positive")
    progress = None
    if o.get("progress"):
        def progress(event):
            sys.stderr.write(json.dumps(event) + "\n")
            sys.stderr.flush()
    kw = {"prime": o.get("prime"), "threads": job.threads}
    if o.get("precision") is not None:
        kw["precision_start"] = o["precision"]
    try:
        spec = SearchSpec.for_target(N, D, **kw)
        rec = find_cm_point(spec, progress)
    except InvalidPrime as e:
        raise UsageError(str(e)) from e
    except NotFound as e:
        _err(json.dumps({"error": type(e).__name__, "message": str(e)}))
        return EXIT_NOT_FOUND
    rep = verify_cm_record(rec)
    doc = {"N": N, "D": D, "parameter": rat(rec.parameter)}
    if N == 14:
        # on N=6 the searched coordinate is b = r^2 and on N=57 it is x of a point of 57a1;
        # the involution fixes both, so only the N=14 image carries information
        doc["involution_image"] = rat(involution(N, rec.parameter))
    doc.update({"prime": int(rec.cross_reference.rsplit(" ", 1)[-1]),
                "record": record_json(rec), "verification": record_summary(rep)})
    if job.format == "json":
        _out(dumps(doc))
    else:
        image = f" (involution image {doc['involution_image']})" if "involution_image" in doc else ""
        _out(f"N={N} D={D}: parameter {doc['parameter']}{image}")
        _out(f"found mod {doc['prime']}; |disc NS| = {rep.disc}, rho = {rep.picard}")
    return EXIT_OK


def cmd_igusa(job: JobSpec) -> int:
    from .formats import dumps, rat
    from .igusa import igusa_for_n6

    o = job.options
    if o["level"] != 6:
        raise UsageError("Igusa-Clebsch invariants are available for --level 6 only")
    b = o["b"]
    if b == 0:
        raise UsageError("b = 0 is the degenerate fiber of the family; choose b != 0")
    inv, printed = igusa_for_n6(b)
    norm = inv.normalized()

    def block(I):
        return {"I2": rat(I.I2), "I4": rat(I.I4), "I6": rat(I.I6), "I10": rat(I.I10)}

    doc = {"level": 6, "b": rat(b), "invariants": block(inv),
           "normalized": None if norm is None else [rat(x) for x in norm],
           "printed": {"invariants": block(printed), "weighted_equal": printed.weighted_equal(inv),
                       "I2_discrepancy": printed.I2 != inv.I2}}
    if job.format == "json":
        _out(dumps(doc))
    else:
        for k, v in doc["invariants"].items():
            _out(f"{k} = {v}")
        if norm is not None:
            _out("I4/I2^2, I6/I2^3, I10/I2^5 = " + ", ".join(doc["normalized"]))
        flag = "differs" if doc["printed"]["I2_discrepancy"] else "agrees"
        _out(f"printed variant I2 = {doc['printed']['invariants']['I2']} ({flag})")
    return EXIT_OK


def cmd_catalog(job: JobSpec) -> int:
    from .cases.catalog import CatalogCorrupt, cm_catalog, record_summary, verify_catalog
    from .formats import FormatError, catalog_from_json, catalog_json, dumps, parse_json

    o = job.options
    if o.get("import_file"):
        try:
            text = Path(o["import_file"]).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {o['import_file']}: {e.strerror}") from e
        try:
            records = catalog_from_json(parse_json(text, "catalog"))
        except FormatError as e:
            _err(f"catalog import rejected: {e}")
            return EXIT_FAIL
        N = records[0].N if records else o.get("level")
        verify = True
    else:
        if o.get("level") is None:
            raise UsageError("catalog needs --level or --import")
        try:
            records = cm_catalog(o["level"])
        except ValueError as e:
            raise UsageError(str(e)) from e
        N, verify = o["level"], o.get("verify", False)
    reports = None
    if verify:
        try:
            reports = verify_catalog(records)
        except (CatalogCorrupt, VerificationFailed, K3ShimError, ValueError, TypeError) as e:
            _err(f"catalog verification failed: {e}")
            return EXIT_FAIL
    if o.get("export"):
        Path(o["export"]).write_text(dumps(catalog_json(N, records)) + "\n")
    if job.format == "json":
        doc = catalog_json(N, records)
        if reports is not None:
            doc = {"catalog": doc, "verification": [record_summary(r) for r in reports]}
        _out(dumps(doc))
    else:
        for i, rec in enumerate(records):
            line = f"N={rec.N} D={rec.D} at {rec.parameter_label()} [{rec.witness.kind}]"
            if reports is not None:
                line += f" verified: |disc NS| = {reports[i].disc}"
            _out(line)
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "search": cmd_search,
            "igusa": cmd_igusa, "catalog": cmd_catalog}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--json", action="store_true", help="shorthand for --format json")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--threads", type=int, default=None)

    p = _Parser(prog="k3shim", description="Elliptic K3 surfaces and CM points on Shimura curves.")
    p.add_argument("--version", action="version", version=f"k3shim {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="singular fibers of a surface given as JSON")
    c.add_argument("file")

    v = sub.add_parser("verify", parents=[common], help="run the built-in checks for one level")
    v.add_argument("case", choices=("n6", "n14", "n57", "n206", "all"))

    s = sub.add_parser("search", parents=[common], help="p-adic search for a CM point")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--prime", type=int)
    s.add_argument("--precision", type=int)
    s.add_argument("--progress", action="store_true")

    g = sub.add_parser("igusa", parents=[common], help="Igusa-Clebsch invariants for the N=6 family")
    g.add_argument("--level", type=int, required=True)
    g.add_argument("--b", type=_rational, required=True)

    k = sub.add_parser("catalog", parents=[common], help="list, verify, export or import CM records")
    k.add_argument("--level", type=int)
    k.add_argument("--verify", action="store_true")
    k.add_argument("--export")
    k.add_argument("--import", dest="import_file")
    return p


_DEFAULT_FORMAT = {"classify": "text", "verify": "text", "search": "json", "igusa": "json", "catalog": "json"}


def parse_job(argv) -> JobSpec:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    fmt = "json" if ns.pop("json") else (ns.pop("format") or _DEFAULT_FORMAT[command])
    ns.pop("format", None)
    verbosity = ns.pop("verbose")
    threads = _threads(ns.pop("threads"))
    inp = ns.pop("file", None)
    job = JobSpec(command, inp, fmt, verbosity, threads, ns)
    job.validate()
    return job


def main(argv=None) -> int:
    try:
        job = parse_job(sys.argv[1:] if argv is None else argv)
        return COMMANDS[job.command](job)
    except UsageError as e:
        _err(f"error: {e}")
        return EXIT_USAGE
    except VerificationFailed as e:
        _err(f"verification failed: {e} (expected {e.expected}, got {e.got})")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
