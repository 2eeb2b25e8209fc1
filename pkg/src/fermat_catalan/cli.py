"""Command line: single pairs, grid scans, searches and the class-number cache.

Scan output is JSON-lines, one record per (p, q) in sorted order:

    {"version": 1, "p": 37, "q": 23, "reports": [<CriterionReport.to_dict()>, ...]}

Cache records (append-only JSON-lines, keyed by modulus):

    {"version": 1, "modulus": "23", "h_minus": "3", "computed_by": "analytic"}
"""

import argparse
import csv
import json
import logging
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import characters, diophantine
from .criteria import THEOREMS, Conclusion, EvalConfig, evaluate
from .ntcore import PrimePair, odd_primes_between

SCHEMA_VERSION = 1
CACHE_ENV = "FERMAT_CATALAN_CACHE"
DEFAULT_CACHE = Path.home() / ".cache" / "fermat_catalan" / "h_minus.jsonl"
CSV_COLUMNS = ("p", "q", "theorem", "condition", "verdict", "witness")

log = logging.getLogger("fermat_catalan")


class CacheError(Exception):
    pass


class CacheIntegrityError(CacheError):
    pass


# --- cache -------------------------------------------------------------------


@dataclass(frozen=True)
class CacheRecord:
    modulus: int
    h_minus: int
    computed_by: str = "analytic"
    version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {"version": self.version, "modulus": str(self.modulus), "h_minus": str(self.h_minus), "computed_by": self.computed_by},
            sort_keys=True,
        )


def cache_path(explicit=None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else DEFAULT_CACHE


def load_cache(path) -> dict:
    """modulus -> h^-; duplicates must agree."""
    path = Path(path)
    out: dict[int, int] = {}
    if not path.exists():
        return out
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                if raw.get("version") != SCHEMA_VERSION:
                    raise CacheError(f"{path}:{lineno}: unsupported cache version {raw.get('version')!r}")
                rec = CacheRecord(int(raw["modulus"]), int(raw["h_minus"]), raw.get("computed_by", "analytic"))
            except CacheError:
                raise
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise CacheError(f"{path}:{lineno}: corrupted cache record ({exc})") from None
            if str(rec.h_minus) != str(raw["h_minus"]).lstrip("+"):
                raise CacheError(f"{path}:{lineno}: h_minus is not a canonical decimal string")
            prev = out.get(rec.modulus)
            if prev is not None and prev != rec.h_minus:
                raise CacheIntegrityError(f"{path}:{lineno}: modulus {rec.modulus} has conflicting values {prev} and {rec.h_minus}")
            out[rec.modulus] = rec.h_minus
    return out


def store_cache(path, known: dict, new: dict) -> int:
    """Append records in `new` that are not already in `known`; returns the count."""
    fresh = sorted(m for m in new if m not in known)
    if not fresh:
        return 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        for m in fresh:
            fh.write(CacheRecord(m, new[m]).to_json() + "\n")
    return len(fresh)


def needed_moduli(pairs, cutoff):
    ms = set()
    for pair in pairs:
        for m in (pair.p, pair.q, pair.p * pair.q):
            if m <= cutoff:
                ms.add(m)
    return sorted(ms)


def fill_class_numbers(moduli, known: dict) -> dict:
    out = dict(known)
    for m in moduli:
        if m not in out:
            out[m] = characters.h_minus(m).h_minus
    return out


# --- scan --------------------------------------------------------------------


@dataclass
class ScanConfig:
    p_range: tuple
    q_range: tuple
    theorems: tuple = THEOREMS
    h_minus_cutoff: int = characters.DEFAULT_H_MINUS_BOUND
    search_height: int = 0
    accept_draft_lemmas: bool = False
    workers: int = 1
    output_path: str | None = None
    cache_path: str | None = None
    catg1_C: int = 1
    catg1_printed_direction: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, (lo, hi) in (("p_range", self.p_range), ("q_range", self.q_range)):
            if lo > hi:
                raise ValueError(f"{name} is empty")
        if self.h_minus_cutoff < 15:
            raise ValueError("h_minus_cutoff must be at least 15")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        bad = set(self.theorems) - set(THEOREMS)
        if bad:
            raise ValueError(f"unknown theorems: {sorted(bad)}")

    def pairs(self):
        ps = odd_primes_between(*self.p_range)
        qs = odd_primes_between(*self.q_range)
        return [PrimePair(p, q) for p in ps for q in qs if p != q]


def _eval_pair(job):
    p, q, theorems, config, C, height = job
    start = time.perf_counter()
    pair = PrimePair(p, q)
    record = {"version": SCHEMA_VERSION, "p": p, "q": q, "reports": []}
    for th in theorems:
        rep = evaluate(pair, th, config, C)
        if not rep.is_sound():
            raise AssertionError(f"unsound report for {th} at ({p}, {q})")
        record["reports"].append(rep.to_dict())
    if height:
        res = diophantine.search_fc(pair, height)
        record["search"] = {
            "height": height,
            "solutions": [[str(s.x), str(s.y), str(s.z)] for s in res.solutions],
            "trivial": res.trivial_count,
        }
    return record, time.perf_counter() - start


def run_scan(cfg: ScanConfig):
    """Evaluate every pair; returns (records, summary Counter)."""
    pairs = cfg.pairs()
    cpath = cache_path(cfg.cache_path)
    known = load_cache(cpath)
    table = fill_class_numbers(needed_moduli(pairs, cfg.h_minus_cutoff), known)
    added = store_cache(cpath, known, table)
    if added:
        log.info("cache: appended %d records to %s", added, cpath)
    # cached values beyond the cutoff are still honored (they are exact)
    config = EvalConfig(cfg.h_minus_cutoff, cfg.accept_draft_lemmas, cfg.catg1_printed_direction, table)
    jobs = [(pr.p, pr.q, tuple(cfg.theorems), config, cfg.catg1_C, cfg.search_height) for pr in pairs]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_eval_pair, jobs, chunksize=4))
    else:
        results = [_eval_pair(j) for j in jobs]
    records = []
    summary = Counter()
    for record, wall in results:
        log.debug("(%d, %d) evaluated in %.3f s", record["p"], record["q"], wall)
        records.append(record)
        for rep in record["reports"]:
            summary[(rep["theorem"], rep["conclusion"])] += 1
    return records, summary


def dump_records(records) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in records)


def report_rows(records):
    for rec in records:
        for rep in rec["reports"]:
            for c in rep["conditions"]:
                yield (rec["p"], rec["q"], rep["theorem"], c["name"], c["verdict"], c["witness"])


def write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report_rows(records):
        w.writerow(row)


def unsound_records(lines):
    """Reports in scan output asserting a conclusion while some condition is unknown or failing."""
    bad = []
    for line in lines:
        if not line.strip():
            continue
        rec = json.loads(line)
        for rep in rec["reports"]:
            if rep["conclusion"] == Conclusion.INCONCLUSIVE.value:
                continue
            verdicts = [c["verdict"] for c in rep["conditions"]]
            required = [c["verdict"] for c in rep["conditions"] if c["required"]]
            if "unknown" in verdicts or any(v != "pass" for v in required):
                bad.append((rec["p"], rec["q"], rep["theorem"]))
    return bad


# --- rendering ---------------------------------------------------------------


def render_report(rep) -> str:
    d = rep.to_dict()
    lines = [f"[{d['theorem']}] p = {d['p']}, q = {d['q']}: {d['conclusion']}"]
    for c in d["conditions"]:
        tag = "" if c["required"] else " (informational)"
        lines.append(f"  {c['verdict']:<8} {c['name']}{tag}  -- {c['witness']}")
    for k, v in d["bounds"].items():
        lines.append(f"  log10 {k} = {v}")
    for n in d["notes"]:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


# --- argument handling -------------------------------------------------------


def _range(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _theorems(text):
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [t for t in names if t not in THEOREMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown theorem(s) {bad}; choose from {','.join(THEOREMS)}")
    return names


def _common(sp):
    sp.add_argument("--theorems", type=_theorems, default=THEOREMS, help="comma list of " + ",".join(THEOREMS))
    sp.add_argument("--h-minus-cutoff", type=int, default=characters.DEFAULT_H_MINUS_BOUND)
    sp.add_argument("--accept-draft-lemmas", action="store_true")
    sp.add_argument("--catg1-printed-direction", action="store_true", help="use '-1 not in <p mod q>' for catg1")
    sp.add_argument("--catg1-C", type=int, default=1)
    sp.add_argument("--cache-path", default=None, help=f"overrides ${CACHE_ENV}")


def build_parser():
    ap = argparse.ArgumentParser(prog="fermat-catalan", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pair", help="evaluate the criteria for one (p, q)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--csv", action="store_true")
    _common(sp)

    sp = sub.add_parser("scan", help="evaluate a grid of pairs to JSON-lines")
    sp.add_argument("--p-range", type=_range, required=True, metavar="LO:HI")
    sp.add_argument("--q-range", type=_range, required=True, metavar="LO:HI")
    sp.add_argument("--search-height", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", "--output-path", dest="output", default=None)
    sp.add_argument("--csv", default=None, metavar="PATH")
    _common(sp)

    sp = sub.add_parser("search", help="search x^p + y^p = z^q up to a height")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--height", type=int, default=200)
    sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("cache", help="inspect or fill the class-number cache")
    sp.add_argument("action", choices=("show", "fill", "verify"))
    sp.add_argument("--max-modulus", type=int, default=characters.DEFAULT_H_MINUS_BOUND)
    sp.add_argument("--cache-path", default=None)
    return ap


def _fail(msg):
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _config_from(args, table):
    return EvalConfig(args.h_minus_cutoff, args.accept_draft_lemmas, args.catg1_printed_direction, table)


def cmd_pair(args):
    try:
        pair = PrimePair(args.p, args.q)
    except ValueError as exc:
        return _fail(exc)
    cpath = cache_path(args.cache_path)
    try:
        table = load_cache(cpath)
    except CacheError as exc:
        return _fail(exc)
    config = _config_from(args, table)
    reports = [evaluate(pair, th, config, args.catg1_C) for th in args.theorems]
    record = {"version": SCHEMA_VERSION, "p": pair.p, "q": pair.q, "reports": [r.to_dict() for r in reports]}
    if args.json:
        sys.stdout.write(dump_records([record]))
    elif args.csv:
        write_csv([record], sys.stdout)
    else:
        print("\n\n".join(render_report(r) for r in reports))
    return 0


def cmd_scan(args):
    try:
        cfg = ScanConfig(
            args.p_range,
            args.q_range,
            args.theorems,
            args.h_minus_cutoff,
            args.search_height,
            args.accept_draft_lemmas,
            args.workers,
            args.output,
            args.cache_path,
            args.catg1_C,
            args.catg1_printed_direction,
        )
        records, summary = run_scan(cfg)
    except CacheError as exc:
        return _fail(exc)
    except ValueError as exc:
        return _fail(exc)
    text = dump_records(records)
    try:
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                write_csv(records, fh)
    except OSError as exc:
        return _fail(f"cannot write output: {exc}")
    out = sys.stderr if not cfg.output_path else sys.stdout
    print(f"{len(records)} pairs", file=out)
    for (th, concl), n in sorted(summary.items()):
        print(f"  {th:<6} {concl:<26} {n}", file=out)
    return 0


def cmd_search(args):
    try:
        pair = PrimePair(args.p, args.q)
    except ValueError as exc:
        return _fail(exc)
    if args.height < 1:
        return _fail("height must be at least 1")
    res = diophantine.search_fc(pair, args.height, workers=args.workers)
    if not res.solutions:
        print(f"no solutions up to height {args.height} (trivial pairs skipped: {res.trivial_count})")
    for sol in res.solutions:
        tag = diophantine.classify_case(sol)
        print(f"x = {sol.x}, y = {sol.y}, z = {sol.z}: e = {tag.e}, f = {tag.f}")
    return 0


def cmd_cache(args):
    cpath = cache_path(args.cache_path)
    try:
        known = load_cache(cpath)
    except CacheError as exc:
        return _fail(exc)
    if args.action == "show":
        for m in sorted(known):
            print(f"{m}\t{known[m]}")
    elif args.action == "verify":
        bad = [m for m in sorted(known) if characters.h_minus(m).h_minus != known[m]]
        for m in bad:
            print(f"mismatch at modulus {m}")
        print(f"{len(known)} records, {len(bad)} mismatches")
        return 1 if bad else 0
    else:
        moduli = []
        for m in range(3, args.max_modulus + 1, 2):
            try:
                characters._check_modulus(m)
            except ValueError:
                continue
            moduli.append(m)
        table = fill_class_numbers(moduli, known)
        n = store_cache(cpath, known, table)
        print(f"appended {n} records to {cpath}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    handler = {"pair": cmd_pair, "scan": cmd_scan, "search": cmd_search, "cache": cmd_cache}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
