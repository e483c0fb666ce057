"""``equitab`` command line: gen, shard, hash, merge, verify, stats, query, fingerprint.

Exit codes: 0 success, 1 usage or I/O error, 2 a hash collision was found.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import groups as grp
from . import tables as tbl
from .canon import canonical_form, table_fingerprint
from .corpus import BY_ORDER, CORPUS
from .dixon import character_table
from .encode import build_graph
from .pipeline import (
    COLLISION,
    dump_partition,
    hash_lines,
    hash_manifest,
    load_partition,
    merge,
    shard,
    stats,
    tables_by_id,
    verify_partition,
)

log = logging.getLogger("equitab")

EXIT_OK, EXIT_ERROR, EXIT_COLLISION = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, pretty: bool) -> None:
    print(json.dumps(obj, indent=2 if pretty else None))


def _group_specs(arg: str) -> list[str]:
    if arg.startswith("@"):
        name = arg[1:]
        if name == "corpus":
            return list(CORPUS)
        if name.startswith("order") and name[5:].isdigit() and int(name[5:]) in BY_ORDER:
            return list(BY_ORDER[int(name[5:])])
        text = Path(name).read_text(encoding="utf-8")
        return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    return grp.split_spec_list(arg)


def table_for_spec(spec: str) -> tbl.CharacterTable:
    """Character table of a catalog group, memoised under $EQUITAB_CACHE if set."""
    cache = os.environ.get("EQUITAB_CACHE")
    path = None
    if cache:
        path = Path(cache) / (hashlib.md5(spec.encode()).hexdigest() + ".json")
        if path.exists():
            cached = tbl.load_tables(path)
            if len(cached) == 1 and cached[0].id == spec:
                return cached[0]
    t = character_table(grp.from_spec(spec), spec)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tbl.save_tables([t], path)
    return t


def cmd_gen(args) -> int:
    specs = _group_specs(args.groups)
    if not specs:
        raise UsageError("no groups given")
    built = []
    for s in specs:
        try:
            grp.from_spec(s)
        except grp.GroupError as exc:
            raise UsageError(str(exc)) from exc
    for s in specs:
        built.append(table_for_spec(s))
    tbl.save_tables(built, args.out)
    log.info("wrote %d tables to %s", len(built), args.out)
    return EXIT_OK


def cmd_shard(args) -> int:
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    m = shard(args.input, args.k, args.out_dir, args.run)
    print(m.to_json(), end="")
    return EXIT_OK


def cmd_hash(args) -> int:
    if args.manifest:
        outs = hash_manifest(args.manifest, jobs=args.jobs)
        for o in outs:
            print(o)
        return EXIT_OK
    if not args.input or not args.out:
        raise UsageError("hash needs --in and --out (or --manifest)")
    if args.jobs > 1:
        with tempfile.TemporaryDirectory() as tmp:
            shard(args.input, args.jobs, tmp)
            outs = hash_manifest(Path(tmp) / "manifest.json", jobs=args.jobs)
            per = [o.read_text(encoding="utf-8").splitlines(keepends=True) for o in outs]
        # one line per record and round-robin shards: interleave to restore input order
        lines = [ln for j in range(max(map(len, per), default=0)) for part in per if j < len(part)
                 for ln in [part[j]]]
    else:
        lines = hash_lines(tbl.read_records(args.input))
    Path(args.out).write_text("".join(lines), encoding="utf-8")
    errs = sum(1 for ln in lines if ln.startswith("ERR\t"))
    if errs:
        log.warning("%d record(s) failed; see ERR lines in %s", errs, args.out)
    return EXIT_OK


def cmd_merge(args) -> int:
    classes = merge(args.input)
    text = dump_partition(classes)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    classes = load_partition(args.partition)
    tables = tables_by_id(args.tables)
    verified = verify_partition(classes, tables, jobs=args.jobs)
    text = dump_partition(verified)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return EXIT_COLLISION if any(c.status == COLLISION for c in verified) else EXIT_OK


def cmd_stats(args) -> int:
    classes = load_partition(args.input)
    report = stats(classes)
    if args.pretty:
        print(f"{'order':>6} {'groups':>7} {'tables':>7} {'largest':>8}")
        for r in report.rows:
            print(f"{r.order:>6} {r.groups:>7} {r.tables:>7} {r.largest_class:>8}")
    else:
        print(report.to_tsv(), end="")
    if args.out:
        Path(args.out).write_text(report.to_tsv(), encoding="utf-8")
    return EXIT_COLLISION if report.collisions else EXIT_OK


def _find_table(ref: str) -> tbl.CharacterTable:
    # FILE:ID where ID may itself contain ':'
    for i, ch in enumerate(ref):
        if ch == ":" and Path(ref[:i]).is_file():
            path, tid = ref[:i], ref[i + 1:]
            break
    else:
        raise UsageError(f"--table expects FILE:ID with an existing file, got {ref!r}")
    for t in tbl.load_tables(path):
        if t.id == tid:
            return t
    raise UsageError(f"no table with id {tid!r} in {path}")


TABLE_QUERIES = ("commutators", "two-squares", "solvable", "normal-subgroups", "derived-classes",
                 "real-rows", "class-sizes", "order")
GROUP_QUERIES = ("derived-length", "squares", "commutator-image", "order", "exponent")


def cmd_query(args) -> int:
    if bool(args.table) == bool(args.group):
        raise UsageError("query needs exactly one of --table or --group")
    if args.table:
        if args.what not in TABLE_QUERIES:
            raise UsageError(f"--what for tables must be one of {', '.join(TABLE_QUERIES)}")
        t = _find_table(args.table)
        w = args.what
        # columns and rows are reported 1-based
        if w == "commutators":
            out = sorted(c + 1 for c in tbl.commutator_classes(t))
        elif w == "two-squares":
            out = [tbl.two_squares_count(t, c) for c in range(t.n)]
        elif w == "solvable":
            out = tbl.is_solvable(t)
        elif w == "normal-subgroups":
            out = [{"classes": sorted(c + 1 for c in ns.classes), "order": ns.order}
                   for ns in tbl.normal_subgroups(t)]
        elif w == "derived-classes":
            out = sorted(c + 1 for c in tbl.derived_subgroup_classes(t))
        elif w == "real-rows":
            out = sorted(i + 1 for i in tbl.real_rows(t))
        elif w == "class-sizes":
            out = tbl.class_sizes(t)
        else:
            out = tbl.group_order(t)
    else:
        if args.what not in GROUP_QUERIES:
            raise UsageError(f"--what for groups must be one of {', '.join(GROUP_QUERIES)}")
        try:
            G = grp.from_spec(args.group)
        except grp.GroupError as exc:
            raise UsageError(str(exc)) from exc
        w = args.what
        if w == "derived-length":
            out = grp.derived_length(G)
        elif w == "squares":
            out = [grp.cycle_string(G.elements[i]) for i in sorted(grp.squares_image(G))]
        elif w == "commutator-image":
            out = [grp.cycle_string(G.elements[i]) for i in sorted(grp.commutator_image(G))]
        elif w == "order":
            out = G.order
        else:
            out = G.exponent
    _emit(out, args.pretty)
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    tables = tbl.load_tables(args.input)
    if args.id:
        tables = [t for t in tables if t.id == args.id]
        if not tables:
            raise UsageError(f"no table with id {args.id!r}")
    for t in tables:
        if args.dump_graph:
            g, _ = build_graph(t)
            sys.stdout.write(g.to_dimacs())
        elif args.form:
            g, vmap = build_graph(t)
            sys.stdout.write(canonical_form(g, vmap).decode())
        else:
            sys.stdout.write(table_fingerprint(t).to_line())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equitab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="compute character tables of catalog groups")
    s.add_argument("--groups", required=True,
                   help="comma-separated specs, @FILE (one per line), @corpus or @orderN")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("shard", help="split a table file into round-robin shards")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--run")
    s.set_defaults(func=cmd_shard)

    s = sub.add_parser("hash", help="fingerprint tables (one shard, a whole file, or a manifest)")
    s.add_argument("--in", dest="input")
    s.add_argument("--out")
    s.add_argument("--manifest")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_hash)

    s = sub.add_parser("merge", help="group hash records into candidate classes")
    s.add_argument("--in", dest="input", nargs="+", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_merge)

    s = sub.add_parser("verify", help="check every candidate class against its representative")
    s.add_argument("--partition", required=True)
    s.add_argument("--tables", nargs="+", required=True)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="per-order group/table counts of a partition")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("query", help="read group properties off a table or a catalog group")
    s.add_argument("--table", help="FILE:ID")
    s.add_argument("--group", help="catalog spec")
    s.add_argument("--what", required=True)
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("fingerprint", help="print hash records, canonical forms or graphs")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--id")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--form", action="store_true", help="print the CTCF1 canonical form")
    g.add_argument("--dump-graph", action="store_true", help="print the colored graph (DIMACS-like)")
    s.set_defaults(func=cmd_fingerprint)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, OSError, ValueError) as exc:
        print(f"equitab {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
