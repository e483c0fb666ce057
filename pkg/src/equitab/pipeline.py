"""Batch partitioning of tables into equitabular classes.

Work is split into shards, each shard is hashed by an independent worker that
writes a small tab-separated file, the files are merged by
(order, #classes, digest), and every candidate class is verified against its
representative with a direct matrix-isomorphism search.

The verifier works on the raw matrices only; it shares nothing with the
graph encoding or the canonical labeling it is meant to check.
"""
from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .canon import HashRecord, table_fingerprint
from .tables import CharacterTable, TableError, read_records, record_to_table

log = logging.getLogger(__name__)

PathLike = Union[str, Path]

UNVERIFIED, VERIFIED, COLLISION = "unverified", "verified", "collision"


class PipelineError(ValueError):
    pass


# -- sharding ------------------------------------------------------------------------


@dataclass
class ShardManifest:
    run: str
    shards: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"run": self.run, "shards": self.shards}, indent=1) + "\n"

    @classmethod
    def load(cls, path: PathLike) -> "ShardManifest":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        ids = [s["id"] for s in doc["shards"]]
        if len(set(ids)) != len(ids):
            raise PipelineError(f"{path}: duplicate shard ids")
        return cls(doc["run"], doc["shards"])


def shard(tables_path: PathLike, k: int, out_dir: PathLike, run: Optional[str] = None) -> ShardManifest:
    """Round-robin the records of a table file into k shard files plus a manifest."""
    if k < 1:
        raise PipelineError("shard count must be at least 1")
    records = read_records(tables_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    buckets: list[list] = [[] for _ in range(k)]
    for i, rec in enumerate(records):
        buckets[i % k].append(rec)
    manifest = ShardManifest(run or Path(tables_path).stem)
    width = max(3, len(str(k - 1)))
    for s, recs in enumerate(buckets):
        name = f"shard_{s:0{width}d}.json"
        (out / name).write_text(json.dumps({"tables": recs}, indent=1) + "\n", encoding="utf-8")
        manifest.shards.append({"id": f"{s:0{width}d}", "file": name, "count": len(recs)})
    (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


# -- hashing -------------------------------------------------------------------------


def _clean(msg: str) -> str:
    return " ".join(str(msg).split())


def hash_lines(records: Sequence) -> list[str]:
    lines = []
    for i, rec in enumerate(records):
        rid = rec.get("id") if isinstance(rec, dict) and isinstance(rec.get("id"), str) else f"#{i}"
        try:
            lines.append(table_fingerprint(record_to_table(rec, i)).to_line())
        except (TableError, ValueError, ArithmeticError) as exc:
            lines.append(f"ERR\t{_clean(rid)}\t{_clean(exc)}\n")
    return lines


def hash_worker(shard_path: PathLike, out_path: PathLike) -> int:
    """Fingerprint every record of one shard; bad records become ERR lines."""
    lines = hash_lines(read_records(shard_path))
    Path(out_path).write_text("".join(lines), encoding="utf-8")
    return len(lines)


def _hash_job(args: tuple[str, str]) -> int:
    return hash_worker(*args)


def hash_manifest(manifest_path: PathLike, jobs: int = 1) -> list[Path]:
    """Run the worker over every shard of a manifest with a bounded process pool."""
    manifest = ShardManifest.load(manifest_path)
    base = Path(manifest_path).parent
    work = []
    for s in manifest.shards:
        src = base / s["file"]
        work.append((str(src), str(src.with_suffix(".hashes"))))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(_hash_job, work))
    else:
        for w in work:
            _hash_job(w)
    return [Path(out) for _, out in work]


@dataclass(frozen=True)
class ErrorRecord:
    id: str
    message: str


def read_hash_file(path: PathLike) -> tuple[list[HashRecord], list[ErrorRecord]]:
    records, errors = [], []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if parts[0] == "ERR" and len(parts) == 3:
            errors.append(ErrorRecord(parts[1], parts[2]))
            continue
        if len(parts) != 4:
            raise PipelineError(f"{path}:{lineno}: malformed hash record")
        rid, order, ncls, dig = parts
        if not (order.isdigit() and ncls.isdigit()) or len(dig) != 32 or any(c not in "0123456789abcdef" for c in dig):
            raise PipelineError(f"{path}:{lineno}: malformed hash record")
        records.append(HashRecord(rid, int(order), int(ncls), dig))
    return records, errors


# -- merging -------------------------------------------------------------------------


@dataclass(frozen=True)
class EquitabularClass:
    order: int
    n_classes: int
    digest: str
    members: tuple[str, ...]
    status: str = UNVERIFIED
    witness: Optional[tuple[str, str]] = None

    def __post_init__(self):
        if not self.members:
            raise PipelineError("a class needs at least one member")
        if self.status == COLLISION and self.witness is None:
            raise PipelineError("a collision must carry a witness pair")

    @property
    def key(self) -> tuple[int, int, str]:
        return (self.order, self.n_classes, self.digest)

    @property
    def representative(self) -> str:
        return self.members[0]

    def to_dict(self) -> dict:
        d = {
            "order": self.order,
            "n_classes": self.n_classes,
            "digest": self.digest,
            "members": list(self.members),
            "representative": self.representative,
            "status": self.status,
        }
        if self.witness is not None:
            d["witness"] = list(self.witness)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "EquitabularClass":
        members = tuple(sorted(d["members"]))
        if d.get("representative", members[0]) != members[0]:
            raise PipelineError(f"representative of class {d['digest']} is not its least member")
        w = d.get("witness")
        return cls(d["order"], d["n_classes"], d["digest"], members, d.get("status", UNVERIFIED),
                   tuple(w) if w else None)


def merge_records(records: Iterable[HashRecord]) -> list[EquitabularClass]:
    groups: dict[tuple[int, int, str], list[str]] = defaultdict(list)
    seen: set[str] = set()
    for r in records:
        if r.id in seen:
            raise PipelineError(f"duplicate id {r.id!r} across hash files")
        seen.add(r.id)
        groups[r.key].append(r.id)
    return [EquitabularClass(o, n, d, tuple(sorted(ids))) for (o, n, d), ids in sorted(groups.items())]


def merge(paths: Iterable[PathLike]) -> list[EquitabularClass]:
    """Group hash records from any number of files by (order, #classes, digest)."""
    records = []
    for p in paths:
        recs, errs = read_hash_file(p)
        for e in errs:
            log.warning("%s: record %s failed: %s", p, e.id, e.message)
        records.extend(recs)
    return merge_records(records)


def dump_partition(classes: Sequence[EquitabularClass]) -> str:
    return json.dumps([c.to_dict() for c in classes], indent=1) + "\n"


def load_partition(path: PathLike) -> list[EquitabularClass]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise PipelineError(f"{path}: partition must be a JSON list")
    return [EquitabularClass.from_dict(d) for d in doc]


# -- verification ---------------------------------------------------------------------


def _identity_col(m: Sequence[Sequence]) -> Optional[int]:
    cols = [j for j in range(len(m))
            if all((v := x.is_rational_integer()) is not None and v > 0 for x in (row[j] for row in m))]
    return cols[0] if len(cols) == 1 else None


def _multiset(values) -> tuple:
    return tuple(sorted(Counter(values).items()))


def verify_isomorphic(a: CharacterTable, b: CharacterTable) -> Optional[tuple[list[int], list[int]]]:
    """Row map phi and column map psi with a[i][j] == b[phi[i]][psi[j]], or None.

    Backtracking over rows; rows only go to rows with the same value multiset,
    and after each choice the column profiles seen so far must agree as
    multisets.  Any witness is re-checked entry by entry before it is returned.
    """
    if a.n != b.n:
        return None
    n = a.n
    A, B = a.entries, b.entries
    row_a = [_multiset(r) for r in A]
    row_b = [_multiset(r) for r in B]
    col_a = [_multiset(row[j] for row in A) for j in range(n)]
    col_b = [_multiset(row[j] for row in B) for j in range(n)]
    if Counter(row_a) != Counter(row_b) or Counter(col_a) != Counter(col_b):
        return None
    ia, ib = _identity_col(A), _identity_col(B)
    if (ia is None) != (ib is None):
        return None
    if ia is not None and sorted(r[ia] for r in A) != sorted(r[ib] for r in B):
        return None
    # a column's starting profile: its value multiset and whether it holds the degrees
    base_a = [(col_a[j], j == ia) for j in range(n)]
    base_b = [(col_b[j], j == ib) for j in range(n)]
    if Counter(base_a) != Counter(base_b):
        return None

    candidates = [[r for r in range(n) if row_b[r] == row_a[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: (len(candidates[i]), i))
    phi = [-1] * n
    used = [False] * n

    def profiles_match(depth: int) -> bool:
        rows = order[:depth]
        pa = Counter((base_a[j], tuple(A[i][j] for i in rows)) for j in range(n))
        pb = Counter((base_b[j], tuple(B[phi[i]][j] for i in rows)) for j in range(n))
        return pa == pb

    def search(depth: int) -> bool:
        if depth == n:
            return True
        i = order[depth]
        for r in candidates[i]:
            if used[r]:
                continue
            phi[i] = r
            used[r] = True
            if profiles_match(depth + 1) and search(depth + 1):
                return True
            used[r] = False
            phi[i] = -1
        return False

    if not search(0):
        return None
    # columns with equal full profiles are interchangeable
    slots: dict[tuple, list[int]] = defaultdict(list)
    for j in range(n):
        slots[(base_b[j], tuple(B[phi[i]][j] for i in range(n)))].append(j)
    psi = [slots[(base_a[j], tuple(A[i][j] for i in range(n)))].pop(0) for j in range(n)]
    for i in range(n):
        for j in range(n):
            if A[i][j] != B[phi[i]][psi[j]]:
                raise AssertionError("isomorphism witness failed entrywise check")
    return phi, psi


def verify_class(c: EquitabularClass, tables: Mapping[str, CharacterTable]) -> EquitabularClass:
    """Compare every member against the representative."""
    missing = [m for m in c.members if m not in tables]
    if missing:
        raise PipelineError(f"tables missing for class members: {', '.join(missing)}")
    rep = tables[c.representative]
    for m in c.members[1:]:
        if verify_isomorphic(rep, tables[m]) is None:
            log.error("hash collision: %s and %s share key %s but are not equivalent",
                      c.representative, m, c.key)
            return replace(c, status=COLLISION, witness=(c.representative, m))
    return replace(c, status=VERIFIED, witness=None)


def verify_partition(classes: Sequence[EquitabularClass], tables: Mapping[str, CharacterTable],
                     jobs: int = 1) -> list[EquitabularClass]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(verify_class, classes, [tables] * len(classes)))
    return [verify_class(c, tables) for c in classes]


# -- statistics ---------------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    order: int
    groups: int
    tables: int
    largest_class: int


@dataclass
class PartitionReport:
    rows: list[ReportRow]
    collisions: list[tuple[str, str]]

    def to_tsv(self) -> str:
        lines = ["order\tgroups\ttables\tlargest_class"]
        lines += [f"{r.order}\t{r.groups}\t{r.tables}\t{r.largest_class}" for r in self.rows]
        return "\n".join(lines) + "\n"


def stats(classes: Iterable[EquitabularClass]) -> PartitionReport:
    per: dict[int, list[int]] = defaultdict(list)
    collisions = []
    for c in classes:
        per[c.order].append(len(c.members))
        if c.status == COLLISION:
            collisions.append(c.witness)
    rows = [ReportRow(o, sum(s), len(s), max(s)) for o, s in sorted(per.items())]
    return PartitionReport(rows, collisions)


def tables_by_id(paths: Iterable[PathLike]) -> dict[str, CharacterTable]:
    from .tables import load_tables

    out: dict[str, CharacterTable] = {}
    for p in paths:
        for t in load_tables(p):
            if t.id in out:
                raise PipelineError(f"duplicate table id {t.id!r}")
            out[t.id] = t
    return out
