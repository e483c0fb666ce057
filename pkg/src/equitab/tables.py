"""Character tables, their JSON file format, and the queries readable from a table.

Rows are irreducible characters, columns are conjugacy classes.  Columns are
0-based throughout the Python API; the file format stores ``identity_col``
1-based.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from .cyclo import Cyclotomic, CyclotomicParseError, ONE, ZERO, parse_cyclotomic, serialize

Matrix = tuple[tuple[Cyclotomic, ...], ...]


class TableError(ValueError):
    pass


class NotACharacterTable(TableError):
    pass


def _prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while n % p:
        p += 1
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class NormalSubgroup:
    classes: frozenset[int]
    order: int


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Square matrix of cyclotomic values plus optional metadata.

    ``identity_col`` and ``class_sizes`` are hints from the producer; when given
    they are cross-checked against what the matrix itself determines.
    """

    id: str
    entries: Matrix
    order_hint: Optional[int] = None
    identity_hint: Optional[int] = None
    sizes_hint: Optional[tuple[int, ...]] = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(_as_cyclotomic(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0:
            raise TableError(f"table {self.id!r} is empty")
        if any(len(r) != n for r in rows):
            raise TableError(f"table {self.id!r} is not square")
        object.__setattr__(self, "entries", rows)
        if self.sizes_hint is not None:
            object.__setattr__(self, "sizes_hint", tuple(self.sizes_hint))
            if len(self.sizes_hint) != n:
                raise TableError(f"table {self.id!r}: class_sizes has wrong length")
        if self.identity_hint is not None and not 0 <= self.identity_hint < n:
            raise TableError(f"table {self.id!r}: identity column out of range")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Cyclotomic:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Cyclotomic, ...]:
        return tuple(row[j] for row in self.entries)

    def permuted(self, rows: Sequence[int], cols: Sequence[int], id: Optional[str] = None) -> "CharacterTable":
        """Table whose entry (i, j) is this table's (rows[i], cols[j]).  Hints are dropped."""
        ent = tuple(tuple(self.entries[r][c] for c in cols) for r in rows)
        return CharacterTable(id if id is not None else self.id, ent)

    def __eq__(self, other):
        if not isinstance(other, CharacterTable):
            return NotImplemented
        return (self.id, self.entries, self.order_hint, self.identity_hint, self.sizes_hint) == (
            other.id, other.entries, other.order_hint, other.identity_hint, other.sizes_hint)

    def __hash__(self):
        return hash((self.id, self.entries))

    # derived data is memoised per instance

    @cached_property
    def conj_entries(self) -> Matrix:
        return tuple(tuple(x.conj() for x in row) for row in self.entries)


def _as_cyclotomic(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, str):
        return parse_cyclotomic(x)
    return Cyclotomic(x)


# -- queries -------------------------------------------------------------------------


def identity_column(t: CharacterTable) -> int:
    """Column of character degrees: the unique all-positive-integer column."""
    if "identity" in t._cache:
        return t._cache["identity"]
    candidates = []
    for j in range(t.n):
        vals = [x.is_rational_integer() for x in t.column(j)]
        if all(v is not None and v > 0 for v in vals):
            candidates.append(j)
    if t.identity_hint is not None:
        if t.identity_hint not in candidates:
            raise NotACharacterTable(f"table {t.id!r}: declared identity column is not all positive integers")
        col = t.identity_hint
    elif len(candidates) != 1:
        raise NotACharacterTable(
            f"table {t.id!r}: expected one all-positive-integer column, found {len(candidates)}")
    else:
        col = candidates[0]
    t._cache["identity"] = col
    return col


def degrees(t: CharacterTable) -> list[int]:
    j = identity_column(t)
    return [row[j].is_rational_integer() for row in t.entries]


def group_order(t: CharacterTable) -> int:
    order = sum(d * d for d in degrees(t))
    if t.order_hint is not None and t.order_hint != order:
        raise NotACharacterTable(f"table {t.id!r}: declared order {t.order_hint} but degrees give {order}")
    return order


def class_sizes(t: CharacterTable) -> list[int]:
    if "sizes" in t._cache:
        return t._cache["sizes"]
    order = group_order(t)
    sizes = []
    for j in range(t.n):
        s = ZERO
        for i in range(t.n):
            s = s + t.entries[i][j] * t.conj_entries[i][j]
        if not s.is_rational or s.rational_part() <= 0:
            raise NotACharacterTable(f"table {t.id!r}: column {j} has non-positive norm")
        size = Fraction(order) / s.rational_part()
        if size.denominator != 1:
            raise NotACharacterTable(f"table {t.id!r}: class size of column {j} is not an integer")
        sizes.append(size.numerator)
    if sum(sizes) != order:
        raise NotACharacterTable(f"table {t.id!r}: class sizes sum to {sum(sizes)}, not {order}")
    if sizes[identity_column(t)] != 1:
        raise NotACharacterTable(f"table {t.id!r}: identity class does not have size 1")
    if t.sizes_hint is not None and list(t.sizes_hint) != sizes:
        raise NotACharacterTable(f"table {t.id!r}: declared class sizes disagree with the table")
    t._cache["sizes"] = sizes
    return sizes


def _lift_all(rows: Matrix, n: int) -> list[list[dict[int, Union[int, Fraction]]]]:
    out = []
    for row in rows:
        lrow = []
        for x in row:
            f = n // x.conductor
            lrow.append({e * f: (c.numerator if c.denominator == 1 else c) for e, c in x.terms})
        out.append(lrow)
    return out


def _weighted_dot(a: list[dict], b: list[dict], weights: Sequence[int], n: int) -> Cyclotomic:
    raw: dict[int, Union[int, Fraction]] = {}
    for da, db, w in zip(a, b, weights):
        for ea, ca in da.items():
            for eb, cb in db.items():
                k = (ea + eb) % n
                raw[k] = raw.get(k, 0) + w * ca * cb
    return Cyclotomic.from_powers(n, raw)


def check_orthogonality(t: CharacterTable) -> None:
    """Exact row and column orthogonality; raises NotACharacterTable on failure."""
    order = group_order(t)
    sizes = class_sizes(t)
    n = t.n
    L = math.lcm(*(x.conductor for row in t.entries for x in row))
    ent = _lift_all(t.entries, L)
    cj = _lift_all(t.conj_entries, L)
    for i in range(n):
        for k in range(i, n):
            if _weighted_dot(ent[i], cj[k], sizes, L) != (order if i == k else 0):
                raise NotACharacterTable(f"table {t.id!r}: rows {i}, {k} are not orthogonal")
    ones = [1] * n
    cols = [[ent[i][c] for i in range(n)] for c in range(n)]
    ccols = [[cj[i][c] for i in range(n)] for c in range(n)]
    for c in range(n):
        for d in range(c, n):
            if _weighted_dot(cols[c], ccols[d], ones, L) != (Fraction(order, sizes[c]) if c == d else 0):
                raise NotACharacterTable(f"table {t.id!r}: columns {c}, {d} are not orthogonal")


def real_rows(t: CharacterTable) -> set[int]:
    return {i for i in range(t.n) if t.entries[i] == t.conj_entries[i]}


def _ratio_sum(t: CharacterTable, c: int, rows: Iterable[int]) -> Cyclotomic:
    deg = degrees(t)
    s = ZERO
    for i in rows:
        s = s + t.entries[i][c] / deg[i]
    return s


def commutator_classes(t: CharacterTable) -> set[int]:
    """Columns whose elements are commutators [x, y]."""
    return {c for c in range(t.n) if _ratio_sum(t, c, range(t.n))}


def two_squares_count(t: CharacterTable, c: int) -> int:
    """Number of pairs (x, y) with x^2 y^2 equal to a fixed element of class c."""
    s = group_order(t) * _ratio_sum(t, c, sorted(real_rows(t)))
    v = s.is_rational_integer()
    if v is None or v < 0:
        raise NotACharacterTable(f"table {t.id!r}: two-squares count {s} is not a nonnegative integer")
    return v


def kernel_classes(t: CharacterTable, i: int) -> set[int]:
    deg = degrees(t)[i]
    return {c for c in range(t.n) if t.entries[i][c] == deg}


def normal_subgroups(t: CharacterTable) -> list[NormalSubgroup]:
    """All normal subgroups: intersections of kernels, ordered by (order, classes)."""
    order = group_order(t)
    sizes = class_sizes(t)
    kernels = {frozenset(kernel_classes(t, i)) for i in range(t.n)}
    found = set(kernels)
    frontier = list(kernels)
    while frontier:
        nxt = []
        for a in frontier:
            for k in kernels:
                b = a & k
                if b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    out = []
    for s in found:
        o = sum(sizes[c] for c in s)
        if order % o:
            raise NotACharacterTable(f"table {t.id!r}: normal subgroup of order {o} does not divide {order}")
        out.append(NormalSubgroup(s, o))
    out.sort(key=lambda ns: (ns.order, sorted(ns.classes)))
    return out


def derived_subgroup_classes(t: CharacterTable) -> set[int]:
    deg = degrees(t)
    out = set(range(t.n))
    for i in range(t.n):
        if deg[i] == 1:
            out &= kernel_classes(t, i)
    return out


def is_solvable(t: CharacterTable) -> bool:
    """Breadth-first search for a chain 1 = N0 < ... < Nm = G of prime-power indices."""
    subs = normal_subgroups(t)
    start = min(subs, key=lambda s: s.order)
    goal = max(subs, key=lambda s: s.order)
    seen = {start.classes}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur.classes == goal.classes:
            return True
        for nxt in subs:
            if (nxt.classes not in seen and cur.classes < nxt.classes
                    and _prime_power(nxt.order // cur.order)):
                seen.add(nxt.classes)
                queue.append(nxt)
    return False


# -- file format -------------------------------------------------------------------------


def table_to_record(t: CharacterTable) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "id": t.id,
        "n": t.n,
        "entries": [[serialize(x) for x in row] for row in t.entries],
    }
    meta = {}
    if t.order_hint is not None:
        meta["order"] = t.order_hint
    if t.identity_hint is not None:
        meta["identity_col"] = t.identity_hint + 1
    if t.sizes_hint is not None:
        meta["class_sizes"] = list(t.sizes_hint)
    if meta:
        rec["meta"] = meta
    return rec


def record_to_table(rec: Any, index: int = 0) -> CharacterTable:
    """Parse one file record; errors name the record index and offending cell."""
    where = f"record {index}"
    if not isinstance(rec, dict):
        raise TableError(f"{where}: not an object")
    tid = rec.get("id")
    if not isinstance(tid, str):
        raise TableError(f"{where}: missing string id")
    where = f"record {index} ({tid!r})"
    n = rec.get("n")
    ent = rec.get("entries")
    if not isinstance(n, int) or n < 1:
        raise TableError(f"{where}: n must be a positive integer")
    if not isinstance(ent, list) or len(ent) != n or any(not isinstance(r, list) or len(r) != n for r in ent):
        raise TableError(f"{where}: entries is not an {n}x{n} matrix")
    rows = []
    for i, row in enumerate(ent):
        vals = []
        for j, s in enumerate(row):
            if not isinstance(s, str):
                raise TableError(f"{where}: cell ({i + 1},{j + 1}) is not a string")
            try:
                vals.append(parse_cyclotomic(s))
            except CyclotomicParseError as exc:
                raise TableError(f"{where}: cell ({i + 1},{j + 1}): {exc}") from exc
        rows.append(tuple(vals))
    meta = rec.get("meta") or {}
    if not isinstance(meta, dict):
        raise TableError(f"{where}: meta must be an object")
    ident = meta.get("identity_col")
    sizes = meta.get("class_sizes")
    order = meta.get("order")
    try:
        return CharacterTable(
            tid, tuple(rows),
            order_hint=order,
            identity_hint=ident - 1 if isinstance(ident, int) else None,
            sizes_hint=tuple(sizes) if sizes is not None else None,
        )
    except TableError as exc:
        raise TableError(f"{where}: {exc}") from exc


def read_records(path: Union[str, Path]) -> list[Any]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or not isinstance(doc.get("tables"), list):
        raise TableError(f"{path}: expected an object with a 'tables' list")
    return doc["tables"]


def load_tables(path: Union[str, Path]) -> list[CharacterTable]:
    tables = [record_to_table(rec, k) for k, rec in enumerate(read_records(path))]
    seen = set()
    for t in tables:
        if t.id in seen:
            raise TableError(f"{path}: duplicate table id {t.id!r}")
        seen.add(t.id)
    return tables


def dump_tables(tables: Iterable[CharacterTable]) -> str:
    return json.dumps({"tables": [table_to_record(t) for t in tables]}, indent=1) + "\n"


def save_tables(tables: Iterable[CharacterTable], path: Union[str, Path]) -> None:
    tables = list(tables)
    ids = [t.id for t in tables]
    if len(set(ids)) != len(ids):
        raise TableError("duplicate table ids")
    Path(path).write_text(dump_tables(tables), encoding="utf-8")
