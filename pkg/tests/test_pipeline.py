import itertools
import json
import random

import pytest

from equitab import pipeline as pl
from equitab.canon import HashRecord
from equitab.corpus import ORDER_8, ORDER_27
from equitab.tables import CharacterTable, load_tables, read_records, save_tables
from corpus_cache import S3_REFERENCE, fingerprint, table


def _write(tmp_path, specs, name="in.json"):
    p = tmp_path / name
    save_tables([table(s) for s in specs], p)
    return p


def _brute_equivalent(a, b):
    n = a.n
    if n != b.n:
        return False
    for rows in itertools.permutations(range(n)):
        for cols in itertools.permutations(range(n)):
            if all(a.entries[i][j] == b.entries[rows[i]][cols[j]] for i in range(n) for j in range(n)):
                return True
    return False


# -- sharding ---------------------------------------------------------------------------

TEN = ["cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4", "abelian:2,2", "cyclic:5", "cyclic:6",
       "sym:3", "cyclic:7", "dihedral:8"]


def test_shard_round_robin(tmp_path):
    src = _write(tmp_path, TEN)
    m = pl.shard(src, 3, tmp_path / "s")
    assert [s["count"] for s in m.shards] == [4, 3, 3]
    ids = [[t.id for t in load_tables(tmp_path / "s" / s["file"])] for s in m.shards]
    assert ids[0] == [TEN[0], TEN[3], TEN[6], TEN[9]]
    assert sorted(sum(ids, [])) == sorted(TEN)
    doc = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert set(doc) == {"run", "shards"}
    assert all(set(s) == {"id", "file", "count"} for s in doc["shards"])
    assert len({s["id"] for s in doc["shards"]}) == 3


def test_shard_k1_identical(tmp_path):
    src = _write(tmp_path, TEN)
    m = pl.shard(src, 1, tmp_path / "s")
    assert read_records(tmp_path / "s" / m.shards[0]["file"]) == read_records(src)


def test_shard_more_than_tables(tmp_path):
    src = _write(tmp_path, ["sym:3", "cyclic:2"])
    m = pl.shard(src, 5, tmp_path / "s")
    assert [s["count"] for s in m.shards] == [1, 1, 0, 0, 0]
    assert load_tables(tmp_path / "s" / m.shards[4]["file"]) == []


def test_shard_rejects_k0(tmp_path):
    with pytest.raises(pl.PipelineError):
        pl.shard(_write(tmp_path, ["cyclic:2"]), 0, tmp_path / "s")


# -- hashing ----------------------------------------------------------------------------

def test_hash_worker_records(tmp_path):
    src = _write(tmp_path, ["sym:3", "cyclic:6"])
    out = tmp_path / "h"
    assert pl.hash_worker(src, out) == 2
    lines = out.read_text().splitlines()
    parts = [ln.split("\t") for ln in lines]
    assert [(p[0], p[1], p[2]) for p in parts] == [("sym:3", "6", "3"), ("cyclic:6", "6", "6")]
    assert parts[0][3] == fingerprint("sym:3").digest


def test_hash_worker_empty(tmp_path):
    src = tmp_path / "e.json"
    save_tables([], src)
    pl.hash_worker(src, tmp_path / "h")
    assert (tmp_path / "h").read_text() == ""


def test_hash_worker_bad_record(tmp_path):
    src = tmp_path / "b.json"
    good = json.loads((_write(tmp_path, ["sym:3", "cyclic:3"])).read_text())["tables"]
    bad = {"id": "broken", "n": 2, "entries": [["1", "1"], ["1", "E("]]}
    src.write_text(json.dumps({"tables": [good[0], bad, good[1]]}))
    pl.hash_worker(src, tmp_path / "h")
    lines = (tmp_path / "h").read_text().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("ERR\tbroken\t")
    assert lines[0].startswith("sym:3\t") and lines[2].startswith("cyclic:3\t")
    recs, errs = pl.read_hash_file(tmp_path / "h")
    assert [r.id for r in recs] == ["sym:3", "cyclic:3"]
    assert errs[0].id == "broken"


def test_hash_manifest_pool(tmp_path):
    src = _write(tmp_path, TEN)
    pl.shard(src, 3, tmp_path / "s")
    outs = pl.hash_manifest(tmp_path / "s" / "manifest.json", jobs=2)
    assert len(outs) == 3
    ids = sorted(r.id for o in outs for r in pl.read_hash_file(o)[0])
    assert ids == sorted(TEN)


# -- merging ----------------------------------------------------------------------------

def _h(id_, order, n, d):
    return HashRecord(id_, order, n, d * 32)


def test_merge_order_8():
    classes = pl.merge_records(fingerprint(s) for s in ORDER_8)
    assert len(classes) == 4
    pair = [c for c in classes if len(c.members) == 2]
    assert len(pair) == 1
    assert pair[0].members == ("dicyclic:8", "dihedral:8")
    assert pair[0].representative == "dicyclic:8"
    assert all(c.status == pl.UNVERIFIED for c in classes)


def test_merge_rules():
    (only,) = pl.merge_records([_h("a", 4, 4, "a")])
    assert only.members == ("a",)
    split = pl.merge_records([_h("a", 4, 4, "a"), _h("b", 8, 4, "a")])
    assert len(split) == 2
    with pytest.raises(pl.PipelineError):
        pl.merge_records([_h("a", 4, 4, "a"), _h("a", 4, 4, "b")])


def test_merge_files(tmp_path):
    f1, f2 = tmp_path / "1.hashes", tmp_path / "2.hashes"
    f1.write_text("b\t4\t4\t" + "a" * 32 + "\nERR\tx\tbroken\n")
    f2.write_text("a\t4\t4\t" + "a" * 32 + "\n")
    (c,) = pl.merge([f1, f2])
    assert c.members == ("a", "b")
    f2.write_text("a\t4\tfour\t" + "a" * 32 + "\n")
    with pytest.raises(pl.PipelineError):
        pl.merge([f1, f2])
    f2.write_text("a\t4\t4\n")
    with pytest.raises(pl.PipelineError):
        pl.merge([f2])


def test_partition_round_trip(tmp_path):
    classes = pl.merge_records(fingerprint(s) for s in ORDER_8)
    p = tmp_path / "p.json"
    p.write_text(pl.dump_partition(classes))
    assert pl.load_partition(p) == classes
    doc = json.loads(p.read_text())
    doc[0]["representative"] = "zzz"
    p.write_text(json.dumps(doc))
    with pytest.raises(pl.PipelineError):
        pl.load_partition(p)


def test_class_invariants():
    with pytest.raises(pl.PipelineError):
        pl.EquitabularClass(1, 1, "0" * 32, ())
    with pytest.raises(pl.PipelineError):
        pl.EquitabularClass(1, 1, "0" * 32, ("a",), pl.COLLISION)


# -- verification -----------------------------------------------------------------------

def test_verify_examples():
    assert pl.verify_isomorphic(table("dihedral:8"), table("dicyclic:8")) is not None
    assert pl.verify_isomorphic(table("cyclic:4"), table("abelian:2,2")) is None
    assert pl.verify_isomorphic(table("cyclic:4"), table("sym:3")) is None


def test_verify_random_permutation_witness():
    s3 = CharacterTable("S", S3_REFERENCE)
    rng = random.Random(4)
    for _ in range(20):
        rows, cols = [0, 1, 2], [0, 1, 2]
        rng.shuffle(rows)
        rng.shuffle(cols)
        u = s3.permuted(rows, cols)
        phi, psi = pl.verify_isomorphic(s3, u)
        assert all(s3.entries[i][j] == u.entries[phi[i]][psi[j]] for i in range(3) for j in range(3))


def test_verify_equal_multisets_but_inequivalent():
    # 8-cycle versus two 4-cycles as 0/1 incidence matrices
    cyc8 = CharacterTable("a", [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    two4 = CharacterTable("b", [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]])
    assert pl.verify_isomorphic(cyc8, two4) is None


def test_verify_agrees_with_exhaustive_search():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(2, 5)
        a = CharacterTable("a", [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
        if rng.random() < 0.5:
            rows, cols = list(range(n)), list(range(n))
            rng.shuffle(rows)
            rng.shuffle(cols)
            b = a.permuted(rows, cols)
            i, j = rng.randrange(n), rng.randrange(n)
            k, l = rng.randrange(n), rng.randrange(n)
            m = [list(r) for r in b.entries]
            m[i][j], m[k][l] = m[k][l], m[i][j]
            b = CharacterTable("b", m)
        else:
            b = CharacterTable("b", [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
        assert (pl.verify_isomorphic(a, b) is not None) == _brute_equivalent(a, b)


def test_verify_class_outcomes():
    tables = {s: table(s) for s in ORDER_8}
    (pair,) = [c for c in pl.merge_records(fingerprint(s) for s in ORDER_8) if len(c.members) == 2]
    assert pl.verify_class(pair, tables).status == pl.VERIFIED
    single = pl.EquitabularClass(8, 8, "0" * 32, ("cyclic:8",))
    assert pl.verify_class(single, tables).status == pl.VERIFIED
    forged = pl.EquitabularClass(8, 5, "0" * 32, ("abelian:2,2,2", "dihedral:8"))
    out = pl.verify_class(forged, tables)
    assert out.status == pl.COLLISION
    assert out.witness == ("abelian:2,2,2", "dihedral:8")
    with pytest.raises(pl.PipelineError):
        pl.verify_class(pl.EquitabularClass(1, 1, "0" * 32, ("nope",)), tables)


# -- stats ------------------------------------------------------------------------------

def _partition(specs):
    tables = {s: table(s) for s in specs}
    return pl.verify_partition(pl.merge_records(fingerprint(s) for s in specs), tables)


def test_stats_order_8():
    rep = pl.stats(_partition(ORDER_8))
    assert [(r.order, r.groups, r.tables, r.largest_class) for r in rep.rows] == [(8, 5, 4, 2)]
    assert rep.to_tsv() == "order\tgroups\ttables\tlargest_class\n8\t5\t4\t2\n"
    assert rep.collisions == []


def test_stats_order_27():
    rep = pl.stats(_partition(ORDER_27))
    assert [(r.order, r.groups, r.tables, r.largest_class) for r in rep.rows] == [(27, 5, 4, 2)]


def test_stats_empty():
    rep = pl.stats([])
    assert rep.rows == [] and rep.to_tsv() == "order\tgroups\ttables\tlargest_class\n"


def test_stats_sizes_sum_to_groups():
    specs = ORDER_8 + ["sym:3", "cyclic:6"] + ORDER_27
    rep = pl.stats(_partition(specs))
    assert sum(r.groups for r in rep.rows) == len(specs)


def test_shard_independence_small(tmp_path):
    specs = ORDER_8 + ["sym:3", "cyclic:6", "alt:4"]
    src = _write(tmp_path, specs)
    outs = {}
    for k in (1, 2, 4):
        d = tmp_path / f"k{k}"
        pl.shard(src, k, d)
        files = pl.hash_manifest(d / "manifest.json")
        outs[k] = pl.dump_partition(pl.merge(files))
    assert outs[1] == outs[2] == outs[4]
