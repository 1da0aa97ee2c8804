import itertools
import json
import os
import random

import pytest

from protoml.errors import StoreCorrupt, StoreLocked, UnknownNode
from protoml.model import Cell, Notebook, canonical_hash
from protoml.recorder import SnapshotStore, apply_diff, diff_notebooks, summarize
from protoml.recorder.store import tree_to_dict

from .conftest import TickingClock, load_fixture
from .notebook_gen import mutate_notebook, random_notebook


def nb_of(*sources):
    return Notebook(tuple(Cell(f"c{i}", "code", s) for i, s in enumerate(sources)))


@pytest.fixture
def store(tmp_path, clock):
    return SnapshotStore(tmp_path / "repo", clock=clock)


class TestRecord:
    def test_first_record_is_root(self, store):
        snap = store.record(nb_of("a = 1"))
        assert snap.parent_id is None
        assert snap.seq == 0
        assert store.tree().root_id == snap.node_id

    def test_identical_content_dedupes(self, store):
        nb = nb_of("a = 1")
        first = store.record(nb)
        second = store.record(nb)
        assert second.node_id == first.node_id
        assert len(store.snapshots()) == 1

    def test_same_content_different_branch_distinct_nodes(self, store):
        n1, n2 = nb_of("a = 1"), nb_of("a = 2")
        s1 = store.record(n1)
        store.record(n2)
        store.checkout(s1.node_id)
        s3 = store.record(nb_of("a = 3"))
        store.checkout(s3.node_id)
        s4 = store.record(n2)  # same content as seq-1 node, new position
        nodes = store.tree().nodes
        same_content = [n for n in nodes.values() if n.content_hash == canonical_hash(n2).hex]
        assert len(same_content) == 2
        assert len({n.node_id for n in same_content}) == 2

    def test_branch_scenario_two_children_under_root(self, store):
        root = store.record(nb_of("a = 1"))
        store.record(nb_of("a = 1", "b = a"))
        store.checkout(root.node_id)
        store.record(nb_of("a = 1", "c = a * 2"))
        tree = store.tree()
        assert len(tree.children(root.node_id)) == 2

    def test_head_advances(self, store):
        store.record(nb_of("a = 1"))
        s2 = store.record(nb_of("a = 2"))
        assert store.tree().head_id == s2.node_id


class TestCheckout:
    def test_checkout_head_is_identity(self, store):
        nb = nb_of("a = 1")
        snap = store.record(nb)
        assert store.checkout(snap.node_id) == nb
        assert store.tree().head_id == snap.node_id

    def test_round_trip(self, store):
        n1, n2 = nb_of("a = 1"), nb_of("b = 2")
        s1 = store.record(n1)
        store.record(n2)
        assert store.checkout(s1.node_id) == n1

    def test_unknown_node(self, store):
        store.record(nb_of("a = 1"))
        with pytest.raises(UnknownNode):
            store.checkout("f" * 64)

    def test_prefix_resolution(self, store):
        snap = store.record(nb_of("a = 1"))
        assert store.checkout(snap.node_id[:12]) == nb_of("a = 1")

    def test_fixture_round_trip(self, store):
        nb = load_fixture("simple.ipynb")
        snap = store.record(nb)
        assert store.checkout(snap.node_id) == nb


class TestAnnotate:
    def test_write_read(self, store):
        snap = store.record(nb_of("a = 1"))
        store.annotate(snap.node_id, "first try")
        assert store.get(snap.node_id).comment == "first try"

    def test_overwrite(self, store):
        snap = store.record(nb_of("a = 1"))
        store.annotate(snap.node_id, "one")
        store.annotate(snap.node_id, "two")
        assert store.get(snap.node_id).comment == "two"

    def test_unknown(self, store):
        with pytest.raises(UnknownNode):
            store.annotate("e" * 64, "nope")

    def test_comment_outside_hashed_identity(self, store):
        snap = store.record(nb_of("a = 1"))
        annotated = store.annotate(snap.node_id, "note")
        assert annotated.node_id == snap.node_id
        store.validate()


class TestLocking:
    def test_live_lock_blocks_writer(self, tmp_path, clock):
        repo = tmp_path / "repo"
        store = SnapshotStore(repo, clock=clock)
        store.record(nb_of("a = 1"))
        (repo / "lock").write_text(str(os.getpid()))
        with pytest.raises(StoreLocked):
            store.record(nb_of("a = 2"))

    def test_stale_lock_stolen(self, tmp_path, clock):
        repo = tmp_path / "repo"
        store = SnapshotStore(repo, clock=clock)
        repo.mkdir(parents=True, exist_ok=True)
        (repo / "lock").write_text("999999999")
        snap = store.record(nb_of("a = 1"))
        assert snap.seq == 0


class TestCorruption:
    def test_tampered_object_detected(self, tmp_path, clock):
        store = SnapshotStore(tmp_path / "repo", clock=clock)
        snap = store.record(nb_of("a = 1"))
        path = store._object_path(snap.node_id)
        doc = json.loads(path.read_text())
        doc["notebook"]["cells"][0][2] = "tampered"
        path.write_text(json.dumps(doc))
        with pytest.raises(StoreCorrupt):
            store.validate()

    def test_missing_head_object_detected(self, tmp_path, clock):
        store = SnapshotStore(tmp_path / "repo", clock=clock)
        snap = store.record(nb_of("a = 1"))
        store._object_path(snap.node_id).unlink()
        with pytest.raises(StoreCorrupt):
            SnapshotStore(tmp_path / "repo", clock=clock)

    def test_orphan_from_interrupted_record_ignored(self, tmp_path, clock):
        store = SnapshotStore(tmp_path / "repo", clock=clock)
        snap = store.record(nb_of("a = 1"))
        # simulate a crash: object written with seq == next_seq, manifest not updated
        orphan = json.loads(store._object_path(snap.node_id).read_text())
        orphan["header"]["seq"] = 1
        orphan["header"]["node_id"] = "a" * 64
        (store.objects_dir / ("a" * 64 + ".json")).write_text(json.dumps(orphan))
        assert len(store.snapshots()) == 1
        store.validate()


class TestFuzz:
    def test_random_sequences_preserve_invariants(self, tmp_path):
        rng = random.Random(99)
        for trial in range(30):
            store = SnapshotStore(tmp_path / f"fuzz{trial}", clock=TickingClock(), verify=False)
            known = []
            node_count = 0
            for _ in range(rng.randrange(2, 9)):
                op = rng.random()
                if op < 0.6 or not known:
                    snap = store.record(random_notebook(rng))
                    known.append(snap.node_id)
                elif op < 0.85:
                    store.checkout(rng.choice(known))
                else:
                    store.annotate(rng.choice(known), f"note {rng.randrange(10)}")
                assert len(store.snapshots()) >= node_count, "append-only violated"
                node_count = len(store.snapshots())
            store.validate()


class TestDiff:
    def test_reflexive(self):
        nb = load_fixture("simple.ipynb")
        assert diff_notebooks(nb, nb).is_empty

    def test_single_modified(self):
        a = nb_of("a = 1", "b = 2")
        b = Notebook((a.cells[0], Cell("c1", "code", "b = 3")))
        d = diff_notebooks(a, b)
        assert [e.change for e in d.entries] == ["modified"]
        assert d.entries[0].cell_id == "c1"
        assert any(line.startswith("-b = 2") for line in d.entries[0].detail)
        assert apply_diff(a, d) == b

    def test_reorder_only_moves(self):
        a = nb_of("a = 1", "b = 2", "c = 3")
        b = Notebook((a.cells[2], a.cells[0], a.cells[1]))
        d = diff_notebooks(a, b)
        assert {e.change for e in d.entries} == {"moved"}
        assert apply_diff(a, d) == b

    def test_move_count_matches_brute_force_alignment(self):
        """Oracle: optimal minimal move count for a permutation is
        n - (longest common subsequence of old/new orders), brute-forced."""
        base = nb_of("a = 1", "b = 2", "c = 3", "d = 4", "e = 5", "f = 6")
        rng = random.Random(13)
        for _ in range(40):
            perm = list(range(6))
            rng.shuffle(perm)
            b = Notebook(tuple(base.cells[i] for i in perm))
            d = diff_notebooks(base, b)
            moves = sum(1 for e in d.entries if e.change == "moved")
            best_common = 0
            for size in range(6, -1, -1):
                for subset in itertools.combinations(range(6), size):
                    positions = [perm.index(i) for i in subset]
                    if positions == sorted(positions):
                        best_common = size
                        break
                if best_common:
                    break
            assert moves == 6 - best_common
            assert apply_diff(base, d) == b

    def test_added_and_removed(self):
        a = nb_of("a = 1", "b = 2")
        b = Notebook((a.cells[0], Cell("new", "code", "z = 9")))
        d = diff_notebooks(a, b)
        assert {e.change for e in d.entries} == {"added", "removed"}
        assert apply_diff(a, d) == b

    def test_renamed_id_same_content_aligned_by_lcs(self):
        a = nb_of("a = 1", "b = 2")
        b = Notebook((a.cells[0], Cell("renamed", "code", "b = 2")))
        d = diff_notebooks(a, b)
        assert [e.change for e in d.entries] == ["modified"]
        assert apply_diff(a, d) == b

    def test_metadata_and_version_changes(self):
        a = nb_of("a = 1")
        b = Notebook(a.cells, (4, 4), "ab" * 32)
        d = diff_notebooks(a, b)
        assert d.format_version_change == ((4, 5), (4, 4))
        assert d.metadata_digest_change is not None
        assert apply_diff(a, d) == b

    def test_apply_reproduces_random_mutations(self):
        rng = random.Random(31337)
        for _ in range(100)\
                :
            a = random_notebook(rng)
            b = a
            for _ in range(rng.randrange(1, 4)):
                b = mutate_notebook(rng, b)
            d = diff_notebooks(a, b)
            assert apply_diff(a, d) == b

    def test_summarize_counts(self):
        a = nb_of("a = 1", "b = 2")
        b = Notebook((a.cells[0], Cell("new", "code", "z = 9")))
        counts = summarize(diff_notebooks(a, b))
        assert counts["added"] == 1 and counts["removed"] == 1


class TestTreeSerialization:
    def test_tree_to_dict_shape(self, store):
        s1 = store.record(nb_of("a = 1"))
        store.annotate(s1.node_id, "root note")
        store.record(nb_of("a = 2"))
        doc = tree_to_dict(store.tree())
        assert doc["schema"] == "tree/1"
        assert doc["root_id"] == s1.node_id
        assert [n["seq"] for n in doc["nodes"]] == [0, 1]
        assert doc["nodes"][0]["comment"] == "root note"
        assert doc["nodes"][0]["children"] == [doc["nodes"][1]["node_id"]]
