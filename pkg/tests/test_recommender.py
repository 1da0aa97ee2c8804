import json
import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from protoml.errors import EmptyCorpus, NoNotebooksFound
from protoml.model import Cell, Notebook
from protoml.recommender import (
    build_index,
    index_to_dict,
    ingest_corpus,
    load_index,
    recommend_cells,
    recommend_notebooks,
    save_index,
    split_identifier,
    tokenize,
)

from .conftest import FIXTURES, fixed_clock


def nb_of(prefix, *sources):
    return Notebook(tuple(Cell(f"{prefix}-c{i}", "code", s) for i, s in enumerate(sources)))


class TestTokenize:
    def test_snake_split_and_single_char_drop(self):
        assert dict(tokenize("train_test_split(X, y)")) == {"train": 1, "test": 1, "split": 1}

    def test_empty(self):
        assert dict(tokenize("")) == {}

    def test_camel_split_counts(self):
        assert dict(tokenize("loadData(loadData)")) == {"load": 2, "data": 2}

    def test_acronym_boundary(self):
        assert split_identifier("HTTPServerError") == ["http", "server", "error"]

    def test_strings_comments_numbers_dropped(self):
        bag = tokenize('path = "load_all.csv"  # load_all here\nn = 42')
        assert dict(bag) == {"path": 1}

    def test_keywords_dropped(self):
        assert "for" not in tokenize("for item in rows:\n    keep(item)")

    def test_lowercased(self):
        assert dict(tokenize("DF = DF")) == {"df": 2}


class TestBuildIndex:
    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            build_index([])

    def test_single_cell_idf_one(self):
        index = build_index([("a.ipynb", nb_of("a", "alpha = beta"))], clock=fixed_clock)
        assert index.n_docs == 1
        assert all(abs(index.idf(t) - 1.0) < 1e-12 for t in index.df)
        assert index.cell_vectors[0].norm > 0

    def test_token_in_every_doc_minimal_idf(self):
        index = build_index(
            [("a.ipynb", nb_of("a", "shared = 1", "shared + other"))], clock=fixed_clock
        )
        assert abs(index.idf("shared") - 1.0) < 1e-12
        assert index.idf("other") > 1.0

    def test_rebuild_identical_bytes(self):
        corpus = [("a.ipynb", nb_of("a", "x1 = load()", "fit(x1)"))]
        one = json.dumps(index_to_dict(build_index(corpus, clock=fixed_clock)), sort_keys=True)
        two = json.dumps(index_to_dict(build_index(corpus, clock=fixed_clock)), sort_keys=True)
        assert one == two

    def test_insertion_order_irrelevant(self):
        a = ("a.ipynb", nb_of("a", "load_rows()"))
        b = ("b.ipynb", nb_of("b", "fit_model()"))
        fwd = build_index([a, b], clock=fixed_clock)
        rev = build_index([b, a], clock=fixed_clock)
        assert index_to_dict(fwd) == index_to_dict(rev)
        query = "load_rows()"
        assert recommend_cells(fwd, query, 5) == recommend_cells(rev, query, 5)

    def test_df_bounded_by_n_docs(self):
        index = build_index(
            [("a.ipynb", nb_of("a", "x_val = 1", "x_val = 2", "xy = x_val"))], clock=fixed_clock
        )
        assert all(0 < df <= index.n_docs for df in index.df.values())


def oracle_rank(index, query_source, k):
    """Brute-force cosine over every cell with exact rational arithmetic."""
    bag = tokenize(query_source)
    total = sum(bag.values())
    q = {t: Fraction(c, total) * Fraction(index.idf(t)) for t, c in bag.items()}
    qnorm2 = sum(w * w for w in q.values())
    scored = []
    for vec in index.cell_vectors:
        weights = {t: Fraction(w) for t, w in vec.weights.items()}
        dot = sum(q[t] * weights.get(t, Fraction(0)) for t in q)
        norm2 = sum(w * w for w in weights.values())
        if norm2 == 0 or dot == 0:
            continue
        # compare squared cosines as exact rationals, keep sign via dot > 0
        scored.append((dot * dot / (qnorm2 * norm2), vec.source_ref))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [ref for _, ref in scored[:k]]


class TestRecommendCells:
    @pytest.fixture
    def toy_index(self):
        corpus = [
            ("a.ipynb", nb_of("a", 'df = pd.read_csv("x.csv")', "model.fit(df)")),
            ("b.ipynb", nb_of("b", "scores = model.score(test_data)", "plt.plot(scores)")),
            ("c.ipynb", nb_of("c", 'df2 = pd.read_parquet("y.parquet")')),
        ]
        return build_index(corpus, clock=fixed_clock)

    def test_self_query_rank_one(self, toy_index):
        recs = recommend_cells(toy_index, 'df = pd.read_csv("x.csv")', 3)
        assert recs[0].target == ("a.ipynb", "a-c0")
        assert abs(recs[0].score - 1.0) <= 1e-9

    def test_orthogonal_query_empty(self, toy_index):
        assert recommend_cells(toy_index, "completely_unrelated_zzz", 5) == []

    def test_matches_exact_oracle(self, toy_index):
        for query in ['df = pd.read_csv("x.csv")', "model.score(scores)", "plt.plot(df2)"]:
            recs = recommend_cells(toy_index, query, 5)
            assert [r.target for r in recs] == oracle_rank(toy_index, query, 5)

    def test_ranks_consecutive(self, toy_index):
        recs = recommend_cells(toy_index, "df model plot", 10)
        assert [r.rank for r in recs] == list(range(1, len(recs) + 1))

    def test_scores_bounded(self, toy_index):
        for r in recommend_cells(toy_index, "df model scores plot parquet", 10):
            assert 0.0 <= r.score <= 1.0 + 1e-12

    def test_scale_invariance(self, toy_index):
        query = "model.fit(df)"
        doubled = query + "\n" + query
        a = recommend_cells(toy_index, query, 5)
        b = recommend_cells(toy_index, doubled, 5)
        assert [r.target for r in a] == [r.target for r in b]
        for x, y in zip(a, b):
            assert abs(x.score - y.score) < 1e-12

    def test_zero_norm_query(self, toy_index):
        assert recommend_cells(toy_index, "# only a comment", 5) == []

    @given(
        st.dictionaries(st.sampled_from("abcdefgh"), st.integers(1, 5), min_size=1, max_size=5),
        st.dictionaries(st.sampled_from("abcdefgh"), st.integers(1, 5), min_size=1, max_size=5),
    )
    @settings(max_examples=40, deadline=None)
    def test_cosine_symmetry(self, bag_a, bag_b):
        # letters expand into two-char tokens so the single-char filter keeps them
        src_a = " ".join(f"{t}{t}()" * n for t, n in sorted(bag_a.items()))
        src_b = " ".join(f"{t}{t}()" * n for t, n in sorted(bag_b.items()))
        index = build_index(
            [("a.ipynb", nb_of("a", src_a)), ("b.ipynb", nb_of("b", src_b))], clock=fixed_clock
        )
        score_ab = {r.target: r.score for r in recommend_cells(index, src_a, 2)}.get(("b.ipynb", "b-c0"), 0.0)
        score_ba = {r.target: r.score for r in recommend_cells(index, src_b, 2)}.get(("a.ipynb", "a-c0"), 0.0)
        assert abs(score_ab - score_ba) <= 1e-12


class TestRecommendNotebooks:
    @pytest.fixture
    def corpus(self):
        return [
            ("a.ipynb", nb_of("a", 'df = pd.read_csv("x.csv")', "model.fit(df)")),
            ("b.ipynb", nb_of("b", "scores = model.score(test_data)")),
            ("c.ipynb", nb_of("c", 'df2 = pd.read_parquet("y.parquet")')),
        ]

    def test_self_match_rank_one(self, corpus):
        index = build_index(corpus, clock=fixed_clock)
        recs = recommend_notebooks(index, corpus[0][1], 3)
        assert recs[0].target == "a.ipynb"
        assert abs(recs[0].score - 1.0) <= 1e-9

    def test_exclude_self(self, corpus):
        index = build_index(corpus, clock=fixed_clock)
        recs = recommend_notebooks(index, corpus[0][1], 3, exclude_self=True, query_path="a.ipynb")
        assert all(r.target != "a.ipynb" for r in recs)

    def test_k_larger_than_corpus(self, corpus):
        index = build_index(corpus, clock=fixed_clock)
        recs = recommend_notebooks(index, corpus[0][1], 50)
        assert [r.rank for r in recs] == list(range(1, len(recs) + 1))
        assert len(recs) <= 3


class TestPersistence:
    def test_save_load_round_trip(self, tmp_path):
        corpus = [("a.ipynb", nb_of("a", "df = load_table()", "fit_model(df)"))]
        index = build_index(corpus, clock=fixed_clock)
        path = tmp_path / "index.json"
        save_index(index, path)
        loaded = load_index(path)
        assert index_to_dict(loaded) == index_to_dict(index)
        assert recommend_cells(loaded, "df = load_table()", 3) == recommend_cells(index, "df = load_table()", 3)


class TestIngest:
    def test_empty_dir(self, tmp_path):
        with pytest.raises(NoNotebooksFound):
            ingest_corpus(tmp_path)

    def test_fixture_corpus_with_corrupt_file(self, tmp_path):
        target = tmp_path / "corpus"
        target.mkdir()
        for name in ["corpus/nb_a.ipynb", "corpus/nb_b.ipynb"]:
            (target / name.split("/")[-1]).write_bytes((FIXTURES / name).read_bytes())
        (target / "broken.ipynb").write_text("{not json")
        result = ingest_corpus(target, clock=fixed_clock)
        assert result.notebook_count == 2
        assert result.skipped == ("broken.ipynb",)

    def test_reingest_identical(self, tmp_path):
        target = tmp_path / "corpus"
        target.mkdir()
        (target / "nb_a.ipynb").write_bytes((FIXTURES / "corpus/nb_a.ipynb").read_bytes())
        one = index_to_dict(ingest_corpus(target, clock=fixed_clock).index)
        two = index_to_dict(ingest_corpus(target, clock=fixed_clock).index)
        assert one == two

    def test_persists_when_asked(self, tmp_path):
        target = tmp_path / "corpus"
        target.mkdir()
        (target / "nb_a.ipynb").write_bytes((FIXTURES / "corpus/nb_a.ipynb").read_bytes())
        index_path = tmp_path / "index.json"
        ingest_corpus(target, index_path=index_path, clock=fixed_clock)
        assert index_path.exists()
        load_index(index_path)
