import json
import random
from fractions import Fraction

import pytest

from protoml.errors import InvalidCatalog
from protoml.model import Cell, Notebook
from protoml.reviewer import (
    Persona,
    default_catalog,
    failed_severities,
    load_catalog,
    persona_scores,
    report_to_dict,
    run_review,
)

from .conftest import load_fixture


def nb_from(cells):
    return Notebook(tuple(cells))


def finding(report, rule_id):
    return next(f for f in report.findings if f.rule_id == rule_id)


GOOD_INTRO = Cell(
    "intro", "markdown", "This notebook predicts churn from usage data using logistic regression."
)


class TestRules:
    def test_desc_passes_ten_words(self):
        report = run_review(nb_from([GOOD_INTRO]))
        assert finding(report, "R-DESC").passed  # oracle: word count == 10

    def test_desc_fails_short_markdown(self):
        report = run_review(nb_from([Cell("m", "markdown", "Too short.")]))
        f = finding(report, "R-DESC")
        assert not f.passed and f.locations == ("m",)

    def test_desc_fails_code_first(self):
        report = run_review(nb_from([Cell("c", "code", "x = 1")]))
        assert not finding(report, "R-DESC").passed

    def test_order_pass_and_fail(self):
        ok = nb_from([Cell("a", "code", "x = 1", 1), Cell("b", "code", "y = x", 4)])
        assert finding(run_review(ok), "R-ORDER").passed
        bad = nb_from([Cell("a", "code", "x = 1", 5), Cell("b", "code", "y = x", 2)])
        f = finding(run_review(bad), "R-ORDER")
        assert not f.passed and f.locations == ("b",)

    def test_order_ignores_unexecuted(self):
        nb = nb_from([Cell("a", "code", "x = 1", 3), Cell("b", "code", "y = x"), Cell("c", "code", "z = y", 4)])
        assert finding(run_review(nb), "R-ORDER").passed

    def test_empty_locations_exact(self):
        nb = nb_from([Cell("a", "code", "x = 1\nprint(x)"), Cell("b", "code", "   "), Cell("c", "code", "")])
        f = finding(run_review(nb), "R-EMPTY")
        assert not f.passed and f.locations == ("b", "c")

    def test_imports_before_modeling(self):
        nb = nb_from([
            Cell("i", "code", "import pandas as pd"),
            Cell("m", "code", "model.fit(pd)"),
        ])
        assert finding(run_review(nb), "R-IMPORTS").passed
        late = nb_from([
            Cell("m", "code", "model.fit(x)"),
            Cell("i", "code", "import pandas"),
        ])
        f = finding(run_review(late), "R-IMPORTS")
        assert not f.passed and f.locations == ("i",)

    def test_imports_vacuous_without_modeling(self):
        nb = nb_from([Cell("i", "code", "import os")])
        assert finding(run_review(nb), "R-IMPORTS").passed

    def test_length_locations_exact(self):
        long_source = "\n".join(f"v{i} = {i}" for i in range(60)) + "\nprint(v0)"
        nb = nb_from([Cell("long", "code", long_source), Cell("ok", "code", "print(1)")])
        f = finding(run_review(nb), "R-LENGTH")
        assert not f.passed and f.locations == ("long",)

    def test_seed_rule(self):
        seeded = load_fixture("seeded.ipynb")
        assert finding(run_review(seeded), "R-SEED").passed
        unseeded = nb_from([Cell("r", "code", "vals = shuffle(population)\nprint(vals)")])
        f = finding(run_review(unseeded), "R-SEED")
        assert not f.passed and f.locations == ("r",)

    def test_seed_random_state_counts(self):
        nb = nb_from([Cell("r", "code", "s = sample(data, random_state=7)\nprint(s)")])
        assert finding(run_review(nb), "R-SEED").passed

    def test_deadvar_flags_unconsumed(self):
        nb = nb_from([Cell("a", "code", "x = 1\ny = 2\nprint(x)")])
        f = finding(run_review(nb), "R-DEADVAR")
        assert not f.passed and f.locations == ("a",) and "y" in f.message

    def test_deadvar_cross_cell_consumption(self):
        nb = nb_from([Cell("a", "code", "x = 1"), Cell("b", "code", "print(x)")])
        assert finding(run_review(nb), "R-DEADVAR").passed

    def test_deadvar_shadowed_definition_is_dead(self):
        nb = nb_from([
            Cell("a", "code", "x = 1"),
            Cell("b", "code", "x = 2"),
            Cell("c", "code", "print(x)"),
        ])
        f = finding(run_review(nb), "R-DEADVAR")
        assert not f.passed and f.locations == ("a",)

    def test_untitled_ratio(self):
        cells = [Cell(f"c{i}", "code", f"v{i} = {i}\nprint(v{i})", i + 1) for i in range(11)]
        f = finding(run_review(nb_from(cells)), "R-UNTITLED")
        assert not f.passed and f.locations == ()
        with_md = nb_from([GOOD_INTRO, Cell("m2", "markdown", "## part two")] + cells)
        assert finding(run_review(with_md), "R-UNTITLED").passed

    def test_passed_findings_have_no_locations(self):
        report = run_review(load_fixture("simple.ipynb"))
        for f in report.findings:
            if f.passed:
                assert f.locations == ()


class TestScores:
    def test_full_pass_scores_100_everywhere(self):
        report = run_review(load_fixture("simple.ipynb"))
        assert all(score == 100.0 for score in report.persona_scores.values())

    def test_uniform_seven_of_eight(self):
        rules, _ = default_catalog()
        uniform = Persona("uniform", "Uniform", {r.rule_id: Fraction(1) for r in rules})
        passed = {r.rule_id: r.rule_id != "R-DESC" for r in rules}
        assert persona_scores(passed, [uniform]) == {"uniform": 87.5}

    def test_single_rule_persona_zero(self):
        only_desc = Persona("od", "Only Desc", {"R-DESC": Fraction(1)})
        assert persona_scores({"R-DESC": False}, [only_desc]) == {"od": 0.0}

    def test_rounding_half_up(self):
        # 1 of 3 equal weights: 33.333... -> 33.3; 5 of 8: 62.5 stays exact
        p = Persona("p", "P", {"a": Fraction(1), "b": Fraction(1), "c": Fraction(1)})
        assert persona_scores({"a": True, "b": False, "c": False}, [p]) == {"p": 33.3}
        q = Persona("q", "Q", {"a": Fraction(1), "b": Fraction(7)})
        assert persona_scores({"a": True, "b": False}, [q]) == {"q": 12.5}

    def test_monotone_under_single_flip(self):
        rules, personas = default_catalog()
        rng = random.Random(8)
        ids = [r.rule_id for r in rules]
        for _ in range(50):
            passed = {rule_id: rng.random() < 0.5 for rule_id in ids}
            failed = [rule_id for rule_id, ok in passed.items() if not ok]
            if not failed:
                continue
            before = persona_scores(passed, personas)
            flipped = dict(passed, **{rng.choice(failed): True})
            after = persona_scores(flipped, personas)
            for pid in before:
                assert after[pid] >= before[pid]

    def test_bounds(self):
        rules, personas = default_catalog()
        rng = random.Random(3)
        ids = [r.rule_id for r in rules]
        for _ in range(50):
            passed = {rule_id: rng.random() < 0.5 for rule_id in ids}
            for score in persona_scores(passed, personas).values():
                assert 0.0 <= score <= 100.0


class TestDeterminism:
    def test_byte_equal_reports(self):
        nb = load_fixture("bad.ipynb")
        rules, personas = default_catalog()
        a = json.dumps(report_to_dict(run_review(nb, rules, personas), rules), sort_keys=True)
        b = json.dumps(report_to_dict(run_review(nb, rules, personas), rules), sort_keys=True)
        assert a == b

    def test_notebook_hash_recorded(self):
        from protoml.model import canonical_hash

        nb = load_fixture("simple.ipynb")
        assert run_review(nb).notebook_hash == canonical_hash(nb).hex


class TestCatalog:
    def test_shipped_catalog_counts(self):
        rules, personas = default_catalog()
        assert len(rules) == 8
        assert {p.persona_id for p in personas} == {
            "developer", "data-scientist", "domain-expert", "business-expert",
        }

    def test_load_catalog_from_file(self, tmp_path):
        from importlib import resources

        text = resources.files("protoml.reviewer").joinpath("data/catalog.json").read_text("utf-8")
        path = tmp_path / "catalog.json"
        path.write_text(text)
        rules, personas = load_catalog(path)
        assert len(rules) == 8 and len(personas) == 4

    def test_empty_file_invalid(self, tmp_path):
        path = tmp_path / "cat.json"
        path.write_text("")
        with pytest.raises(InvalidCatalog):
            load_catalog(path)

    def test_unknown_rule_in_persona(self, tmp_path):
        doc = {
            "schema": "review/1",
            "rules": [{"rule_id": "R-DESC", "severity": "info", "parameters": {}}],
            "personas": [{"persona_id": "p", "weights": {"R-NOPE": 1}}],
        }
        path = tmp_path / "cat.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(InvalidCatalog, match="R-NOPE"):
            load_catalog(path)

    def test_duplicate_rule_ids(self, tmp_path):
        doc = {
            "schema": "review/1",
            "rules": [
                {"rule_id": "R-DESC", "severity": "info"},
                {"rule_id": "R-DESC", "severity": "info"},
            ],
        }
        path = tmp_path / "cat.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(InvalidCatalog, match="duplicate"):
            load_catalog(path)

    def test_zero_weight_persona_invalid(self, tmp_path):
        doc = {
            "schema": "review/1",
            "rules": [{"rule_id": "R-DESC", "severity": "info"}],
            "personas": [{"persona_id": "p", "weights": {"R-DESC": 0}}],
        }
        path = tmp_path / "cat.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(InvalidCatalog, match="positive"):
            load_catalog(path)

    def test_unimplemented_rule_rejected_at_review(self):
        from protoml.reviewer import Rule

        with pytest.raises(InvalidCatalog, match="implementation"):
            run_review(nb_from([GOOD_INTRO]), [Rule("R-CUSTOM", "t", "info", {})], [])

    def test_failed_severities(self):
        rules, personas = default_catalog()
        report = run_review(load_fixture("bad.ipynb"), rules, personas)
        assert "error" in failed_severities(report, rules)
        clean = run_review(load_fixture("simple.ipynb"), rules, personas)
        assert failed_severities(clean, rules) == set()
