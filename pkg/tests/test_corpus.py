import json

import pytest
from hypothesis import given, strategies as st

from ethicsindex.corpus import (
    AnnotationVote,
    CategoryFilter,
    DocumentRecord,
    LabeledExample,
    LabelValue,
    ParseError,
    Provenance,
    ValidationError,
    dataset_from_jsonl,
    dataset_to_jsonl,
    filter_candidates,
    load_dataset,
    majority_vote,
    parse_metadata,
    provenance_counts,
    save_dataset,
)


def _line(**kw):
    base = {"id": "1901.00001", "title": "T", "abstract": "A", "categories": ["cs.AI"]}
    base.update(kw)
    return json.dumps(base)


class TestParseMetadata:
    def test_identity_parse(self):
        docs = parse_metadata([_line()])
        assert len(docs) == 1
        doc = docs[0]
        assert doc.id == "1901.00001"
        assert doc.title == "T"
        assert doc.abstract == "A"
        assert doc.categories == ("cs.AI",)

    def test_empty_stream(self):
        assert parse_metadata([]) == []

    def test_duplicate_id_names_both_lines(self):
        lines = [_line(id="x"), _line(id="x", title="other")]
        with pytest.raises(ParseError) as err:
            parse_metadata(lines)
        assert "lines 1 and 2" in str(err.value)

    def test_malformed_line_reported_and_skipped(self):
        issues = []
        docs = parse_metadata(["{not json", _line()], issues=issues)
        assert len(docs) == 1
        assert issues and issues[0][0] == 1

    def test_empty_title_skipped_with_warning(self):
        issues = []
        docs = parse_metadata([_line(title="")], issues=issues)
        assert docs == []
        assert issues[0][0] == 1 and "title" in issues[0][1]

    def test_optional_fields(self):
        docs = parse_metadata([_line(venue="AAAI", year=2000)])
        assert docs[0].venue == "AAAI"
        assert docs[0].year == 2000


class TestCategoryFilter:
    def test_both_tags_kept(self):
        docs = [DocumentRecord("a", "t", categories=("cs.CY", "cs.LG"))]
        assert filter_candidates(docs) == docs

    def test_ethics_only_dropped(self):
        docs = [DocumentRecord("a", "t", categories=("cs.CY",))]
        assert filter_candidates(docs) == []

    def test_ai_only_dropped(self):
        docs = [DocumentRecord("a", "t", categories=("cs.AI", "cs.CV"))]
        assert filter_candidates(docs) == []

    def test_substring_and_case_insensitive(self):
        docs = [
            DocumentRecord(
                "a", "t", categories=("Computers and Society (cs.CY)", "stat.ml")
            )
        ]
        assert len(filter_candidates(docs)) == 1

    def test_order_preserved_and_idempotent(self):
        docs = [
            DocumentRecord("a", "t", categories=("cs.CY", "cs.AI")),
            DocumentRecord("b", "t", categories=("cs.NI",)),
            DocumentRecord("c", "t", categories=("cs.cy", "Machine Learning")),
        ]
        once = filter_candidates(docs)
        assert [d.id for d in once] == ["a", "c"]
        assert filter_candidates(once) == once

    def test_empty_term_sets_rejected(self):
        with pytest.raises(ValidationError):
            CategoryFilter(ethics_tags=())


def _vote(annotator, value, ts="2021-01-01T00:00:00+00:00"):
    return AnnotationVote(annotator, value, ts)


class TestMajorityVote:
    def test_two_of_three_ethics(self):
        votes = [
            _vote("a", LabelValue.ETHICS),
            _vote("b", LabelValue.ETHICS),
            _vote("c", LabelValue.NOT_ETHICS),
        ]
        assert majority_vote(votes) is LabelValue.ETHICS

    def test_two_of_three_not_ethics(self):
        votes = [
            _vote("a", LabelValue.NOT_ETHICS),
            _vote("b", LabelValue.NOT_ETHICS),
            _vote("c", LabelValue.ETHICS),
        ]
        assert majority_vote(votes) is LabelValue.NOT_ETHICS

    def test_tie_unresolved(self):
        votes = [_vote("a", LabelValue.ETHICS), _vote("b", LabelValue.NOT_ETHICS)]
        assert majority_vote(votes) is None

    def test_empty_votes_error(self):
        with pytest.raises(ValueError):
            majority_vote([])

    def test_duplicate_annotator_error(self):
        votes = [_vote("a", LabelValue.ETHICS), _vote("a", LabelValue.ETHICS)]
        with pytest.raises(ValueError):
            majority_vote(votes)


def _human(doc_id="h1", label=LabelValue.ETHICS):
    other = (
        LabelValue.NOT_ETHICS if label is LabelValue.ETHICS else LabelValue.ETHICS
    )
    return LabeledExample(
        doc=DocumentRecord(doc_id, "Human doc", "abs", ("cs.AI", "cs.CY")),
        label=label,
        provenance=Provenance.HUMAN,
        votes=(_vote("a", label), _vote("b", label), _vote("c", other)),
    )


def _machine(doc_id="m1", p=0.75):
    return LabeledExample(
        doc=DocumentRecord(doc_id, "Machine doc", "", ("cs.LG",), venue="X", year=2001),
        label=LabelValue.ETHICS if p >= 0.5 else LabelValue.NOT_ETHICS,
        provenance=Provenance.MACHINE,
        machine_probability=p,
    )


def _unlabeled(doc_id="u1"):
    return LabeledExample(doc=DocumentRecord(doc_id, "Open doc"))


class TestDatasetPersistence:
    def test_roundtrip_identity(self, tmp_path):
        ds = [_human(), _machine(), _unlabeled()]
        path = tmp_path / "ds.jsonl"
        save_dataset(ds, path)
        assert load_dataset(path) == ds

    def test_machine_without_probability_rejected(self):
        line = json.dumps(
            {
                "id": "m",
                "title": "t",
                "label": "ethics",
                "provenance": "machine",
                "machine_probability": None,
            }
        )
        with pytest.raises(ValidationError) as err:
            dataset_from_jsonl([line])
        assert "line 1" in str(err.value)

    def test_empty_dataset_roundtrip(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        save_dataset([], path)
        assert path.read_text() == ""
        assert load_dataset(path) == []

    def test_corpus_records_load_as_unlabeled(self):
        ds = dataset_from_jsonl([_line()])
        assert ds[0].provenance is Provenance.UNLABELED
        assert ds[0].label is None

    def test_human_label_must_match_majority(self):
        with pytest.raises(ValidationError):
            LabeledExample(
                doc=DocumentRecord("x", "t"),
                label=LabelValue.ETHICS,
                provenance=Provenance.HUMAN,
                votes=(_vote("a", LabelValue.NOT_ETHICS),),
            )

    def test_unlabeled_with_label_rejected(self):
        with pytest.raises(ValidationError):
            LabeledExample(
                doc=DocumentRecord("x", "t"),
                label=LabelValue.ETHICS,
                provenance=Provenance.UNLABELED,
            )

    def test_probability_saved_to_six_decimals(self):
        ds = [_machine(p=0.123456789)]
        text = dataset_to_jsonl(ds)
        assert '"machine_probability": 0.123457' in text

    def test_provenance_counts_sum(self):
        ds = [_human(), _machine(), _unlabeled(), _unlabeled("u2")]
        counts = provenance_counts(ds)
        assert counts == {"human": 1, "machine": 1, "unlabeled": 2}
        assert sum(counts.values()) == len(ds)


@given(
    st.lists(
        st.tuples(st.booleans(), st.floats(min_value=0, max_value=1)),
        min_size=0,
        max_size=8,
    )
)
def test_roundtrip_property(rows):
    ds = []
    for i, (ethics, p) in enumerate(rows):
        p6 = round(p, 6)
        ds.append(
            LabeledExample(
                doc=DocumentRecord(f"d{i}", f"title {i}", f"abs {i}", ("cs.AI",)),
                label=LabelValue.ETHICS if p6 >= 0.5 else LabelValue.NOT_ETHICS,
                provenance=Provenance.MACHINE,
                machine_probability=p6,
            )
            if ethics
            else LabeledExample(doc=DocumentRecord(f"d{i}", f"title {i}"))
        )
    assert dataset_from_jsonl(dataset_to_jsonl(ds)) == ds
