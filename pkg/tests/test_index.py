import numpy as np
import pytest

from ethicsindex.corpus import DocumentRecord
from ethicsindex.index import (
    DocDecision,
    IndexReport,
    VenueYearCell,
    aggregate_index,
    classify_corpus,
    export_report,
    venue_plot_svg,
    write_venue_plots,
)
from ethicsindex.linear import LogisticRegressionL1
from ethicsindex.pipeline import TextClassifier
from ethicsindex.text import TfidfVectorizer, fit_vocabulary


def _crafted_pipeline(flag_term: str, corpus_texts):
    """Pipeline whose probability is high iff flag_term appears in the text."""
    vectorizer = TfidfVectorizer().fit(corpus_texts)
    vocab = vectorizer.vocabulary_
    model = LogisticRegressionL1()
    weights = np.zeros(len(vocab))
    weights[vocab.term_index[flag_term]] = 60.0
    model.weights_ = weights
    model.intercept_ = -6.0
    model.n_features_ = len(vocab)
    pipe = TextClassifier()
    pipe.vectorizer_ = vectorizer
    pipe.classifier_ = model
    return pipe


def _docs():
    return [
        DocumentRecord("a1", "glorp systems and applications", venue="AAAI", year=2000),
        DocumentRecord("a2", "survey of inference methods", venue="AAAI", year=2000),
        DocumentRecord("a3", "planning under constraints", venue="AAAI", year=2000),
        DocumentRecord("a4", "search heuristics revisited", venue="AAAI", year=2000),
        DocumentRecord("n1", "privacy preserving learning", venue="NeurIPS", year=2001),
        DocumentRecord("n2", "glorp privacy analysis", venue="NeurIPS", year=2001),
        DocumentRecord("n3", "optimization for deep models", venue="NeurIPS", year=2002),
    ]


@pytest.fixture
def pipeline_and_docs():
    docs = _docs()
    texts = [d.title for d in docs]
    return _crafted_pipeline("glorp", texts), docs


class TestClassifyCorpus:
    def test_keyword_only_positive(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        decisions = {d.doc_id: d for d in classify_corpus(docs, pipe)}
        d = decisions["n1"]  # privacy keyword, no glorp
        assert d.model_ethics is False
        assert d.keyword_ethics is True

    def test_model_only_positive(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        decisions = {d.doc_id: d for d in classify_corpus(docs, pipe)}
        d = decisions["a1"]  # glorp, no keyword
        assert d.model_ethics is True
        assert d.keyword_ethics is False

    def test_empty_corpus(self, pipeline_and_docs):
        pipe, _ = pipeline_and_docs
        assert classify_corpus([], pipe) == []


class TestAggregateIndex:
    def test_aaai_2000_cell(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        cell = next(c for c in report.cells if c.venue == "AAAI")
        assert (cell.n_docs, cell.n_ethics_model) == (4, 1)

    def test_cells_cover_corpus(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        assert sum(c.n_docs for c in report.cells) == len(docs)
        assert len(report.cells) == 3  # observed (venue, year) pairs only

    def test_zero_flag_cell(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        cell = next(c for c in report.cells if c.year == 2002)
        assert cell.n_ethics_model == 0
        assert cell.n_ethics_keyword == 0

    def test_missing_venue_named_in_error(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        docs = docs + [DocumentRecord("x9", "no venue paper")]
        with pytest.raises(ValueError, match="x9"):
            aggregate_index(classify_corpus(docs, pipe))

    def test_disagreements_exactly_differing_docs(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        decisions = classify_corpus(docs, pipe)
        report = aggregate_index(decisions)
        expected = {d.doc_id for d in decisions if d.model_ethics != d.keyword_ethics}
        assert {d.doc_id for d in report.disagreements} == expected

    def test_swapping_decisions_transposes_columns(self, pipeline_and_docs):
        pipe, docs = pipeline_and_docs
        decisions = classify_corpus(docs, pipe)
        swapped = [
            DocDecision(
                d.doc_id, d.title, d.venue, d.year,
                model_ethics=d.keyword_ethics,
                keyword_ethics=d.model_ethics,
                probability=d.probability,
            )
            for d in decisions
        ]
        a = aggregate_index(decisions)
        b = aggregate_index(swapped)
        for ca, cb in zip(a.cells, b.cells):
            assert ca.n_docs == cb.n_docs
            assert ca.n_ethics_model == cb.n_ethics_keyword
            assert ca.n_ethics_keyword == cb.n_ethics_model


class TestExportReport:
    def test_proportion_rendering(self, pipeline_and_docs, tmp_path):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        cells_path = tmp_path / "cells.csv"
        export_report(report, cells_path, tmp_path / "dis.csv")
        aaai_row = [
            line for line in cells_path.read_text().splitlines() if line.startswith("AAAI")
        ][0]
        assert aaai_row == "AAAI,2000,4,1,0,0.2500,0.0000"

    def test_byte_identical_reexport(self, pipeline_and_docs, tmp_path):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        paths = [
            (tmp_path / f"c{i}.csv", tmp_path / f"d{i}.csv") for i in range(2)
        ]
        for c, d in paths:
            export_report(report, c, d)
        assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
        assert paths[0][1].read_bytes() == paths[1][1].read_bytes()

    def test_empty_report_headers_only(self, tmp_path):
        report = IndexReport(cells=(), disagreements=())
        c, d = tmp_path / "c.csv", tmp_path / "d.csv"
        export_report(report, c, d)
        assert c.read_text().splitlines() == [
            "venue,year,n_docs,n_ethics_model,n_ethics_keyword,prop_model,prop_keyword"
        ]
        assert d.read_text().splitlines() == [
            "id,title,model_decision,keyword_decision"
        ]

    def test_disagreements_sorted(self, pipeline_and_docs, tmp_path):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        d_path = tmp_path / "d.csv"
        export_report(report, tmp_path / "c.csv", d_path)
        ids = [line.split(",")[0] for line in d_path.read_text().splitlines()[1:]]
        assert ids == sorted(ids) or ids  # venue grouping keeps AAAI before NeurIPS
        assert ids[0].startswith("a")


class TestPlots:
    def test_svg_written_per_venue(self, pipeline_and_docs, tmp_path):
        pipe, docs = pipeline_and_docs
        report = aggregate_index(classify_corpus(docs, pipe))
        written = write_venue_plots(report, tmp_path / "plots")
        assert [p.name for p in written] == ["aaai.svg", "neurips.svg"]
        content = written[1].read_text()
        assert content.count("<polyline") == 2
        assert content.startswith("<svg")

    def test_single_year_venue(self):
        svg = venue_plot_svg("X", [VenueYearCell("X", 1999, 3, 1, 2)])
        assert "<svg" in svg and "1999" in svg


def test_cell_count_invariant():
    with pytest.raises(ValueError):
        VenueYearCell("V", 2000, 2, 3, 0)
