"""Per-venue, per-year ethics index under the learned model and the keyword rule.

Every document is classified twice — model probability thresholded at
0.5, and the keyword baseline — on the same text (title plus abstract
when present, title alone otherwise). Cells count documents per observed
(venue, year) pair; disagreement listings name the documents the two
methods classify differently.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .baseline import KeywordList, keyword_classify, raw_keyword_list
from .corpus import DocumentRecord, LabelValue, available_text


@dataclass(frozen=True)
class DocDecision:
    doc_id: str
    title: str
    venue: str | None
    year: int | None
    model_ethics: bool
    keyword_ethics: bool
    probability: float


@dataclass(frozen=True)
class VenueYearCell:
    venue: str
    year: int
    n_docs: int
    n_ethics_model: int
    n_ethics_keyword: int

    def __post_init__(self) -> None:
        if self.n_ethics_model > self.n_docs or self.n_ethics_keyword > self.n_docs:
            raise ValueError(f"{self.venue}/{self.year}: counts exceed n_docs")


@dataclass(frozen=True)
class IndexReport:
    cells: tuple[VenueYearCell, ...]
    disagreements: tuple[DocDecision, ...]


def classify_corpus(
    docs: Sequence[DocumentRecord],
    model,
    keywords: KeywordList | None = None,
    threshold: float = 0.5,
) -> list[DocDecision]:
    """Model and keyword decisions for every document, in input order."""
    keywords = keywords or raw_keyword_list()
    if not docs:
        return []
    texts = [available_text(d) for d in docs]
    probs = np.asarray(model.predict_proba(texts), dtype=float)
    return [
        DocDecision(
            doc_id=doc.id,
            title=doc.title,
            venue=doc.venue,
            year=doc.year,
            model_ethics=bool(p >= threshold),
            keyword_ethics=keyword_classify(text, keywords) is LabelValue.ETHICS,
            probability=float(p),
        )
        for doc, text, p in zip(docs, texts, probs)
    ]


def aggregate_index(decisions: Sequence[DocDecision]) -> IndexReport:
    """Fold decisions into one cell per observed (venue, year) pair."""
    cells: dict[tuple[str, int], list[int]] = {}
    for d in decisions:
        if d.venue is None or d.year is None:
            raise ValueError(f"document {d.doc_id!r} is missing venue or year")
        counts = cells.setdefault((d.venue, d.year), [0, 0, 0])
        counts[0] += 1
        counts[1] += int(d.model_ethics)
        counts[2] += int(d.keyword_ethics)
    report_cells = tuple(
        VenueYearCell(venue, year, n, m, k)
        for (venue, year), (n, m, k) in sorted(cells.items())
    )
    disagreements = tuple(
        d for d in decisions if d.model_ethics != d.keyword_ethics
    )
    return IndexReport(cells=report_cells, disagreements=disagreements)


def _decision_word(flag: bool) -> str:
    return "ethics" if flag else "not_ethics"


def export_report(
    report: IndexReport,
    cells_path: str | Path,
    disagreements_path: str | Path,
) -> None:
    """Write the cells and disagreements CSVs, sorted by (venue, year, id)."""
    cells_buf = io.StringIO()
    writer = csv.writer(cells_buf, lineterminator="\n")
    writer.writerow(
        [
            "venue",
            "year",
            "n_docs",
            "n_ethics_model",
            "n_ethics_keyword",
            "prop_model",
            "prop_keyword",
        ]
    )
    for cell in sorted(report.cells, key=lambda c: (c.venue, c.year)):
        writer.writerow(
            [
                cell.venue,
                cell.year,
                cell.n_docs,
                cell.n_ethics_model,
                cell.n_ethics_keyword,
                f"{cell.n_ethics_model / cell.n_docs:.4f}",
                f"{cell.n_ethics_keyword / cell.n_docs:.4f}",
            ]
        )
    Path(cells_path).write_text(cells_buf.getvalue(), encoding="utf-8")

    dis_buf = io.StringIO()
    writer = csv.writer(dis_buf, lineterminator="\n")
    writer.writerow(["id", "title", "model_decision", "keyword_decision"])
    ordered = sorted(
        report.disagreements,
        key=lambda d: (d.venue or "", d.year or 0, d.doc_id),
    )
    for d in ordered:
        writer.writerow(
            [d.doc_id, d.title, _decision_word(d.model_ethics), _decision_word(d.keyword_ethics)]
        )
    Path(disagreements_path).write_text(dis_buf.getvalue(), encoding="utf-8")


def _slug(venue: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in venue.lower()).strip("-") or "venue"


def _polyline(points: list[tuple[float, float]]) -> str:
    return " ".join(f"{x:.1f},{y:.1f}" for x, y in points)


def venue_plot_svg(venue: str, cells: Sequence[VenueYearCell]) -> str:
    """Standalone SVG line chart: ethics counts per year, model vs keyword."""
    width, height, margin = 640, 360, 50
    ordered = sorted(cells, key=lambda c: c.year)
    years = [c.year for c in ordered]
    top = max(
        1, max(max(c.n_ethics_model, c.n_ethics_keyword) for c in ordered)
    )
    x_span = max(1, years[-1] - years[0])

    def sx(year: int) -> float:
        return margin + (year - years[0]) / x_span * (width - 2 * margin)

    def sy(count: int) -> float:
        return height - margin - count / top * (height - 2 * margin)

    model_pts = [(sx(c.year), sy(c.n_ethics_model)) for c in ordered]
    keyword_pts = [(sx(c.year), sy(c.n_ethics_keyword)) for c in ordered]
    ticks = []
    for c in ordered:
        ticks.append(
            f'<text x="{sx(c.year):.1f}" y="{height - margin + 18}" '
            f'font-size="11" text-anchor="middle">{c.year}</text>'
        )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" font-size="15" text-anchor="middle">'
        f"{venue}: ethics-classified papers per year</text>",
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{margin - 8}" y="{sy(top) + 4:.1f}" font-size="11" '
        f'text-anchor="end">{top}</text>',
        f'<text x="{margin - 8}" y="{height - margin + 4}" font-size="11" '
        f'text-anchor="end">0</text>',
        f'<polyline points="{_polyline(model_pts)}" fill="none" stroke="#1f77b4" '
        f'stroke-width="2"/>',
        f'<polyline points="{_polyline(keyword_pts)}" fill="none" stroke="#d62728" '
        f'stroke-width="2" stroke-dasharray="6 3"/>',
        f'<text x="{width - margin}" y="{margin}" font-size="12" text-anchor="end" '
        f'fill="#1f77b4">model</text>',
        f'<text x="{width - margin}" y="{margin + 16}" font-size="12" text-anchor="end" '
        f'fill="#d62728">keyword</text>',
        *ticks,
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def write_venue_plots(report: IndexReport, directory: str | Path) -> list[Path]:
    """One SVG per venue; returns the written paths in venue order."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    by_venue: dict[str, list[VenueYearCell]] = {}
    for cell in report.cells:
        by_venue.setdefault(cell.venue, []).append(cell)
    written = []
    for venue in sorted(by_venue):
        path = directory / f"{_slug(venue)}.svg"
        path.write_text(venue_plot_svg(venue, by_venue[venue]), encoding="utf-8")
        written.append(path)
    return written
