"""Paper metadata ingestion, candidate filtering, and the labeled dataset.

The dataset is the pipeline's central artifact: each row is a paper plus
an optional ethics label, and every label records where it came from
(human majority vote or machine propagation) so downstream consumers can
exclude machine-labeled rows if they want to.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

# AI-related category terms matched as case-insensitive substrings of a
# paper's category identifiers (arXiv field names and archive codes).
DEFAULT_AI_TAGS: tuple[str, ...] = (
    "cs.AI",
    "Artificial Intelligence",
    "cs.CL",
    "Computation and Language",
    "cs.CV",
    "Computer Vision",
    "Pattern Recognition",
    "cs.MA",
    "Multiagent Systems",
    "cs.LG",
    "Learning",
    "cs.NE",
    "Neural and Evolutionary Computing",
    "stat.ML",
    "Machine Learning",
)

DEFAULT_ETHICS_TAGS: tuple[str, ...] = ("cs.CY", "Computers and Society")


class ParseError(ValueError):
    """Malformed ingestion input that cannot be skipped."""


class ValidationError(ValueError):
    """A record violates a dataset invariant."""


class LabelValue(str, Enum):
    ETHICS = "ethics"
    NOT_ETHICS = "not_ethics"

    @classmethod
    def from_int(cls, value: int) -> "LabelValue":
        return cls.ETHICS if value else cls.NOT_ETHICS

    def to_int(self) -> int:
        return 1 if self is LabelValue.ETHICS else 0


class Provenance(str, Enum):
    HUMAN = "human"
    MACHINE = "machine"
    UNLABELED = "unlabeled"


@dataclass(frozen=True)
class DocumentRecord:
    """One paper: identifier, title, abstract, category tags, venue/year."""

    id: str
    title: str
    abstract: str = ""
    categories: tuple[str, ...] = ()
    venue: str | None = None
    year: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("document id must be nonempty")
        if not self.title:
            raise ValidationError(f"document {self.id!r} has an empty title")


def available_text(doc: DocumentRecord) -> str:
    """Text a model should see for this paper: title+abstract, or title only."""
    if doc.abstract:
        return f"{doc.title} {doc.abstract}"
    return doc.title


@dataclass(frozen=True)
class CategoryFilter:
    """Keeps papers whose categories hit both an ethics term and an AI term.

    Matching is a case-insensitive substring test against each category
    identifier, so the term "cs.cy" matches the tag "cs.CY" and the term
    "Computer Vision" matches "Computer Vision and Pattern Recognition".
    """

    ethics_tags: tuple[str, ...] = DEFAULT_ETHICS_TAGS
    ai_tags: tuple[str, ...] = DEFAULT_AI_TAGS

    def __post_init__(self) -> None:
        if not self.ethics_tags or not self.ai_tags:
            raise ValidationError("category filter term sets must be nonempty")

    def matches(self, categories: Iterable[str]) -> bool:
        tags = [c.lower() for c in categories]
        ethics = any(t in tag for t in map(str.lower, self.ethics_tags) for tag in tags)
        if not ethics:
            return False
        return any(t in tag for t in map(str.lower, self.ai_tags) for tag in tags)


@dataclass(frozen=True)
class AnnotationVote:
    """One annotator's vote on one document; timestamps are opaque ISO-8601."""

    annotator_id: str
    label: LabelValue
    timestamp: str


def majority_vote(votes: Sequence[AnnotationVote]) -> LabelValue | None:
    """Label held by strictly more than half of annotators, or None on a tie."""
    if not votes:
        raise ValueError("majority_vote requires at least one vote")
    annotators = [v.annotator_id for v in votes]
    if len(set(annotators)) != len(annotators):
        raise ValueError("at most one vote per annotator")
    positive = sum(1 for v in votes if v.label is LabelValue.ETHICS)
    if 2 * positive > len(votes):
        return LabelValue.ETHICS
    if 2 * positive < len(votes):
        return LabelValue.NOT_ETHICS
    return None


@dataclass(frozen=True)
class LabeledExample:
    """A document plus an optional ethics label with provenance."""

    doc: DocumentRecord
    label: LabelValue | None = None
    provenance: Provenance = Provenance.UNLABELED
    votes: tuple[AnnotationVote, ...] = ()
    machine_probability: float | None = None

    def __post_init__(self) -> None:
        doc_id = self.doc.id
        seen = [v.annotator_id for v in self.votes]
        if len(set(seen)) != len(seen):
            raise ValidationError(f"{doc_id}: multiple votes by one annotator")
        if self.provenance is Provenance.HUMAN:
            if not self.votes:
                raise ValidationError(f"{doc_id}: human label without votes")
            if self.label is None or majority_vote(self.votes) is not self.label:
                raise ValidationError(
                    f"{doc_id}: human label must equal the vote majority"
                )
        elif self.provenance is Provenance.MACHINE:
            p = self.machine_probability
            if p is None or not 0.0 <= p <= 1.0:
                raise ValidationError(
                    f"{doc_id}: machine label requires a probability in [0,1]"
                )
            expected = LabelValue.ETHICS if p >= 0.5 else LabelValue.NOT_ETHICS
            if self.label is not expected:
                raise ValidationError(
                    f"{doc_id}: machine label must match its probability"
                )
        else:
            if self.label is not None:
                raise ValidationError(f"{doc_id}: unlabeled row carries a label")


def _coerce_lines(stream: Iterable[str] | IO[str] | str | Path) -> Iterator[str]:
    if isinstance(stream, (str, Path)):
        with open(stream, "r", encoding="utf-8") as fh:
            yield from fh
        return
    yield from stream


def _doc_from_json(obj: dict) -> DocumentRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    doc_id = obj.get("id")
    title = obj.get("title")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing or invalid 'id'")
    if not isinstance(title, str):
        raise ValueError("missing or invalid 'title'")
    abstract = obj.get("abstract") or ""
    categories = obj.get("categories") or []
    if not isinstance(categories, list):
        raise ValueError("'categories' must be an array of strings")
    venue = obj.get("venue")
    year = obj.get("year")
    if year is not None:
        year = int(year)
    return DocumentRecord(
        id=doc_id,
        title=title,
        abstract=abstract,
        categories=tuple(str(c) for c in categories),
        venue=venue,
        year=year,
    )


def parse_metadata(
    stream: Iterable[str] | IO[str] | str | Path,
    issues: list[tuple[int, str]] | None = None,
) -> list[DocumentRecord]:
    """Parse line-delimited JSON paper metadata.

    Malformed lines and empty-title records are skipped and reported with
    their 1-based line number (appended to ``issues`` when given, and
    logged as warnings). A duplicate id aborts the parse, naming both
    offending lines.
    """
    records: list[DocumentRecord] = []
    seen: dict[str, int] = {}

    def report(line_no: int, message: str) -> None:
        logger.warning("line %d: %s", line_no, message)
        if issues is not None:
            issues.append((line_no, message))

    for line_no, line in enumerate(_coerce_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            report(line_no, f"invalid JSON: {exc.msg}")
            continue
        try:
            doc = _doc_from_json(obj)
        except (ValueError, ValidationError) as exc:
            report(line_no, f"skipped record: {exc}")
            continue
        if doc.id in seen:
            raise ParseError(
                f"duplicate id {doc.id!r} on lines {seen[doc.id]} and {line_no}"
            )
        seen[doc.id] = line_no
        records.append(doc)
    return records


def filter_candidates(
    docs: Sequence[DocumentRecord], f: CategoryFilter | None = None
) -> list[DocumentRecord]:
    """Keep the docs whose categories intersect both term sets, in order."""
    f = f or CategoryFilter()
    return [d for d in docs if f.matches(d.categories)]


def _example_to_json(ex: LabeledExample) -> dict:
    doc = ex.doc
    return {
        "id": doc.id,
        "title": doc.title,
        "abstract": doc.abstract,
        "categories": list(doc.categories),
        "venue": doc.venue,
        "year": doc.year,
        "label": ex.label.value if ex.label else None,
        "provenance": ex.provenance.value,
        "machine_probability": (
            None
            if ex.machine_probability is None
            else round(ex.machine_probability, 6)
        ),
        "votes": [
            {
                "annotator_id": v.annotator_id,
                "label": v.label.value,
                "timestamp": v.timestamp,
            }
            for v in ex.votes
        ],
    }


def _example_from_json(obj: dict) -> LabeledExample:
    doc = _doc_from_json(obj)
    label = obj.get("label")
    provenance = obj.get("provenance", Provenance.UNLABELED.value)
    votes_raw = obj.get("votes") or []
    votes = tuple(
        AnnotationVote(
            annotator_id=str(v["annotator_id"]),
            label=LabelValue(v["label"]),
            timestamp=str(v["timestamp"]),
        )
        for v in votes_raw
    )
    return LabeledExample(
        doc=doc,
        label=None if label is None else LabelValue(label),
        provenance=Provenance(provenance),
        votes=votes,
        machine_probability=obj.get("machine_probability"),
    )


def dataset_to_jsonl(examples: Sequence[LabeledExample]) -> str:
    """Serialize a dataset to line-delimited JSON (one example per line)."""
    lines = [json.dumps(_example_to_json(ex), ensure_ascii=False) for ex in examples]
    return "\n".join(lines) + ("\n" if lines else "")


def dataset_from_jsonl(text: Iterable[str] | str) -> list[LabeledExample]:
    """Parse a dataset from line-delimited JSON.

    Plain corpus records (no label/provenance fields) load as unlabeled
    examples, so the ingestion output is itself a valid starting dataset.
    """
    if isinstance(text, str):
        text = text.splitlines()
    examples = []
    for line_no, line in enumerate(text, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            examples.append(_example_from_json(obj))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {line_no}: invalid JSON: {exc.msg}") from exc
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"line {line_no}: {exc}") from exc
    return examples


def save_dataset(examples: Sequence[LabeledExample], path: str | Path) -> None:
    Path(path).write_text(dataset_to_jsonl(examples), encoding="utf-8")


def load_dataset(path: str | Path) -> list[LabeledExample]:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_from_jsonl(fh)


def provenance_counts(examples: Sequence[LabeledExample]) -> dict[str, int]:
    counts = {p.value: 0 for p in Provenance}
    for ex in examples:
        counts[ex.provenance.value] += 1
    return counts
