"""Active-learning orchestration: uncertainty sampling and label rounds.

A model is "sure" of a prediction when the probability falls strictly
below the band's low edge or strictly above its high edge; everything in
the closed band is queued for human annotation, most uncertain first.
Human labels, once assigned by majority vote, are never overwritten by
machine propagation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import (
    AnnotationVote,
    LabeledExample,
    LabelValue,
    Provenance,
    available_text,
)

LOW_DEFAULT = 1.0 / 3.0
HIGH_DEFAULT = 2.0 / 3.0


@dataclass(frozen=True)
class UncertaintyBand:
    low: float = LOW_DEFAULT
    high: float = HIGH_DEFAULT

    def __post_init__(self) -> None:
        if not (0.0 <= self.low < self.high <= 1.0):
            raise ValueError(f"invalid band [{self.low}, {self.high}]")

    def contains(self, p: float) -> bool:
        return self.low <= p <= self.high


def select_uncertain(
    probs: Mapping[str, float], band: UncertaintyBand | None = None
) -> list[str]:
    """Ids with probability inside the closed band, most uncertain first.

    Ordering is ascending |p - 0.5| with ties broken by id, so annotator
    effort lands on the band center first.
    """
    band = band or UncertaintyBand()
    for doc_id, p in probs.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range for {doc_id!r}: {p}")
    selected = [(abs(p - 0.5), doc_id) for doc_id, p in probs.items() if band.contains(p)]
    selected.sort()
    return [doc_id for _, doc_id in selected]


def _merge_votes(
    votes: tuple[AnnotationVote, ...], new: AnnotationVote
) -> tuple[AnnotationVote, ...]:
    # a later vote by the same annotator replaces the earlier one, in place
    merged = list(votes)
    for i, vote in enumerate(merged):
        if vote.annotator_id == new.annotator_id:
            merged[i] = new
            return tuple(merged)
    merged.append(new)
    return tuple(merged)


def _resolve(
    votes: tuple[AnnotationVote, ...], majority_votes_required: int | None
) -> LabelValue | None:
    """Majority label under the policy, or None while unresolved/tied."""
    if not votes:
        return None
    counts = {LabelValue.ETHICS: 0, LabelValue.NOT_ETHICS: 0}
    for vote in votes:
        counts[vote.label] += 1
    top = max(counts, key=lambda lv: counts[lv])
    other = LabelValue.NOT_ETHICS if top is LabelValue.ETHICS else LabelValue.ETHICS
    if counts[top] == counts[other]:
        return None
    if majority_votes_required is None:
        return top if 2 * counts[top] > len(votes) else None
    threshold = majority_votes_required // 2 + 1
    return top if counts[top] >= threshold else None


def apply_labels(
    examples: Sequence[LabeledExample],
    annotations: Iterable[tuple[str, AnnotationVote]],
    majority_votes_required: int | None = None,
) -> list[LabeledExample]:
    """Merge votes into the dataset and promote majorities to human labels.

    With ``majority_votes_required=None`` a document is labeled once one
    label holds a strict majority of the votes cast on it. A vote on an
    unknown id raises KeyError. Tied documents keep their prior state and
    stay in the annotation queue; a tie on a previously human-labeled
    document demotes it back to unlabeled rather than keep a label the
    votes no longer support.
    """
    by_id = {ex.doc.id: ex for ex in examples}
    for doc_id, vote in annotations:
        if doc_id not in by_id:
            raise KeyError(f"unknown document id {doc_id!r}")
        ex = by_id[doc_id]
        votes = _merge_votes(ex.votes, vote)
        label = _resolve(votes, majority_votes_required)
        if label is not None:
            ex = replace(
                ex,
                votes=votes,
                label=label,
                provenance=Provenance.HUMAN,
                machine_probability=None,
            )
        elif ex.provenance is Provenance.HUMAN:
            ex = replace(
                ex,
                votes=votes,
                label=None,
                provenance=Provenance.UNLABELED,
                machine_probability=None,
            )
        else:
            ex = replace(ex, votes=votes)
        by_id[doc_id] = ex
    return [by_id[ex.doc.id] for ex in examples]


def machine_label_remainder(
    examples: Sequence[LabeledExample], model
) -> list[LabeledExample]:
    """Give every non-human document the model's label and probability.

    ``model`` needs a predict_proba(texts) method. Probabilities are
    rounded to 6 decimals so saved datasets reload identically. Idempotent
    for a fixed model; human rows pass through untouched.
    """
    targets = [ex for ex in examples if ex.provenance is not Provenance.HUMAN]
    if not targets:
        return list(examples)
    probs = np.asarray(
        model.predict_proba([available_text(ex.doc) for ex in targets]), dtype=float
    )
    updated = {}
    for ex, p in zip(targets, probs):
        p6 = round(float(p), 6)
        updated[ex.doc.id] = replace(
            ex,
            label=LabelValue.ETHICS if p6 >= 0.5 else LabelValue.NOT_ETHICS,
            provenance=Provenance.MACHINE,
            machine_probability=p6,
        )
    return [updated.get(ex.doc.id, ex) for ex in examples]


def refresh_probabilities(
    examples: Sequence[LabeledExample], model
) -> list[LabeledExample]:
    """Rescore every non-human document without promoting anyone to machine.

    Unlabeled documents get a probability (their label stays absent);
    machine-labeled documents get a fresh probability and a label that
    matches it. Use machine_label_remainder to convert unlabeled rows to
    machine-labeled ones.
    """
    targets = [ex for ex in examples if ex.provenance is not Provenance.HUMAN]
    if not targets:
        return list(examples)
    probs = np.asarray(
        model.predict_proba([available_text(ex.doc) for ex in targets]), dtype=float
    )
    updated = {}
    for ex, p in zip(targets, probs):
        p6 = round(float(p), 6)
        if ex.provenance is Provenance.MACHINE:
            updated[ex.doc.id] = replace(
                ex,
                machine_probability=p6,
                label=LabelValue.ETHICS if p6 >= 0.5 else LabelValue.NOT_ETHICS,
            )
        else:
            updated[ex.doc.id] = replace(ex, machine_probability=p6)
    return [updated.get(ex.doc.id, ex) for ex in examples]


def agreement_rate(
    labels_a: Sequence[LabelValue | int], labels_b: Sequence[LabelValue | int]
) -> float:
    """Fraction of aligned positions holding the same label."""
    if len(labels_a) != len(labels_b):
        raise ValueError(
            f"length mismatch: {len(labels_a)} vs {len(labels_b)}"
        )
    if not labels_a:
        raise ValueError("agreement_rate requires at least one pair")
    return sum(1 for a, b in zip(labels_a, labels_b) if a == b) / len(labels_a)


def training_rows(
    examples: Sequence[LabeledExample],
    provenances: tuple[Provenance, ...] = (Provenance.HUMAN, Provenance.MACHINE),
) -> tuple[list[str], np.ndarray]:
    """Training texts and 0/1 labels from the labeled part of a dataset.

    Each labeled paper contributes two rows — "title abstract" and the
    title alone — so one model serves both abstract-bearing and
    title-only venues. Papers without an abstract contribute one row.
    """
    texts: list[str] = []
    labels: list[int] = []
    for ex in examples:
        if ex.provenance not in provenances or ex.label is None:
            continue
        value = ex.label.to_int()
        texts.append(available_text(ex.doc))
        labels.append(value)
        if ex.doc.abstract:
            texts.append(ex.doc.title)
            labels.append(value)
    return texts, np.array(labels, dtype=int)


def queue_probabilities(
    examples: Sequence[LabeledExample],
) -> dict[str, float]:
    """Probabilities of the non-human documents that have one, by dataset order."""
    return {
        ex.doc.id: ex.machine_probability
        for ex in examples
        if ex.provenance is not Provenance.HUMAN
        and ex.machine_probability is not None
    }


def build_queue(
    examples: Sequence[LabeledExample], band: UncertaintyBand | None = None
) -> list[str]:
    """Annotation queue: in-band non-human documents, most uncertain first."""
    return select_uncertain(queue_probabilities(examples), band)
