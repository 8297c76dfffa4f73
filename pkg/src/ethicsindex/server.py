"""HTTP service exposing the annotation queue, vote submission, and retraining.

The dataset is a single-writer value: every mutation goes through one
lock, reads serve a committed snapshot, and retraining swaps the model
in atomically so concurrent annotators never observe a half-updated
project.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import active, evaluation
from .corpus import (
    AnnotationVote,
    LabeledExample,
    LabelValue,
    Provenance,
    available_text,
    dataset_to_jsonl,
    provenance_counts,
)
from .pipeline import TextClassifier, make_classifier


@dataclass(frozen=True)
class ServerConfig:
    model_kind: str = "forest"
    majority_votes_required: int = 3
    band: active.UncertaintyBand = field(default_factory=active.UncertaintyBand)
    cv_folds: int = 4


class VoteIn(BaseModel):
    id: str
    annotator_id: str
    label: str


class RetrainIn(BaseModel):
    seed: int


class AnnotationService:
    """In-memory project state: dataset, current model, model version."""

    def __init__(
        self,
        examples: Sequence[LabeledExample],
        config: ServerConfig | None = None,
        pipeline: TextClassifier | None = None,
    ):
        self.config = config or ServerConfig()
        self._lock = threading.RLock()
        self._examples = list(examples)
        self._pipeline = pipeline
        self.model_version = 1 if pipeline is not None else 0
        if pipeline is not None:
            self._refresh_probabilities()

    # -- internal helpers ------------------------------------------------

    def _refresh_probabilities(self) -> None:
        """Recompute scores for every non-human document with the current model."""
        self._examples = active.refresh_probabilities(self._examples, self._pipeline)

    def _queue_ids(self) -> list[str]:
        return active.build_queue(self._examples, self.config.band)

    def _by_id(self) -> dict[str, LabeledExample]:
        return {ex.doc.id: ex for ex in self._examples}

    # -- endpoint bodies -------------------------------------------------

    def queue(self, limit: int, annotator_id: str) -> list[dict]:
        with self._lock:
            if self._pipeline is None:
                raise HTTPException(status_code=409, detail="no model loaded")
            by_id = self._by_id()
            items = []
            for doc_id in self._queue_ids():
                if len(items) >= limit:
                    break
                ex = by_id[doc_id]
                if any(v.annotator_id == annotator_id for v in ex.votes):
                    continue
                items.append(
                    {
                        "id": ex.doc.id,
                        "title": ex.doc.title,
                        "abstract": ex.doc.abstract,
                        "machine_probability": ex.machine_probability,
                        "votes_so_far": len(ex.votes),
                    }
                )
            return items

    def submit(self, batch: Sequence[VoteIn]) -> list[dict]:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        results = []
        with self._lock:
            by_id = self._by_id()
            for vote in batch:
                if vote.id not in by_id:
                    results.append({"id": vote.id, "status": "unknown_id", "label": None})
                    continue
                try:
                    value = LabelValue(vote.label)
                except ValueError:
                    results.append({"id": vote.id, "status": "invalid_label", "label": None})
                    continue
                ex = by_id[vote.id]
                if ex.provenance is Provenance.HUMAN:
                    results.append(
                        {"id": vote.id, "status": "already_labeled", "label": ex.label.value}
                    )
                    continue
                self._examples = active.apply_labels(
                    self._examples,
                    [(vote.id, AnnotationVote(vote.annotator_id, value, stamp))],
                    majority_votes_required=self.config.majority_votes_required,
                )
                by_id = self._by_id()
                ex = by_id[vote.id]
                if ex.provenance is Provenance.HUMAN:
                    status = "labeled"
                else:
                    counts = {lv: 0 for lv in LabelValue}
                    for v in ex.votes:
                        counts[v.label] += 1
                    tied = (
                        counts[LabelValue.ETHICS] == counts[LabelValue.NOT_ETHICS]
                        and counts[LabelValue.ETHICS] > 0
                    )
                    status = "tie" if tied else "queued"
                results.append(
                    {
                        "id": vote.id,
                        "status": status,
                        "label": ex.label.value if ex.label else None,
                    }
                )
        return results

    def retrain(self, seed: int) -> dict:
        with self._lock:
            human = [ex for ex in self._examples if ex.provenance is Provenance.HUMAN]
            texts, y = active.training_rows(human, provenances=(Provenance.HUMAN,))
            if len(set(y.tolist())) < 2:
                raise HTTPException(
                    status_code=409,
                    detail="need human labels of both classes before retraining",
                )
            pipe = make_classifier(self.config.model_kind, seed=seed)
            pipe.fit(texts, y)
            metrics = None
            k = self.config.cv_folds
            n_pos = int(y.sum())
            n_neg = len(y) - n_pos
            if min(n_pos, n_neg) >= k:
                report = evaluation.cross_validate(
                    texts, y, make_classifier(self.config.model_kind, seed=seed), k=k, seed=seed
                )
                metrics = {
                    "roc_auc": report.roc_auc,
                    "precision": report.precision,
                    "recall": report.recall,
                }
            self._pipeline = pipe
            self.model_version += 1
            self._refresh_probabilities()
            return {
                "model_version": self.model_version,
                "n_training_rows": len(texts),
                "metrics": metrics,
                "queue_size": len(self._queue_ids()),
            }

    def status(self) -> dict:
        with self._lock:
            counts = provenance_counts(self._examples)
            labeled = [ex for ex in self._examples if ex.label is not None]
            proportion = (
                sum(1 for ex in labeled if ex.label is LabelValue.ETHICS) / len(labeled)
                if labeled
                else None
            )
            return {
                "model_version": self.model_version,
                "n_docs": len(self._examples),
                "counts": counts,
                "ethics_proportion": proportion,
            }

    def export_jsonl(self) -> str:
        with self._lock:
            return dataset_to_jsonl(self._examples)

    def snapshot(self) -> list[LabeledExample]:
        with self._lock:
            return list(self._examples)


def create_app(service: AnnotationService) -> FastAPI:
    app = FastAPI(title="ethicsindex annotation service")

    @app.get("/api/queue")
    def get_queue(
        limit: int = Query(default=10, ge=0),
        annotator: str = Query(default=""),
    ) -> list[dict]:
        return service.queue(limit, annotator)

    @app.post("/api/labels")
    def post_labels(batch: list[VoteIn]) -> dict:
        return {"results": service.submit(batch)}

    @app.post("/api/retrain")
    def post_retrain(body: RetrainIn) -> dict:
        return service.retrain(body.seed)

    @app.get("/api/status")
    def get_status() -> dict:
        return service.status()

    @app.get("/api/export", response_class=PlainTextResponse)
    def get_export() -> str:
        return service.export_jsonl()

    return app
