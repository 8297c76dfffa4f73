import numpy as np
import pytest
from fastapi.testclient import TestClient

from ethicsindex.active import UncertaintyBand, build_queue
from ethicsindex.corpus import (
    AnnotationVote,
    DocumentRecord,
    LabeledExample,
    LabelValue,
    Provenance,
    dataset_from_jsonl,
)
from ethicsindex.forest import RandomForest
from ethicsindex.pipeline import TextClassifier
from ethicsindex.server import AnnotationService, ServerConfig, create_app
from ethicsindex.text import TfidfVectorizer


def _seed_examples():
    """Two human-labeled anchors per class plus a spread of unlabeled docs."""
    examples = []
    for i in range(4):
        ethics = i % 2 == 0
        label = LabelValue.ETHICS if ethics else LabelValue.NOT_ETHICS
        marker = "fairmark privacy society" if ethics else "plainmark gradient kernel"
        examples.append(
            LabeledExample(
                doc=DocumentRecord(f"h{i}", f"paper on {marker}", f"study of {marker}"),
                label=label,
                provenance=Provenance.HUMAN,
                votes=(
                    AnnotationVote("a1", label, "2021-01-01T00:00:00+00:00"),
                    AnnotationVote("a2", label, "2021-01-01T00:00:00+00:00"),
                ),
            )
        )
    mixtures = [
        ("u0", "fairmark plainmark balance"),
        ("u1", "fairmark plainmark tension"),
        ("u2", "fairmark fairmark privacy society"),
        ("u3", "plainmark kernel gradient"),
        ("u4", "plainmark fairmark society kernel"),
        ("u5", "gradient kernel optimization"),
    ]
    for doc_id, title in mixtures:
        examples.append(LabeledExample(doc=DocumentRecord(doc_id, title, "")))
    return examples


def _trained_pipeline(examples):
    texts = []
    y = []
    for ex in examples:
        if ex.label is not None:
            texts.append(ex.doc.title)
            y.append(ex.label.to_int())
    return TextClassifier(
        TfidfVectorizer(), RandomForest(n_estimators=32, max_depth=4, seed=5)
    ).fit(texts, np.array(y))


@pytest.fixture
def service():
    examples = _seed_examples()
    return AnnotationService(
        examples,
        ServerConfig(model_kind="forest", majority_votes_required=3),
        pipeline=_trained_pipeline(examples),
    )


@pytest.fixture
def client(service):
    return TestClient(create_app(service))


class TestQueue:
    def test_queue_order_and_fields(self, client, service):
        response = client.get("/api/queue", params={"limit": 10, "annotator": "a9"})
        assert response.status_code == 200
        items = response.json()
        assert items, "expected a nonempty queue"
        expected = build_queue(service.snapshot(), service.config.band)
        assert [it["id"] for it in items] == expected[:10]
        assert set(items[0]) == {
            "id",
            "title",
            "abstract",
            "machine_probability",
            "votes_so_far",
        }

    def test_limit_zero(self, client):
        response = client.get("/api/queue", params={"limit": 0, "annotator": "a9"})
        assert response.json() == []

    def test_annotator_filtering(self, client):
        first = client.get("/api/queue", params={"limit": 50, "annotator": "solo"}).json()
        for item in first:
            client.post(
                "/api/labels",
                json=[{"id": item["id"], "annotator_id": "solo", "label": "ethics"}],
            )
        after = client.get("/api/queue", params={"limit": 50, "annotator": "solo"}).json()
        assert after == []

    def test_no_model_409(self):
        service = AnnotationService(_seed_examples(), ServerConfig())
        client = TestClient(create_app(service))
        response = client.get("/api/queue", params={"limit": 5, "annotator": "x"})
        assert response.status_code == 409


class TestLabels:
    def test_majority_vote_patterns(self, client, service):
        patterns = {
            "u0": (["ethics", "ethics", "not_ethics"], "ethics"),
            "u1": (["not_ethics", "not_ethics", "ethics"], "not_ethics"),
            "u2": (["ethics", "ethics", "ethics"], "ethics"),
        }
        for doc_id, (votes, expected) in patterns.items():
            for i, value in enumerate(votes):
                response = client.post(
                    "/api/labels",
                    json=[{"id": doc_id, "annotator_id": f"ann{i}", "label": value}],
                )
                assert response.status_code == 200
            ex = {e.doc.id: e for e in service.snapshot()}[doc_id]
            assert ex.provenance is Provenance.HUMAN
            assert ex.label.value == expected

    def test_second_concurring_vote_labels(self, client):
        client.post(
            "/api/labels",
            json=[{"id": "u0", "annotator_id": "a", "label": "ethics"}],
        )
        response = client.post(
            "/api/labels",
            json=[{"id": "u0", "annotator_id": "b", "label": "ethics"}],
        )
        result = response.json()["results"][0]
        assert result["status"] == "labeled"
        assert result["label"] == "ethics"

    def test_tie_reported_and_queued(self, client):
        client.post("/api/labels", json=[{"id": "u1", "annotator_id": "a", "label": "ethics"}])
        response = client.post(
            "/api/labels", json=[{"id": "u1", "annotator_id": "b", "label": "not_ethics"}]
        )
        assert response.json()["results"][0]["status"] == "tie"

    def test_duplicate_vote_replaces(self, client, service):
        client.post("/api/labels", json=[{"id": "u3", "annotator_id": "a", "label": "ethics"}])
        client.post("/api/labels", json=[{"id": "u3", "annotator_id": "a", "label": "not_ethics"}])
        ex = {e.doc.id: e for e in service.snapshot()}["u3"]
        assert len(ex.votes) == 1
        assert ex.votes[0].label is LabelValue.NOT_ETHICS

    def test_unknown_id_rejected_others_processed(self, client):
        response = client.post(
            "/api/labels",
            json=[
                {"id": "ghost", "annotator_id": "a", "label": "ethics"},
                {"id": "u4", "annotator_id": "a", "label": "ethics"},
            ],
        )
        results = response.json()["results"]
        assert results[0]["status"] == "unknown_id"
        assert results[1]["status"] in ("queued", "labeled")

    def test_vote_on_already_labeled(self, client):
        response = client.post(
            "/api/labels", json=[{"id": "h0", "annotator_id": "zz", "label": "not_ethics"}]
        )
        assert response.json()["results"][0]["status"] == "already_labeled"

    def test_empty_batch(self, client):
        response = client.post("/api/labels", json=[])
        assert response.json() == {"results": []}


class TestRetrain:
    def test_retrain_bumps_version_and_recomputes_queue(self, client, service):
        for doc_id, value in (("u0", "ethics"), ("u3", "not_ethics")):
            for ann in ("a", "b"):
                client.post(
                    "/api/labels",
                    json=[{"id": doc_id, "annotator_id": ann, "label": value}],
                )
        before_version = service.model_version
        response = client.post("/api/retrain", json={"seed": 11})
        assert response.status_code == 200
        body = response.json()
        assert body["model_version"] == before_version + 1
        snapshot = service.snapshot()
        assert body["queue_size"] == len(build_queue(snapshot, service.config.band))
        # every non-human doc carries a fresh probability
        for ex in snapshot:
            if ex.provenance is not Provenance.HUMAN:
                assert ex.machine_probability is not None

    def test_retrain_deterministic(self, service):
        client = TestClient(create_app(service))
        a = client.post("/api/retrain", json={"seed": 4}).json()
        export_a = client.get("/api/export").text
        b = client.post("/api/retrain", json={"seed": 4}).json()
        export_b = client.get("/api/export").text
        assert export_a == export_b
        assert a["queue_size"] == b["queue_size"]

    def test_retrain_without_two_classes_409(self):
        examples = [
            LabeledExample(
                doc=DocumentRecord("h", "only ethics doc", ""),
                label=LabelValue.ETHICS,
                provenance=Provenance.HUMAN,
                votes=(AnnotationVote("a", LabelValue.ETHICS, "t"),),
            ),
            LabeledExample(doc=DocumentRecord("u", "unlabeled", "")),
        ]
        client = TestClient(create_app(AnnotationService(examples, ServerConfig())))
        response = client.post("/api/retrain", json={"seed": 1})
        assert response.status_code == 409


class TestStatusAndExport:
    def test_status_counts(self, client):
        body = client.get("/api/status").json()
        assert body["counts"]["human"] == 4
        assert body["counts"]["unlabeled"] == 6
        assert body["n_docs"] == 10
        assert body["model_version"] == 1
        assert body["ethics_proportion"] == 0.5

    def test_export_roundtrips(self, client, service):
        text = client.get("/api/export").text
        assert dataset_from_jsonl(text) == service.snapshot()
