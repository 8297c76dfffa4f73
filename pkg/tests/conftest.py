import numpy as np
import pytest

_FILLER_WORDS = [
    "network", "model", "training", "neural", "deep", "graph", "image",
    "feature", "learning", "task", "method", "result", "dataset", "error",
    "layer", "kernel", "vector", "matrix", "sample", "label", "function",
    "gradient", "policy", "agent", "reward", "language", "token", "search",
    "tree", "node", "cluster", "metric", "signal", "noise", "system",
    "robot", "planning", "inference", "bound", "proof",
]

PLANTED_TERM = "axiomglow"


def make_planted_corpus(
    n_docs: int, positive_rate: float, seed: int
) -> tuple[list[str], np.ndarray]:
    """Synthetic titles where the label is exactly 'planted term present'."""
    rng = np.random.default_rng(seed)
    texts = []
    labels = np.zeros(n_docs, dtype=int)
    for i in range(n_docs):
        words = list(rng.choice(_FILLER_WORDS, size=rng.integers(8, 16)))
        if rng.random() < positive_rate:
            words.insert(int(rng.integers(0, len(words) + 1)), PLANTED_TERM)
            labels[i] = 1
        texts.append(" ".join(words))
    if labels.sum() == 0:
        labels[0] = 1
        texts[0] = PLANTED_TERM + " " + texts[0]
    if labels.sum() == n_docs:
        labels[0] = 0
        texts[0] = " ".join(w for w in texts[0].split() if w != PLANTED_TERM) or "model"
    return texts, labels


@pytest.fixture
def planted_corpus_small():
    return make_planted_corpus(120, 0.3, seed=11)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, desc): acceptance criterion check"
    )


_criterion_results: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, desc = marker.args
    _criterion_results.setdefault(num, [desc])
    _criterion_results[num].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criterion_results):
        desc, *outcomes = _criterion_results[num]
        if all(o == "passed" for o in outcomes):
            status = "PASS"
        elif any(o == "failed" for o in outcomes):
            status = "FAIL"
        else:
            status = "SKIP"
        terminalreporter.write_line(f"criterion {num:2d}: {status} - {desc}")
