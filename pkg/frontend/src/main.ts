/**
 * Browser entry point: wires the session, API client, and views together.
 *
 * Configuration comes from query parameters with localStorage fallback:
 *   ?server=http://localhost:8000&annotator=alice
 */

import { ApiClient } from "./api.js";
import { AnnotatorSession } from "./state.js";
import {
  renderError,
  renderOutcomes,
  renderPendingBadge,
  renderQueue,
  renderStatus,
} from "./views.js";

const PAGE_SIZE = 10;

function config(): { baseUrl: string; annotator: string } {
  const params = new URLSearchParams(window.location.search);
  const baseUrl =
    params.get("server") ??
    window.localStorage.getItem("ethicsindex.server") ??
    "http://localhost:8000";
  const annotator =
    params.get("annotator") ??
    window.localStorage.getItem("ethicsindex.annotator") ??
    "";
  window.localStorage.setItem("ethicsindex.server", baseUrl);
  if (annotator) {
    window.localStorage.setItem("ethicsindex.annotator", annotator);
  }
  return { baseUrl, annotator };
}

function revealToggleOn(): boolean {
  const toggle = document.getElementById("reveal-toggle") as HTMLInputElement | null;
  return toggle?.checked ?? false;
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const { baseUrl, annotator } = config();
  if (!annotator) {
    root.innerHTML = renderError(
      "Missing annotator id; open this page with ?annotator=<your-id>",
    );
    return;
  }
  const client = new ApiClient(baseUrl);
  const session = new AnnotatorSession(annotator, window.localStorage);

  const queueEl = document.getElementById("queue") as HTMLElement;
  const statusEl = document.getElementById("status") as HTMLElement;
  const outcomesEl = document.getElementById("outcomes") as HTMLElement;
  const pendingEl = document.getElementById("pending") as HTMLElement;

  function paint(): void {
    queueEl.innerHTML = renderQueue(session.visibleItems(), {
      revealProbability: revealToggleOn(),
    });
    pendingEl.innerHTML = renderPendingBadge(session.pendingCount());
  }

  async function refreshStatus(): Promise<void> {
    try {
      statusEl.innerHTML = renderStatus(await client.getStatus());
    } catch (err) {
      statusEl.innerHTML = renderError(describe(err));
    }
  }

  async function fetchQueue(): Promise<void> {
    try {
      session.setQueue(await client.getQueue(PAGE_SIZE, annotator));
      paint();
    } catch (err) {
      queueEl.innerHTML = renderError(describe(err));
    }
  }

  async function submitPending(): Promise<void> {
    try {
      const outcomes = await session.submit(client);
      outcomesEl.innerHTML = renderOutcomes(outcomes);
      paint();
      if (session.visibleItems().length === 0) {
        await fetchQueue();
      }
      await refreshStatus();
    } catch (err) {
      // votes are retained locally; surface the failure and allow retry
      outcomesEl.innerHTML = renderError(`Submit failed: ${describe(err)}`);
      paint();
    }
  }

  async function retrain(): Promise<void> {
    const seedInput = document.getElementById("retrain-seed") as HTMLInputElement | null;
    const seed = seedInput ? Number(seedInput.value) || 0 : 0;
    statusEl.innerHTML = "<p>Retraining…</p>";
    try {
      await client.postRetrain(seed);
      await refreshStatus();
      await fetchQueue();
    } catch (err) {
      statusEl.innerHTML = renderError(`Retrain failed: ${describe(err)}`);
    }
  }

  document.body.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    if (action === "retry") {
      void fetchQueue();
      void refreshStatus();
      return;
    }
    if (action === "retrain") {
      void retrain();
      return;
    }
    const card = target.closest("[data-id]") as HTMLElement | null;
    if (!card?.dataset.id) return;
    if (action === "vote") {
      session.vote(card.dataset.id, target.dataset.label as "ethics" | "not_ethics");
      paint();
      void submitPending();
    } else if (action === "skip") {
      session.skip(card.dataset.id);
      paint();
    }
  });

  document.getElementById("reveal-toggle")?.addEventListener("change", paint);

  await refreshStatus();
  await fetchQueue();
  if (session.pendingCount() > 0) {
    // votes left over from an interrupted session: resubmit immediately
    await submitPending();
  }
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

void start();
