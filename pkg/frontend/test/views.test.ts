import assert from "node:assert/strict";
import { test } from "node:test";

import type { QueueItem } from "../src/api.js";
import {
  escapeHtml,
  renderOutcomes,
  renderQueue,
  renderStatus,
} from "../src/views.js";

function item(id: string, probability = 0.5): QueueItem {
  return {
    id,
    title: `Paper ${id}`,
    abstract: `Abstract for ${id}`,
    machine_probability: probability,
    votes_so_far: 0,
  };
}

test("renders cards in server order", () => {
  const items = Array.from({ length: 10 }, (_, i) => item(`d${i}`));
  const html = renderQueue(items);
  const ids = [...html.matchAll(/data-id="(d\d+)"/g)].map((m) => m[1]);
  assert.deepEqual(ids, items.map((i) => i.id));
  assert.equal((html.match(/<article class="card"/g) ?? []).length, 10);
});

test("empty queue renders the round-complete state with a retrain control", () => {
  const html = renderQueue([]);
  assert.match(html, /Round complete/);
  assert.match(html, /data-action="retrain"/);
});

test("markup in titles and abstracts is escaped", () => {
  const hostile: QueueItem = {
    id: "x<1>",
    title: `<script>alert("pwn")</script>`,
    abstract: `<img src=x onerror="steal()">`,
    machine_probability: null,
    votes_so_far: 0,
  };
  const html = renderQueue([hostile]);
  assert.ok(!html.includes("<script>"));
  assert.ok(!html.includes("<img"));
  assert.match(html, /&lt;script&gt;/);
});

test("blind by default: probability only rendered behind the reveal toggle", () => {
  const items = [item("d1", 0.42)];
  assert.ok(!renderQueue(items).includes("0.42"));
  assert.ok(!renderQueue(items, {}).includes("probability"));
  const revealed = renderQueue(items, { revealProbability: true });
  assert.match(revealed, /p=0\.420/);
});

test("vote and skip controls present on every card", () => {
  const html = renderQueue([item("d1")]);
  assert.match(html, /data-action="vote" data-label="ethics"/);
  assert.match(html, /data-action="vote" data-label="not_ethics"/);
  assert.match(html, /data-action="skip"/);
});

test("status dashboard formats counts and proportion", () => {
  const html = renderStatus({
    model_version: 3,
    n_docs: 1426,
    counts: { human: 290, machine: 1136, unlabeled: 0 },
    ethics_proportion: 0.2161,
  });
  assert.match(html, /290 human \/ 1136 machine \/ 21\.61% ethics/);
  assert.match(html, /model version 3/);
  assert.match(html, /data-action="retrain"/);
});

test("zero-label project renders an em dash", () => {
  const html = renderStatus({
    model_version: 0,
    n_docs: 0,
    counts: { human: 0, machine: 0, unlabeled: 0 },
    ethics_proportion: null,
  });
  assert.match(html, /—/);
});

test("outcome list covers the server statuses", () => {
  const html = renderOutcomes([
    { id: "a", status: "labeled", label: "ethics" },
    { id: "b", status: "tie", label: null },
    { id: "c", status: "already_labeled", label: "not_ethics" },
  ]);
  assert.match(html, /now labeled/);
  assert.match(html, /tie, stays queued/);
  assert.match(html, /already labeled/);
});

test("escapeHtml covers the five metacharacters", () => {
  assert.equal(
    escapeHtml(`<a href="x" title='y'>&</a>`),
    "&lt;a href=&quot;x&quot; title=&#39;y&#39;&gt;&amp;&lt;/a&gt;",
  );
});
