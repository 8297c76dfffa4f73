/**
 * HTML render helpers. Every dynamic value passes through escapeHtml, so
 * paper titles and abstracts render as plain text.
 *
 * Annotation is blind by default: a card shows the title and abstract
 * only. The model's probability appears only when the reveal toggle is
 * explicitly on.
 */

import type { QueueItem, StatusInfo, VoteOutcome } from "./api.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export interface QueueViewOptions {
  revealProbability?: boolean;
}

export function renderCard(item: QueueItem, opts: QueueViewOptions = {}): string {
  const probability =
    opts.revealProbability && item.machine_probability !== null
      ? `<span class="probability">p=${item.machine_probability.toFixed(3)}</span>`
      : "";
  const abstract = item.abstract
    ? `<p class="abstract">${escapeHtml(item.abstract)}</p>`
    : `<p class="abstract abstract-empty">(title only)</p>`;
  return [
    `<article class="card" data-id="${escapeHtml(item.id)}">`,
    `<h3>${escapeHtml(item.title)}</h3>`,
    abstract,
    probability,
    `<div class="actions">`,
    `<button data-action="vote" data-label="ethics">Ethics</button>`,
    `<button data-action="vote" data-label="not_ethics">Not ethics</button>`,
    `<button data-action="skip">Skip</button>`,
    `</div>`,
    `</article>`,
  ].join("");
}

export function renderQueue(items: QueueItem[], opts: QueueViewOptions = {}): string {
  if (items.length === 0) {
    return renderRoundComplete();
  }
  return `<section class="queue">${items
    .map((item) => renderCard(item, opts))
    .join("")}</section>`;
}

export function renderRoundComplete(): string {
  return [
    `<section class="round-complete">`,
    `<p>Round complete: nothing left to review.</p>`,
    `<button data-action="retrain">Retrain model</button>`,
    `</section>`,
  ].join("");
}

const OUTCOME_TEXT: Record<string, string> = {
  labeled: "now labeled",
  queued: "vote recorded",
  tie: "tie, stays queued",
  already_labeled: "already labeled",
  unknown_id: "unknown document",
  invalid_label: "invalid label",
};

export function renderOutcomes(outcomes: VoteOutcome[]): string {
  if (outcomes.length === 0) {
    return "";
  }
  const rows = outcomes
    .map((o) => {
      const text = OUTCOME_TEXT[o.status] ?? o.status;
      const label = o.label ? ` (${escapeHtml(o.label)})` : "";
      return `<li data-id="${escapeHtml(o.id)}">${escapeHtml(o.id)}: ${text}${label}</li>`;
    })
    .join("");
  return `<ul class="outcomes">${rows}</ul>`;
}

function formatPercent(value: number | null): string {
  return value === null ? "—" : `${(value * 100).toFixed(2)}%`;
}

export function renderStatus(status: StatusInfo): string {
  const { counts } = status;
  const summary =
    counts.human + counts.machine + counts.unlabeled === 0
      ? "—"
      : `${counts.human} human / ${counts.machine} machine / ` +
        `${formatPercent(status.ethics_proportion)} ethics`;
  return [
    `<section class="status">`,
    `<p class="summary">${summary}</p>`,
    `<p class="model">model version ${status.model_version}</p>`,
    `<label>seed <input type="number" id="retrain-seed" value="0"></label>`,
    `<button data-action="retrain">Retrain</button>`,
    `</section>`,
  ].join("");
}

export function renderError(message: string): string {
  return [
    `<div class="banner error">`,
    `<span>${escapeHtml(message)}</span>`,
    `<button data-action="retry">Retry</button>`,
    `</div>`,
  ].join("");
}

export function renderPendingBadge(count: number): string {
  if (count === 0) {
    return "";
  }
  return `<span class="pending-badge">${count} unsubmitted</span>`;
}
