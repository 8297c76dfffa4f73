/**
 * Annotator session state: the fetched queue page and unsubmitted votes.
 *
 * Pending votes are persisted through a pluggable key-value store
 * (localStorage in the browser) the moment they are cast, and removed
 * only when the server acknowledges them, so navigation or a failed
 * request never loses a vote.
 */

import type { QueueItem, VoteLabel, VoteOutcome, VoteSubmission } from "./api.js";

/** The slice of ApiClient that submit() needs; eases test doubles. */
export interface LabelPoster {
  postLabels(votes: VoteSubmission[]): Promise<VoteOutcome[]>;
}

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class MemoryStore implements KeyValueStore {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }
}

export class AnnotatorSession {
  readonly annotatorId: string;
  private readonly store: KeyValueStore;
  private queue: QueueItem[] = [];
  private pending = new Map<string, VoteLabel>();
  private skipped = new Set<string>();

  constructor(annotatorId: string, store: KeyValueStore = new MemoryStore()) {
    if (!annotatorId) {
      throw new Error("annotator id must be nonempty");
    }
    this.annotatorId = annotatorId;
    this.store = store;
    this.restore();
  }

  private get storageKey(): string {
    return `ethicsindex.pending.${this.annotatorId}`;
  }

  private restore(): void {
    const raw = this.store.getItem(this.storageKey);
    if (!raw) return;
    try {
      const parsed = JSON.parse(raw) as Record<string, VoteLabel>;
      this.pending = new Map(Object.entries(parsed));
    } catch {
      this.store.removeItem(this.storageKey);
    }
  }

  private persist(): void {
    if (this.pending.size === 0) {
      this.store.removeItem(this.storageKey);
      return;
    }
    this.store.setItem(
      this.storageKey,
      JSON.stringify(Object.fromEntries(this.pending)),
    );
  }

  setQueue(items: QueueItem[]): void {
    this.queue = [...items];
    this.skipped.clear();
  }

  /** Queue items still awaiting this annotator's attention in this view. */
  visibleItems(): QueueItem[] {
    return this.queue.filter(
      (item) => !this.pending.has(item.id) && !this.skipped.has(item.id),
    );
  }

  fetchedIds(): string[] {
    return this.queue.map((item) => item.id);
  }

  /** Cast or replace this annotator's vote on a fetched item. */
  vote(id: string, label: VoteLabel): void {
    if (!this.queue.some((item) => item.id === id) && !this.pending.has(id)) {
      throw new Error(`cannot vote on unfetched item ${id}`);
    }
    this.pending.set(id, label);
    this.persist();
  }

  /** Local-only skip: the item leaves this view and returns on the next fetch. */
  skip(id: string): void {
    this.skipped.add(id);
  }

  pendingCount(): number {
    return this.pending.size;
  }

  pendingVotes(): VoteSubmission[] {
    return [...this.pending.entries()].map(([id, label]) => ({
      id,
      annotator_id: this.annotatorId,
      label,
    }));
  }

  /** Drop pending votes the server has acknowledged, in any outcome state. */
  applyOutcomes(outcomes: VoteOutcome[]): void {
    for (const outcome of outcomes) {
      this.pending.delete(outcome.id);
      this.queue = this.queue.filter((item) => item.id !== outcome.id);
    }
    this.persist();
  }

  /**
   * Post every pending vote. On network failure the votes stay pending
   * (and persisted) so a later submit retries them.
   */
  async submit(client: LabelPoster): Promise<VoteOutcome[]> {
    const votes = this.pendingVotes();
    if (votes.length === 0) {
      return [];
    }
    const outcomes = await client.postLabels(votes);
    this.applyOutcomes(outcomes);
    return outcomes;
  }
}
