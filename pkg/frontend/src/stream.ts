// Line-delimited JSON stream consumption with reconnect and sequence-number
// deduplication.  The parsing and dedup pieces are pure so they can be
// tested without a browser.

import type { StreamEvent } from "./types.js";

/** Split buffered text into complete lines plus the unfinished remainder. */
export function splitNdjson(buffer: string): { lines: string[]; rest: string } {
  const parts = buffer.split("\n");
  const rest = parts.pop() ?? "";
  return { lines: parts.filter((line) => line.trim().length > 0), rest };
}

/**
 * Drops events already seen, by stream sequence number.  A reconnected
 * subscription starts a fresh server-side buffer, so replayed or stale
 * sequence numbers must not duplicate chart points.
 */
export class SequenceDedup {
  private lastSeq = -1;

  accept(event: { seq: number }): boolean {
    if (event.seq <= this.lastSeq) return false;
    this.lastSeq = event.seq;
    return true;
  }

  get highWater(): number {
    return this.lastSeq;
  }
}

export interface StreamHandle {
  close(): void;
}

/**
 * Subscribe to an NDJSON stream endpoint.  Reconnects with exponential
 * backoff; `onEvent` sees each event at most once (sequence dedup).
 */
export function subscribeStream(
  url: string,
  onEvent: (event: StreamEvent) => void,
  onStatus?: (connected: boolean) => void,
): StreamHandle {
  let closed = false;
  let backoff = 500;
  const dedup = new SequenceDedup();

  async function run(): Promise<void> {
    while (!closed) {
      try {
        const response = await fetch(url);
        if (!response.ok || !response.body) throw new Error(response.statusText);
        onStatus?.(true);
        backoff = 500;
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          const { done, value } = await reader.read();
          if (closed) {
            await reader.cancel().catch(() => undefined);
            return;
          }
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          const { lines, rest } = splitNdjson(buffer);
          buffer = rest;
          for (const line of lines) {
            const event = JSON.parse(line) as StreamEvent;
            if (dedup.accept(event)) onEvent(event);
          }
        }
      } catch {
        // fall through to reconnect
      }
      onStatus?.(false);
      if (closed) return;
      await new Promise((resolve) => setTimeout(resolve, backoff));
      backoff = Math.min(backoff * 2, 10_000);
    }
  }

  void run();
  return {
    close() {
      closed = true;
    },
  };
}
