// Server-authoritative store: the session body is replaced wholesale by
// every response, one mutation in flight at a time, no optimistic updates.

import type { CoresBody, FramesBody, RankingBody, SessionBody } from "./types";

export interface AppState {
  frames: FramesBody | null;
  cores: CoresBody | null;
  selectedCore: string[] | null;
  ranking: RankingBody | null;
  session: SessionBody | null;
  busy: boolean;
  error: string | null;
}

export type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = {
    frames: null,
    cores: null,
    selectedCore: null,
    ranking: null,
    session: null,
    busy: false,
    error: null,
  };

  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(partial: Partial<AppState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((entry) => entry !== listener);
    };
  }
}

/** Run one server mutation at a time, mirroring the response into the store. */
export async function mutate(
  store: Store,
  action: () => Promise<SessionBody>,
): Promise<void> {
  if (store.get().busy) {
    return;
  }
  store.set({ busy: true });
  try {
    const session = await action();
    store.set({ session, error: null, busy: false });
  } catch (error) {
    store.set({ error: describeError(error), busy: false });
  }
}

export function describeError(error: unknown): string {
  if (error instanceof Error) {
    return error.message;
  }
  return String(error);
}
