// Bootstrap: wire the store, API client and painters together.

import { Client } from "./api";
import { renderBanner, renderCorePicker, renderFramePicker, renderRanking, renderSession } from "./dom";
import { mutate, Store, describeError } from "./state";
import { buildCoreOptions, buildFrameOptions, buildRankingView, buildSessionView } from "./view";

const COMBINED_USE_FILTER = "PU04=yes";

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "";
}

export function start(root: HTMLElement): void {
  const client = new Client(apiBase());
  const store = new Store();

  const bannerHost = document.createElement("div");
  const pickerHost = document.createElement("div");
  const coreHost = document.createElement("div");
  const sessionHost = document.createElement("div");
  const rankingHost = document.createElement("div");
  root.append(bannerHost, pickerHost, coreHost, sessionHost, rankingHost);

  function paint(): void {
    const state = store.get();
    renderBanner(bannerHost, state.error, () => store.set({ error: null }));
    renderFramePicker(pickerHost,
      state.frames ? buildFrameOptions(state.frames.frames) : [],
      pickFrame);
    renderCorePicker(coreHost,
      state.cores ? buildCoreOptions(state.cores.cores) : [],
      state.selectedCore,
      (ids) => store.set({ selectedCore: ids }));
    renderSession(sessionHost,
      state.session ? buildSessionView(state.session) : null,
      state.busy,
      (id) => {
        const session = store.get().session;
        if (session) {
          void mutate(store, () => client.addPractice(session.id, id));
        }
      },
      (id) => {
        const session = store.get().session;
        if (session) {
          void mutate(store, () => client.removePractice(session.id, id));
        }
      });
    renderRanking(rankingHost,
      state.ranking ? buildRankingView(state.ranking) : null);
  }

  function pickFrame(ids: string[]): void {
    void (async () => {
      store.set({ busy: true });
      try {
        const session = await client.createSession({
          frame: ids,
          filter: COMBINED_USE_FILTER,
          core: store.get().selectedCore ?? [],
        });
        const ranking = await client.ranking(ids, COMBINED_USE_FILTER);
        store.set({ session, ranking, error: null, busy: false });
      } catch (error) {
        store.set({ error: describeError(error), busy: false });
      }
    })();
  }

  store.subscribe(paint);
  void (async () => {
    try {
      const frames = await client.frames(COMBINED_USE_FILTER);
      const cores = await client.cores(COMBINED_USE_FILTER);
      store.set({ frames, cores });
    } catch (error) {
      store.set({ error: describeError(error) });
    }
  })();
  paint();
}

declare global {
  interface Window {
    __HYBRIDMETHODS_AUTOSTART__?: boolean;
  }
}

if (typeof document !== "undefined" && window.__HYBRIDMETHODS_AUTOSTART__ !== false) {
  const root = document.getElementById("app");
  if (root) {
    start(root);
  }
}
