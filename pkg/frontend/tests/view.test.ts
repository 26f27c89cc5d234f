// Golden-response rendering: every figure the view model exposes must be
// the fixture's server-sent value, only passed through display formatting.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import type { CoresBody, FramesBody, RankingBody, SessionBody } from "../src/types";
import {
  buildCoreOptions,
  buildFrameOptions,
  buildRankingView,
  buildSessionView,
  formatAgreement,
} from "../src/view";

function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

describe("session view", () => {
  it("shows the reference replay's interval and minimal agreement", () => {
    const session = fixture<SessionBody>("session_step_5.json");
    const view = buildSessionView(session);
    expect(view.interval).toEqual({ lowerText: "0.951", upperText: "0.966" });
    expect(view.minAgreementText).toBe("0.932");
    expect(view.subsetN).toBe(206);
    expect(view.chosen.map((c) => c.id)).toEqual([
      "PU10_07", "PU10_08", "PU10_28", "PU10_29", "PU10_05",
    ]);
    expect(view.chosen.map((c) => c.step)).toEqual([1, 2, 3, 4, 5]);
    expect(view.chosen.at(-1)?.agreementBadge).toBe("0.932");
  });

  it("renders a fresh session with the full candidate list", () => {
    const session = fixture<SessionBody>("session_created.json");
    const view = buildSessionView(session);
    expect(view.chosen).toEqual([]);
    expect(view.minAgreementText).toBe("—");
    expect(view.interval).toBeNull();
    expect(view.candidates.map((c) => c.rank)).toEqual([0, 1, 2, 3, 4]);
    expect(view.candidates.every((c) => !c.greyed)).toBe(true);
  });

  it("keeps candidates in server-provided rank order", () => {
    const session = fixture<SessionBody>("session_created.json");
    const view = buildSessionView(session);
    const byServer = session.candidates.map((c) => c.id);
    expect(view.candidates.map((c) => c.id)).toEqual(byServer);
  });

  it("marks ineligible candidates greyed with their agreement visible", () => {
    const session = fixture<SessionBody>("session_created.json");
    const doctored: SessionBody = {
      ...session,
      candidates: session.candidates.map((c, index) =>
        index === 0 ? { ...c, eligible: false } : c),
    };
    const view = buildSessionView(doctored);
    expect(view.candidates[0].greyed).toBe(true);
    expect(view.candidates[0].agreementBadge).toBe(
      formatAgreement(session.candidates[0].projected_agreement));
  });

  it("displays each badge as the server number, formatting only", () => {
    const session = fixture<SessionBody>("session_step_4.json");
    const view = buildSessionView(session);
    session.chosen.forEach((entry, index) => {
      expect(view.chosen[index].agreementBadge).toBe(
        entry.agreement_at_add.toFixed(3));
    });
    session.candidates.forEach((candidate, index) => {
      expect(view.candidates[index].agreementBadge).toBe(
        candidate.projected_agreement.toFixed(3));
    });
  });
});

describe("core picker view", () => {
  it("lists mined cores with their server agreement", () => {
    const cores = fixture<CoresBody>("cores.json");
    const options = buildCoreOptions(cores.cores);
    expect(options.length).toBe(cores.cores.length);
    expect(options[0].supportText).toBe(cores.cores[0].support.toFixed(3));
  });

  it("marks core practices in a core-seeded session", () => {
    const session = fixture<SessionBody>("session_with_core.json");
    const view = buildSessionView(session);
    const core = view.chosen.filter((entry) => entry.isCore);
    expect(core.map((entry) => entry.id)).toEqual(session.core);
    expect(core.every((entry) => entry.step === 0)).toBe(true);
    expect(view.minAgreementText).toBe(
      session.min_agreement!.toFixed(3));
  });
});

describe("frame picker view", () => {
  it("shows support and provenance for every mined frame", () => {
    const frames = fixture<FramesBody>("frames.json");
    const options = buildFrameOptions(frames.frames);
    expect(options.length).toBe(frames.frames.length);
    expect(options[0].supportText).toBe(frames.frames[0].support.toFixed(3));
    expect(options[0].sourceTag).toBe("combined-use filter");
  });
});

describe("ranking panel view", () => {
  it("mirrors variant counts and first-appearance indices", () => {
    const body = fixture<RankingBody>("ranking.json");
    const view = buildRankingView(body);
    expect(view.subsetN).toBe(206);
    const bySize = new Map(view.sizes.map((s) => [s.setSize, s]));
    expect(bySize.get(4)?.variantCount).toBe(5);
    const size4 = bySize.get(4)!;
    const serverSize4 = body.sizes.find((s) => s.set_size === 4)!;
    expect(size4.rows.map((r) => r.firstIndex)).toEqual(
      serverSize4.ranks.map((r) => r.first_index));
    expect(size4.rows[0].agreementText).toBe(
      serverSize4.ranks[0].agreement.toFixed(3));
  });
});
