// Pure view-model construction. Every displayed figure is a server value
// passed through number formatting; the client computes no statistics.

import type {
  CoreSummary,
  FrameSummary,
  RankingBody,
  SessionBody,
} from "./types";

export function formatAgreement(value: number | null | undefined): string {
  if (value === null || value === undefined) {
    return "—";
  }
  return value.toFixed(3);
}

export interface FrameOption {
  ids: string[];
  title: string;
  supportText: string;
  countText: string;
  sourceTag: string;
}

export interface ChosenView {
  id: string;
  label: string;
  step: number;
  agreementBadge: string;
  isCore: boolean;
}

export interface CandidateView {
  id: string;
  label: string;
  rank: number;
  agreementBadge: string;
  greyed: boolean;
}

export interface IntervalView {
  lowerText: string;
  upperText: string;
}

export interface SessionView {
  id: string;
  frameTitle: string;
  filterLabel: string;
  subsetN: number;
  setSizeText: string;
  thresholdText: string;
  chosen: ChosenView[];
  candidates: CandidateView[];
  interval: IntervalView | null;
  minAgreementText: string;
}

export interface RankingRowView {
  label: string;
  firstIndex: number;
  agreementText: string;
}

export interface RankingSizeView {
  setSize: number;
  variantCount: number;
  rows: RankingRowView[];
}

export interface RankingView {
  subsetN: number;
  sizes: RankingSizeView[];
}

export function buildFrameOptions(frames: FrameSummary[]): FrameOption[] {
  return frames.map((frame) => ({
    ids: frame.members,
    title: frame.members.join(", "),
    supportText: formatAgreement(frame.support),
    countText: String(frame.count),
    sourceTag: frame.source === "filtered" ? "combined-use filter" : "all data",
  }));
}

export interface CoreOption {
  ids: string[];
  title: string;
  supportText: string;
  countText: string;
}

export function buildCoreOptions(cores: CoreSummary[]): CoreOption[] {
  return cores.map((core) => ({
    ids: core.members,
    title: core.members.join(" + "),
    supportText: formatAgreement(core.support),
    countText: String(core.count),
  }));
}

export function buildSessionView(session: SessionBody): SessionView {
  const coreIds = new Set(session.core);
  return {
    id: session.id,
    frameTitle: session.frame.labels.join(" + "),
    filterLabel: session.filter === "" ? "all data" : session.filter,
    subsetN: session.subset_n,
    setSizeText: session.set_size === null ? "unbounded" : String(session.set_size),
    thresholdText: formatAgreement(session.threshold),
    chosen: session.chosen.map((entry) => ({
      id: entry.id,
      label: entry.label,
      step: entry.step,
      agreementBadge: formatAgreement(entry.agreement_at_add),
      isCore: coreIds.has(entry.id),
    })),
    candidates: session.candidates.map((candidate) => ({
      id: candidate.id,
      label: candidate.label,
      rank: candidate.rank,
      agreementBadge: formatAgreement(candidate.projected_agreement),
      greyed: !candidate.eligible,
    })),
    interval: session.interval === null ? null : {
      lowerText: formatAgreement(session.interval.lower),
      upperText: formatAgreement(session.interval.upper),
    },
    minAgreementText: formatAgreement(session.min_agreement),
  };
}

export function buildRankingView(body: RankingBody): RankingView {
  return {
    subsetN: body.subset_n,
    sizes: body.sizes.map((entry) => ({
      setSize: entry.set_size,
      variantCount: entry.variant_count,
      rows: entry.ranks.map((rank) => ({
        label: rank.label ?? rank.practice,
        firstIndex: rank.first_index,
        agreementText: formatAgreement(rank.agreement),
      })),
    })),
  };
}
