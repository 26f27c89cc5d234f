// DTOs mirroring the service's JSON bodies. The client never derives
// numbers from these fields; it only formats and displays them.

export interface CatalogItem {
  id: string;
  kind: "method" | "practice";
  label: string;
}

export interface CatalogBody {
  items: CatalogItem[];
}

export interface FrameSummary {
  members: string[];
  count: number;
  n: number;
  support: number;
  source: "all_data" | "filtered";
}

export interface FramesBody {
  frames: FrameSummary[];
}

export interface CoreSummary {
  members: string[];
  count: number;
  n: number;
  support: number;
}

export interface CoresBody {
  cores: CoreSummary[];
}

export interface ChosenEntry {
  id: string;
  label: string;
  step: number;
  agreement_at_add: number;
}

export interface CandidateEntry {
  id: string;
  label: string;
  rank: number;
  projected_agreement: number;
  eligible: boolean;
}

export interface Interval {
  lower: number;
  upper: number;
  from_size?: number;
  to_size?: number;
}

export interface SessionBody {
  id: string;
  frame: { members: string[]; labels: string[] };
  filter: string;
  core: string[];
  set_size: number | null;
  threshold: number;
  subset_n: number;
  chosen: ChosenEntry[];
  candidates: CandidateEntry[];
  interval: Interval | null;
  min_agreement: number | null;
}

export interface RankEntry {
  practice: string;
  label?: string;
  first_index: number;
  agreement: number;
}

export interface RankingSize {
  set_size: number;
  variant_count: number;
  ranks: RankEntry[];
}

export interface RankingBody {
  frame: string[];
  subset_n: number;
  threshold: number;
  sizes: RankingSize[];
}

export interface ExportBody {
  frame: string[];
  core: string[];
  practices: { id: string; step: number; agreement_at_add: number }[];
  final_min_agreement: number | null;
  interval: { lower: number; upper: number } | null;
  subset_n: number;
  filter: string;
}

export interface ErrorBody {
  error: { code: string; message: string };
}
