// The only module that talks to the network. Server error bodies are
// surfaced verbatim through ApiError so the banner can show them unchanged.

import type {
  CatalogBody,
  CoresBody,
  ErrorBody,
  ExportBody,
  FramesBody,
  RankingBody,
  SessionBody,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody | null,
  ) {
    super(body?.error?.message ?? `request failed with status ${status}`);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let body: ErrorBody | null = null;
    try {
      body = (await response.json()) as ErrorBody;
    } catch {
      body = null;
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

export interface SessionRequest {
  frame: string[];
  filter?: string | null;
  core?: string[];
  set_size?: number | null;
  threshold?: number;
}

export class Client {
  constructor(private readonly base: string) {}

  catalog(): Promise<CatalogBody> {
    return request(this.base, "/catalog");
  }

  frames(filter?: string): Promise<FramesBody> {
    const query = filter ? `?filter=${encodeURIComponent(filter)}` : "";
    return request(this.base, `/frames${query}`);
  }

  cores(filter?: string): Promise<CoresBody> {
    const query = filter ? `?filter=${encodeURIComponent(filter)}` : "";
    return request(this.base, `/cores${query}`);
  }

  ranking(frame: string[], filter?: string): Promise<RankingBody> {
    const ids = encodeURIComponent(frame.join(","));
    const query = filter ? `?filter=${encodeURIComponent(filter)}` : "";
    return request(this.base, `/frames/${ids}/ranking${query}`);
  }

  createSession(payload: SessionRequest): Promise<SessionBody> {
    return request(this.base, "/sessions", {
      method: "POST",
      body: JSON.stringify(payload),
    });
  }

  getSession(id: string): Promise<SessionBody> {
    return request(this.base, `/sessions/${id}`);
  }

  addPractice(id: string, itemId: string): Promise<SessionBody> {
    return request(this.base, `/sessions/${id}/practices`, {
      method: "POST",
      body: JSON.stringify({ item_id: itemId }),
    });
  }

  removePractice(id: string, itemId: string): Promise<SessionBody> {
    return request(this.base, `/sessions/${id}/practices/${itemId}`, {
      method: "DELETE",
    });
  }

  exportSession(id: string): Promise<ExportBody> {
    return request(this.base, `/sessions/${id}/export`);
  }
}
