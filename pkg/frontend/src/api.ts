/** Typed client for the scheduling engine's /api/v1 surface. */

export interface Stats {
  tvd: number;
  ttd: number;
  idle: number;
  n_cities: number;
}

export interface DateRow {
  day_index: number;
  kind: 'travel' | 'meeting';
  city?: string;
  from_city?: string;
  to_city?: string;
  slot?: string;
  meeting_id?: string;
  client_id?: string;
  client_name?: string;
  rank?: number | null;
  visit_number?: number;
  status?: string;
}

export interface VisitChip {
  day_index: number;
  slot: string;
  city: string;
  meeting_id: string;
  visit_number: number;
  status: string;
}

export interface ClientRow {
  client_id: string;
  client_name: string;
  rank: number | null;
  city: string;
  visits: VisitChip[];
}

export interface ScheduleResponse {
  view: 'date' | 'client';
  horizon: number;
  rows: DateRow[] | ClientRow[];
  stats: Stats;
  revision: number;
}

export interface PendingMeeting {
  meeting_id: string;
  client_id: string;
  day_index: number;
  slot: string;
  visit_number: number;
  status: string;
}

export interface DenySummary {
  revision: number;
  status: string;
  first_changed_day: number;
  meetings_moved: number;
  meetings_dropped: number;
}

export interface ClientInfo {
  client_id: string;
  name: string;
  country: string;
  city: string;
  rank: number | null;
  teu: number;
  terminal_ids: string[];
}

export interface RankSuggestion {
  client_id: string;
  current_rank: number | null;
  suggested_rank: number;
  reasons: string[];
}

export class ApiError extends Error {
  constructor(
    public code: string,
    public field: string | null,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    private fetchFn: FetchLike = (...args) => fetch(...args),
    private base = '/api/v1',
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchFn(`${this.base}${path}`, {
        headers: { 'Content-Type': 'application/json' },
        ...init,
      });
    } catch (e) {
      throw new ApiError('unreachable', null, 'service unreachable');
    }
    const body = await res.json().catch(() => ({}));
    if (!res.ok) {
      throw new ApiError(body.code ?? 'http_error', body.field ?? null, body.message ?? `HTTP ${res.status}`);
    }
    return body as T;
  }

  getRevision(): Promise<{ revision: number }> {
    return this.request('/state/revision');
  }

  getSchedule(view: 'date' | 'client', horizon: 90 | 180): Promise<ScheduleResponse> {
    return this.request(`/schedule?view=${view}&horizon=${horizon}`);
  }

  getPending(): Promise<{ pending: PendingMeeting[]; revision: number }> {
    return this.request('/schedule/pending');
  }

  generate(optimizer: 'greedy' | 'ga', seed: number): Promise<{ revision: number; stats: Stats }> {
    return this.request('/schedule/generate', {
      method: 'POST',
      body: JSON.stringify({ optimizer, seed }),
    });
  }

  respond(meetingId: string, status: 'confirmed' | 'denied'): Promise<DenySummary> {
    return this.request(`/schedule/meetings/${meetingId}/response`, {
      method: 'POST',
      body: JSON.stringify({ status }),
    });
  }

  listClients(): Promise<{ clients: ClientInfo[]; revision: number }> {
    return this.request('/clients');
  }

  saveClient(data: Partial<ClientInfo> & { client_id: string }, isNew: boolean): Promise<{ client: ClientInfo; revision: number }> {
    const path = isNew ? '/clients' : `/clients/${data.client_id}`;
    return this.request(path, { method: isNew ? 'POST' : 'PUT', body: JSON.stringify(data) });
  }

  removeClient(clientId: string): Promise<{ revision: number }> {
    return this.request(`/clients/${clientId}?confirm=true`, { method: 'DELETE' });
  }

  setRank(clientId: string, mode: 'manual' | 'calculated', value?: number): Promise<{ client: ClientInfo; revision: number }> {
    return this.request(`/clients/${clientId}/rank`, {
      method: 'POST',
      body: JSON.stringify(value === undefined ? { mode } : { mode, value }),
    });
  }

  getSuggestions(): Promise<{ suggestions: RankSuggestion[]; revision: number }> {
    return this.request('/rank-suggestions');
  }
}
