/** Central store: one state object derived purely from the last fetched
 * server snapshot plus in-flight form state. All schedule math stays
 * server-side; mutations round-trip through the API and refetch. */

import {
  Api,
  ApiError,
  type ClientInfo,
  type ClientRow,
  type DateRow,
  type DenySummary,
  type PendingMeeting,
  type RankSuggestion,
  type Stats,
} from './api.js';

export type ViewKind = 'date' | 'client';
export type Horizon = 90 | 180;

export interface AppState {
  revision: number;
  view: ViewKind;
  horizon: Horizon;
  // full-horizon row caches; horizon toggling truncates locally
  dateRows: DateRow[] | null;
  clientRows: ClientRow[] | null;
  stats: Stats | null;
  scheduleMissing: boolean;
  pending: PendingMeeting[];
  clients: ClientInfo[];
  suggestions: RankSuggestion[];
  highlightFromDay: number | null;
  lastDenial: DenySummary | null;
  error: string | null;
  errorField: string | null;
}

const initialState: AppState = {
  revision: 0,
  view: 'date',
  horizon: 180,
  dateRows: null,
  clientRows: null,
  stats: null,
  scheduleMissing: true,
  pending: [],
  clients: [],
  suggestions: [],
  highlightFromDay: null,
  lastDenial: null,
  error: null,
  errorField: null,
};

export class Store {
  state: AppState = { ...initialState };
  private listeners: Array<() => void> = [];

  constructor(private api: Api) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<AppState>) {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener();
  }

  private fail(e: unknown) {
    if (e instanceof ApiError) {
      if (e.code === 'not_generated') {
        this.set({ scheduleMissing: true, dateRows: null, clientRows: null, error: null });
        return;
      }
      this.set({ error: e.message, errorField: e.field });
    } else {
      this.set({ error: String(e), errorField: null });
    }
  }

  clearError() {
    this.set({ error: null, errorField: null });
  }

  /** Reload both view shapes at the full horizon plus the pending inbox. */
  async refreshSchedule(): Promise<void> {
    try {
      const date = await this.api.getSchedule('date', 180);
      const client = await this.api.getSchedule('client', 180);
      const pending = await this.api.getPending();
      this.set({
        dateRows: date.rows as DateRow[],
        clientRows: client.rows as ClientRow[],
        stats: date.stats,
        scheduleMissing: false,
        pending: pending.pending,
        revision: pending.revision,
        error: null,
        errorField: null,
      });
    } catch (e) {
      this.fail(e);
    }
  }

  setView(view: ViewKind) {
    this.set({ view });
  }

  /** Horizon is a pure local truncation of the cached full-horizon rows. */
  setHorizon(horizon: Horizon) {
    this.set({ horizon });
  }

  async generate(optimizer: 'greedy' | 'ga', seed: number): Promise<void> {
    try {
      await this.api.generate(optimizer, seed);
      this.set({ highlightFromDay: null, lastDenial: null });
      await this.refreshSchedule();
    } catch (e) {
      this.fail(e);
    }
  }

  /**
   * Confirm or deny a pending meeting. Denials must pass the caller's
   * confirmation gate first; nothing is sent when the gate declines.
   */
  async respond(
    meetingId: string,
    decision: 'confirmed' | 'denied',
    confirmGate: () => boolean = () => true,
  ): Promise<void> {
    if (decision === 'denied' && !confirmGate()) return;
    try {
      const result = await this.api.respond(meetingId, decision);
      if (decision === 'denied') {
        this.set({ highlightFromDay: result.first_changed_day, lastDenial: result });
      }
      await this.refreshSchedule();
    } catch (e) {
      this.fail(e);
    }
  }

  async loadRoster(): Promise<void> {
    try {
      const res = await this.api.listClients();
      this.set({ clients: res.clients, revision: res.revision, error: null, errorField: null });
    } catch (e) {
      this.fail(e);
    }
  }

  async saveClient(data: Partial<ClientInfo> & { client_id: string }): Promise<boolean> {
    const isNew = !this.state.clients.some((c) => c.client_id === data.client_id);
    try {
      await this.api.saveClient(data, isNew);
      await this.loadRoster();
      return this.state.error === null;
    } catch (e) {
      this.fail(e);
      return false;
    }
  }

  /** Remove a client behind a confirmation dialog; cancel issues nothing. */
  async removeClient(clientId: string, confirmGate: () => boolean): Promise<void> {
    if (!confirmGate()) return;
    try {
      await this.api.removeClient(clientId);
      await this.loadRoster();
    } catch (e) {
      this.fail(e);
    }
  }

  async setRank(clientId: string, mode: 'manual' | 'calculated', value?: number): Promise<void> {
    try {
      await this.api.setRank(clientId, mode, value);
      await this.loadRoster();
    } catch (e) {
      this.fail(e);
    }
  }

  async loadSuggestions(): Promise<void> {
    try {
      const res = await this.api.getSuggestions();
      this.set({ suggestions: res.suggestions, revision: res.revision });
    } catch (e) {
      this.fail(e);
    }
  }

  async acceptSuggestion(s: RankSuggestion): Promise<void> {
    await this.setRank(s.client_id, 'manual', s.suggested_rank);
    await this.loadSuggestions();
  }
}
