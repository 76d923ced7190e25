/** Pure row-model builders for the schedule board. No DOM access here so
 * the steering-loop tests can run without a browser. */

import type { ClientRow, DateRow } from './api.js';

export interface MeetingCell {
  meeting_id: string;
  client_id: string;
  client_name: string;
  slot: string;
  rank: number | null;
  visit_number: number;
  status: string;
}

export interface DayCell {
  day: number;
  kind: 'idle' | 'travel' | 'visiting';
  city: string;
  travel?: { from: string; to: string };
  meetings: MeetingCell[];
  inFirstWindow: boolean;
  windowBoundaryAfter: boolean;
  highlighted: boolean;
}

/** Expand sparse schedule rows into one cell per day, idle days included,
 * marking the 90-day boundary and any regenerated region. */
export function buildDateBoard(
  rows: DateRow[],
  horizon: 90 | 180,
  highlightFromDay: number | null = null,
): DayCell[] {
  const byDay = new Map<number, DateRow[]>();
  for (const row of rows) {
    if (row.day_index > horizon) continue;
    const bucket = byDay.get(row.day_index) ?? [];
    bucket.push(row);
    byDay.set(row.day_index, bucket);
  }
  const cells: DayCell[] = [];
  for (let day = 1; day <= horizon; day++) {
    const bucket = byDay.get(day) ?? [];
    const cell: DayCell = {
      day,
      kind: 'idle',
      city: '',
      meetings: [],
      inFirstWindow: day <= 90,
      windowBoundaryAfter: day === 90,
      highlighted: highlightFromDay !== null && day >= highlightFromDay,
    };
    for (const row of bucket) {
      if (row.kind === 'travel') {
        cell.kind = 'travel';
        cell.travel = { from: row.from_city ?? '', to: row.to_city ?? '' };
      } else {
        cell.kind = 'visiting';
        cell.city = row.city ?? '';
        cell.meetings.push({
          meeting_id: row.meeting_id ?? '',
          client_id: row.client_id ?? '',
          client_name: row.client_name ?? row.client_id ?? '',
          slot: row.slot ?? '',
          rank: row.rank ?? null,
          visit_number: row.visit_number ?? 1,
          status: row.status ?? 'tentative',
        });
      }
    }
    cells.push(cell);
  }
  return cells;
}

export interface ClientBoardRow {
  client_id: string;
  client_name: string;
  rank: number | null;
  city: string;
  chips: { day: number; slot: string; status: string; visit_number: number }[];
}

export function buildClientBoard(rows: ClientRow[]): ClientBoardRow[] {
  return rows.map((row) => ({
    client_id: row.client_id,
    client_name: row.client_name,
    rank: row.rank,
    city: row.city,
    chips: row.visits.map((v) => ({
      day: v.day_index,
      slot: v.slot,
      status: v.status,
      visit_number: v.visit_number,
    })),
  }));
}

/** Comparable serialization of the cells strictly before a given day;
 * highlight flags are presentation-only and excluded. */
export function boardPrefix(cells: DayCell[], beforeDay: number): string {
  return JSON.stringify(
    cells
      .filter((c) => c.day < beforeDay)
      .map(({ highlighted, ...rest }) => rest),
  );
}

/** First day whose cell differs between two boards, or null if identical. */
export function firstDifferingDay(a: DayCell[], b: DayCell[]): number | null {
  const strip = ({ highlighted, ...rest }: DayCell) => JSON.stringify(rest);
  const n = Math.max(a.length, b.length);
  for (let i = 0; i < n; i++) {
    if (!a[i] || !b[i] || strip(a[i]) !== strip(b[i])) return i + 1;
  }
  return null;
}
