import { describe, expect, it } from 'vitest';

import type { DateRow } from '../src/api.js';
import { buildDateBoard, buildClientBoard, boardPrefix, firstDifferingDay } from '../src/render.js';

const rows: DateRow[] = [
  { day_index: 1, kind: 'meeting', city: 'A', slot: 'AM', meeting_id: 'm-x-v1', client_id: 'x', client_name: 'X', rank: 1, visit_number: 1, status: 'tentative' },
  { day_index: 1, kind: 'meeting', city: 'A', slot: 'PM', meeting_id: 'm-y-v1', client_id: 'y', client_name: 'Y', rank: 2, visit_number: 1, status: 'confirmed' },
  { day_index: 2, kind: 'travel', from_city: 'A', to_city: 'B' },
  { day_index: 3, kind: 'meeting', city: 'B', slot: 'AM', meeting_id: 'm-z-v1', client_id: 'z', client_name: 'Z', rank: 3, visit_number: 1, status: 'tentative' },
  { day_index: 95, kind: 'meeting', city: 'A', slot: 'AM', meeting_id: 'm-x-v2', client_id: 'x', client_name: 'X', rank: 1, visit_number: 2, status: 'tentative' },
];

describe('buildDateBoard', () => {
  it('expands to one cell per day with idle fill', () => {
    const cells = buildDateBoard(rows, 180);
    expect(cells).toHaveLength(180);
    expect(cells[0].kind).toBe('visiting');
    expect(cells[0].meetings.map((m) => m.slot)).toEqual(['AM', 'PM']);
    expect(cells[1].kind).toBe('travel');
    expect(cells[1].travel).toEqual({ from: 'A', to: 'B' });
    expect(cells[3].kind).toBe('idle');
  });

  it('marks the 90-day window boundary', () => {
    const cells = buildDateBoard(rows, 180);
    expect(cells[89].windowBoundaryAfter).toBe(true);
    expect(cells[89].inFirstWindow).toBe(true);
    expect(cells[90].inFirstWindow).toBe(false);
    expect(cells.filter((c) => c.windowBoundaryAfter)).toHaveLength(1);
  });

  it('truncates to the 90-day horizon locally', () => {
    const cells = buildDateBoard(rows, 90);
    expect(cells).toHaveLength(90);
    expect(cells.some((c) => c.meetings.some((m) => m.meeting_id === 'm-x-v2'))).toBe(false);
  });

  it('highlights the regenerated region only', () => {
    const cells = buildDateBoard(rows, 180, 3);
    expect(cells[0].highlighted).toBe(false);
    expect(cells[1].highlighted).toBe(false);
    expect(cells[2].highlighted).toBe(true);
    expect(cells[179].highlighted).toBe(true);
  });
});

describe('board comparisons', () => {
  it('prefix serialization ignores highlight flags', () => {
    const plain = buildDateBoard(rows, 180, null);
    const highlighted = buildDateBoard(rows, 180, 2);
    expect(boardPrefix(plain, 5)).toBe(boardPrefix(highlighted, 5));
  });

  it('finds the first differing day', () => {
    const a = buildDateBoard(rows, 180);
    const b = buildDateBoard(
      rows.filter((r) => r.meeting_id !== 'm-z-v1'),
      180,
    );
    expect(firstDifferingDay(a, a)).toBeNull();
    expect(firstDifferingDay(a, b)).toBe(3);
  });
});

describe('buildClientBoard', () => {
  it('keeps one chip per visit', () => {
    const board = buildClientBoard([
      {
        client_id: 'x',
        client_name: 'X',
        rank: 1,
        city: 'A',
        visits: [
          { day_index: 1, slot: 'AM', city: 'A', meeting_id: 'm-x-v1', visit_number: 1, status: 'tentative' },
          { day_index: 95, slot: 'AM', city: 'A', meeting_id: 'm-x-v2', visit_number: 2, status: 'tentative' },
        ],
      },
    ]);
    expect(board[0].chips).toHaveLength(2);
    expect(board[0].chips.map((c) => c.day)).toEqual([1, 95]);
  });
});
