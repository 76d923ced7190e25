/** DOM rendering for the board, inbox and roster screens. Everything here
 * renders from the row models in render.ts; handlers delegate to the store. */

import type { Store } from './state.js';
import { buildClientBoard, buildDateBoard, type DayCell } from './render.js';
import { formToPayload, validateClientForm, type ClientForm } from './validate.js';

function esc(s: unknown): string {
  return String(s ?? '').replace(/[&<>"']/g, (ch) => `&#${ch.charCodeAt(0)};`);
}

function statusBadge(status: string): string {
  return `<span class="badge badge-${esc(status)}">${esc(status)}</span>`;
}

function renderDayCell(cell: DayCell): string {
  const classes = ['day', `day-${cell.kind}`];
  if (cell.highlighted) classes.push('day-regenerated');
  if (cell.windowBoundaryAfter) classes.push('day-window-boundary');
  let body = '';
  if (cell.kind === 'travel' && cell.travel) {
    body = `<div class="travel">&#8702; ${esc(cell.travel.from)} to ${esc(cell.travel.to)}</div>`;
  } else if (cell.kind === 'visiting') {
    body =
      `<div class="city">${esc(cell.city)}</div>` +
      cell.meetings
        .map(
          (m) =>
            `<div class="meeting meeting-${esc(m.status)}">` +
            `<span class="slot">${esc(m.slot)}</span> ${esc(m.client_name)}` +
            ` <span class="rank">r${esc(m.rank)}</span> v${esc(m.visit_number)} ${statusBadge(m.status)}</div>`,
        )
        .join('');
  } else {
    body = '<div class="idle-mark">idle</div>';
  }
  return `<div class="${classes.join(' ')}" data-day="${cell.day}"><div class="day-no">${cell.day}</div>${body}</div>`;
}

export function renderBoard(store: Store, root: HTMLElement) {
  const { state } = store;
  if (state.scheduleMissing || !state.dateRows || !state.clientRows) {
    root.innerHTML = '<p class="empty">No schedule yet. Generate one to see the board.</p>';
    return;
  }
  const denial = state.lastDenial
    ? `<p class="denial-note">Regenerated from day ${state.lastDenial.first_changed_day}: ` +
      `${state.lastDenial.meetings_moved} moved, ${state.lastDenial.meetings_dropped} dropped.</p>`
    : '';
  if (state.view === 'date') {
    const cells = buildDateBoard(state.dateRows, state.horizon, state.highlightFromDay);
    root.innerHTML = denial + `<div class="board">${cells.map(renderDayCell).join('')}</div>`;
  } else {
    const rows = buildClientBoard(state.clientRows).filter((r) =>
      r.chips.some((c) => c.day <= state.horizon),
    );
    root.innerHTML =
      denial +
      `<table class="client-table"><thead><tr><th>client</th><th>rank</th><th>city</th><th>visits</th></tr></thead><tbody>` +
      rows
        .map(
          (r) =>
            `<tr><td>${esc(r.client_name)}</td><td>${esc(r.rank)}</td><td>${esc(r.city)}</td><td>` +
            r.chips
              .filter((c) => c.day <= store.state.horizon)
              .map(
                (c) =>
                  `<span class="chip chip-${esc(c.status)}">day ${c.day} ${esc(c.slot)} (v${c.visit_number})</span>`,
              )
              .join(' ') +
            `</td></tr>`,
        )
        .join('') +
      `</tbody></table>`;
  }
}

export function renderInbox(store: Store, root: HTMLElement) {
  const { pending, scheduleMissing } = store.state;
  if (scheduleMissing) {
    root.innerHTML = '<p class="empty">Nothing pending: no schedule.</p>';
    return;
  }
  if (!pending.length) {
    root.innerHTML = '<p class="empty">Inbox empty: every meeting is answered.</p>';
    return;
  }
  root.innerHTML =
    `<table class="inbox"><thead><tr><th>meeting</th><th>client</th><th>day</th><th>slot</th><th>visit</th><th></th></tr></thead><tbody>` +
    pending
      .map(
        (m) =>
          `<tr><td>${esc(m.meeting_id)}</td><td>${esc(m.client_id)}</td><td>${m.day_index}</td>` +
          `<td>${esc(m.slot)}</td><td>${m.visit_number}</td><td>` +
          `<button data-action="confirm" data-id="${esc(m.meeting_id)}">confirm</button> ` +
          `<button data-action="deny" data-id="${esc(m.meeting_id)}" class="danger">deny</button></td></tr>`,
      )
      .join('') +
    `</tbody></table>`;
}

export function renderRoster(store: Store, root: HTMLElement, formErrors: Record<string, string>) {
  const { clients, suggestions } = store.state;
  const err = (field: string) =>
    formErrors[field] ? `<span class="field-error">${esc(formErrors[field])}</span>` : '';
  root.innerHTML =
    `<form id="client-form" class="client-form">` +
    `<input name="client_id" placeholder="client id"> ${err('client_id')}` +
    `<input name="name" placeholder="name">` +
    `<input name="country" placeholder="country"> ${err('country')}` +
    `<input name="city" placeholder="city"> ${err('city')}` +
    `<input name="rank" placeholder="rank (1-5 or blank)"> ${err('rank')}` +
    `<input name="teu" placeholder="teu"> ${err('teu')}` +
    `<button type="submit">save client</button></form>` +
    `<table class="roster"><thead><tr><th>id</th><th>name</th><th>city</th><th>rank</th><th>teu</th><th></th></tr></thead><tbody>` +
    clients
      .map(
        (c) =>
          `<tr><td>${esc(c.client_id)}</td><td>${esc(c.name)}</td><td>${esc(c.city)}</td>` +
          `<td>${esc(c.rank)}</td><td>${esc(c.teu)}</td><td>` +
          `<button data-action="calc" data-id="${esc(c.client_id)}">calculate rank</button> ` +
          `<button data-action="remove" data-id="${esc(c.client_id)}" class="danger">remove</button></td></tr>`,
      )
      .join('') +
    `</tbody></table>` +
    `<h3>Rank suggestions</h3>` +
    `<table class="suggestions"><thead><tr><th>client</th><th>current</th><th>suggested</th><th>reasons</th><th></th></tr></thead><tbody>` +
    suggestions
      .map(
        (s) =>
          `<tr><td>${esc(s.client_id)}</td><td>${esc(s.current_rank)}</td><td>${esc(s.suggested_rank)}</td>` +
          `<td>${esc(s.reasons.join(', '))}</td><td>` +
          (s.current_rank === s.suggested_rank
            ? ''
            : `<button data-action="accept" data-id="${esc(s.client_id)}">accept</button>`) +
          `</td></tr>`,
      )
      .join('') +
    `</tbody></table>`;
}

export function readClientForm(form: HTMLFormElement): ClientForm {
  const get = (name: string) => (form.elements.namedItem(name) as HTMLInputElement)?.value ?? '';
  return {
    client_id: get('client_id'),
    name: get('name'),
    country: get('country'),
    city: get('city'),
    rank: get('rank'),
    teu: get('teu'),
  };
}

export { formToPayload, validateClientForm };
