/** App bootstrap: wires the store to the three screens and the toolbar. */

import { Api } from './api.js';
import { readClientForm, renderBoard, renderInbox, renderRoster } from './dom.js';
import { Store } from './state.js';
import { formToPayload, validateClientForm } from './validate.js';

const api = new Api();
const store = new Store(api);

let activeTab: 'board' | 'inbox' | 'roster' = 'board';
let formErrors: Record<string, string> = {};

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

function renderAll() {
  const { state } = store;
  $('revision').textContent = `revision ${state.revision}`;
  const banner = $('error-banner');
  if (state.error) {
    banner.textContent = `${state.error} `;
    const retry = document.createElement('button');
    retry.textContent = 'retry';
    retry.onclick = () => {
      store.clearError();
      void refreshActive();
    };
    banner.appendChild(retry);
    banner.classList.remove('hidden');
  } else {
    banner.classList.add('hidden');
  }
  for (const tab of ['board', 'inbox', 'roster'] as const) {
    $(`tab-${tab}`).classList.toggle('active', tab === activeTab);
    $(`screen-${tab}`).classList.toggle('hidden', tab !== activeTab);
  }
  (document.querySelector('#view-toggle [data-view="date"]') as HTMLElement)?.classList.toggle(
    'active',
    state.view === 'date',
  );
  (document.querySelector('#view-toggle [data-view="client"]') as HTMLElement)?.classList.toggle(
    'active',
    state.view === 'client',
  );
  (document.querySelector('#horizon-toggle [data-horizon="90"]') as HTMLElement)?.classList.toggle(
    'active',
    state.horizon === 90,
  );
  (document.querySelector('#horizon-toggle [data-horizon="180"]') as HTMLElement)?.classList.toggle(
    'active',
    state.horizon === 180,
  );
  renderBoard(store, $('screen-board-content'));
  renderInbox(store, $('screen-inbox'));
  renderRoster(store, $('screen-roster'), formErrors);
}

async function refreshActive() {
  await store.refreshSchedule();
  await store.loadRoster();
  await store.loadSuggestions();
}

function wireEvents() {
  $('tab-board').onclick = () => {
    activeTab = 'board';
    renderAll();
  };
  $('tab-inbox').onclick = () => {
    activeTab = 'inbox';
    renderAll();
  };
  $('tab-roster').onclick = () => {
    activeTab = 'roster';
    renderAll();
  };

  $('view-toggle').onclick = (e) => {
    const view = (e.target as HTMLElement).dataset.view;
    if (view === 'date' || view === 'client') store.setView(view);
  };
  $('horizon-toggle').onclick = (e) => {
    const horizon = (e.target as HTMLElement).dataset.horizon;
    if (horizon) store.setHorizon(Number(horizon) as 90 | 180);
  };
  $('generate-greedy').onclick = () => void store.generate('greedy', Date.now() % 100000);
  $('generate-ga').onclick = () => void store.generate('ga', Date.now() % 100000);

  $('screen-inbox').onclick = (e) => {
    const btn = e.target as HTMLElement;
    const id = btn.dataset.id;
    if (!id) return;
    if (btn.dataset.action === 'confirm') void store.respond(id, 'confirmed');
    if (btn.dataset.action === 'deny') {
      void store.respond(id, 'denied', () =>
        window.confirm(`Deny ${id}? The schedule from that day onward will be regenerated.`),
      );
    }
  };

  $('screen-roster').addEventListener('submit', (e) => {
    const form = e.target as HTMLFormElement;
    if (form.id !== 'client-form') return;
    e.preventDefault();
    const values = readClientForm(form);
    formErrors = validateClientForm(values);
    if (Object.keys(formErrors).length) {
      renderAll();
      return;
    }
    void store.saveClient(formToPayload(values)).then(() => {
      formErrors = {};
    });
  });

  $('screen-roster').addEventListener('click', (e) => {
    const btn = e.target as HTMLElement;
    const id = btn.dataset.id;
    if (!id) return;
    if (btn.dataset.action === 'calc') void store.setRank(id, 'calculated');
    if (btn.dataset.action === 'remove') {
      void store.removeClient(id, () => window.confirm(`Remove client ${id}?`));
    }
    if (btn.dataset.action === 'accept') {
      const suggestion = store.state.suggestions.find((s) => s.client_id === id);
      if (suggestion) void store.acceptSuggestion(suggestion);
    }
  });
}

store.subscribe(renderAll);
wireEvents();
void refreshActive();
