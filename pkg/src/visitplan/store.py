"""Roster ingestion, versioned state snapshots, and the Engine facade.

The engine owns one ``EngineState`` value at a time. Every mutation builds a
candidate state, re-validates it, bumps the revision by exactly one and (when
a data directory is configured) writes a self-describing JSON snapshot. A
failed mutation leaves the previous state untouched.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

from .casebook import (
    Case,
    CaseBase,
    CaseDescriptor,
    retain as retain_case,
    retrieve as retrieve_case,
    reuse as reuse_case,
    revise as revise_case,
)
from .confirmation import (
    CONFIRMED,
    DENIED,
    ConfirmationLedger,
    ensure_pending,
    record_response,
    regenerate_from,
)
from .config import EngineConfig
from .domain import (
    VALID_RANKS,
    Client,
    Schedule,
    Terminal,
    Visitor,
    canonical_json_bytes,
    set_meeting_status,
    validate_roster,
    validate_schedule,
)
from .errors import (
    ConfirmationRequiredError,
    DuplicateKeyError,
    FormatError,
    NotFoundError,
    NotGeneratedError,
    RankOutOfRangeError,
    SnapshotVersionError,
    ValidationError,
)
from .optimizer import evolve, fitness
from .ranking import calculate_client_rate, apply_manual_rank, suggest_rank_update
from .scheduler import budget_check, generate_greedy_schedule

SNAPSHOT_FORMAT_VERSION = 1

CLIENT_HEADER = ["client_id", "name", "country", "city", "rank", "teu"]
TERMINAL_HEADER = ["terminal_id", "name", "owner_client_id", "city", "country", "teu"]


@dataclass(frozen=True)
class RowIssue:
    row: int
    message: str

    def to_dict(self) -> dict:
        return {"row": self.row, "message": self.message}


@dataclass(frozen=True)
class EngineState:
    clients: tuple[Client, ...] = ()
    terminals: tuple[Terminal, ...] = ()
    visitors: tuple[Visitor, ...] = ()
    previous_teu: tuple[tuple[str, int], ...] = ()
    active_schedule: Schedule | None = None
    ledger: ConfirmationLedger = field(default_factory=ConfirmationLedger)
    case_base: CaseBase = field(default_factory=CaseBase)
    revision: int = 0

    def client(self, client_id: str) -> Client | None:
        for c in self.clients:
            if c.client_id == client_id:
                return c
        return None

    def terminal(self, terminal_id: str) -> Terminal | None:
        for t in self.terminals:
            if t.terminal_id == terminal_id:
                return t
        return None

    def visitor(self, visitor_id: str) -> Visitor | None:
        for v in self.visitors:
            if v.visitor_id == visitor_id:
                return v
        return None

    def to_dict(self) -> dict:
        return {
            "clients": [c.to_dict() for c in self.clients],
            "terminals": [t.to_dict() for t in self.terminals],
            "visitors": [v.to_dict() for v in self.visitors],
            "previous_teu": {cid: teu for cid, teu in self.previous_teu},
            "active_schedule": self.active_schedule.to_dict() if self.active_schedule else None,
            "ledger": self.ledger.to_dict(),
            "case_base": self.case_base.to_dict(),
            "revision": self.revision,
        }

    @staticmethod
    def from_dict(d: dict) -> "EngineState":
        sched = d.get("active_schedule")
        return EngineState(
            clients=tuple(Client.from_dict(c) for c in d.get("clients", ())),
            terminals=tuple(Terminal.from_dict(t) for t in d.get("terminals", ())),
            visitors=tuple(Visitor.from_dict(v) for v in d.get("visitors", ())),
            previous_teu=tuple(sorted((k, int(v)) for k, v in d.get("previous_teu", {}).items())),
            active_schedule=Schedule.from_dict(sched) if sched else None,
            ledger=ConfirmationLedger.from_dict(d.get("ledger", {})),
            case_base=CaseBase.from_dict(d.get("case_base", {})),
            revision=int(d.get("revision", 0)),
        )


def _parse_int(value: str, what: str, row: int, issues: list[RowIssue]) -> int | None:
    try:
        n = int(value)
    except ValueError:
        issues.append(RowIssue(row, f"non-numeric {what}"))
        return None
    return n


def _read_rows(data: bytes, expected_header: list[str]) -> list[tuple[int, dict]]:
    text = data.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise FormatError(f"empty file, expected header {','.join(expected_header)}")
    header = [h.strip() for h in rows[0]]
    if header != expected_header:
        raise FormatError(
            f"bad header {','.join(header)!r}, expected {','.join(expected_header)!r}"
        )
    out = []
    for idx, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        out.append((idx, dict(zip(expected_header, (cell.strip() for cell in row)))))
    return out


def parse_roster_files(
    clients_bytes: bytes, terminals_bytes: bytes | None = None
) -> tuple[list[Client], list[Terminal], list[RowIssue]]:
    """Parse delimited roster files; rows with field-level problems are
    reported and skipped, duplicate ids abort the whole parse."""
    issues: list[RowIssue] = []
    clients: list[Client] = []
    seen: dict[str, int] = {}
    for row_no, row in _read_rows(clients_bytes, CLIENT_HEADER):
        if row["client_id"] in seen:
            raise DuplicateKeyError(
                f"duplicate client_id {row['client_id']!r} on rows "
                f"{seen[row['client_id']]} and {row_no}"
            )
        seen[row["client_id"]] = row_no
        teu = _parse_int(row["teu"], "teu", row_no, issues)
        if teu is None:
            continue
        rank: int | None = None
        if row["rank"]:
            rank = _parse_int(row["rank"], "rank", row_no, issues)
            if rank is None:
                continue
        if not row["client_id"]:
            issues.append(RowIssue(row_no, "missing client_id"))
            continue
        clients.append(
            Client(
                client_id=row["client_id"],
                name=row["name"],
                country=row["country"],
                city=row["city"],
                rank=rank,
                teu=teu,
            )
        )

    terminals: list[Terminal] = []
    if terminals_bytes:
        seen_t: dict[str, int] = {}
        for row_no, row in _read_rows(terminals_bytes, TERMINAL_HEADER):
            if row["terminal_id"] in seen_t:
                raise DuplicateKeyError(
                    f"duplicate terminal_id {row['terminal_id']!r} on rows "
                    f"{seen_t[row['terminal_id']]} and {row_no}"
                )
            seen_t[row["terminal_id"]] = row_no
            teu = _parse_int(row["teu"], "teu", row_no, issues)
            if teu is None:
                continue
            terminals.append(
                Terminal(
                    terminal_id=row["terminal_id"],
                    name=row["name"],
                    owner_client_id=row["owner_client_id"],
                    city=row["city"],
                    country=row["country"],
                    teu=teu,
                )
            )
    return clients, terminals, issues


def commit(state: EngineState, mutate) -> EngineState:
    """Apply a mutation function, re-validate, bump the revision by one."""
    candidate = mutate(state)
    violations = validate_roster(list(candidate.clients), list(candidate.terminals))
    if violations:
        detail = "; ".join(f"{v.entity_id}: {v.reason}" for v in violations[:5])
        raise ValidationError(f"mutation rejected: {detail}")
    return replace(candidate, revision=state.revision + 1)


def save_snapshot(state: EngineState) -> bytes:
    return canonical_json_bytes(
        {
            "format_version": SNAPSHOT_FORMAT_VERSION,
            "revision": state.revision,
            "state": state.to_dict(),
        }
    )


def load_snapshot(data: bytes) -> EngineState:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise FormatError(f"snapshot is not valid JSON: {e}") from e
    version = doc.get("format_version")
    if version != SNAPSHOT_FORMAT_VERSION:
        raise SnapshotVersionError(f"unknown snapshot format_version {version!r}")
    state = EngineState.from_dict(doc["state"])
    if state.revision != doc.get("revision"):
        raise FormatError("snapshot revision does not match embedded state")
    return state


def _locked(method):
    """Serialize a mutating Engine method through the writer lock."""

    def wrapper(self, *args, **kwargs):
        with self._write_lock:
            return method(self, *args, **kwargs)

    wrapper.__name__ = method.__name__
    wrapper.__doc__ = method.__doc__
    return wrapper


class Engine:
    """Single-writer facade over the engine state, shared by CLI and HTTP."""

    def __init__(self, config: EngineConfig | None = None, data_dir: str | Path | None = None):
        self.config = config or EngineConfig()
        self.data_dir = Path(data_dir) if data_dir else None
        # one writer at a time; readers see immutable state snapshots
        self._write_lock = threading.RLock()
        self.state = EngineState()
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            latest = self._latest_snapshot_path()
            if latest:
                self.state = load_snapshot(latest.read_bytes())

    # -- persistence -------------------------------------------------------

    def _snapshot_dir(self) -> Path:
        return self.data_dir / "snapshots"

    def _latest_snapshot_path(self) -> Path | None:
        snaps = sorted(self._snapshot_dir().glob("rev-*.json")) if self._snapshot_dir().exists() else []
        return snaps[-1] if snaps else None

    def _persist(self):
        if not self.data_dir:
            return
        sd = self._snapshot_dir()
        sd.mkdir(parents=True, exist_ok=True)
        path = sd / f"rev-{self.state.revision:08d}.json"
        path.write_bytes(save_snapshot(self.state))
        snaps = sorted(sd.glob("rev-*.json"))
        for old in snaps[: -self.config.snapshot_retention]:
            old.unlink()

    def _commit(self, mutate) -> EngineState:
        self.state = commit(self.state, mutate)
        self._persist()
        return self.state

    # -- helpers -----------------------------------------------------------

    @property
    def params(self):
        return self.config.schedule

    def clients_by_id(self) -> dict[str, Client]:
        return {c.client_id: c for c in self.state.clients}

    def require_client(self, client_id: str) -> Client:
        client = self.state.client(client_id)
        if client is None:
            raise NotFoundError(f"client {client_id} not found", field="client_id")
        return client

    def require_schedule(self) -> Schedule:
        if self.state.active_schedule is None:
            raise NotGeneratedError("no active schedule; generate one first")
        return self.state.active_schedule

    def _prune_schedule(self, state: EngineState) -> EngineState:
        """Drop the active schedule when a roster mutation invalidated it."""
        if state.active_schedule is None:
            return state
        clients_by_id = {c.client_id: c for c in state.clients}
        if validate_schedule(state.active_schedule, self.params, clients_by_id):
            return replace(state, active_schedule=None)
        return state

    def _with_previous_teu(self, state: EngineState, client_id: str, teu: int) -> EngineState:
        prev = dict(state.previous_teu)
        prev[client_id] = teu
        return replace(state, previous_teu=tuple(sorted(prev.items())))

    # -- roster ------------------------------------------------------------

    @_locked
    def ingest(self, clients_bytes: bytes, terminals_bytes: bytes | None = None) -> list[RowIssue]:
        clients, terminals, issues = parse_roster_files(clients_bytes, terminals_bytes)

        def mutate(state: EngineState) -> EngineState:
            prev = tuple(sorted((c.client_id, c.teu) for c in clients))
            return replace(
                state,
                clients=tuple(clients),
                terminals=tuple(terminals),
                previous_teu=prev,
                active_schedule=None,
                ledger=ConfirmationLedger(),
            )

        self._commit(mutate)
        return issues

    @_locked
    def upsert_client(self, data: dict) -> Client:
        client = Client.from_dict(data)
        if client.rank is not None and client.rank not in VALID_RANKS:
            raise RankOutOfRangeError(f"rank {client.rank} out of range 1..5", field="rank")
        if not client.client_id:
            raise ValidationError("client_id must be non-empty", field="client_id")
        if not client.city:
            raise ValidationError("city must be non-empty", field="city")
        if not client.country:
            raise ValidationError("country must be non-empty", field="country")
        if client.teu < 0:
            raise ValidationError("teu must be >= 0", field="teu")
        existing = self.state.client(client.client_id)

        def mutate(state: EngineState) -> EngineState:
            clients = tuple(
                client if c.client_id == client.client_id else c for c in state.clients
            )
            if existing is None:
                clients = state.clients + (client,)
            new = replace(state, clients=clients)
            if existing is None or existing.teu != client.teu:
                new = self._with_previous_teu(new, client.client_id, existing.teu if existing else client.teu)
            return self._prune_schedule(new)

        self._commit(mutate)
        return client

    @_locked
    def delete_client(self, client_id: str, confirm: bool = False) -> None:
        self.require_client(client_id)
        if not confirm:
            raise ConfirmationRequiredError(
                "removal must be confirmed", field="confirm"
            )

        def mutate(state: EngineState) -> EngineState:
            clients = tuple(c for c in state.clients if c.client_id != client_id)
            terminals = tuple(t for t in state.terminals if t.owner_client_id != client_id)
            records = tuple(r for r in state.ledger.records if r.client_id != client_id)
            prev = tuple((k, v) for k, v in state.previous_teu if k != client_id)
            new = replace(
                state,
                clients=clients,
                terminals=terminals,
                ledger=ConfirmationLedger(records=records),
                previous_teu=prev,
            )
            return self._prune_schedule(new)

        self._commit(mutate)

    @_locked
    def upsert_terminal(self, data: dict) -> Terminal:
        terminal = Terminal.from_dict(data)

        def mutate(state: EngineState) -> EngineState:
            rest = tuple(t for t in state.terminals if t.terminal_id != terminal.terminal_id)
            return replace(state, terminals=rest + (terminal,))

        self._commit(mutate)
        return terminal

    @_locked
    def delete_terminal(self, terminal_id: str, confirm: bool = False) -> None:
        if self.state.terminal(terminal_id) is None:
            raise NotFoundError(f"terminal {terminal_id} not found", field="terminal_id")
        if not confirm:
            raise ConfirmationRequiredError("removal must be confirmed", field="confirm")

        def mutate(state: EngineState) -> EngineState:
            return replace(
                state,
                terminals=tuple(t for t in state.terminals if t.terminal_id != terminal_id),
            )

        self._commit(mutate)

    @_locked
    def upsert_visitor(self, data: dict) -> Visitor:
        visitor = Visitor.from_dict(data)

        def mutate(state: EngineState) -> EngineState:
            rest = tuple(v for v in state.visitors if v.visitor_id != visitor.visitor_id)
            return replace(state, visitors=rest + (visitor,))

        self._commit(mutate)
        return visitor

    @_locked
    def delete_visitor(self, visitor_id: str, confirm: bool = False) -> None:
        if self.state.visitor(visitor_id) is None:
            raise NotFoundError(f"visitor {visitor_id} not found", field="visitor_id")
        if not confirm:
            raise ConfirmationRequiredError("removal must be confirmed", field="confirm")

        def mutate(state: EngineState) -> EngineState:
            return replace(
                state,
                visitors=tuple(v for v in state.visitors if v.visitor_id != visitor_id),
            )

        self._commit(mutate)

    # -- ranking -----------------------------------------------------------

    def owned_terminals(self, client_id: str) -> list[Terminal]:
        return [t for t in self.state.terminals if t.owner_client_id == client_id]

    @_locked
    def set_rank(self, client_id: str, mode: str, value: int | None = None) -> Client:
        client = self.require_client(client_id)
        if mode == "manual":
            if value is None:
                raise ValidationError("manual mode requires a value", field="value")
            updated = apply_manual_rank(client, value)
        elif mode == "calculated":
            rank = calculate_client_rate(client, self.owned_terminals(client_id), self.config.tiers)
            updated = replace(client, rank=rank)
        else:
            raise ValidationError(f"unknown rank mode {mode!r}", field="mode")

        def mutate(state: EngineState) -> EngineState:
            clients = tuple(
                updated if c.client_id == client_id else c for c in state.clients
            )
            return self._prune_schedule(replace(state, clients=clients))

        self._commit(mutate)
        return updated

    def rank_suggestions(self, variation_threshold_pct: float | None = None) -> list:
        threshold = (
            variation_threshold_pct
            if variation_threshold_pct is not None
            else self.config.variation_threshold_pct
        )
        interest: set[str] = set()
        for v in self.state.visitors:
            interest |= set(v.interest_countries)
        prev = dict(self.state.previous_teu)
        out = []
        for c in sorted(self.state.clients, key=lambda c: c.client_id):
            out.append(
                suggest_rank_update(
                    c,
                    previous_teu=prev.get(c.client_id, c.teu),
                    current_teu=c.teu,
                    interest_countries=interest,
                    tiers=self.config.tiers,
                    variation_threshold_pct=threshold,
                    terminals=self.owned_terminals(c.client_id),
                )
            )
        return out

    # -- scheduling --------------------------------------------------------

    def budget_report(self):
        if not self.state.clients:
            raise ValidationError("roster is empty")
        return budget_check(list(self.state.clients), self.params)

    @_locked
    def generate(self, optimizer: str = "greedy", seed: int = 0, workers: int = 1) -> Schedule:
        if optimizer not in ("greedy", "ga"):
            raise ValidationError(f"optimizer must be greedy or ga, got {optimizer!r}", field="optimizer")
        roster = list(self.state.clients)
        if not roster:
            raise ValidationError("roster is empty")
        ledger = self.state.ledger
        if optimizer == "greedy":
            schedule = generate_greedy_schedule(roster, self.params, ledger, seed=seed)
        else:
            seed_orders: list[list[str]] = []
            descriptor = CaseDescriptor.from_roster(roster, self.params)
            hit = retrieve_case(self.state.case_base, descriptor)
            if hit:
                seed_orders.append(reuse_case(hit[0], descriptor, roster))
            ga = replace(self.config.ga, seed=seed)
            schedule = evolve(
                roster,
                self.params,
                ledger,
                self.config.weights,
                ga,
                seed_city_orders=tuple(seed_orders),
                workers=workers,
            )
        pairs = {(m.client_id, m.visit_number) for m in schedule.meetings()}
        new_ledger = ensure_pending(ledger, pairs)

        def mutate(state: EngineState) -> EngineState:
            return replace(state, active_schedule=schedule, ledger=new_ledger)

        self._commit(mutate)
        return schedule

    def pending_meetings(self) -> list:
        schedule = self.require_schedule()
        return [m for m in schedule.meetings() if m.status == "tentative"]

    def find_meeting(self, meeting_id: str):
        schedule = self.require_schedule()
        for m in schedule.meetings():
            if m.meeting_id == meeting_id:
                return m
        raise NotFoundError(f"meeting {meeting_id} not found", field="meeting_id")

    @_locked
    def respond(self, meeting_id: str, status: str) -> dict:
        """Record a confirmation or denial; denial regenerates the suffix and
        returns a delta summary."""
        meeting = self.find_meeting(meeting_id)
        schedule = self.require_schedule()
        if status == CONFIRMED:
            new_ledger = record_response(
                self.state.ledger, meeting.client_id, meeting.visit_number, CONFIRMED, meeting.day_index
            )
            new_schedule = set_meeting_status(schedule, meeting_id, CONFIRMED)

            def mutate(state: EngineState) -> EngineState:
                return replace(state, active_schedule=new_schedule, ledger=new_ledger)

            self._commit(mutate)
            return {
                "revision": self.state.revision,
                "meeting_id": meeting_id,
                "status": CONFIRMED,
            }
        if status != DENIED:
            raise ValidationError(f"status must be confirmed or denied, got {status!r}", field="status")

        denial_day = meeting.day_index
        new_ledger = record_response(
            self.state.ledger, meeting.client_id, meeting.visit_number, DENIED, denial_day
        )
        new_schedule = regenerate_from(
            schedule, list(self.state.clients), self.params, new_ledger, denial_day, seed=schedule.seed
        )
        pairs = {(m.client_id, m.visit_number) for m in new_schedule.meetings()}
        new_ledger = ensure_pending(new_ledger, pairs)

        first_changed = None
        for old_day, new_day in zip(schedule.days, new_schedule.days):
            if old_day != new_day:
                first_changed = old_day.day_index
                break
        old_suffix = {
            (m.client_id, m.visit_number): (m.day_index, m.slot)
            for d in schedule.days[denial_day - 1 :]
            for m in d.meetings
        }
        new_all = {
            (m.client_id, m.visit_number): (m.day_index, m.slot)
            for d in new_schedule.days
            for m in d.meetings
        }
        denied_pair = (meeting.client_id, meeting.visit_number)
        moved = sum(
            1
            for pair, where in old_suffix.items()
            if pair != denied_pair and pair in new_all and new_all[pair] != where
        )
        dropped = sum(
            1
            for pair in old_suffix
            if pair != denied_pair
            and pair not in new_all
            and pair[0] != meeting.client_id
        )

        def mutate(state: EngineState) -> EngineState:
            return replace(state, active_schedule=new_schedule, ledger=new_ledger)

        self._commit(mutate)
        return {
            "revision": self.state.revision,
            "status": DENIED,
            "first_changed_day": first_changed if first_changed is not None else denial_day,
            "meetings_moved": moved,
            "meetings_dropped": dropped,
        }

    # -- case memory -------------------------------------------------------

    def evaluate_active_schedule(self) -> dict:
        schedule = self.require_schedule()
        denied = self.state.ledger.denied_clients()
        met = True
        for c in self.state.clients:
            if c.client_id in denied:
                continue
            mandated = self.params.visits_for(c.rank) if c.rank is not None else 0
            have = sum(1 for m in schedule.meetings() if m.client_id == c.client_id)
            if have < mandated:
                met = False
                break
        window_ok = not validate_schedule(schedule, self.params, self.clients_by_id())
        return {"met_quotas": met, "window_ok": window_ok}

    @_locked
    def retain_active_case(self, notes: str = "") -> Case:
        schedule = self.require_schedule()
        descriptor = CaseDescriptor.from_roster(list(self.state.clients), self.params)
        evaluation = self.evaluate_active_schedule()
        case = Case(
            case_id=f"case-{len(self.state.case_base.cases) + 1:04d}",
            descriptor=descriptor,
            schedule=schedule,
        )
        case = revise_case(case, evaluation["met_quotas"], evaluation["window_ok"], notes)
        new_base = retain_case(self.state.case_base, case)

        def mutate(state: EngineState) -> EngineState:
            return replace(state, case_base=new_base)

        self._commit(mutate)
        return case

    def retrieve_for_roster(self):
        descriptor = CaseDescriptor.from_roster(list(self.state.clients), self.params)
        return retrieve_case(self.state.case_base, descriptor)

    def schedule_fitness(self) -> float:
        schedule = self.require_schedule()
        return fitness(schedule, list(self.state.clients), self.params, self.config.weights)
