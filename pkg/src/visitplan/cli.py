"""Operator command line: ingestion, ranking, schedule generation and views,
confirmation responses, case memory, and serving the HTTP API.

Exit codes: 0 success, 1 engine error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .domain import canonical_json_bytes
from .errors import EngineError
from .store import Engine
from .views import schedule_view


def _table(rows: list[dict], columns: list[str]) -> str:
    if not rows:
        return "(empty)"
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in columns}
    head = "  ".join(c.ljust(widths[c]) for c in columns)
    sep = "  ".join("-" * widths[c] for c in columns)
    body = "\n".join("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns) for r in rows)
    return f"{head}\n{sep}\n{body}"


def _emit(payload, rows: list[dict] | None, columns: list[str] | None, fmt: str):
    if fmt == "json":
        print(canonical_json_bytes(payload).decode())
    else:
        if rows is None:
            print(json.dumps(payload, sort_keys=True, indent=2))
        else:
            print(_table(rows, columns or (list(rows[0]) if rows else [])))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="visitplan", description=__doc__)
    parser.add_argument("--data-dir", default="./visitplan-data", help="state directory")
    parser.add_argument("--config", default=None, help="engine config JSON file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load roster files")
    p.add_argument("--clients", required=True)
    p.add_argument("--terminals", default=None)

    p = sub.add_parser("rank", help="rank operations")
    rank_sub = p.add_subparsers(dest="rank_command", required=True)
    rp = rank_sub.add_parser("suggest", help="list rank suggestions")
    rp.add_argument("--variation-threshold-pct", type=float, default=None)
    rp.add_argument("--format", choices=("table", "json"), default="table")
    rp = rank_sub.add_parser("set", help="set a rank manually")
    rp.add_argument("client_id")
    rp.add_argument("rank", type=int)
    rp = rank_sub.add_parser("calc", help="calculate a rank from TEU")
    rp.add_argument("client_id")

    p = sub.add_parser("schedule", help="schedule operations")
    sched_sub = p.add_subparsers(dest="schedule_command", required=True)
    sp = sched_sub.add_parser("generate", help="generate the schedule")
    sp.add_argument("--optimizer", choices=("greedy", "ga"), default="greedy")
    sp.add_argument("--seed", type=int, default=0)
    sp = sched_sub.add_parser("show", help="show the active schedule")
    sp.add_argument("--view", choices=("date", "client"), default="date")
    sp.add_argument("--horizon", type=int, choices=(90, 180), default=180)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp = sched_sub.add_parser("check", help="day-budget feasibility report")
    sp.add_argument("--format", choices=("table", "json"), default="json")

    p = sub.add_parser("meeting", help="confirmation responses")
    meet_sub = p.add_subparsers(dest="meeting_command", required=True)
    mp = meet_sub.add_parser("list-pending", help="tentative meetings awaiting response")
    mp.add_argument("--format", choices=("table", "json"), default="table")
    mp = meet_sub.add_parser("confirm", help="confirm a meeting")
    mp.add_argument("meeting_id")
    mp = meet_sub.add_parser("deny", help="deny a meeting and regenerate")
    mp.add_argument("meeting_id")

    p = sub.add_parser("case", help="case memory")
    case_sub = p.add_subparsers(dest="case_command", required=True)
    cp = case_sub.add_parser("list", help="list retained cases")
    cp.add_argument("--format", choices=("table", "json"), default="table")
    cp = case_sub.add_parser("retain", help="retain the active schedule as a case")
    cp.add_argument("--notes", default="")
    cp = case_sub.add_parser("retrieve", help="retrieve the best matching case")
    cp.add_argument("--format", choices=("table", "json"), default="json")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui-dir", default=None, help="static UI bundle directory")

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    engine = Engine(config=load_config(args.config), data_dir=args.data_dir)

    if args.command == "ingest":
        clients_path = Path(args.clients)
        if not clients_path.exists():
            print(f"error: {clients_path} not found", file=sys.stderr)
            return 1
        terminals_bytes = None
        if args.terminals:
            terminals_path = Path(args.terminals)
            if not terminals_path.exists():
                print(f"error: {terminals_path} not found", file=sys.stderr)
                return 1
            terminals_bytes = terminals_path.read_bytes()
        issues = engine.ingest(clients_path.read_bytes(), terminals_bytes)
        for issue in issues:
            print(f"row {issue.row}: {issue.message}", file=sys.stderr)
        print(
            f"ingested {len(engine.state.clients)} clients, "
            f"{len(engine.state.terminals)} terminals (revision {engine.state.revision})"
        )
        return 0

    if args.command == "rank":
        if args.rank_command == "suggest":
            suggestions = [s.to_dict() for s in engine.rank_suggestions(args.variation_threshold_pct)]
            rows = [dict(s, reasons=",".join(s["reasons"])) for s in suggestions]
            _emit(
                {"suggestions": suggestions},
                rows,
                ["client_id", "current_rank", "suggested_rank", "reasons"],
                args.format,
            )
            return 0
        if args.rank_command == "set":
            client = engine.set_rank(args.client_id, "manual", args.rank)
            print(f"{client.client_id} rank={client.rank} (revision {engine.state.revision})")
            return 0
        client = engine.set_rank(args.client_id, "calculated")
        print(f"{client.client_id} rank={client.rank} (revision {engine.state.revision})")
        return 0

    if args.command == "schedule":
        if args.schedule_command == "generate":
            schedule = engine.generate(optimizer=args.optimizer, seed=args.seed)
            stats = schedule.stats
            print(
                f"generated {schedule.generator} schedule seed={schedule.seed}: "
                f"tvd={stats.tvd} ttd={stats.ttd} idle={stats.idle} cities={stats.n_cities} "
                f"(revision {engine.state.revision})"
            )
            return 0
        if args.schedule_command == "show":
            schedule = engine.require_schedule()
            payload = schedule_view(schedule, engine.clients_by_id(), args.view, args.horizon)
            if args.view == "date":
                rows = payload["rows"]
                cols = ["day_index", "kind", "city", "slot", "client_id", "visit_number", "status"]
                for r in rows:
                    if r["kind"] == "travel":
                        r["city"] = f"{r['from_city']}->{r['to_city']}"
            else:
                rows = [
                    {
                        "client_id": r["client_id"],
                        "rank": r["rank"],
                        "city": r["city"],
                        "visits": "; ".join(
                            f"day {v['day_index']} {v['slot']} ({v['status']})" for v in r["visits"]
                        ),
                    }
                    for r in payload["rows"]
                ]
                cols = ["client_id", "rank", "city", "visits"]
            _emit(payload, rows, cols, args.format)
            return 0
        report = engine.budget_report().to_dict()
        _emit({"report": report}, None, None, args.format)
        return 0

    if args.command == "meeting":
        if args.meeting_command == "list-pending":
            rows = [m.to_dict() for m in engine.pending_meetings()]
            _emit(
                {"pending": rows},
                rows,
                ["meeting_id", "client_id", "day_index", "slot", "visit_number"],
                args.format,
            )
            return 0
        status = "confirmed" if args.meeting_command == "confirm" else "denied"
        result = engine.respond(args.meeting_id, status)
        if status == "denied":
            print(
                f"denied {args.meeting_id}: first changed day {result['first_changed_day']}, "
                f"{result['meetings_moved']} moved, {result['meetings_dropped']} dropped "
                f"(revision {result['revision']})"
            )
        else:
            print(f"confirmed {args.meeting_id} (revision {result['revision']})")
        return 0

    if args.command == "case":
        if args.case_command == "list":
            rows = [
                {
                    "case_id": c.case_id,
                    "outcome": c.outcome,
                    "index_key": c.index_key,
                    "notes": c.notes,
                }
                for c in engine.state.case_base.cases
            ]
            _emit({"cases": rows}, rows, ["case_id", "outcome", "index_key", "notes"], args.format)
            return 0
        if args.case_command == "retain":
            case = engine.retain_active_case(notes=args.notes)
            print(f"retained {case.case_id} outcome={case.outcome} (revision {engine.state.revision})")
            return 0
        hit = engine.retrieve_for_roster()
        if hit is None:
            print("no matching case")
            return 0
        case, sim = hit
        _emit(
            {"case_id": case.case_id, "similarity": sim, "outcome": case.outcome},
            None,
            None,
            args.format,
        )
        return 0

    if args.command == "serve":
        import uvicorn

        from . import kernels
        from .service import create_app

        kernels.warmup()  # pay the JIT compile before the first request
        ui_dir = args.ui_dir
        if ui_dir is None:
            bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
            ui_dir = bundled if bundled.exists() else None
        app = create_app(engine, ui_dir=ui_dir)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except EngineError as e:
        print(json.dumps(e.as_dict(), sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
