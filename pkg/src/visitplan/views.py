"""Pure projections of the active schedule for the UI and CLI."""

from __future__ import annotations

from .domain import DAY_TRAVEL, DAY_VISITING, Client, Schedule
from .errors import ValidationError
from .instance import slot_position

VIEW_DATE = "date"
VIEW_CLIENT = "client"
HORIZONS = (90, 180)


def schedule_view(
    schedule: Schedule,
    clients_by_id: dict[str, Client],
    view: str,
    horizon: int,
) -> dict:
    """Render the schedule as rows, either day-by-day or client-by-client,
    truncated to the requested horizon."""
    if view not in (VIEW_DATE, VIEW_CLIENT):
        raise ValidationError(f"view must be date or client, got {view!r}", field="view")
    if horizon not in HORIZONS:
        raise ValidationError(f"horizon must be 90 or 180, got {horizon}", field="horizon")

    days = [d for d in schedule.days if d.day_index <= horizon]
    if view == VIEW_DATE:
        rows = []
        for day in days:
            if day.kind == DAY_TRAVEL:
                rows.append(
                    {
                        "day_index": day.day_index,
                        "kind": "travel",
                        "from_city": day.from_city,
                        "to_city": day.to_city,
                    }
                )
            elif day.kind == DAY_VISITING:
                for m in sorted(day.meetings, key=lambda m: slot_position(m.slot, 0)):
                    client = clients_by_id.get(m.client_id)
                    rows.append(
                        {
                            "day_index": day.day_index,
                            "kind": "meeting",
                            "city": day.city,
                            "slot": m.slot,
                            "meeting_id": m.meeting_id,
                            "client_id": m.client_id,
                            "client_name": client.name if client else m.client_id,
                            "rank": client.rank if client else None,
                            "visit_number": m.visit_number,
                            "status": m.status,
                        }
                    )
        return {"view": view, "horizon": horizon, "rows": rows, "stats": schedule.stats.to_dict()}

    per_client: dict[str, list[dict]] = {}
    for day in days:
        if day.kind != DAY_VISITING:
            continue
        for m in sorted(day.meetings, key=lambda m: slot_position(m.slot, 0)):
            per_client.setdefault(m.client_id, []).append(
                {
                    "day_index": day.day_index,
                    "slot": m.slot,
                    "city": day.city,
                    "meeting_id": m.meeting_id,
                    "visit_number": m.visit_number,
                    "status": m.status,
                }
            )
    rows = []
    for client_id, visits in per_client.items():
        client = clients_by_id.get(client_id)
        rows.append(
            {
                "client_id": client_id,
                "client_name": client.name if client else client_id,
                "rank": client.rank if client else None,
                "city": client.city if client else "",
                "visits": sorted(visits, key=lambda v: v["day_index"]),
            }
        )
    rows.sort(key=lambda r: (r["rank"] if r["rank"] is not None else 9, r["client_name"], r["client_id"]))
    return {"view": view, "horizon": horizon, "rows": rows, "stats": schedule.stats.to_dict()}
