"""Deterministic report assembly and emission (json, csv, table)."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone

from supercong import __version__

PARAM_ORDER = ("p", "n", "x", "r", "s", "m", "k", "l", "a", "b")
STATUSES = ("pass", "fail", "degenerate", "hypothesis_violated")


def sort_key(record: dict) -> tuple:
    params = record["params"]
    rest = tuple((k, params[k]) for k in sorted(params) if k not in ("p", "n"))
    return (record["check_id"], params.get("p", 0), params.get("n", 0), rest)


def summarize(records: list[dict]) -> dict:
    counts = {s: 0 for s in STATUSES}
    for rec in records:
        counts[rec["status"]] += 1
    return {
        "total": len(records),
        "passed": counts["pass"],
        "failed": counts["fail"],
        "degenerate": counts["degenerate"],
        "hypothesis_violated": counts["hypothesis_violated"],
    }


def build_report(records: list[dict], timestamp: bool = True) -> dict:
    cases = sorted(records, key=sort_key)
    generated = None
    if timestamp:
        generated = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
        generated = generated.replace("+00:00", "Z")
    return {
        "tool_version": __version__,
        "generated_at": generated,
        "cases": cases,
        "summary": summarize(cases),
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    head = ["check_id", *PARAM_ORDER, "required_exponent", "achieved_valuation",
            "integrality_ok", "holds", "status", "witness"]
    writer.writerow(head)
    for rec in report["cases"]:
        params = rec["params"]
        writer.writerow(
            [rec["check_id"]]
            + ["" if params.get(k) is None else params[k] for k in PARAM_ORDER]
            + ["" if rec[k] is None else rec[k] for k in ("required_exponent", "achieved_valuation")]
            + [str(rec["integrality_ok"]).lower(), str(rec["holds"]).lower(),
               rec["status"], "" if rec["witness"] is None else rec["witness"]]
        )
    return buf.getvalue()


def _short(text: str | None, width: int = 32) -> str:
    if text is None:
        return "-"
    return text if len(text) <= width else f"{text[:width - 3]}..."


def to_table(report: dict) -> str:
    rows = [("check", "params", "req", "got", "status", "witness")]
    for rec in report["cases"]:
        params = " ".join(f"{k}={v}" for k, v in rec["params"].items())
        rows.append((
            rec["check_id"],
            params,
            "-" if rec["required_exponent"] is None else str(rec["required_exponent"]),
            "-" if rec["achieved_valuation"] is None else str(rec["achieved_valuation"]),
            rec["status"],
            _short(rec["witness"]),
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    s = report["summary"]
    lines.append(
        f"total {s['total']}  passed {s['passed']}  failed {s['failed']}  "
        f"degenerate {s['degenerate']}  hypothesis_violated {s['hypothesis_violated']}"
    )
    return "\n".join(lines) + "\n"


EMITTERS = {"json": to_json, "csv": to_csv, "table": to_table}


def emit(report: dict, fmt: str) -> str:
    return EMITTERS[fmt](report)
