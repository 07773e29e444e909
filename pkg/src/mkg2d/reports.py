"""JSON-lines serialization of ratio reports.

A fuzz run is stored as one line per accepted trial followed by a
single summary line; every line carries a format_version so consumers
can reject files they do not understand.

    {"type": "trial",  "format_version": 1, "target": ..., "ratio": ...}
    {"type": "report", "format_version": 1, "target": ..., "max_ratio": ...}
"""

from __future__ import annotations

import json

from .errors import ConfigurationError
from .estimates import RatioReport

__all__ = ["report_to_jsonl", "write_report_jsonl", "read_report_jsonl", "REPORT_FORMAT_VERSION"]

REPORT_FORMAT_VERSION = 1


def report_to_jsonl(report: RatioReport) -> list[str]:
    lines = [
        json.dumps(
            {
                "type": "trial",
                "format_version": REPORT_FORMAT_VERSION,
                "target": report.target,
                "ratio": r,
            },
            sort_keys=True,
        )
        for r in report.trial_ratios
    ]
    summary = {
        "type": "report",
        "format_version": REPORT_FORMAT_VERSION,
        "target": report.target,
        "n_trials": report.n_trials,
        "n_degenerate": report.n_degenerate,
        "max_ratio": report.max_ratio,
        "median_ratio": report.median_ratio,
        "argmax": report.argmax,
        "grid": report.grid_meta,
        "exponents": report.exponents,
    }
    lines.append(json.dumps(summary, sort_keys=True))
    return lines


def write_report_jsonl(report: RatioReport, path, append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, newline="\n") as fh:
        for line in report_to_jsonl(report):
            fh.write(line + "\n")


def read_report_jsonl(path) -> tuple[list[dict], list[dict]]:
    """Returns (trial records, report records); validates the format tag."""
    trials, summaries = [], []
    with open(path, "r") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{path}:{i + 1}: invalid JSON: {exc}")
            if rec.get("format_version") != REPORT_FORMAT_VERSION:
                raise ConfigurationError(
                    f"{path}:{i + 1}: unsupported format_version {rec.get('format_version')!r}"
                )
            if rec.get("type") == "trial":
                trials.append(rec)
            elif rec.get("type") == "report":
                summaries.append(rec)
            else:
                raise ConfigurationError(f"{path}:{i + 1}: unknown record type")
    return trials, summaries
