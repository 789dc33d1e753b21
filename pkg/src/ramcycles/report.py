"""Serialization of command results: JSON envelopes, fixed-column TSV, plain tables."""

from __future__ import annotations

import json
from fractions import Fraction

from .series import CensoredNat

# TSV layouts, one per command.  Column order is part of the output format.
COLUMNS = {
    "order": ["element", "order"],
    "invariants": ["n", "i_n", "status", "lower_bound", "trunc"],
    "mr": ["p", "q", "gamma", "mr", "amr", "reason"],
    "resit": ["p", "q", "gamma", "a1", "a2", "resit"],
    "normalize": ["p", "q", "gamma", "trunc", "h", "ghat"],
    "classify": ["gamma", "order", "i0", "mr", "resit", "characterize_mr", "agree"],
    "bound": ["n", "period", "bound_valuation"],
    "cycles": ["n", "period", "i_n", "increment", "bound_valuation", "new_mass",
               "positive_mass", "simplicity", "verdict"],
    "appendix": ["n", "i_n", "expected", "pass", "roots_in_level0"],
    "selftest": ["criterion", "pass", "seconds", "detail"],
}


def cell(x) -> str:
    """Render one value for TSV or a table."""
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, CensoredNat):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return ";".join(f"{cell(k)}:{cell(v)}" for k, v in x.items()) or "-"
    if isinstance(x, float):
        return f"{x:.3f}"
    return str(x)


def jsonable(x):
    if isinstance(x, CensoredNat):
        return x.to_json()
    if isinstance(x, Fraction):
        return cell(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, Fraction) else cell(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def envelope(command: str, config: dict, result, version: str) -> dict:
    return {"tool": "ramcycles", "version": version, "command": command,
            "config": jsonable(config), "result": jsonable(result)}


def dumps_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def dumps_tsv(command: str, rows: list, config: dict | None = None) -> str:
    cols = COLUMNS[command]
    lines = []
    if config is not None:
        lines.append("# " + json.dumps(jsonable(config), sort_keys=True))
    lines.append("\t".join(cols))
    for r in rows:
        lines.append("\t".join(cell(r.get(c)) for c in cols))
    return "\n".join(lines)


def dumps_pretty(command: str, rows: list, header: list | None = None) -> str:
    cols = COLUMNS[command]
    table = [cols] + [[cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    out = list(header or [])
    for j, row in enumerate(table):
        out.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)
