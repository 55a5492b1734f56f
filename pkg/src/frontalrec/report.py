"""Reports: plain dicts with exact values serialized as strings, plus a text renderer."""

from __future__ import annotations

import json
from fractions import Fraction

from gmpy2 import mpq

from . import __version__
from .germs import JetMap
from .jets import Jet

TOOL = "frontalrec"


def plain(x):
    """Recursively turn mpq / Jet / tuples into JSON-ready values (rationals as 'p/q' strings)."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (mpq, Fraction)):
        return str(x)
    if isinstance(x, Jet):
        return x.to_str()
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if hasattr(x, "value"):
        return x.value
    return str(x)


def base_report(command: str, doc=None, order=None) -> dict:
    out = {"tool": TOOL, "version": __version__, "command": command}
    if order is not None:
        out["order"] = order
    if doc is not None:
        out["input"] = doc.to_json()
    return out


def certificate_json(cert) -> list:
    return [{"id": e.id, "criterion": e.criterion, "check": e.check,
             "values": plain(e.values), "holds": e.holds} for e in cert]


def jetmap_strings(f: JetMap, names) -> list:
    return [c.to_str(names) for c in f]


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)


def render_text(report: dict) -> str:
    """Human-readable rendering of a report dict (same content as the JSON)."""
    lines = []
    head = f"{report.get('tool')} {report.get('version')} :: {report.get('command')}"
    if "order" in report:
        head += f" (order {report['order']})"
    lines.append(head)
    inp = report.get("input")
    if inp and "components" in inp:
        lines.append(_input_line("input", inp))
    elif inp:
        for k, v in inp.items():
            lines.append(_input_line(f"input {k}", v))
    skip = {"tool", "version", "command", "order", "input", "certificate", "notes"}
    for key, val in report.items():
        if key in skip:
            continue
        lines.append(f"{key}: {_text_value(val)}")
    cert = report.get("certificate")
    if cert:
        lines.append("certificate:")
        for e in cert:
            mark = "ok  " if e["holds"] else "FAIL"
            vals = ", ".join(f"{k}={_text_value(v)}" for k, v in e["values"].items())
            lines.append(f"  [{mark}] {e['id']}: {e['criterion']} ({vals})")
    for note in report.get("notes") or []:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def _text_value(v):
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(x)}" for k, x in v.items()) + "}"
    return str(v)


def _input_line(label, inp):
    return f"{label}: ({', '.join(inp['components'])}) in {', '.join(inp['vars'])}"
