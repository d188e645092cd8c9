"""Machine (JSON) and human renderings of a report.

The JSON document is the source of truth; ``render_human`` only reads it.
"""
from __future__ import annotations

import json


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def _region(r: dict) -> str:
    parts = []
    for cid in sorted(r):
        if r[cid]["tag"] != "empty":
            parts.append(f"{cid} {r[cid]['tag']}")
        parts += [f"{cid}:{e}" for e in r[cid]["ends"]]
    return ", ".join(parts) if parts else "(empty)"


def _analyze_lines(res: dict) -> list:
    out = []
    for row in res["directions"]:
        J = "{" + ",".join(map(str, row["J"])) + "}"
        out.append(f"    J={J}: recurrent [{_region(row['recurrent'])}]; wandering [{_region(row['wandering'])}]; "
                   f"centre depth {row['centre']['depth']}")
    return out


def _record_lines(rec: dict) -> list:
    head = f"[{rec['status']}] line {rec['line']}: {rec['command']}  ({rec['claim']})"
    if rec["status"] == "error":
        return [head, f"    {rec['error']['type']}: {rec['error']['message']}"]
    res = rec["result"]
    kind = rec["command"].split()[0]
    lines = [head]
    if kind == "analyze":
        lines += _analyze_lines(res)
    elif kind == "radical":
        lines.append(f"    in radical: {res['in_radical']}")
        for m in res["monomials"]:
            if not m["passed"]:
                lines.append(f"    U[{','.join(map(str, m['degree']))}] fails at {', '.join(m['offending'])}")
        if not res["zero_term_ok"]:
            lines.append(f"    nonzero degree-0 term at {', '.join(res['zero_term_points']) or 'a tail'}")
    elif kind == "witness":
        for b in res["bounds"]:
            lines.append(f"    k={b['k']}: sup coefficient {b['coefficient_sup']} >= {b['lambda']}"
                         f"  closed form {'ok' if b['closed_form_matches'] else 'MISMATCH'}")
    elif kind == "semisimple":
        lines.append(f"    semisimple: {res['semisimple']}")
        if res["witness"]:
            w = res["witness"]
            lines.append(f"    square-zero generator on {', '.join(w['support'])}, {w['samples']} samples, BCB = 0: {w['all_zero']}")
        else:
            lines.append(f"    {res['rejected_samples']} sampled monomials rejected")
    elif kind == "evidence":
        counts: dict = {}
        for r in res["rows"]:
            counts[r["classification"]] = counts.get(r["classification"], 0) + 1
        summary = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
        lines.append(f"    in radical: {res['in_radical']}; refuted: {res['refuted']}; {summary}")
    return lines


def render_human(report: dict) -> str:
    meta = report["meta"]
    cells = ", ".join(c["id"] for c in report["system"]["cells"])
    lines = [f"{meta['source'] or 'scenario'}: d={report['system']['dim']}, cells {cells}, seed {meta['seed']}, kmax {meta['kmax']}"]
    for rec in report["records"]:
        lines += _record_lines(rec)
    lines.append("OK" if report["ok"] else "FAILED")
    return "\n".join(lines) + "\n"
