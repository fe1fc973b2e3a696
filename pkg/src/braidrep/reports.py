"""Markdown rendering of service payloads.

The renderers are pure functions over the JSON payloads the service returns,
so the CLI can show either representation of the same bytes.  Classification
tables keep one column per block so they can be eyeballed against the family
catalog directly.
"""

from __future__ import annotations


def _table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join("---" for _ in header) + " |"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def _code(s: str) -> str:
    return f"`{s}`"


def _present_md(payload: dict) -> str:
    head = f"# Presentation {payload['group']} (n={payload['n']}, k={payload['k']})"
    gens = "**Generators:** " + ", ".join(_code(g) for g in payload["generators"])
    rel_rows = [[r["tag"], _code(r["relation"])] for r in payload["relations"]]
    parts = [
        head,
        "",
        gens,
        "",
        f"**Relations ({len(rel_rows)}):**",
        "",
        _table(["tag", "relation"], rel_rows),
    ]
    if "forbidden" in payload:
        fb = [[r["tag"], _code(r["relation"])] for r in payload["forbidden"]]
        parts += ["", f"**Forbidden ({len(fb)}):**", "", _table(["tag", "relation"], fb)]
    return "\n".join(parts) + "\n"


def _classify_md(payload: dict) -> str:
    families = payload["families"]
    block_keys: list[str] = []
    for fam in families:
        for key in fam["blocks"]:
            if key not in block_keys:
                block_keys.append(key)
    header = ["family"] + block_keys + ["constraints", "free"]
    rows = []
    for fam in families:
        blocks = [
            _code(fam["blocks"][key]) if key in fam["blocks"] else ""
            for key in block_keys
        ]
        constraints = ", ".join(
            f"{c} != 0" for c in fam["side_conditions"]
        ) or "none"
        rows.append([fam["family"]] + blocks + [constraints,
                                                ", ".join(fam["free_parameters"]) or "none"])
    status = "bijective" if payload["bijective"] else "MISMATCH"
    parts = [
        f"# Classification {payload['group']} (k={payload['k']})",
        "",
        f"**Branches:** {payload['count']} (expected {payload['expected']}), {status}",
        "",
        _table(header, rows),
    ]
    if payload["unmatched_branches"] or payload["unmatched_families"]:
        parts += ["", "**Unmatched:** "
                  + f"{len(payload['unmatched_branches'])} branches, "
                  + f"{len(payload['unmatched_families'])} families "
                  + str(list(payload["unmatched_families"]))]
    return "\n".join(parts) + "\n"


def _verify_md(payload: dict) -> str:
    verdictmark = "PASS" if payload["ok"] else "FAIL"
    parts = [
        f"# Verify {payload['family']} on {payload['group']} (n={payload['n']}, k={payload['k']})",
        "",
        f"**Result:** {verdictmark} ({payload['checked']} relations)",
    ]
    if payload["side_conditions"]:
        parts += ["", "**Side conditions:** "
                  + ", ".join(f"{c} != 0" for c in payload["side_conditions"])]
    if payload["params"]:
        parts += ["", "**Parameters:** "
                  + ", ".join(f"{k}={v}" for k, v in sorted(payload["params"].items()))]
    failures = [v for v in payload["verdicts"] if not v["ok"]]
    if failures:
        parts += ["", "**Failing relations:**", "",
                  _table(["tag", "relation"],
                         [[v["tag"], _code(v["relation"])] for v in failures])]
    return "\n".join(parts) + "\n"


def _analyze_md(payload: dict) -> str:
    head = f"# Analyze {payload['family']} (n={payload['n']})"
    check = payload["check"]
    parts = [head, ""]
    if payload["params"]:
        parts += ["**Parameters:** "
                  + ", ".join(f"{k}={v}" for k, v in sorted(payload["params"].items())), ""]
    if check == "irreducible":
        parts.append(f"**Irreducibility:** {payload['summary']}")
    elif check == "invariant":
        if payload["found"]:
            parts.append("**Invariant vector:** ("
                         + ", ".join(payload["vector"]) + ")")
        else:
            parts.append("**Invariant vector:** none found in the geometric class")
    elif check == "witness":
        if payload["found"]:
            cert = payload["certificate"]
            line = f"**Kernel witness:** {_code(cert['word'])} maps to the identity"
            if cert["quotient"]:
                line += f"; certified on {cert['quotient']} with value {_code(cert['value'])}"
            else:
                line += f"; {cert['note']}"
            parts.append(line)
        else:
            parts.append("**Kernel witness:** none found within budget")
    elif check == "forbidden":
        rows = [[item["tag"], _code(item["relation"]),
                 "satisfied" if item["satisfied"] else "broken"]
                for item in payload["audit"]["forbidden"]]
        parts += ["**Forbidden relation audit:**", "",
                  _table(["tag", "relation", "verdict"], rows)]
    return "\n".join(parts) + "\n"


def _lkb_md(payload: dict) -> str:
    head = f"# LKB {payload['variant']} (n={payload['n']})"
    check = payload["check"]
    parts = [head, ""]
    if check == "matrices":
        basis = ", ".join(f"x_{{{i},{j}}}" for i, j in payload["basis"])
        parts += [f"**Basis:** {basis}", ""]
        for gen in sorted(payload["matrices"]):
            rows = payload["matrices"][gen]
            body = "\n".join("  [" + ", ".join(row) + "]" for row in rows)
            parts += [f"**{gen}:**", "", "```", body, "```", ""]
    elif check == "relations":
        parts.append(f"**Relations:** {'PASS' if payload['ok'] else 'FAIL'} "
                     f"({payload['checked']} checked)")
        failures = [v for v in payload["verdicts"] if not v["ok"]]
        if failures:
            parts += ["", _table(["tag", "relation"],
                                 [[v["tag"], _code(v["relation"])] for v in failures])]
    elif check == "t1":
        if payload["equal"]:
            parts.append("**t=1 comparison:** matches the welded sigma-matrices")
        else:
            rows = [[d["generator"], str(d["row"]), str(d["col"]),
                     _code(d["full_t1"]), _code(d["welded"])]
                    for d in payload["differences"]]
            parts += ["**t=1 comparison:** differs from the welded sigma-matrices", "",
                      _table(["generator", "row", "col", "full at t=1", "welded"], rows)]
    elif check == "irreducible":
        v = payload["verdict"]
        sample = ", ".join(f"{k}={x}" for k, x in sorted(payload["sample"].items()))
        parts.append(f"**Span closure at {sample}:** {v['kind']} (dimension {v['dimension']})")
    elif check == "witness":
        if payload["found"]:
            cert = payload["certificate"]
            parts.append(f"**Kernel witness:** {_code(cert['word'])}")
        else:
            parts.append(f"**Kernel witness:** none found within budget {payload['budget']}")
    return "\n".join(parts) + "\n"


_RENDERERS = {
    "present": _present_md,
    "classify": _classify_md,
    "verify": _verify_md,
    "analyze": _analyze_md,
    "lkb": _lkb_md,
}


def render_markdown(payload: dict) -> str:
    command = payload.get("command")
    renderer = _RENDERERS.get(command)
    if renderer is None:
        raise ValueError(f"no renderer for command {command!r}")
    return renderer(payload)
