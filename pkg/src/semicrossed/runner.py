"""Execute scenario commands and collect report records."""
from __future__ import annotations

import itertools
import random
from typing import Optional

from .dynamics import (
    centre_peel,
    check_wandrec,
    closure,
    is_invariant,
    recurrent_region,
    wandering_region,
)
from .errors import SemicrossedError
from .radical import (
    evidence_samples,
    quasinilpotence_sampler,
    radical_oracle,
    semisimplicity_decide,
    witness_build,
    witness_verify,
)
from .scenario import Command, Scenario
from .space import FiniteCell

DEFAULT_KMAX = 16

# claim each command checks, named by what it asserts
CLAIMS = {
    "analyze": "recurrence-regions-and-centre",
    "radical": "radical-iff-vanishing-on-recurrent-set",
    "witness": "witness-coefficient-lower-bound",
    "semisimple": "semisimple-iff-strongly-recurrent-dense",
    "evidence": "radical-iff-every-product-quasinilpotent",
}


def system_json(system) -> dict:
    cells = []
    for c in system.cells:
        if isinstance(c, FiniteCell):
            cells.append({"id": c.id, "kind": "finite", "points": list(c.points)})
        else:
            cells.append({"id": c.id, "kind": "lattice", "rank": c.rank, "ends": c.ends})
    return {"dim": system.dim, "cells": cells}


def _direction_sets(d: int) -> list:
    idx = range(1, d + 1)
    return [frozenset(c) for r in range(d + 1) for c in itertools.combinations(idx, r)]


def _analyze(sc: Scenario, args: dict) -> dict:
    system = sc.system
    Js = [args["J"]] if "J" in args else _direction_sets(system.dim)
    out = []
    for J in Js:
        rec = recurrent_region(system, J)
        wan = wandering_region(system, J)
        rest = wan.complement()
        centre = centre_peel(system, J)
        wr = check_wandrec(system, J)
        out.append({
            "J": sorted(J),
            "recurrent": rec.to_json(),
            "recurrent_closure": closure(system, rec).to_json(),
            "wandering": wan.to_json(),
            "non_wandering_invariant": is_invariant(system, rest),
            "non_wandering_contains_recurrent": rec.issubset(rest),
            "centre": {
                "depth": centre.depth,
                "strata": [s.to_json() for s in centre.strata],
                "equals_recurrent_closure": centre.matches_closure,
            },
            "wandering_vs_density": {
                "wandering_set_exists": wr.wandering_exists,
                "recurrent_dense": wr.recurrent_dense,
                "implication_holds": wr.implication_holds,
            },
        })
    ok = all(r["non_wandering_invariant"] and r["non_wandering_contains_recurrent"]
             and r["wandering_vs_density"]["implication_holds"] for r in out)
    return {"directions": out, "passed": ok}


def _radical(sc: Scenario, args: dict) -> dict:
    v = radical_oracle(sc.system, sc.series[args["series"]])
    return {"series": args["series"], **v.to_json()}


def _witness(sc: Scenario, args: dict, kmax: int) -> dict:
    plan, B, A = witness_build(sc.system, args["point"], args["J"], args["q"], sc.functions[args["fn"]], args["K"])
    reports = [witness_verify(sc.system, plan, A, k) for k in range(1, min(plan.K, kmax) + 1)]
    return {
        "plan": plan.to_json(),
        "bounds": [r.to_json() for r in reports],
        "passed": all(r.passed for r in reports),
    }


def _semisimple(sc: Scenario, args: dict, rng: random.Random) -> dict:
    v = semisimplicity_decide(sc.system, rng, args["samples"])
    return v.to_json()


def _evidence(sc: Scenario, args: dict, rng: random.Random, kmax: int, cap) -> dict:
    A = sc.series[args["series"]]
    verdict = radical_oracle(sc.system, A)
    Bs = evidence_samples(sc.system, A, rng, args["samples"])
    rows = quasinilpotence_sampler(sc.system, A, Bs, kmax, cap=cap)
    refuted = any(r.classification == "positive_lower" for r in rows)
    consistent = refuted != verdict.in_radical
    return {
        "series": args["series"],
        "in_radical": verdict.in_radical,
        "samples": len(rows),
        "rows": [r.to_json() for r in rows],
        "refuted": refuted,
        "consistent_with_oracle": consistent,
        "passed": consistent,
    }


def execute(sc: Scenario, cmd: Command, rng: random.Random, kmax: int, cap) -> dict:
    if cmd.name == "analyze":
        return _analyze(sc, cmd.args)
    if cmd.name == "radical":
        return _radical(sc, cmd.args)
    if cmd.name == "witness":
        return _witness(sc, cmd.args, kmax)
    if cmd.name == "semisimple":
        return _semisimple(sc, cmd.args, rng)
    if cmd.name == "evidence":
        return _evidence(sc, cmd.args, rng, kmax, cap)
    raise ValueError(f"unknown command {cmd.name}")


def run_scenario(sc: Scenario, seed: int = 0, kmax: int = DEFAULT_KMAX, cap: Optional[tuple] = None,
                 source: str = "") -> dict:
    """Run every command in order; errors become records and clear ``ok``."""
    if cap is not None:
        cap = sc.system.check_index(cap)
    records = []
    for cmd in sc.commands:
        # each command gets its own stream so records do not depend on their neighbours
        rng = random.Random(f"{seed}:{cmd.line}")
        rec = {"command": cmd.text, "line": cmd.line, "claim": CLAIMS[cmd.name]}
        try:
            result = execute(sc, cmd, rng, kmax, cap)
            rec["status"] = "ok" if result.get("passed", True) else "failed"
            rec["result"] = result
        except SemicrossedError as e:
            rec["status"] = "error"
            rec["error"] = {"type": type(e).__name__, "message": str(e)}
        records.append(rec)
    return {
        "meta": {
            "source": source,
            "seed": seed,
            "kmax": kmax,
            "cap": None if cap is None else list(cap),
        },
        "system": system_json(sc.system),
        "records": records,
        "ok": all(r["status"] == "ok" for r in records),
    }

