"""JSON formats for graphs and balance reports.

Graph files look like::

    {
      "n": 3,
      "weight_type": "unit_dual_quaternion",
      "arcs": [
        {"tail": 2, "head": 1, "w": {"s": [w, x, y, z], "d": [w, x, y, z]}},
        ...
      ]
    }

Weights are eight floats (standard then dual quaternion part); floats
round-trip bit-exactly through ``json``.
"""

from __future__ import annotations

import json
from typing import IO

from .algebra import DualQuaternion, Quaternion
from .balance import BalanceReport
from .graphs import OrientedCycle, WeightedDigraph, build


class GraphFormatError(ValueError):
    """The JSON document does not describe a valid weighted digraph."""


def weight_to_obj(w: DualQuaternion) -> dict:
    return {"s": [w.s.w, w.s.x, w.s.y, w.s.z],
            "d": [w.d.w, w.d.x, w.d.y, w.d.z]}


def weight_from_obj(obj) -> DualQuaternion:
    s = [float(v) for v in obj["s"]]
    d = [float(v) for v in obj["d"]]
    if len(s) != 4 or len(d) != 4:
        raise GraphFormatError("weight parts must have four components each")
    return DualQuaternion(Quaternion(*s), Quaternion(*d))


def graph_to_obj(g: WeightedDigraph) -> dict:
    return {
        "n": g.n,
        "weight_type": g.weight_type.value,
        "arcs": [{"tail": i, "head": j, "w": weight_to_obj(g.weights[(i, j)])}
                 for (i, j) in g.arcs],
    }


def graph_from_obj(obj) -> WeightedDigraph:
    try:
        n = int(obj["n"])
        weight_type = obj["weight_type"]
        arcs = []
        weights = {}
        for entry in obj["arcs"]:
            arc = (int(entry["tail"]), int(entry["head"]))
            arcs.append(arc)
            weights[arc] = weight_from_obj(entry["w"])
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"malformed graph document: {exc!r}") from None
    return build(n, arcs, weights, weight_type)


def dumps_graph(g: WeightedDigraph, indent: int | None = 2) -> str:
    return json.dumps(graph_to_obj(g), indent=indent)


def loads_graph(text: str) -> WeightedDigraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    return graph_from_obj(obj)


def save_graph(g: WeightedDigraph, path) -> None:
    with open(path, "w") as f:
        f.write(dumps_graph(g))
        f.write("\n")


def load_graph(path) -> WeightedDigraph:
    with open(path) as f:
        return loads_graph(f.read())


def cycle_to_obj(cycle: OrientedCycle) -> dict:
    return {"vertices": list(cycle.vertices),
            "forward": list(cycle.forward)}


def report_to_obj(report: BalanceReport) -> dict:
    """JSON-ready view of a balance report (formation as 8-float rows)."""
    return {
        "verdict": report.verdict.value,
        "method": report.method.value,
        "err": report.err,
        "failure_stage": report.failure_stage.value if report.failure_stage else None,
        "formation": ([list(f.to_array()) for f in report.formation]
                      if report.formation is not None else None),
        "witness": cycle_to_obj(report.witness) if report.witness else None,
        "seconds": report.seconds,
    }


def dump_report(report: BalanceReport, stream: IO[str] | None = None,
                indent: int | None = 2) -> str:
    text = json.dumps(report_to_obj(report), indent=indent)
    if stream is not None:
        stream.write(text + "\n")
    return text
