"""JSON encodings of results, slices and reports."""

from __future__ import annotations

import json
from typing import Iterable

from tiltforge.cluster import CVertex
from tiltforge.derived import DVertex
from tiltforge.errors import MalformedInputError
from tiltforge.quiver import Quiver, _label_key
from tiltforge.tilt import AlgorithmResult


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def vertex_to_json(v: CVertex) -> dict:
    return {"orbit": v.orbit, "offset": v.offset}


def vertex_from_json(data) -> DVertex:
    try:
        return DVertex(str(data["orbit"]), int(data["offset"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad vertex entry {data!r}") from exc


def slice_to_json(members: Iterable[CVertex], key=None) -> list[dict]:
    return [vertex_to_json(v) for v in sorted(members, key=key or (lambda v: (v.offset, v.orbit)))]


def slice_from_json(data) -> list[DVertex]:
    if not isinstance(data, list):
        raise MalformedInputError("a slice is a JSON list of vertices")
    return [vertex_from_json(e) for e in data]


def _cell(cell: Iterable[str]) -> list[str]:
    return sorted(cell, key=_label_key)


def result_to_json(res: AlgorithmResult) -> dict:
    q = res.quiver
    return {
        "quiver": q.to_json(),
        "maximal_tilted": [
            {
                "relations": p.relation_list(q),
                "arrows": [str(q.arrow(i)) for i in p.relation_list(q)],
                "jump_path": [_cell(c) for c in p.jump_path],
            }
            for p in res.presentations
        ],
    }


def result_from_json(data) -> tuple[Quiver, list[tuple[list[str], list[list[str]]]]]:
    try:
        q = Quiver.from_json(data["quiver"])
        entries = [(list(e["relations"]), [list(c) for c in e["jump_path"]]) for e in data["maximal_tilted"]]
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"malformed result document: {exc}") from exc
    return q, entries
