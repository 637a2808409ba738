"""DOT emitters for quivers and AR-quivers, plus a small DOT syntax checker."""

from __future__ import annotations

import re
from typing import Iterable

from tiltforge.cluster import CVertex, ClusterModel
from tiltforge.quiver import Quiver


def _q(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def vertex_name(v: CVertex) -> str:
    return f"{v.orbit},{v.offset}"


def quiver_dot(q: Quiver, relations: Iterable[str] = (), name: str = "Q") -> str:
    """The quiver with relation arrows drawn dashed."""
    rel = set(relations)
    lines = [f"digraph {_q(name)} {{"]
    for v in q.vertices:
        lines.append(f"  {_q(v)};")
    for a in q.arrows:
        style = ", style=dashed" if a.id in rel else ""
        lines.append(f"  {_q(a.source)} -> {_q(a.target)} [label={_q(a.id)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def ar_quiver_dot(
    m: ClusterModel,
    slice_members: Iterable[CVertex] = (),
    tau_t: Iterable[CVertex] = (),
    summands: dict[CVertex, str] | None = None,
    name: str = "AR",
) -> str:
    """The AR-quiver of the cluster category; slice vertices filled, tau T boxed."""
    members, holes = set(slice_members), set(tau_t)
    summands = summands or {}
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for v in m.vertices:
        attrs = [f"label={_q(summands.get(v, vertex_name(v)))}"]
        if v in members:
            attrs.append("style=filled")
        if v in holes:
            attrs.append("shape=box")
        lines.append(f"  {_q(vertex_name(v))} [{', '.join(attrs)}];")
    for u, w in m.arrows():
        lines.append(f"  {_q(vertex_name(u))} -> {_q(vertex_name(w))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- checker -----------------------------------------------------------------

_TOKEN = re.compile(
    r'\s*(?:(?P<str>"(?:[^"\\]|\\.)*")|(?P<id>[A-Za-z_][A-Za-z_0-9]*|-?\d+(?:\.\d+)?)'
    r"|(?P<edge>->|--)|(?P<punct>[{}\[\];,=]))"
)


class DotSyntaxError(ValueError):
    pass


def _tokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DotSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def check_dot(text: str) -> int:
    """Parse a single (di)graph; returns the number of statements or raises."""
    toks = _tokens(text)
    i = 0

    def peek(k: int = 0):
        return toks[i + k] if i + k < len(toks) else ("eof", "")

    def take(kind: str | None = None, value: str | None = None):
        nonlocal i
        tok = peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise DotSyntaxError(f"expected {value or kind}, got {tok[1]!r}")
        i += 1
        return tok

    def is_id() -> bool:
        return peek()[0] in ("id", "str")

    def attr_list() -> None:
        while peek() == ("punct", "["):
            take("punct", "[")
            while is_id():
                take()
                take("punct", "=")
                if not is_id():
                    raise DotSyntaxError("attribute value expected")
                take()
                if peek()[1] in (",", ";"):
                    take()
            take("punct", "]")

    if peek() == ("id", "strict"):
        take()
    if peek()[1] not in ("digraph", "graph"):
        raise DotSyntaxError("expected graph or digraph")
    directed = take()[1] == "digraph"
    if is_id():
        take()
    take("punct", "{")
    count = 0
    while peek() != ("punct", "}"):
        if peek()[1] in ("graph", "node", "edge") and peek(1) == ("punct", "["):
            take()
            attr_list()
        elif is_id():
            take()
            if peek() == ("punct", "="):
                take()
                if not is_id():
                    raise DotSyntaxError("value expected")
                take()
            else:
                while peek()[0] == "edge":
                    if (peek()[1] == "->") != directed:
                        raise DotSyntaxError("edge operator does not match graph kind")
                    take()
                    if not is_id():
                        raise DotSyntaxError("edge target expected")
                    take()
                attr_list()
        else:
            raise DotSyntaxError(f"unexpected token {peek()[1]!r}")
        if peek() == ("punct", ";"):
            take()
        count += 1
    take("punct", "}")
    if i != len(toks):
        raise DotSyntaxError("trailing tokens after graph")
    return count
