"""Finite quivers: mutation, full cycles, admissible sets, isomorphism.

Vertices are string labels.  Arrows carry their own identities so that
admissible sets (sets of arrows) stay unambiguous under relabelling and in
the presence of parallel arrows.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from tiltforge.errors import MalformedInputError, NotDynkinError

DEFAULT_MAX_BFS = 100_000


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedInputError("vertex labels must be unique")
        vs = set(self.vertices)
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("arrow ids must be unique")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise MalformedInputError(f"arrow {a.id} has an unknown endpoint")
            if a.source == a.target:
                raise MalformedInputError(f"arrow {a.id} is a loop")

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[Sequence[str]], vertices: Iterable[str] | None = None
    ) -> "Quiver":
        """Build a quiver from (source, target) pairs; ids become a0, a1, ... ."""
        pairs = [(str(s), str(t)) for s, t in pairs]
        if vertices is None:
            seen: dict[str, None] = {}
            for s, t in pairs:
                seen.setdefault(s)
                seen.setdefault(t)
            vertices = sorted(seen, key=_label_key)
        arrows = tuple(Arrow(f"a{i}", s, t) for i, (s, t) in enumerate(pairs))
        return cls(tuple(str(v) for v in vertices), arrows)

    # -- basic queries -------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def arrows_between(self, source: str, target: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == source and a.target == target]

    def multiplicity(self, source: str, target: str) -> int:
        return sum(1 for a in self.arrows if a.source == source and a.target == target)

    def successors(self, v: str) -> list[str]:
        return [a.target for a in self.arrows if a.source == v]

    def predecessors(self, v: str) -> list[str]:
        return [a.source for a in self.arrows if a.target == v]

    def exchange_matrix(self) -> dict[tuple[str, str], int]:
        b: Counter = Counter()
        for a in self.arrows:
            b[a.source, a.target] += 1
            b[a.target, a.source] -= 1
        return dict(b)

    def has_two_cycles(self) -> bool:
        pairs = {(a.source, a.target) for a in self.arrows}
        return any((t, s) in pairs for s, t in pairs)

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except ValueError:
            return False
        return True

    def topological_order(self) -> list[str]:
        """Vertices ordered so that every arrow goes forward (sources first)."""
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        order = []
        ready = deque(v for v in self.vertices if indeg[v] == 0)
        while ready:
            v = ready.popleft()
            order.append(v)
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if len(order) != len(self.vertices):
            raise ValueError("quiver has an oriented cycle")
        return order

    def underlying_edges(self) -> list[tuple[str, str]]:
        return [(a.source, a.target) for a in self.arrows]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def relabel(self, mapping: Mapping[str, str]) -> "Quiver":
        return Quiver(
            tuple(mapping.get(v, v) for v in self.vertices),
            tuple(Arrow(a.id, mapping.get(a.source, a.source), mapping.get(a.target, a.target)) for a in self.arrows),
        )

    def same_arrows(self, other: "Quiver") -> bool:
        """Equal vertex sets and arrow multiplicities (ids ignored)."""
        return set(self.vertices) == set(other.vertices) and Counter(
            (a.source, a.target) for a in self.arrows
        ) == Counter((a.source, a.target) for a in other.arrows)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data: object) -> "Quiver":
        if not isinstance(data, dict) or "arrows" not in data:
            raise MalformedInputError("quiver JSON needs an 'arrows' list")
        raw = data["arrows"]
        if not isinstance(raw, list):
            raise MalformedInputError("'arrows' must be a list")
        arrows = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
                raise MalformedInputError(f"arrow entry {i} needs 'from' and 'to'")
            arrows.append(Arrow(str(entry.get("id", f"a{i}")), str(entry["from"]), str(entry["to"])))
        vertices = data.get("vertices")
        if vertices is None:
            vertices = sorted({x for a in arrows for x in (a.source, a.target)}, key=_label_key)
        if not isinstance(vertices, list):
            raise MalformedInputError("'vertices' must be a list")
        return cls(tuple(str(v) for v in vertices), tuple(arrows))

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Quiver":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInputError(f"cannot read quiver from {path}: {exc}") from exc
        return cls.from_json(data)

    def __str__(self) -> str:
        return "Quiver(" + ", ".join(str(a) for a in self.arrows) + ")"


def _label_key(label: str):
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


# -- mutation ------------------------------------------------------------

_FRESH = re.compile(r"a(\d+)$")


def mutate(q: Quiver, k: str) -> Quiver:
    """Fomin-Zelevinsky mutation of ``q`` at vertex ``k``.

    Arrows through ``k`` are reversed and keep their identity up to a
    trailing ``*`` (so that mutating twice restores it); composite arrows
    get fresh ids and cancelled 2-cycles disappear.
    """
    if k not in q.vertices:
        raise MalformedInputError(f"unknown vertex {k!r}")
    if q.has_two_cycles():
        raise MalformedInputError("mutation input must not contain 2-cycles")

    b = q.exchange_matrix()
    new_b = dict(b)
    ins = [i for i in q.vertices if b.get((i, k), 0) > 0]
    outs = [j for j in q.vertices if b.get((k, j), 0) > 0]
    for i in ins:
        for j in outs:
            r, s = b[i, k], b[k, j]
            new_b[i, j] = new_b.get((i, j), 0) + r * s
            new_b[j, i] = -new_b[i, j]

    arrows: list[Arrow] = []
    used = Counter()
    fresh = itertools.count(
        1 + max((int(m.group(1)) for a in q.arrows if (m := _FRESH.match(a.id.rstrip("*")))), default=-1)
    )
    ids = {a.id.rstrip("*") for a in q.arrows}
    for a in q.arrows:
        if k in (a.source, a.target):
            new_id = a.id[:-1] if a.id.endswith("*") else a.id + "*"
            arrows.append(Arrow(new_id, a.target, a.source))
            continue
        if used[a.source, a.target] < new_b.get((a.source, a.target), 0):
            used[a.source, a.target] += 1
            arrows.append(a)
    for i in q.vertices:
        for j in q.vertices:
            if k in (i, j):
                continue
            while used[i, j] < new_b.get((i, j), 0):
                used[i, j] += 1
                while (new_id := f"a{next(fresh)}") in ids:
                    pass
                ids.add(new_id)
                arrows.append(Arrow(new_id, i, j))
    return Quiver(q.vertices, tuple(arrows))


def mutate_along(q: Quiver, path: Iterable[str]) -> Quiver:
    for k in path:
        q = mutate(q, k)
    return q


# -- full cycles and admissible sets ---------------------------------------


@dataclass(frozen=True)
class FullCycle:
    vertices: tuple[str, ...]
    arrows: tuple[str, ...]


def _simple_cycles(q: Quiver) -> Iterator[list[str]]:
    index = {v: i for i, v in enumerate(q.vertices)}
    succ = {v: sorted(set(q.successors(v)), key=index.__getitem__) for v in q.vertices}
    for start in q.vertices:
        s = index[start]
        path = [start]
        on_path = {start}

        def extend(v: str) -> Iterator[list[str]]:
            for w in succ[v]:
                if w == start:
                    yield list(path)
                elif index[w] > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    yield from extend(w)
                    path.pop()
                    on_path.discard(w)

        yield from extend(start)


def enumerate_full_cycles(q: Quiver) -> list[FullCycle]:
    """Chord-free simple oriented cycles, each once, starting at its least vertex."""
    cycles = []
    for vs in _simple_cycles(q):
        members = set(vs)
        inside = [a for a in q.arrows if a.source in members and a.target in members]
        if len(inside) != len(vs):
            continue
        steps = [q.arrows_between(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
        cycles.append(FullCycle(tuple(vs), tuple(s[0].id for s in steps)))
    return cycles


def is_admissible(q: Quiver, s: Iterable[str], cycles: Sequence[FullCycle] | None = None) -> bool:
    s = set(s)
    if cycles is None:
        cycles = enumerate_full_cycles(q)
    on_cycles = {a for c in cycles for a in c.arrows}
    if not s <= on_cycles:
        return False
    return all(len(s.intersection(c.arrows)) == 1 for c in cycles)


def enumerate_admissible_sets(q: Quiver) -> list[frozenset[str]]:
    cycles = enumerate_full_cycles(q)
    position = {a.id: i for i, a in enumerate(q.arrows)}
    found: set[frozenset[str]] = set()

    def search(i: int, chosen: frozenset[str]) -> None:
        if any(len(chosen.intersection(c.arrows)) > 1 for c in cycles):
            return
        if i == len(cycles):
            found.add(chosen)
            return
        if chosen.intersection(cycles[i].arrows):
            search(i + 1, chosen)
            return
        for a in cycles[i].arrows:
            search(i + 1, chosen | {a})

    search(0, frozenset())
    return sorted(found, key=lambda s: sorted(position[a] for a in s))


# -- isomorphism -------------------------------------------------------------


def _degree_profile(q: Quiver) -> dict[str, tuple[int, int]]:
    out = Counter(a.source for a in q.arrows)
    inn = Counter(a.target for a in q.arrows)
    return {v: (out[v], inn[v]) for v in q.vertices}


def quiver_isomorphic(q1: Quiver, q2: Quiver) -> dict[str, str] | None:
    """Lexicographically least multiplicity-preserving bijection q1 -> q2, or None.

    "Least" compares the tuple of images of q1's vertices (in q1's order)
    under q2's vertex order.
    """
    if q1.rank != q2.rank or len(q1.arrows) != len(q2.arrows):
        return None
    m1 = Counter((a.source, a.target) for a in q1.arrows)
    m2 = Counter((a.source, a.target) for a in q2.arrows)
    d1, d2 = _degree_profile(q1), _degree_profile(q2)
    if sorted(d1.values()) != sorted(d2.values()):
        return None
    order = list(q1.vertices)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in q2.vertices:
            if w in used or d1[v] != d2[w]:
                continue
            if any(
                m1[v, u] != m2[w, mapping[u]] or m1[u, v] != m2[mapping[u], w] for u in order[:i]
            ):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def canonical_key(q: Quiver) -> tuple:
    """An isomorphism invariant that separates isomorphism classes.

    Vertices are first grouped by a refined degree invariant; the key is the
    lexicographically least adjacency encoding over all orderings compatible
    with that grouping.
    """
    deg = _degree_profile(q)
    inv = {
        v: (
            deg[v],
            tuple(sorted(deg[w] for w in q.successors(v))),
            tuple(sorted(deg[w] for w in q.predecessors(v))),
        )
        for v in q.vertices
    }
    blocks: dict[tuple, list[str]] = {}
    for v in q.vertices:
        blocks.setdefault(inv[v], []).append(v)
    keys = sorted(blocks)
    mult = Counter((a.source, a.target) for a in q.arrows)
    best = None
    for perms in itertools.product(*(itertools.permutations(blocks[k]) for k in keys)):
        order = [v for p in perms for v in p]
        enc = tuple(mult[u, v] for u in order for v in order)
        if best is None or enc < best:
            best = enc
    return (tuple(keys), best)


# -- Dynkin recognition ------------------------------------------------------


def dynkin_type(q: Quiver) -> str | None:
    """Name of the Dynkin diagram underlying ``q`` ("A3", "D5", "E6"...), or None."""
    n = q.rank
    if n == 0 or not q.is_connected():
        return None
    edges = Counter(frozenset((a.source, a.target)) for a in q.arrows)
    if any(c > 1 for c in edges.values()) or len(edges) != n - 1:
        return None
    adj: dict[str, list[str]] = {v: [] for v in q.vertices}
    for e in edges:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    branch = [v for v in q.vertices if len(adj[v]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        return None
    center = branch[0]
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def coxeter_number(dynkin: str) -> int:
    kind, n = dynkin[0], int(dynkin[1:])
    if kind == "A":
        return n + 1
    if kind == "D":
        return 2 * n - 2
    return {6: 12, 7: 18, 8: 30}[n]


def positive_root_count(dynkin: str) -> int:
    kind, n = dynkin[0], int(dynkin[1:])
    if kind == "A":
        return n * (n + 1) // 2
    if kind == "D":
        return n * (n - 1)
    return {6: 36, 7: 63, 8: 120}[n]


def standard_dynkin_quiver(dynkin: str, orientation: str = "linear") -> Quiver:
    """A fixed orientation of the named diagram on vertices "1".."n".

    ``linear`` orients every edge from the smaller to the larger label;
    ``alternating`` makes every vertex a sink or a source.
    """
    match = re.fullmatch(r"([ADE])(\d+)", dynkin.strip().upper())
    if not match:
        raise MalformedInputError(f"unrecognised Dynkin type {dynkin!r}")
    kind, n = match.group(1), int(match.group(2))
    if kind == "A" and n >= 1:
        edges = [(i, i + 1) for i in range(1, n)]
    elif kind == "D" and n >= 4:
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    elif kind == "E" and n in (6, 7, 8):
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    else:
        raise MalformedInputError(f"unsupported Dynkin type {dynkin!r}")
    if orientation == "alternating":
        colour = {1: 0}
        for u, v in sorted(edges):
            colour[v] = 1 - colour[u]
        edges = [(u, v) if colour[u] == 0 else (v, u) for u, v in edges]
    elif orientation != "linear":
        raise MalformedInputError(f"unknown orientation {orientation!r}")
    return Quiver.from_pairs([(str(u), str(v)) for u, v in edges], [str(i) for i in range(1, n + 1)])


def max_bfs_states() -> int:
    raw = os.environ.get("TILTFORGE_MAX_BFS")
    if raw is None:
        return DEFAULT_MAX_BFS
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise MalformedInputError(f"TILTFORGE_MAX_BFS must be an integer, got {raw!r}") from exc


def find_acyclic_in_mutation_class(q: Quiver, max_states: int | None = None) -> tuple[Quiver, list[str]]:
    """Breadth-first search of the mutation class of ``q`` modulo isomorphism.

    Returns an acyclic member ``q0`` (on the same vertex labels) and a vertex
    sequence ``path`` with ``mutate_along(q0, path) == q`` up to arrow ids.
    """
    if max_states is None:
        max_states = max_bfs_states()
    if q.has_two_cycles():
        raise MalformedInputError("quiver has a 2-cycle")

    def check(member: Quiver) -> bool:
        if any(c > 1 for c in Counter((a.source, a.target) for a in member.arrows).values()):
            raise NotDynkinError("mutation class contains multiple arrows")
        if member.is_acyclic():
            if dynkin_type(member) is None:
                raise NotDynkinError("acyclic member of the mutation class is not a Dynkin diagram")
            return True
        return False

    if check(q):
        return q, []
    seen = {canonical_key(q)}
    queue = deque([(q, [])])
    while queue:
        current, path = queue.popleft()
        for k in current.vertices:
            nxt = mutate(current, k)
            key = canonical_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                raise NotDynkinError(f"mutation class exceeds {max_states} quivers")
            if check(nxt):
                return nxt, list(reversed(path + [k]))
            queue.append((nxt, path + [k]))
    raise NotDynkinError("no acyclic quiver in the mutation class")
