"""Brute-force reference computations.

Nothing here imports the slice or jump machinery: local slices are found by
filtering every n-subset of the cluster category against the four axioms,
and I-sets, annihilators and move classes are recomputed from scratch.  Only
the cluster model (objects, arrows, Hom spaces) is shared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from tiltforge.cluster import CTObject, CVertex, ClusterModel
from tiltforge.derived import DVertex, ZModel
from tiltforge.errors import MalformedInputError
from tiltforge.quiver import Quiver, enumerate_full_cycles

MAX_RANK = 5


def _guard(m: ClusterModel) -> None:
    if m.rank > MAX_RANK:
        raise MalformedInputError(f"oracle is limited to rank {MAX_RANK}, got {m.rank}")


def hammock_dim(z: ZModel, x: DVertex, y: DVertex) -> int:
    """dim Hom(x, y) by additive propagation from x, clipped at zero."""
    if y.offset < x.offset:
        return 0
    values: dict[DVertex, int] = {x: 1}
    start = z.column_order.index(x.orbit)
    for n in range(x.offset, y.offset + 1):
        for pos, orbit in enumerate(z.column_order):
            v = DVertex(orbit, n)
            if n == x.offset and pos <= start:
                continue
            total = sum(values.get(p, 0) for p in z.predecessors(v)) - values.get(z.tau(v), 0)
            values[v] = max(0, total)
    return values.get(y, 0)


def _sectional_paths(m: ClusterModel, start: CVertex, limit: int):
    stack = [(start,)]
    while stack:
        path = stack.pop()
        yield path
        if len(path) > limit:
            continue
        for nxt in m.successors(path[-1]):
            if len(path) >= 2 and m.tau(nxt) == path[-2]:
                continue
            stack.append(path + (nxt,))


def is_local_slice(m: ClusterModel, members: frozenset[CVertex]) -> bool:
    if len(members) != m.rank:
        return False
    for x in members:
        for y in m.successors(x):
            if y not in members and m.tau(y) not in members:
                return False
        for w in m.predecessors(x):
            if w not in members and m.tau_inv(w) not in members:
                return False
    limit = m.z.coxeter
    for x in members:
        for path in _sectional_paths(m, x, limit):
            if path[-1] in members and any(v not in members for v in path):
                return False
    return True


@lru_cache(maxsize=32)
def _all_slices(m: ClusterModel) -> tuple[frozenset[CVertex], ...]:
    out = []
    for combo in itertools.combinations(m.vertices, m.rank):
        members = frozenset(combo)
        if is_local_slice(m, members):
            out.append(members)
    return tuple(out)


def legal_slices(m: ClusterModel, t: CTObject) -> list[frozenset[CVertex]]:
    _guard(m)
    tau_t = {m.tau(v) for v in t.positions()}
    return [s for s in _all_slices(m) if not (s & tau_t)]


def _i_set(m: ClusterModel, x: CVertex, y: CVertex) -> set[CVertex]:
    out = set()
    for z in m.vertices:
        for f in m.hom_basis(x, z):
            if any(not m.compose(f, g).is_zero() for g in m.hom_basis(z, y)):
                out.add(z)
                break
    return out


def annihilator(m: ClusterModel, t: CTObject, q: Quiver, members: frozenset[CVertex]) -> frozenset[str]:
    out = set()
    for arrow in q.arrows:
        hit = {m.tau(z) for z in _i_set(m, t[arrow.target], t[arrow.source])}
        if hit & members:
            out.add(arrow.id)
    return frozenset(out)


def _single_moves(m: ClusterModel, s: frozenset[CVertex], tau_t: set[CVertex]):
    for x in s:
        inside_in = [w for w in m.predecessors(x) if w in s]
        inside_out = [w for w in m.successors(x) if w in s]
        if not inside_out and m.tau(x) not in tau_t:
            yield (s - {x}) | {m.tau(x)}
        if not inside_in and m.tau_inv(x) not in tau_t:
            yield (s - {x}) | {m.tau_inv(x)}


def homotopy_classes_bruteforce(m: ClusterModel, t: CTObject) -> list[list[frozenset[CVertex]]]:
    slices = legal_slices(m, t)
    index = {s: i for i, s in enumerate(slices)}
    parent = list(range(len(slices)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    tau_t = {m.tau(v) for v in t.positions()}
    for s in slices:
        for u in _single_moves(m, s, tau_t):
            j = index.get(u)
            if j is not None:
                a, b = find(index[s]), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[frozenset[CVertex]]] = {}
    for s in slices:
        groups.setdefault(find(index[s]), []).append(s)
    return [groups[k] for k in sorted(groups)]


def brute_force_maximal_tilted(m: ClusterModel, t: CTObject, q: Quiver) -> set[frozenset[str]]:
    return {annihilator(m, t, q, s) for s in legal_slices(m, t)}


def arrows_on_cycles(q: Quiver) -> frozenset[str]:
    return frozenset(a for c in enumerate_full_cycles(q) for a in c.arrows)


def arrow_on_cycle_bruteforce(m: ClusterModel, t: CTObject, arrow) -> bool:
    a, b = arrow.target, arrow.source
    hit = {m.tau(z) for z in _i_set(m, t[a], t[b])}
    return bool(hit - {m.tau(t[a]), m.tau(t[b])})


@dataclass(frozen=True)
class OracleReport:
    slice_count: int
    class_count: int
    annihilators: tuple[tuple[str, ...], ...]
    classes_match_annihilators: bool
    cycle_arrows_match: bool

    def to_json(self) -> dict:
        return {
            "slice_count": self.slice_count,
            "class_count": self.class_count,
            "annihilators": [list(a) for a in self.annihilators],
            "classes_match_annihilators": self.classes_match_annihilators,
            "cycle_arrows_match": self.cycle_arrows_match,
        }


def oracle_report(m: ClusterModel, t: CTObject, q: Quiver) -> OracleReport:
    slices = legal_slices(m, t)
    classes = homotopy_classes_bruteforce(m, t)
    anns = {s: annihilator(m, t, q, s) for s in slices}
    per_class = [{anns[s] for s in c} for c in classes]
    distinct = {a for a in anns.values()}
    match = all(len(p) == 1 for p in per_class) and len(distinct) == len(classes)
    on_cycle = {a.id for a in q.arrows if arrow_on_cycle_bruteforce(m, t, a)}
    order = {a.id: i for i, a in enumerate(q.arrows)}
    ann_list = sorted(tuple(sorted(a, key=order.__getitem__)) for a in distinct)
    return OracleReport(len(slices), len(classes), tuple(ann_list), match, on_cycle == arrows_on_cycles(q))
