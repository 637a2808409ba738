"""Trench jumping and the search for all maximal tilted subalgebras."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from tiltforge.cluster import Realization, realize_quiver
from tiltforge.errors import InternalError, MalformedInputError
from tiltforge.quiver import Quiver, is_admissible
from tiltforge.slices import LocalSlice, Setting

MAX_PRESENTATIONS = 10_000


def apr_transform(q_b: Quiver, s: Iterable[str], cell: Iterable[str]) -> frozenset[str]:
    """Drop arrows leaving the cell, add arrows entering it."""
    cell = set(cell)
    if not cell <= set(q_b.vertices):
        raise MalformedInputError("cell is not a set of quiver vertices")
    leaving = {a.id for a in q_b.arrows if a.source in cell and a.target not in cell}
    entering = {a.id for a in q_b.arrows if a.source not in cell and a.target in cell}
    out = (frozenset(s) - leaving) | entering
    if not is_admissible(q_b, out):
        raise MalformedInputError(f"swap at {sorted(cell)} does not give an admissible set")
    return frozenset(out)


@dataclass(frozen=True)
class TiltedPresentation:
    relations: frozenset[str]
    jump_path: tuple[frozenset[str], ...] = field(compare=False)

    def relation_list(self, q: Quiver) -> list[str]:
        order = {a.id: i for i, a in enumerate(q.arrows)}
        return sorted(self.relations, key=order.__getitem__)


@dataclass(frozen=True)
class JumpEdge:
    before: frozenset[str]
    cell: frozenset[str]
    after: frozenset[str]
    landed: LocalSlice = field(compare=False)


@dataclass
class AlgorithmResult:
    quiver: Quiver
    presentations: list[TiltedPresentation]
    edges: list[JumpEdge]
    slices: dict[frozenset[str], LocalSlice]
    # jumpable cells whose jump set lies on no slice of the class
    blocked: list[tuple[frozenset[str], frozenset[str]]] = field(default_factory=list)

    def relation_sets(self) -> set[frozenset[str]]:
        return {p.relations for p in self.presentations}


def jumpable(st: Setting, rightmost: LocalSlice, cell: frozenset[str]) -> bool:
    if not st.is_relative_source(rightmost, cell):
        return False
    return all(st.model.tau(st.model.tau(st.ct[a])) in rightmost.members for a in cell)


def co_jumpable(st: Setting, leftmost: LocalSlice, cell: frozenset[str]) -> bool:
    if not st.is_relative_sink(leftmost, cell):
        return False
    return all(st.ct[a] in leftmost.members for a in cell)


def _representative(st: Setting, base: LocalSlice, needed: frozenset) -> LocalSlice | None:
    """A member of the class of ``base`` containing ``needed``, if any."""
    for s in st.homotopy_class(base):
        if needed <= s.members:
            return s
    return None


def _run(st: Setting, direction: str) -> AlgorithmResult:
    q = st.quiver
    if not st.legal_slices:
        raise InternalError("no local slice avoids add(tau T)")
    start = st.legal_slices[0]
    s0 = st.annihilator_set(start)
    slices = {s0: start}
    pres = {s0: TiltedPresentation(s0, ())}
    edges: list[JumpEdge] = []
    blocked: list[tuple[frozenset[str], frozenset[str]]] = []
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        if direction == "-":
            extreme = st.rightmost(slices[s])
        else:
            extreme = st.leftmost(slices[s])
        if st.annihilator_set(extreme) != s:
            raise InternalError("moving within a homotopy class changed the annihilator")
        for cell in st.cells:
            if len(cell) == len(q.vertices):
                continue  # the swap over every vertex is the identity
            trench = st.trench(cell)
            if direction == "-":
                if not jumpable(st, extreme, cell):
                    continue
                js = st.jump_sets(trench)
                base = _representative(st, extreme, js.L)
                if base is None:
                    blocked.append((s, cell))
                    continue
                new = apr_transform(q, s, cell)
            else:
                if not co_jumpable(st, extreme, cell):
                    continue
                js = st.jump_sets(trench)
                base = _representative(st, extreme, js.R)
                if base is None:
                    blocked.append((s, cell))
                    continue
                new = apr_transform(q, s, set(q.vertices) - cell)
            landed = st.jump(base, trench, direction)
            got = st.annihilator_set(landed)
            if got != new:
                raise InternalError(
                    f"jump over {sorted(cell)} gives {sorted(got)}, expected {sorted(new)}"
                )
            edges.append(JumpEdge(s, cell, new, landed))
            if new not in pres:
                pres[new] = TiltedPresentation(new, pres[s].jump_path + (cell,))
                slices[new] = landed
                queue.append(new)
                if len(pres) > MAX_PRESENTATIONS:
                    raise InternalError("jump search exceeds the safety cap")
    order = sorted(pres, key=lambda r: (len(pres[r].jump_path), sorted(pres[r].relation_list(q))))
    return AlgorithmResult(q, [pres[r] for r in order], edges, slices, blocked)


def maximal_tilted_subalgebras(source: Quiver | Realization | Setting) -> AlgorithmResult:
    st = _setting(source)
    return _run(st, "-")


def leftward_pass(source: Quiver | Realization | Setting) -> AlgorithmResult:
    st = _setting(source)
    return _run(st, "+")


def _setting(source: Quiver | Realization | Setting) -> Setting:
    if isinstance(source, Setting):
        return source
    if isinstance(source, Quiver):
        source = realize_quiver(source)
    return Setting.from_realization(source)
