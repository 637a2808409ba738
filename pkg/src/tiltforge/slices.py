"""Local slices in C minus add(tau T).

A local slice is stored as its set of canonical members.  For moves it is
convenient to also carry a *lift*: a section of ZQ, i.e. one offset per
seed vertex with ``o[j] - o[i]`` in ``{0, 1}`` for every seed arrow i -> j,
whose image in the cluster category is the member set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from tiltforge.cluster import CTObject, CVertex, ClusterModel, Realization, cell_decomposition
from tiltforge.derived import DVertex
from tiltforge.errors import InternalError, MalformedInputError
from tiltforge.quiver import Arrow, Quiver, enumerate_full_cycles, is_admissible

MAX_CLASS_SIZE = 200_000


@dataclass(frozen=True)
class LocalSlice:
    members: frozenset[CVertex]
    lift: tuple[tuple[str, int], ...] = field(compare=False, hash=False, default=())

    def __contains__(self, v: CVertex) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def offsets(self) -> dict[str, int]:
        return dict(self.lift)


@dataclass(frozen=True)
class JumpSets:
    L: frozenset[CVertex]
    R: frozenset[CVertex]


class Setting:
    """A cluster model, a cluster-tilting object and its quiver, with caches."""

    def __init__(self, model: ClusterModel, ct: CTObject, quiver: Quiver):
        self.model = model
        self.ct = ct
        self.quiver = quiver
        if set(ct.labels) != set(quiver.vertices):
            raise MalformedInputError("summand labels must be the quiver vertices")
        self.tau_t = frozenset(model.tau(v) for v in ct.positions())
        self._iset: dict[tuple[CVertex, CVertex], frozenset[CVertex]] = {}
        self._class_cache: dict[LocalSlice, list[LocalSlice]] = {}
        seed = model.seed
        self._order = seed.vertices
        self._nbrs = {v: [] for v in seed.vertices}
        for a in seed.arrows:
            # (neighbour, allowed offset differences neighbour - v)
            self._nbrs[a.source].append((a.target, (0, 1)))
            self._nbrs[a.target].append((a.source, (-1, 0)))

    @classmethod
    def from_realization(cls, r: Realization) -> "Setting":
        return cls(r.model, r.ct, r.quiver)

    # -- sections ------------------------------------------------------------

    @cached_property
    def root_period(self) -> int:
        z = self.model.z
        root = self._order[0]
        v = DVertex(root, 0)
        for _ in range(4):
            v = z.F(v)
            if v.orbit == root:
                return v.offset
        raise InternalError("F does not return to the root orbit")

    def _sections(self, root_offsets: Iterable[int]) -> Iterator[dict[str, int]]:
        order = self._tree_order()
        for r0 in root_offsets:
            offsets = {order[0][0]: r0}

            def extend(i: int) -> Iterator[dict[str, int]]:
                if i == len(order):
                    yield dict(offsets)
                    return
                v, parent, diffs = order[i]
                for d in diffs:
                    offsets[v] = offsets[parent] + d
                    yield from extend(i + 1)
                del offsets[v]

            yield from extend(1)

    def _tree_order(self) -> list[tuple[str, str | None, tuple[int, ...]]]:
        root = self._order[0]
        out = [(root, None, ())]
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, diffs in self._nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    out.append((w, v, diffs))
                    queue.append(w)
        return out

    def _slice_from_offsets(self, offsets: dict[str, int]) -> LocalSlice:
        members = frozenset(self.model.canonical(DVertex(o, n)) for o, n in offsets.items())
        if len(members) != self.model.rank:
            raise InternalError("a section folds onto itself in the cluster category")
        return LocalSlice(members, tuple((o, offsets[o]) for o in self._order))

    @cached_property
    def all_slices(self) -> list[LocalSlice]:
        """All local slices of the cluster category (legal or not)."""
        found: dict[frozenset, LocalSlice] = {}
        for offs in self._sections(range(self.root_period)):
            s = self._slice_from_offsets(offs)
            found.setdefault(s.members, s)
        return sorted(found.values(), key=self.slice_key)

    def slice_key(self, s: LocalSlice) -> tuple[int, ...]:
        return tuple(sorted(self.model.key(v) for v in s.members))

    def is_legal(self, s: LocalSlice) -> bool:
        return not (s.members & self.tau_t)

    @cached_property
    def legal_slices(self) -> list[LocalSlice]:
        return [s for s in self.all_slices if self.is_legal(s)]

    def lift_section(self, members: Iterable[CVertex]) -> LocalSlice:
        """Attach a lift to a member set, or raise if it is not a local slice."""
        members = frozenset(members)
        if len(members) != self.model.rank:
            raise MalformedInputError(f"a local slice has exactly {self.model.rank} members")
        order = self._tree_order()
        canon = self.model.canonical
        root = order[0][0]
        for r0 in range(self.root_period):
            first = canon(DVertex(root, r0))
            if first not in members:
                continue
            offsets = {root: r0}
            used = {first}

            def extend(i: int) -> bool:
                if i == len(order):
                    return True
                v, parent, diffs = order[i]
                for d in diffs:
                    c = canon(DVertex(v, offsets[parent] + d))
                    if c in members and c not in used:
                        offsets[v] = offsets[parent] + d
                        used.add(c)
                        if extend(i + 1):
                            return True
                        used.discard(c)
                        del offsets[v]
                return False

            if extend(1):
                return LocalSlice(members, tuple((o, offsets[o]) for o in self._order))
        raise MalformedInputError("the given vertices do not form a local slice")

    # -- moves -----------------------------------------------------------------

    @staticmethod
    def _points_in(offs: dict[str, int], v: str, w: str, diffs: tuple[int, int]) -> bool:
        # arrow v -> w in the seed: (w,n) -> (v,n); arrow w -> v: (w,n) -> (v,n+1)
        d = offs[w] - offs[v]
        return d == 0 if diffs == (0, 1) else d == -1

    def move(self, s: LocalSlice, x: CVertex, direction: str) -> LocalSlice | None:
        if x not in s.members:
            raise MalformedInputError(f"{x} is not a member of the slice")
        offs = s.offsets()
        canon = self.model.canonical
        orbit = next(o for o, n in offs.items() if canon(DVertex(o, n)) == x)
        if direction == "+":
            ok = all(self._points_in(offs, orbit, w, d) for w, d in self._nbrs[orbit])
            step = -1
        elif direction == "-":
            ok = all(not self._points_in(offs, orbit, w, d) for w, d in self._nbrs[orbit])
            step = 1
        else:
            raise ValueError("direction must be '+' or '-'")
        if not ok:
            return None
        offs[orbit] += step
        new = self._slice_from_offsets(offs)
        return new if self.is_legal(new) else None

    def neighbours(self, s: LocalSlice) -> list[LocalSlice]:
        out = []
        for x in self.model.sort(s.members):
            for d in ("+", "-"):
                t = self.move(s, x, d)
                if t is not None:
                    out.append(t)
        return out

    def homotopy_class(self, s: LocalSlice) -> list[LocalSlice]:
        got = self._class_cache.get(s)
        if got is not None:
            return got
        seen = {s.members: s}
        queue = deque([s])
        while queue:
            cur = queue.popleft()
            for nxt in self.neighbours(cur):
                if nxt.members not in seen:
                    seen[nxt.members] = nxt
                    queue.append(nxt)
                    if len(seen) > MAX_CLASS_SIZE:
                        raise InternalError("homotopy class exceeds the safety cap")
        cls = sorted(seen.values(), key=self.slice_key)
        for member in cls:
            self._class_cache[member] = cls
        return cls

    def homotopic(self, a: LocalSlice, b: LocalSlice) -> bool:
        return b in self.homotopy_class(a)

    def _extreme(self, s: LocalSlice, direction: str) -> LocalSlice:
        cur = s
        for _ in range(MAX_CLASS_SIZE):
            for x in self.model.sort(cur.members):
                nxt = self.move(cur, x, direction)
                if nxt is not None:
                    cur = nxt
                    break
            else:
                return cur
        raise InternalError("slice moves do not terminate")

    def rightmost(self, s: LocalSlice) -> LocalSlice:
        return self._extreme(s, "-")

    def leftmost(self, s: LocalSlice) -> LocalSlice:
        return self._extreme(s, "+")

    # -- I-sets and annihilators ----------------------------------------------

    def i_set(self, x: CVertex, y: CVertex) -> frozenset[CVertex]:
        key = (x, y)
        got = self._iset.get(key)
        if got is None:
            m = self.model
            got = frozenset(z for z in m.vertices if m.composition_nonzero(x, z, y))
            self._iset[key] = got
        return got

    def tau_i(self, a: str, b: str) -> frozenset[CVertex]:
        """tau I(T_a, T_b)."""
        return frozenset(self.model.tau(z) for z in self.i_set(self.ct[a], self.ct[b]))

    def arrow_on_cycle(self, arrow: Arrow) -> bool:
        a, b = arrow.target, arrow.source
        ends = {self.model.tau(self.ct[a]), self.model.tau(self.ct[b])}
        return bool(self.tau_i(a, b) - ends)

    def annihilator_set(self, s: LocalSlice) -> frozenset[str]:
        if not self.is_legal(s):
            raise MalformedInputError("slice meets add(tau T)")
        out = frozenset(
            arrow.id for arrow in self.quiver.arrows if self.tau_i(arrow.target, arrow.source) & s.members
        )
        if not is_admissible(self.quiver, out, self.cycles):
            raise InternalError(f"annihilator {sorted(out)} is not admissible")
        return out

    @cached_property
    def cycles(self):
        return enumerate_full_cycles(self.quiver)

    def arrow_ids(self, pairs: Iterable[tuple[str, str]]) -> frozenset[str]:
        out = set()
        for s, t in pairs:
            hits = self.quiver.arrows_between(s, t)
            if len(hits) != 1:
                raise MalformedInputError(f"no unique arrow {s}->{t}")
            out.add(hits[0].id)
        return frozenset(out)

    # -- spans -------------------------------------------------------------------

    def span_arrow(self, arrow: Arrow) -> frozenset[CVertex]:
        target = self.tau_i(arrow.target, arrow.source)
        return frozenset(v for s in self.legal_slices if s.members & target for v in s.members)

    def span_set(self, arrows: Iterable[Arrow]) -> frozenset[CVertex]:
        out = frozenset(v for s in self.legal_slices for v in s.members)
        for arrow in arrows:
            out &= self.span_arrow(arrow)
        return out

    def slices_in_span(self, arrows: Iterable[Arrow]) -> list[LocalSlice]:
        span = self.span_set(arrows)
        return [s for s in self.legal_slices if s.members <= span]

    def is_tilted_admissible(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        if not is_admissible(self.quiver, s, self.cycles):
            raise MalformedInputError(f"{sorted(s)} is not an admissible set")
        return any(self.annihilator_set(sl) == s for sl in self.legal_slices)

    # -- cells ---------------------------------------------------------------------

    @cached_property
    def cells(self) -> list[frozenset[str]]:
        return cell_decomposition(self.model, self.ct)

    def trench(self, cell: Iterable[str]) -> frozenset[CVertex]:
        return frozenset(self.model.tau(self.ct[a]) for a in cell)

    def _cell_hom(self, src: Iterable[str], dst: Iterable[str]) -> bool:
        return any(self.model.hom_dim(self.ct[a], self.ct[b]) for a in src for b in dst)

    def _cell_tau_i(self, src: Iterable[str], dst: Iterable[str]) -> frozenset[CVertex]:
        out: frozenset[CVertex] = frozenset()
        for a in src:
            for b in dst:
                out |= self.tau_i(a, b)
        return out

    def is_relative_source(self, s: LocalSlice, cell: frozenset[str]) -> bool:
        return all(
            s.members & self._cell_tau_i(other, cell)
            for other in self.cells
            if other != cell and self._cell_hom(other, cell)
        )

    def is_relative_sink(self, s: LocalSlice, cell: frozenset[str]) -> bool:
        return all(
            s.members & self._cell_tau_i(cell, other)
            for other in self.cells
            if other != cell and self._cell_hom(cell, other)
        )

    def relative_sources(self, s: LocalSlice) -> list[frozenset[str]]:
        return [c for c in self.cells if self.is_relative_source(s, c)]

    def relative_sinks(self, s: LocalSlice) -> list[frozenset[str]]:
        return [c for c in self.cells if self.is_relative_sink(s, c)]

    # -- jumping ---------------------------------------------------------------------

    def jump_sets(self, trench: Iterable[CVertex]) -> JumpSets:
        m = self.model
        x = frozenset(trench)
        # middle terms are taken outside the trench before the second step
        theta = {p for v in x for p in m.predecessors(v)} - x
        theta_m = {q for v in x for q in m.successors(v)} - x
        left = {m.tau(v) for v in x} | theta | {q for p in theta for q in m.successors(p)}
        right = {m.tau_inv(v) for v in x} | theta_m | {p for q in theta_m for p in m.predecessors(q)}
        return JumpSets(frozenset(left - x), frozenset(right - x))

    def jump(self, s: LocalSlice, trench: Iterable[CVertex], direction: str) -> LocalSlice:
        js = self.jump_sets(trench)
        if not js.L & js.R:
            raise InternalError("L and R do not meet")
        take, give = (js.L, js.R) if direction == "-" else (js.R, js.L)
        if not take <= s.members:
            raise MalformedInputError("the slice does not contain the jump set")
        new = self.lift_section((s.members - take) | give)
        if not self.is_legal(new):
            raise InternalError("jumped slice meets add(tau T)")
        return new

    def complete_to_slice(self, partial: Iterable[CVertex]) -> LocalSlice:
        partial = frozenset(partial)
        for s in self.legal_slices:
            if partial <= s.members:
                return s
        raise MalformedInputError("not completable")


def parse_arrow_list(text: str) -> list[tuple[str, str]]:
    """Parse "1->2,3->4" into pairs."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise MalformedInputError(f"cannot parse arrow {part!r}")
        s, t = (x.strip() for x in part.split("->", 1))
        if not s or not t:
            raise MalformedInputError(f"cannot parse arrow {part!r}")
        out.append((s, t))
    return out
