"""The cluster category as the orbit category of the derived model under F.

Objects are canonical representatives in the fundamental domain
``ind(mod H) + {P_i[1]}``.  For x, y in that domain the only F-translates
of y that x sees are y itself and Fy, so a morphism of the cluster category
is a pair ``(c0, c1)`` with ``c0 in Hom_D(x, y)`` and ``c1 in Hom_D(x, Fy)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from tiltforge import linalg
from tiltforge.derived import DVertex, Morphism, ZModel, apply_F, basis_elements, compose_d
from tiltforge.errors import InternalError, MalformedInputError
from tiltforge.quiver import (
    Quiver,
    find_acyclic_in_mutation_class,
    quiver_isomorphic,
)

CVertex = DVertex


@dataclass(frozen=True)
class CMorphism:
    source: CVertex
    target: CVertex
    c0: tuple[Fraction, ...]
    c1: tuple[Fraction, ...]

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return self.c0 + self.c1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.vector)


class ClusterModel:
    def __init__(self, seed: Quiver):
        self.z = ZModel(seed)
        self.seed = seed
        self.rank = seed.rank
        self.dynkin = self.z.dynkin
        z = self.z
        self._top = {o: z.module_end[o] + 1 for o in z.column_order}
        self.vertices: list[CVertex] = sorted(
            (DVertex(o, n) for o in z.column_order for n in range(self._top[o] + 1)),
            key=z.key,
        )
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._succ = {v: self._dedup(self.canonical(s) for s in z.successors(v)) for v in self.vertices}
        self._pred = {v: self._dedup(self.canonical(p) for p in z.predecessors(v)) for v in self.vertices}
        self._tau = {v: self.canonical(z.tau(v)) for v in self.vertices}
        self._tau_inv = {t: v for v, t in self._tau.items()}
        if len(self._tau_inv) != len(self.vertices):
            raise InternalError("tau_C is not a bijection")
        self._hom_cache: dict[tuple[CVertex, CVertex], tuple[int, int]] = {}

    @staticmethod
    def _dedup(items: Iterable[CVertex]) -> list[CVertex]:
        return list(dict.fromkeys(items))

    # -- objects -------------------------------------------------------------

    def in_domain(self, v: DVertex) -> bool:
        top = self._top.get(v.orbit)
        return top is not None and 0 <= v.offset <= top

    def canonical(self, v: DVertex) -> CVertex:
        if v.orbit not in self._top:
            raise MalformedInputError(f"unknown orbit {v.orbit!r}")
        while not self.in_domain(v):
            v = self.z.F_inv(v) if v.offset > 0 else self.z.F(v)
        return v

    def key(self, v: CVertex) -> int:
        return self._index[v]

    def sort(self, vs: Iterable[CVertex]) -> list[CVertex]:
        return sorted(vs, key=self.key)

    def successors(self, v: CVertex) -> list[CVertex]:
        return list(self._succ[v])

    def predecessors(self, v: CVertex) -> list[CVertex]:
        return list(self._pred[v])

    def tau(self, v: CVertex) -> CVertex:
        return self._tau[v]

    def tau_inv(self, v: CVertex) -> CVertex:
        return self._tau_inv[v]

    def arrows(self) -> list[tuple[CVertex, CVertex]]:
        return [(v, w) for v in self.vertices for w in self._succ[v]]

    def projective(self, i: str) -> CVertex:
        return DVertex(i, 0)

    def check_vertex(self, v: DVertex) -> CVertex:
        if not self.in_domain(v):
            raise MalformedInputError(f"{v} is not in the fundamental domain")
        return v

    # -- morphisms -------------------------------------------------------------

    def _components(self, x: CVertex, y: CVertex) -> tuple[int, int]:
        got = self._hom_cache.get((x, y))
        if got is None:
            z = self.z
            fy = z.F(y)
            for far in (z.F(fy), z.F_inv(y)):
                if z.hom_dim(x, far) != 0:
                    raise InternalError(f"orbit overflow: Hom_D({x}, {far}) != 0")
            got = (z.hom_dim(x, y), z.hom_dim(x, fy))
            self._hom_cache[x, y] = got
        return got

    def hom_dims(self, x: CVertex, y: CVertex) -> tuple[int, int]:
        return self._components(self.check_vertex(x), self.check_vertex(y))

    def hom_dim(self, x: CVertex, y: CVertex) -> int:
        return sum(self.hom_dims(x, y))

    def hom_basis(self, x: CVertex, y: CVertex) -> list[CMorphism]:
        d0, d1 = self.hom_dims(x, y)
        zero0, zero1 = (Fraction(0),) * d0, (Fraction(0),) * d1
        out = [CMorphism(x, y, f.coords, zero1) for f in basis_elements(self.z, x, y)]
        out += [CMorphism(x, y, zero0, f.coords) for f in basis_elements(self.z, x, self.z.F(y))]
        return out

    def compose(self, f: CMorphism, g: CMorphism) -> CMorphism:
        """``g o f`` in the orbit category."""
        if f.target != g.source:
            raise ValueError(f"cannot compose: target {f.target} != source {g.source}")
        z = self.z
        x, y, w = f.source, f.target, g.target
        fy, fw = z.F(y), z.F(w)
        f0, f1 = Morphism(x, y, f.c0), Morphism(x, fy, f.c1)
        g0, g1 = Morphism(y, w, g.c0), Morphism(y, fw, g.c1)
        c0 = compose_d(z, f0, g0)
        c1 = compose_d(z, f1, apply_F(z, g0)) + compose_d(z, f0, g1)
        return CMorphism(x, w, c0.coords, c1.coords)

    def identity(self, x: CVertex) -> CMorphism:
        d0, d1 = self.hom_dims(x, x)
        if d0 != 1:
            raise InternalError(f"End_D({x}) has dimension {d0}")
        return CMorphism(x, x, (Fraction(1),), (Fraction(0),) * d1)

    def ext1(self, x: CVertex, y: CVertex) -> int:
        return self.hom_dim(x, self.tau(y))

    def composition_nonzero(self, x: CVertex, z: CVertex, y: CVertex) -> bool:
        """Is some composite x -> z -> y nonzero?"""
        if self.hom_dim(x, z) == 0 or self.hom_dim(z, y) == 0:
            return False
        return any(
            not self.compose(f, g).is_zero()
            for f in self.hom_basis(x, z)
            for g in self.hom_basis(z, y)
        )


def build_cluster_model(q: Quiver) -> ClusterModel:
    return ClusterModel(q)


def hom_c(m: ClusterModel, x: CVertex, y: CVertex) -> list[CMorphism]:
    return m.hom_basis(x, y)


def ext1_c(m: ClusterModel, x: CVertex, y: CVertex) -> int:
    return m.ext1(x, y)


# -- cluster-tilting objects -------------------------------------------------------


@dataclass(frozen=True)
class CTObject:
    """Summand label -> position; labels are the vertices of the Gabriel quiver."""

    items: tuple[tuple[str, CVertex], ...]
    _lookup: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        self._lookup.update(self.items)
        if len(self._lookup) != len(self.items):
            raise MalformedInputError("summand labels must be unique")
        if len(set(self._lookup.values())) != len(self.items):
            raise MalformedInputError("summands must be pairwise non-isomorphic")

    @classmethod
    def from_mapping(cls, summands: Mapping[str, CVertex]) -> "CTObject":
        return cls(tuple(summands.items()))

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.items]

    @property
    def summands(self) -> dict[str, CVertex]:
        return dict(self.items)

    def __getitem__(self, label: str) -> CVertex:
        return self._lookup[label]

    def positions(self) -> set[CVertex]:
        return set(self._lookup.values())

    def label_of(self, v: CVertex) -> str | None:
        for label, w in self.items:
            if w == v:
                return label
        return None

    def replace(self, label: str, v: CVertex) -> "CTObject":
        return CTObject(tuple((a, v if a == label else w) for a, w in self.items))

    def relabel(self, mapping: Mapping[str, str]) -> "CTObject":
        return CTObject(tuple((mapping[a], w) for a, w in self.items))


def projective_object(m: ClusterModel) -> CTObject:
    return CTObject(tuple((i, m.projective(i)) for i in m.seed.vertices))


def tau_set(m: ClusterModel, t: CTObject) -> set[CVertex]:
    return {m.tau(v) for v in t.positions()}


def is_cluster_tilting(m: ClusterModel, members: Iterable[CVertex]) -> bool:
    members = list(members)
    if len(members) != m.rank or len(set(members)) != m.rank:
        raise MalformedInputError(f"a cluster-tilting object needs {m.rank} distinct summands")
    for v in members:
        m.check_vertex(v)
    return all(m.ext1(x, y) == 0 for x in members for y in members)


def validate_ct(m: ClusterModel, t: CTObject) -> None:
    if not is_cluster_tilting(m, t.positions()):
        raise MalformedInputError("summands are not pairwise Ext-orthogonal")


def ct_mutate(m: ClusterModel, t: CTObject, k: str) -> CTObject:
    old = t[k]
    rest = [v for a, v in t.items if a != k]
    candidates = [
        x
        for x in m.vertices
        if x != old
        and x not in rest
        and m.ext1(x, x) == 0
        and all(m.ext1(x, y) == 0 and m.ext1(y, x) == 0 for y in rest)
    ]
    if len(candidates) != 1:
        raise InternalError(f"mutation at {k} found {len(candidates)} complements")
    return t.replace(k, candidates[0])


def gabriel_quiver(m: ClusterModel, t: CTObject) -> Quiver:
    """Quiver of End_C(T)^op: arrows b -> a count irreducible maps T_a -> T_b."""
    labels = t.labels

    def radical(a: str, b: str) -> list[CMorphism]:
        basis = m.hom_basis(t[a], t[b])
        if a == b:
            # End_C of a rigid indecomposable: identity spans the c0 part
            basis = [f for f in basis if all(c == 0 for c in f.c0)]
        return basis

    rad = {(a, b): radical(a, b) for a in labels for b in labels}
    pairs = []
    for a in labels:
        for b in labels:
            if a == b or not rad[a, b]:
                continue
            products = [
                list(m.compose(f, g).vector)
                for c in labels
                for f in rad[a, c]
                for g in rad[c, b]
            ]
            count = len(rad[a, b]) - linalg.rank(products)
            if count > 1:
                raise InternalError(f"multiplicity {count} between {b} and {a}")
            pairs.extend([(b, a)] * count)
    return Quiver.from_pairs(pairs, vertices=labels)


def cell_decomposition(m: ClusterModel, t: CTObject) -> list[frozenset[str]]:
    """Cells of T, ordered by their least summand position."""
    parent = {a: a for a in t.labels}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    where = {v: a for a, v in t.items}
    for x in m.vertices:
        mesh = {m.tau(x), x, *m.predecessors(x)}
        hit = [where[v] for v in m.sort(mesh) if v in where]
        for a, b in zip(hit, hit[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, set[str]] = {}
    for a in t.labels:
        groups.setdefault(find(a), set()).add(a)
    return sorted(
        (frozenset(g) for g in groups.values()),
        key=lambda g: min(m.key(t[a]) for a in g),
    )


def trench(m: ClusterModel, t: CTObject, cell: Iterable[str]) -> set[CVertex]:
    return {m.tau(t[a]) for a in cell}


# -- realisation of a quiver -------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    model: ClusterModel
    ct: CTObject
    quiver: Quiver


def realize_quiver(q_b: Quiver) -> Realization:
    """Find a cluster-tilting object whose Gabriel quiver is q_b, labels included.

    The returned quiver is q_b itself (arrow ids preserved).
    """
    seed, path = find_acyclic_in_mutation_class(q_b)
    model = ClusterModel(seed)
    t = projective_object(model)
    for k in path:
        t = ct_mutate(model, t, k)
    g = gabriel_quiver(model, t)
    bij = quiver_isomorphic(g, q_b)
    if bij is None:
        raise InternalError("replayed mutations do not reproduce the input quiver")
    t = t.relabel(bij)
    if not gabriel_quiver(model, t).same_arrows(q_b):
        raise InternalError("relabelled Gabriel quiver differs from the input")
    return Realization(model, t, q_b)


def from_distribution(data: object) -> Realization:
    """Parse a distribution JSON document into a model and cluster-tilting object."""
    if not isinstance(data, dict):
        raise MalformedInputError("distribution must be a JSON object")
    try:
        pairs = [(str(s), str(t)) for s, t in data["seed_orientation"]]
        raw = data["summands"]
        summands = {str(a): DVertex(str(e["orbit"]), int(e["offset"])) for a, e in raw.items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInputError(f"malformed distribution: {exc}") from exc
    verts = data.get("seed_vertices")
    seed = Quiver.from_pairs(pairs, vertices=[str(v) for v in verts] if verts else None)
    declared = data.get("type")
    model = ClusterModel(seed)
    if declared is not None and declared != model.dynkin:
        raise MalformedInputError(f"declared type {declared} but seed is {model.dynkin}")
    for v in summands.values():
        if v.orbit not in seed.vertices:
            raise MalformedInputError(f"unknown orbit {v.orbit!r}")
    t = CTObject.from_mapping({a: model.canonical(v) for a, v in summands.items()})
    validate_ct(model, t)
    return Realization(model, t, gabriel_quiver(model, t))


def to_distribution(model: ClusterModel, t: CTObject) -> dict:
    return {
        "type": model.dynkin,
        "seed_vertices": list(model.seed.vertices),
        "seed_orientation": [[a.source, a.target] for a in model.seed.arrows],
        "summands": {a: {"orbit": v.orbit, "offset": v.offset} for a, v in t.items},
    }


def all_ct_objects(m: ClusterModel) -> list[frozenset[CVertex]]:
    """Every cluster-tilting object, found by mutation from the projectives."""
    start = frozenset(projective_object(m).positions())
    seen = {start}
    stack = [projective_object(m)]
    while stack:
        t = stack.pop()
        for k in t.labels:
            u = ct_mutate(m, t, k)
            key = frozenset(u.positions())
            if key not in seen:
                seen.add(key)
                stack.append(u)
    return sorted(seen, key=lambda s: sorted(m.key(v) for v in s))

