"""The translation quiver ZQ as a model of the derived category of a Dynkin quiver.

Conventions (fixed once, used everywhere):

* ``DVertex(i, n)`` is the indecomposable ``tau^{-n} P_i``; the projectives
  sit on the slice ``n = 0`` and ``tau`` lowers the offset by one.
* For an arrow ``i -> j`` of the seed quiver the irreducible maps run
  ``(j, n) -> (i, n)`` and ``(i, n) -> (j, n + 1)``.  Hence
  ``dim Hom(P_i, P_j)`` is the number of paths ``j -> i`` in the seed, and
  the dimension vector of ``P_j`` counts paths starting at ``j``.
* Morphism spaces are computed in the mesh category: for a fixed source the
  functor ``Hom(x, -)`` is built vertex by vertex as the cokernel of the mesh
  map, with exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from tiltforge import linalg
from tiltforge.errors import InternalError, MalformedInputError, NotDynkinError
from tiltforge.quiver import Quiver, coxeter_number, dynkin_type

AUTOMORPHISMS = ("tau", "tau_inv", "nu", "nu_inv", "shift", "shift_inv", "F", "F_inv")


@dataclass(frozen=True)
class DVertex:
    orbit: str
    offset: int

    def __str__(self) -> str:
        return f"({self.orbit},{self.offset})"


Path = tuple  # tuple of DVertex, first entry the source


@dataclass(frozen=True)
class MorphismSpace:
    source: DVertex
    target: DVertex
    basis: tuple[Path, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Morphism:
    """An element of Hom_D(source, target) in the basis of that space."""

    source: DVertex
    target: DVertex
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add morphisms between different objects")
        return Morphism(self.source, self.target, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, tuple(c * a for a in self.coords))


class _HomFrom:
    """The representation Hom(x, -) of the mesh category, for one source x."""

    def __init__(self, model: "ZModel", x: DVertex):
        self.source = x
        self.dims: dict[DVertex, int] = {x: 1}
        self.paths: dict[DVertex, list[Path]] = {x: [(x,)]}
        self.maps: dict[tuple[DVertex, DVertex], linalg.Matrix] = {}
        column = model.column_order
        start = column.index(x.orbit)
        n = x.offset
        while True:
            nonzero = n == x.offset
            for pos, orbit in enumerate(column):
                z = DVertex(orbit, n)
                if n == x.offset and pos <= start:
                    continue
                self._add_vertex(model, z)
                nonzero = nonzero or self.dims[z] > 0
            if not nonzero:
                self.end = n
                break
            n += 1
            if n > model.hi:
                raise MalformedInputError(
                    f"Hom({x}, -) leaves the materialised window at offset {n}"
                )

    def _add_vertex(self, model: "ZModel", z: DVertex) -> None:
        preds = [p for p in model.predecessors(z) if self.dims.get(p, 0) > 0]
        total = sum(self.dims[p] for p in preds)
        if total == 0:
            self.dims[z] = 0
            return
        tz = model.tau(z)
        gens = []
        for e in range(self.dims.get(tz, 0)):
            vec: list[Fraction] = []
            for p in preds:
                vec.extend(row[e] for row in self.maps[tz, p])
            gens.append(vec)
        quotient = linalg.Quotient(total, gens)
        self.dims[z] = quotient.dim
        offset = 0
        owner = []
        for p in preds:
            d = self.dims[p]
            cols = [[Fraction(int(k == offset + j)) for k in range(total)] for j in range(d)]
            self.maps[p, z] = quotient.matrix_of(cols)
            owner.extend((p, j) for j in range(d))
            offset += d
        self.paths[z] = [self.paths[owner[k][0]][owner[k][1]] + (z,) for k in quotient.free]

    def dim(self, z: DVertex) -> int:
        if z.offset >= self.end:
            return 0
        return self.dims.get(z, 0)

    def push(self, vec: Sequence[Fraction], path: Path) -> list[Fraction]:
        """Postcompose an element of Hom(x, path[0]) with the path."""
        vec = list(vec)
        for u, w in zip(path, path[1:]):
            dw = self.dim(w)
            if dw == 0 or linalg.is_zero(vec):
                vec = [Fraction(0)] * dw
            else:
                vec = linalg.matvec(self.maps[u, w], vec)
        return vec


class ZModel:
    """ZQ for an acyclic Dynkin quiver Q, with knitted classes and automorphisms."""

    def __init__(self, seed: Quiver):
        dyn = dynkin_type(seed)
        if dyn is None or not seed.is_acyclic():
            raise NotDynkinError("seed quiver must be an acyclic orientation of a Dynkin diagram")
        self.seed = seed
        self.dynkin = dyn
        self.rank = seed.rank
        self.coxeter = coxeter_number(dyn)
        h = self.coxeter
        self.lo, self.hi = -2 * h - 2, 2 * h + 2
        topo = seed.topological_order()
        # within one offset, irreducible maps run from targets to sources of Q
        self.column_order: list[str] = list(reversed(topo))
        self._column_pos = {v: i for i, v in enumerate(self.column_order)}
        self._out = {v: seed.successors(v) for v in seed.vertices}
        self._in = {v: seed.predecessors(v) for v in seed.vertices}
        self._hom_cache: dict[DVertex, _HomFrom] = {}
        self._knit()

    # -- translation quiver structure ------------------------------------

    def key(self, v: DVertex) -> tuple[int, int]:
        return (v.offset, self._column_pos[v.orbit])

    def successors(self, v: DVertex) -> list[DVertex]:
        return [DVertex(i, v.offset) for i in self._in[v.orbit]] + [
            DVertex(j, v.offset + 1) for j in self._out[v.orbit]
        ]

    def predecessors(self, v: DVertex) -> list[DVertex]:
        return [DVertex(j, v.offset) for j in self._out[v.orbit]] + [
            DVertex(i, v.offset - 1) for i in self._in[v.orbit]
        ]

    def tau(self, v: DVertex) -> DVertex:
        return DVertex(v.orbit, v.offset - 1)

    def in_window(self, v: DVertex) -> bool:
        return v.orbit in self._column_pos and self.lo <= v.offset <= self.hi

    def window(self) -> list[DVertex]:
        return [DVertex(o, n) for n in range(self.lo, self.hi + 1) for o in self.column_order]

    # -- knitting ----------------------------------------------------------

    def _paths_from(self, i: str) -> dict[str, int]:
        counts = {v: 0 for v in self.seed.vertices}
        counts[i] = 1
        for v in self.seed.topological_order():
            for w in self._out[v]:
                counts[w] += counts[v]
        return counts

    def _knit(self) -> None:
        verts = self.seed.vertices
        proj = {i: tuple(self._paths_from(i)[k] for k in verts) for i in verts}
        inj = {i: tuple(self._paths_from(k)[i] for k in verts) for i in verts}
        classes: dict[DVertex, tuple[int, ...]] = {}
        for i in verts:
            classes[DVertex(i, 0)] = proj[i]
        for n in range(1, self.hi + 2):
            for o in self.column_order:
                z = DVertex(o, n)
                total = [0] * self.rank
                for p in self.predecessors(z):
                    total = [a + b for a, b in zip(total, classes[p])]
                classes[z] = tuple(a - b for a, b in zip(total, classes[self.tau(z)]))
        for n in range(0, self.lo, -1):
            for o in reversed(self.column_order):
                z = DVertex(o, n)
                total = [0] * self.rank
                for p in self.predecessors(z):
                    total = [a + b for a, b in zip(total, classes[p])]
                classes[self.tau(z)] = tuple(a - b for a, b in zip(total, classes[z]))
        self.classes = classes

        self.injective: dict[str, DVertex] = {}
        for i in verts:
            hits = [
                DVertex(o, n)
                for n in range(0, self.coxeter)
                for o in self.column_order
                if classes[DVertex(o, n)] == inj[i]
            ]
            if len(hits) != 1:
                raise InternalError(f"cannot identify the injective at {i}: {hits}")
            self.injective[i] = hits[0]
        # last module offset in each orbit
        self.module_end = {v.orbit: v.offset for v in self.injective.values()}
        if set(self.module_end) != set(verts):
            raise InternalError("injectives do not meet every tau-orbit once")
        for o, end in self.module_end.items():
            for n in range(0, end + 1):
                c = classes[DVertex(o, n)]
                if min(c) < 0 or max(c) == 0:
                    raise InternalError(f"knitting produced a non-module class at ({o},{n})")
        self._nu = {i: self.injective[i] for i in verts}
        self._nu_inv = {v.orbit: (i, v.offset) for i, v in self._nu.items()}

    def module_window(self) -> list[DVertex]:
        return [
            DVertex(o, n)
            for n in range(0, max(self.module_end.values()) + 1)
            for o in self.column_order
            if n <= self.module_end[o]
        ]

    def projective(self, i: str) -> DVertex:
        return DVertex(i, 0)

    # -- automorphisms -------------------------------------------------------

    def apply_auto(self, which: str, v: DVertex) -> DVertex:
        if which == "tau":
            return DVertex(v.orbit, v.offset - 1)
        if which == "tau_inv":
            return DVertex(v.orbit, v.offset + 1)
        if which in ("nu", "shift", "F"):
            extra = {"nu": 0, "shift": 1, "F": 2}[which]
            img = self._nu[v.orbit]
            return DVertex(img.orbit, img.offset + v.offset + extra)
        if which in ("nu_inv", "shift_inv", "F_inv"):
            extra = {"nu_inv": 0, "shift_inv": 1, "F_inv": 2}[which]
            i, shift = self._nu_inv[v.orbit]
            return DVertex(i, v.offset - shift - extra)
        raise ValueError(f"unknown automorphism {which!r}")

    def F(self, v: DVertex) -> DVertex:
        return self.apply_auto("F", v)

    def F_inv(self, v: DVertex) -> DVertex:
        return self.apply_auto("F_inv", v)

    # -- morphisms -------------------------------------------------------------

    def _hom_from(self, x: DVertex) -> _HomFrom:
        functor = self._hom_cache.get(x)
        if functor is None:
            if not self.in_window(x):
                raise MalformedInputError(f"{x} lies outside the window [{self.lo}, {self.hi}]")
            functor = _HomFrom(self, x)
            self._hom_cache[x] = functor
        return functor

    def _target_check(self, functor: _HomFrom, y: DVertex) -> None:
        if y.orbit not in self._column_pos:
            raise MalformedInputError(f"unknown orbit {y.orbit!r}")
        if functor.source.offset <= y.offset < functor.end and not self.in_window(y):
            raise MalformedInputError(f"{y} lies outside the window [{self.lo}, {self.hi}]")

    def hom_dim(self, x: DVertex, y: DVertex) -> int:
        functor = self._hom_from(x)
        self._target_check(functor, y)
        if y.offset < x.offset:
            return 0
        return functor.dim(y)

    def path_coords(self, path: Path) -> Morphism:
        """Class of a path of ZQ in the basis of Hom_D(path[0], path[-1])."""
        x, y = path[0], path[-1]
        for u, w in zip(path, path[1:]):
            if w not in self.successors(u):
                raise ValueError(f"{u} -> {w} is not an arrow of ZQ")
        functor = self._hom_from(x)
        self._target_check(functor, y)
        return Morphism(x, y, tuple(functor.push([Fraction(1)], path)))

    def identity(self, x: DVertex) -> Morphism:
        return Morphism(x, x, (Fraction(1),))


def build_zmodel(q: Quiver) -> ZModel:
    return ZModel(q)


def hom_d(m: ZModel, x: DVertex, y: DVertex) -> MorphismSpace:
    functor = m._hom_from(x)
    m._target_check(functor, y)
    if y.offset < x.offset or functor.dim(y) == 0:
        return MorphismSpace(x, y, ())
    return MorphismSpace(x, y, tuple(functor.paths[y]))


def basis_elements(m: ZModel, x: DVertex, y: DVertex) -> list[Morphism]:
    d = m.hom_dim(x, y)
    return [Morphism(x, y, tuple(Fraction(int(i == j)) for j in range(d))) for i in range(d)]


def zero_morphism(m: ZModel, x: DVertex, y: DVertex) -> Morphism:
    return Morphism(x, y, (Fraction(0),) * m.hom_dim(x, y))


def compose_d(m: ZModel, f: Morphism, g: Morphism) -> Morphism:
    """``g o f`` for ``f: x -> y`` and ``g: y -> z``."""
    if f.target != g.source:
        raise ValueError(f"cannot compose: target {f.target} != source {g.source}")
    x, z = f.source, g.target
    functor = m._hom_from(x)
    m._target_check(functor, z)
    result = [Fraction(0)] * (0 if z.offset < x.offset else functor.dim(z))
    if not result or f.is_zero() or g.is_zero():
        return Morphism(x, z, tuple(result))
    for coeff, path in zip(g.coords, hom_d(m, g.source, g.target).basis):
        if coeff == 0:
            continue
        pushed = functor.push(f.coords, path)
        result = [a + coeff * b for a, b in zip(result, pushed)]
    return Morphism(x, z, tuple(result))


def apply_F(m: ZModel, f: Morphism, inverse: bool = False) -> Morphism:
    """Image of a morphism under F (or F^-1), which relabels paths."""
    which = "F_inv" if inverse else "F"
    x, y = m.apply_auto(which, f.source), m.apply_auto(which, f.target)
    result = zero_morphism(m, x, y)
    for coeff, path in zip(f.coords, hom_d(m, f.source, f.target).basis):
        if coeff != 0:
            img = m.path_coords(tuple(m.apply_auto(which, v) for v in path))
            result = result + img.scale(coeff)
    return result


def apply_auto(m: ZModel, which: str, v: DVertex) -> DVertex:
    return m.apply_auto(which, v)


def mesh_relator(m: ZModel, z: DVertex) -> list[tuple[Path, int]]:
    """The mesh relation ending at z as a list of (path, coefficient)."""
    tz = m.tau(z)
    return [((tz, y, z), 1) for y in m.predecessors(z)]


def evaluate_paths(m: ZModel, terms: Iterable[tuple[Path, int]]) -> Morphism:
    terms = list(terms)
    x, y = terms[0][0][0], terms[0][0][-1]
    total = zero_morphism(m, x, y)
    for path, c in terms:
        total = total + m.path_coords(path).scale(c)
    return total
