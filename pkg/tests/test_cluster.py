import itertools

import pytest

from conftest import cluster_model, ct_settings, figure_vertex, fix_a3c, fix_a3l, fix_d5, setting_for
from tiltforge.cluster import (
    CTObject,
    all_ct_objects,
    build_cluster_model,
    cell_decomposition,
    ct_mutate,
    ext1_c,
    from_distribution,
    gabriel_quiver,
    hom_c,
    is_cluster_tilting,
    projective_object,
    realize_quiver,
    to_distribution,
    trench,
)
from tiltforge.derived import DVertex
from tiltforge.errors import MalformedInputError
from tiltforge.quiver import Quiver, mutate, positive_root_count, quiver_isomorphic, standard_dynkin_quiver


@pytest.mark.parametrize("name, count", [("A1", 2), ("A2", 5), ("A3", 9), ("A4", 14), ("D4", 16), ("D5", 25), ("E6", 42)])
def test_fundamental_domain(name, count):
    m = build_cluster_model(standard_dynkin_quiver(name))
    assert len(m.vertices) == count == positive_root_count(name) + m.rank


@pytest.mark.parametrize("name", ["A3", "D4", "D5"])
def test_canonical_is_F_invariant(name):
    m = cluster_model(name)
    z = m.z
    for v in z.window():
        if z.lo + 2 * z.coxeter <= v.offset <= z.hi - 2 * z.coxeter:
            assert m.canonical(z.F(v)) == m.canonical(v)
            assert m.canonical(z.F_inv(v)) == m.canonical(v)


@pytest.mark.parametrize("name", ["A2", "A3", "D4", "D5"])
def test_stable_translation_quiver(name):
    m = cluster_model(name)
    assert sorted(map(m.key, (m.tau(v) for v in m.vertices))) == sorted(map(m.key, m.vertices))
    for v in m.vertices:
        assert m.tau_inv(m.tau(v)) == v
        assert sorted(map(m.key, m.predecessors(v))) == sorted(map(m.key, m.successors(m.tau(v))))


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_ext_symmetry_and_rigidity(name):
    m = cluster_model(name)
    for x, y in itertools.product(m.vertices, repeat=2):
        assert ext1_c(m, x, y) == ext1_c(m, y, x)
    for x in m.vertices:
        assert ext1_c(m, x, x) == 0
        basis = hom_c(m, x, x)
        assert basis and m.identity(x) in basis


def test_projectives_are_ext_orthogonal():
    m = cluster_model("D5")
    ps = projective_object(m).positions()
    assert all(ext1_c(m, x, y) == 0 for x in ps for y in ps)
    assert is_cluster_tilting(m, ps)


def test_replacing_a_sink_projective_by_tau_breaks_rigidity():
    m = cluster_model("A3")
    t = projective_object(m)
    sink = "3"  # linear 1->2->3
    moved = t.replace(sink, m.tau(t[sink]))
    assert not is_cluster_tilting(m, moved.positions())


def test_wrong_cardinality_is_malformed():
    m = cluster_model("A3")
    with pytest.raises(MalformedInputError):
        is_cluster_tilting(m, list(projective_object(m).positions())[:2])


def test_figure_distribution():
    st = setting_for("D5")
    m, t = st.model, st.ct
    drawn = {"1": (8, 3), "2": (5, 0), "3": (5, 1), "4": (3, 2), "5": (2, 3)}
    assert {a: t[a] for a in t.labels} == {a: figure_vertex(st, *xy) for a, xy in drawn.items()}
    assert is_cluster_tilting(m, t.positions())
    assert gabriel_quiver(m, t).same_arrows(fix_d5())
    # arrow 4->1 of the quiver is an irreducible map T1 -> T4
    assert m.hom_dim(t["1"], t["4"]) >= 1


def test_cells_of_figure_distribution():
    st = setting_for("D5")
    cells = cell_decomposition(st.model, st.ct)
    assert sorted(map(sorted, cells)) == [["1"], ["2", "3"], ["4", "5"]]
    assert trench(st.model, st.ct, {"2", "3"}) == {st.model.tau(st.ct["2"]), st.model.tau(st.ct["3"])}


def test_single_cells():
    m = cluster_model("A3")
    assert cell_decomposition(m, projective_object(m)) == [frozenset({"1", "2", "3"})]
    m1 = cluster_model("A1")
    assert cell_decomposition(m1, projective_object(m1)) == [frozenset({"1"})]


@pytest.mark.parametrize("name, count", [("A3", 14), ("A4", 42), ("D4", 50)])
def test_ct_object_counts(name, count):
    assert len(all_ct_objects(cluster_model(name))) == count


def test_a3_middle_mutation_gives_cycle():
    m = cluster_model("A3")
    t = ct_mutate(m, projective_object(m), "2")
    assert quiver_isomorphic(gabriel_quiver(m, t), fix_a3c()) is not None


@pytest.mark.parametrize("name", ["A3", "A4", "D4"])
def test_mutation_commutes_with_gabriel_quiver(name):
    for st in ct_settings(name):
        for k in st.ct.labels:
            u = ct_mutate(st.model, st.ct, k)
            assert ct_mutate(st.model, u, k) == st.ct
            assert gabriel_quiver(st.model, u).same_arrows(mutate(st.quiver, k))


@pytest.mark.parametrize("name", ["A3", "D4", "D5", "E6"])
@pytest.mark.parametrize("orientation", ["linear", "alternating"])
def test_projective_quiver_is_seed(name, orientation):
    m = cluster_model(name, orientation)
    assert gabriel_quiver(m, projective_object(m)).same_arrows(m.seed)


def test_realize_examples():
    r = realize_quiver(fix_a3l())
    assert r.ct == projective_object(r.model)
    r = realize_quiver(fix_d5())
    assert gabriel_quiver(r.model, r.ct).same_arrows(fix_d5())
    r = realize_quiver(fix_a3c())
    assert len(r.ct.positions()) == 3
    assert gabriel_quiver(r.model, r.ct).same_arrows(fix_a3c())


def test_distribution_round_trip():
    r = realize_quiver(fix_d5())
    back = from_distribution(to_distribution(r.model, r.ct))
    assert back.ct == r.ct
    assert back.quiver.same_arrows(fix_d5())


@pytest.mark.parametrize(
    "patch",
    [
        lambda d: d.pop("summands"),
        lambda d: d.update(type="E6"),
        lambda d: d["summands"].update({"1": {"orbit": "9", "offset": 0}}),
        lambda d: d["summands"].update({"1": {"orbit": "5", "offset": "x"}}),
        lambda d: d["summands"].update({"1": dict(d["summands"]["2"])}),
        lambda d: d["summands"].pop("1"),
    ],
)
def test_bad_distributions(patch):
    r = realize_quiver(fix_d5())
    data = to_distribution(r.model, r.ct)
    patch(data)
    with pytest.raises(MalformedInputError):
        from_distribution(data)


def test_non_rigid_distribution_rejected():
    m = cluster_model("A3")
    t = projective_object(m)
    data = to_distribution(m, t.replace("3", m.tau(t["3"])))
    with pytest.raises(MalformedInputError):
        from_distribution(data)


def test_ctobject_rejects_duplicates():
    with pytest.raises(MalformedInputError):
        CTObject((("1", DVertex("1", 0)), ("2", DVertex("1", 0))))
