from __future__ import annotations

from functools import lru_cache

import pytest

from tiltforge.cluster import ClusterModel, CTObject, all_ct_objects, gabriel_quiver, realize_quiver
from tiltforge.derived import DVertex
from tiltforge.quiver import Quiver, standard_dynkin_quiver
from tiltforge.slices import Setting

D5_PAIRS = [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "1"), ("4", "5")]
A5_PAIRS = [("1", "2"), ("2", "3"), ("3", "1"), ("2", "4"), ("4", "5"), ("5", "2")]
A3C_PAIRS = [("1", "2"), ("2", "3"), ("3", "1")]
A3L_PAIRS = [("1", "2"), ("2", "3")]


def fix_d5() -> Quiver:
    return Quiver.from_pairs(D5_PAIRS)


def fix_a5() -> Quiver:
    return Quiver.from_pairs(A5_PAIRS)


def fix_a3c() -> Quiver:
    return Quiver.from_pairs(A3C_PAIRS)


def fix_a3l() -> Quiver:
    return Quiver.from_pairs(A3L_PAIRS)


@lru_cache(maxsize=None)
def setting_for(name: str) -> Setting:
    q = {"D5": fix_d5, "A5": fix_a5, "A3C": fix_a3c, "A3L": fix_a3l}[name]()
    return Setting.from_realization(realize_quiver(q))


@lru_cache(maxsize=None)
def cluster_model(dynkin: str, orientation: str = "linear") -> ClusterModel:
    return ClusterModel(standard_dynkin_quiver(dynkin, orientation))


def ct_settings(dynkin: str):
    """Every cluster-tilting object of the type, with its Gabriel quiver."""
    m = cluster_model(dynkin)
    for members in all_ct_objects(m):
        t = CTObject(tuple((str(i + 1), v) for i, v in enumerate(m.sort(members))))
        yield Setting(m, t, gabriel_quiver(m, t))


def figure_vertex(st: Setting, x: int, y: int):
    """Vertex of the D5 drawing at column x, row y (rows 0..3 top to bottom)."""
    if y == 3:
        v = DVertex("5", (x - 2) // 2)
    elif y == 2:
        v = DVertex("4", (x - 3) // 2)
    elif y == 1 and x % 2 == 0:
        v = DVertex("1", (x - 4) // 2)
    elif y == 0:
        v = DVertex("2", (x - 5) // 2)
    else:
        v = DVertex("3", (x - 5) // 2)
    return st.model.canonical(v)


def figure_slice(st: Setting, *coords):
    return st.lift_section([figure_vertex(st, x, y) for x, y in coords])


def arrow_names(q: Quiver, ids) -> set[str]:
    return {str(q.arrow(i)) for i in ids}


@pytest.fixture
def d5():
    return setting_for("D5")


@pytest.fixture
def a5():
    return setting_for("A5")


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
