from collections import Counter

import pytest

from garland.complex import face_poset
from garland.generators import (
    cross_polytope, cube, cycle, moment_angle, random_cubical, sample, RandomModelParams, simplex,
    torus_cubical, twisted_ring_poset,
)
from garland.poset import (
    PHI, AxiomError, ObstructionError, PurityError, build_garland, check_axioms,
    check_monodromy_free, link_components, orient_transversal,
)


def shapes(lg):
    return Counter((c.kind, len(c.vertices), len(c.edges)) for c in lg.components)


def test_cubical_torus_link_graph(tbox):
    lg = link_components(tbox, 1)
    assert shapes(lg) == {("geometric", 4, 4): 16, ("transversal", 4, 4): 8}
    for comp in lg.components:
        assert all(((comp.pi, b) in comp.pairs) for b in comp.vertices)
        assert (comp.pi == PHI) == (comp.kind == "transversal")


def test_simplicial_torus_link_graph(tdelta):
    lg = link_components(tdelta, 1)
    assert shapes(lg) == {("geometric", 6, 6): 16}


def test_single_square(square):
    lg = link_components(square, 1)
    assert shapes(lg) == {("geometric", 2, 1): 4, ("transversal", 2, 1): 2}


def test_garland_sizes(g_tbox, g_tdelta):
    assert (len(g_tbox.s_minus), len(g_tbox.s_zero), len(g_tbox.s_one)) == (24, 32, 16)
    assert (g_tbox.n0, g_tbox.n1, g_tbox.n010) == (3, 6, 1)
    assert (len(g_tdelta.s_minus), len(g_tdelta.s_zero), len(g_tdelta.s_one)) == (16, 48, 32)
    assert (g_tdelta.n0, g_tdelta.n1, g_tdelta.n010) == (2, 3, 1)


@pytest.mark.parametrize("K, k", [(cross_polytope(3), 1), (simplex(3), 1), (simplex(3), 2)])
def test_connected_links_give_one_component_per_face(K, k):
    fp = face_poset(K)
    g = build_garland(fp, k)
    assert len(g.s_minus) == len(fp.rank_cells(k - 1))
    assert all(c.kind == "geometric" for c in g.link.components)


def test_axioms_pass(g_tbox, g_tdelta):
    assert check_axioms(g_tbox).ok and check_axioms(g_tdelta).ok


def test_flipped_orientation_fails_p5(g_tbox):
    a = 0
    b = g_tbox.above(a)[0]
    bad = g_tbox.with_w((a, b), -g_tbox.w[(a, b)])
    rep = check_axioms(bad)
    assert [ax for ax, v in rep.results.items() if v] == ["P5"]
    a_w, c_w = rep.results["P5"]
    assert a_w == a and c_w in g_tbox.cofaces[b]


def test_edge_label_bijection(g_tbox, g_tdelta):
    for g in (g_tbox, g_tdelta):
        edges = sum(len(c.edges) for c in g.link.components)
        assert edges == g.n1 * len(g.s_one)
        for c in g.s_one:
            labels = Counter(a for a in g.s_minus for e in g.link.components[a].edges if e[0] == c)
            assert set(labels.values()) == {1}


def test_orientation_on_single_square(square):
    lg = link_components(square, 1)
    w = orient_transversal(square, 1, lg)
    for comp in lg.components:
        if comp.kind == "transversal":
            (c, b, b2), = comp.edges
            assert w[(comp.id, b)] == 1
            assert w[(comp.id, b2)] == -square.sign(b, c) * square.sign(b2, c)


def test_twisted_ring_is_obstructed():
    fp = twisted_ring_poset(3)
    lg = link_components(fp, 1)
    with pytest.raises(ObstructionError) as err:
        orient_transversal(fp, 1, lg)
    mono = check_monodromy_free(fp, 1, lg)
    assert not mono.free
    assert tuple(mono.witness) == err.value.edge
    sizes = {v["holonomyGroupSize"] for v in mono.per_component.values()}
    assert sizes == {1, 2}


def test_torus_is_monodromy_free(tbox):
    rep = check_monodromy_free(tbox, 1, link_components(tbox, 1))
    assert rep.free and rep.witness is None


@pytest.mark.parametrize("seed", range(10))
def test_monodromy_free_implies_orientable(seed):
    c = random_cubical(RandomModelParams("ybox", 3, 2, 2, seed))
    from garland.complex import validate
    if not validate(c).ok:
        pytest.skip("sample identifies faces of one cube")
    fp = face_poset(c)
    lg = link_components(fp, 1)
    if check_monodromy_free(fp, 1, lg).free:
        orient_transversal(fp, 1, lg)


def test_purity_required():
    fp = face_poset(cycle(5))
    with pytest.raises(PurityError):
        link_components(fp, 1)
    from garland.generators import simplicial_complex
    with pytest.raises(PurityError, match="cells without one"):
        link_components(face_poset(simplicial_complex([(0, 1, 2), (2, 3)])), 1)


def test_level_zero():
    lg = link_components(face_poset(cycle(5)), 0)
    assert shapes(lg) == {("geometric", 5, 5): 1}
    lg = link_components(face_poset(cube(2)), 0)
    assert shapes(lg) == {("transversal", 4, 4): 1}


def test_moment_angle_posets_build():
    fp = face_poset(moment_angle(cross_polytope(3)))
    g = build_garland(fp, 2)
    assert (g.n0, g.n1) == (5, 15)


def test_axiom_error_carries_report(g_tbox):
    from garland.poset import AxiomReport
    rep = AxiomReport({"P1": (3,), "P2": None})
    assert "P1: fail at (3,)" in str(AxiomError(rep))


def test_serialization(g_tbox):
    d = g_tbox.to_dict()
    assert d["sizes"] == {"S-1": 24, "S0": 32, "S1": 16}
    assert d["link"]["geometric"] == 16 and d["link"]["transversal"] == 8


def test_random_sample_builds():
    s = sample(RandomModelParams("ydelta", 4, 3, 3, 5))
    g = build_garland(face_poset(s.complex), 1)
    assert check_axioms(g).ok
