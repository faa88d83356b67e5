import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garland.complex import (
    CUBICAL, SIMPLICIAL, CellComplex, InvalidComplexError, ParseError, facet_sign, face_poset,
    parse_complex, serialize_complex, validate,
)
from garland.generators import (
    cube, cube_skeleton, cycle, simplex, simplicial_complex, torus_cubical, torus_simplicial,
)


def doc(kind, cells):
    return json.dumps({"kind": kind, "cells": cells})


def test_roundtrip_is_identity():
    c = torus_cubical(3, 4)
    assert parse_complex(serialize_complex(c)) == c


def test_ids_are_kept_as_given():
    text = doc(SIMPLICIAL, [
        {"id": 10, "dim": 0, "facets": []},
        {"id": 7, "dim": 0, "facets": []},
        {"id": 3, "dim": 1, "facets": [10, 7]},
    ])
    c = parse_complex(text)
    assert [x.id for x in c.cells] == [10, 7, 3]
    assert validate(c).ok


@pytest.mark.parametrize("text, message", [
    ("{not json", "malformed document"),
    ("[1, 2]", "malformed document"),
    (doc("hexagonal", []), "unknown kind"),
    (doc(SIMPLICIAL, [{"id": 0, "dim": 0}, {"id": 0, "dim": 0}]), "duplicate cell id"),
    (doc(SIMPLICIAL, [{"id": 0, "dim": 0}, {"id": 1, "dim": 1, "facets": [0]}]), "wrong facet count"),
    (doc(CUBICAL, [{"id": 0, "dim": 0}, {"id": 1, "dim": 1, "facets": [0, 5]}]), "dangling facet id 5"),
    (doc(SIMPLICIAL, [{"id": -1, "dim": 0}]), "bad cell id"),
])
def test_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_complex(text)


def test_repeated_facet_breaks_rank_regularity():
    c = parse_complex(doc(SIMPLICIAL, [
        {"id": 0, "dim": 0}, {"id": 1, "dim": 1, "facets": [0, 0]}]))
    rep = validate(c)
    assert not rep.ok and rep.violations[0].rule == "rank-regularity"
    with pytest.raises(InvalidComplexError):
        face_poset(c)


def test_facet_dimension_checked():
    c = parse_complex(doc(SIMPLICIAL, [
        {"id": 0, "dim": 0}, {"id": 1, "dim": 0},
        {"id": 2, "dim": 1, "facets": [0, 1]},
        {"id": 3, "dim": 1, "facets": [2, 0]},
    ]))
    assert [v.rule for v in validate(c).violations] == ["facet-dim"]


def test_identified_vertices_violate_lower_interval():
    # a triangle whose three edges are distinct but share only two vertices
    c = parse_complex(doc(SIMPLICIAL, [
        {"id": 0, "dim": 0}, {"id": 1, "dim": 0},
        {"id": 2, "dim": 1, "facets": [0, 1]},
        {"id": 3, "dim": 1, "facets": [1, 0]},
        {"id": 4, "dim": 1, "facets": [0, 1]},
        {"id": 5, "dim": 2, "facets": [2, 3, 4]},
    ]))
    assert validate(c).violations[0].rule == "lower-interval"


def test_wrong_orientation_breaks_boundary():
    # square with the two sides of its first axis listed in reverse
    good = cube(2)
    top = good.cells[-1]
    f = top.facets
    bad_top = type(top)(top.id, top.dim, (f[1], f[0], f[2], f[3]))
    bad = CellComplex(CUBICAL, good.cells[:-1] + (bad_top,))
    rules = {v.rule for v in validate(bad).violations}
    assert rules == {"boundary"}


def test_no_coface_warning_lists_cells():
    c = simplicial_complex([(0, 1, 2), (2, 3)])
    rep = validate(c)
    assert rep.ok
    (w,) = [w for w in rep.warnings if w.message.startswith("1-cells")]
    assert len(w.cells) == 1 and "1-cells have no 2-cofaces: 1 cells" == w.message


@pytest.mark.parametrize("c, fvec", [
    (torus_cubical(4, 4), [16, 32, 16]),
    (torus_simplicial(4, 4), [16, 48, 32]),
    (torus_cubical(3, 3), [9, 18, 9]),
    (simplex(3), [4, 6, 4, 1]),
    (cube(3), [8, 12, 6, 1]),
    (cycle(4), [4, 4]),
    (cube_skeleton(3), [8, 12]),
])
def test_generated_complexes_validate(c, fvec):
    assert validate(c).ok
    assert c.f_vector() == fvec


def test_cubical_signs():
    assert [facet_sign(CUBICAL, s) for s in range(6)] == [-1, 1, 1, -1, -1, 1]
    assert [facet_sign(SIMPLICIAL, s) for s in range(4)] == [1, -1, 1, -1]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.sampled_from([SIMPLICIAL, CUBICAL]))
def test_boundary_of_boundary_vanishes(d, kind):
    c = simplex(d) if kind == SIMPLICIAL else cube(d)
    fp = face_poset(c)
    for q in fp.facets:
        total = {}
        for b in fp.facets[q]:
            for p in fp.facets[b]:
                total[p] = total.get(p, 0) + fp.sign(p, b) * fp.sign(b, q)
        assert not any(total.values())
