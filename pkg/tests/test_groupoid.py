import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_logic import (
    FiniteGroupoid,
    cyclic_group,
    disjoint_union,
    group_groupoid,
    isotropy,
    orbits,
    pair_groupoid,
    unit_groupoid,
    validate,
)
from groupoid_logic.errors import (
    EmptyGroupoidError,
    GroupValidationError,
    ResourceError,
    StructureError,
    UnknownLabelError,
)
from groupoid_logic.groupoid import full_subgroupoid, left_translation, orbit_index

from conftest import SMALL, build
from oracles import composable_pairs, fiber_sizes


def _rebuild(g, comp):
    return FiniteGroupoid(g.objects, g.morphisms, g.source, g.target, comp, g.inverse, units=g.units)


@pytest.mark.parametrize("name", SMALL + ["pair:7", "pair:4+pair:4"])
def test_builtins_are_valid(name):
    assert validate(build(name)).ok


def test_pair_groupoid_shapes():
    g1 = pair_groupoid(1)
    assert (g1.n_objects, g1.n_morphisms) == (1, 1)
    g = pair_groupoid(2)
    assert g.n_morphisms == 4
    a, b = g.morphism_index((2, 1)), g.morphism_index((1, 2))
    assert g.morphisms[g.compose(a, b)] == (2, 2)
    g3 = pair_groupoid(3)
    assert fiber_sizes(g3) == [3, 3, 3]
    for j in range(3):
        assert g3.target_fiber(j).size == 3


def test_pair_composition_law_exhaustive():
    g = pair_groupoid(4)
    for a, b, c in composable_pairs(g):
        (k, j1), (j2, i) = g.morphisms[a], g.morphisms[b]
        assert j1 == j2
        assert g.morphisms[c] == (k, i)


def test_unit_groupoid():
    g = unit_groupoid(3)
    assert g.n_morphisms == 3
    for a, b, _ in composable_pairs(g):
        assert a == b
    assert len(composable_pairs(g)) == 3
    g4 = unit_groupoid(4)
    for j in range(4):
        assert isotropy(g4, j).tolist() == [g4.unit_at(j)]


def test_unit_groupoid_one_is_pair_one():
    u, p = unit_groupoid(1), pair_groupoid(1)
    assert u.n_objects == p.n_objects == 1
    assert np.array_equal(u.compose_table, p.compose_table)
    assert np.array_equal(u.inverse, p.inverse)


def test_broken_unit_law_is_reported_once():
    g = pair_groupoid(2)
    comp = g.compose_table.copy()
    a, u = g.morphism_index((2, 1)), g.morphism_index((1, 1))
    comp[a, u] = g.morphism_index((2, 2))
    rep = validate(_rebuild(g, comp))
    assert not rep.ok
    assert len(rep.of_kind("unit-law")) == 1
    assert rep.of_kind("unit-law")[0].witness == (a, u)


def test_missing_composite_is_a_domain_violation():
    g = pair_groupoid(2)
    comp = g.compose_table.copy()
    comp[0, 0] = -1
    rep = validate(_rebuild(g, comp))
    assert rep.of_kind("composition-domain")


def test_bad_inverse_reported():
    g = pair_groupoid(2)
    inv = g.inverse.copy()
    a, b = g.morphism_index((2, 1)), g.morphism_index((1, 2))
    inv[a] = a
    bad = FiniteGroupoid(g.objects, g.morphisms, g.source, g.target, g.compose_table, inv, units=g.units)
    rep = validate(bad)
    assert [v.witness for v in rep.of_kind("inverse-endpoints")] == [(a, a)]
    assert [v.witness for v in rep.of_kind("inverse-involution")] == [(b,)]


def test_groups():
    z2 = cyclic_group(2)
    assert (z2.n_objects, z2.n_morphisms) == (1, 2)
    assert validate(z2).ok
    assert isotropy(cyclic_group(3), 0).size == 3
    assert orbits(z2) == [(0,)]
    assert sorted(isotropy(z2, 0).tolist()) == [0, 1]


def test_non_associative_table_rejected():
    # a loop of order 5: latin square with identity and inverses, not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupValidationError):
        group_groupoid(loop, [0, 1, 2, 3, 4], 0)


def test_group_table_checks():
    with pytest.raises(GroupValidationError):
        group_groupoid([[0, 1], [1, 1]], [0, 1], 0)
    with pytest.raises(GroupValidationError):
        group_groupoid([[0, 1], [1, 0]], [1, 0], 0)
    with pytest.raises(GroupValidationError):
        group_groupoid([[0, 1, 2]], [0], 0)


def test_disjoint_unions():
    u = disjoint_union(unit_groupoid(1), unit_groupoid(1))
    ref = unit_groupoid(2)
    assert (u.n_objects, u.n_morphisms) == (2, 2)
    assert np.array_equal(u.compose_table, ref.compose_table)
    pp = disjoint_union(pair_groupoid(2), pair_groupoid(2))
    assert pp.n_morphisms == 8 and len(orbits(pp)) == 2
    assert validate(disjoint_union(pair_groupoid(2), unit_groupoid(1))).ok


def test_orbits():
    assert orbits(pair_groupoid(3)) == [(0, 1, 2)]
    assert all(isotropy(pair_groupoid(3), j).size == 1 for j in range(3))
    assert orbits(unit_groupoid(3)) == [(0,), (1,), (2,)]
    g = build("pair:2+units:1+pair:3")
    assert [len(o) for o in orbits(g)] == [2, 1, 3]
    idx = orbit_index(g)
    for a in range(g.n_morphisms):
        assert idx[g.source[a]] == idx[g.target[a]]


def test_left_translation_is_a_bijection_of_fibers():
    g = build("pair:3+group:z:3")
    for alpha in range(g.n_morphisms):
        dom, img = left_translation(g, alpha)
        assert sorted(img.tolist()) == sorted(g.target_fiber(int(g.target[alpha])).tolist())
        assert dom.size == img.size


def test_full_subgroupoid():
    g = pair_groupoid(4)
    sub, mor = full_subgroupoid(g, [0, 2])
    assert sub.n_objects == 2 and sub.n_morphisms == 4
    assert validate(sub).ok
    assert {g.morphisms[m] for m in mor} == {(1, 1), (3, 1), (1, 3), (3, 3)}


def test_labels_and_errors():
    g = pair_groupoid(2)
    assert g.object_index(1) == 0
    assert g.morphism_index("(2, 1)") == g.morphism_index((2, 1))
    with pytest.raises(UnknownLabelError):
        g.object_index(9)
    with pytest.raises(KeyError):
        g.morphism_index((3, 3))
    with pytest.raises(EmptyGroupoidError):
        pair_groupoid(0)
    with pytest.raises(EmptyGroupoidError):
        unit_groupoid(0)
    with pytest.raises(StructureError):
        FiniteGroupoid([1, 1], [0], [0], [0], [[0]], [0])


def test_size_cap(monkeypatch):
    monkeypatch.setenv("GROUPOID_LOGIC_MAX_MORPHISMS", "10")
    with pytest.raises(ResourceError):
        pair_groupoid(4)


def test_composable_pairs_match_table():
    g = build("pair:3+group:z:2")
    a, b, c = g.composable_pairs()
    assert sorted(zip(a.tolist(), b.tolist(), c.tolist())) == sorted(composable_pairs(g))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["pair:1", "pair:2", "pair:3", "units:2", "group:z:2", "group:z:4"]), min_size=1, max_size=3))
def test_axioms_hold_for_unions(parts):
    g = build("+".join(parts))
    assert validate(g).ok
    assert len(orbits(g)) == sum(1 if p.startswith(("pair", "group")) else int(p.split(":")[1]) for p in parts)
    # inverses are involutive and units are idempotent
    assert np.array_equal(g.inverse[g.inverse], np.arange(g.n_morphisms))
    for u in g.units:
        assert g.compose(int(u), int(u)) == u
