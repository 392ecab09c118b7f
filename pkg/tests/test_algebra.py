import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_logic import (
    GroupoidFunction,
    MorphismSet,
    ObjectSet,
    algebra_unit,
    bridge_certified,
    bridge_decoherence,
    char_fn,
    convolve,
    counting_haar,
    custom_haar,
    decoherence,
    involution,
    normalized_haar,
    pair_groupoid,
    set_product,
    state,
    support,
    unit_groupoid,
)
from groupoid_logic.errors import MismatchError, ModularDomainError

from conftest import SMALL, build, random_lambda
import oracles


def rand_fn(g, r):
    return GroupoidFunction(g, r.normal(size=g.n_morphisms) + 1j * r.normal(size=g.n_morphisms))


def test_convolution_examples():
    g = pair_groupoid(2)
    mg = normalized_haar(g)
    a, b = g.morphism_index((2, 1)), g.morphism_index((1, 2))
    out = convolve(mg, GroupoidFunction.delta(g, a), GroupoidFunction.delta(g, b))
    assert out == 0.5 * GroupoidFunction.delta(g, g.morphism_index((2, 2)))
    f = GroupoidFunction(g, [1, 2, 3, 4])
    assert convolve(mg, f, GroupoidFunction.zeros(g)) == GroupoidFunction.zeros(g)
    u = unit_groupoid(3)
    mu = counting_haar(u, [0.2, 0.3, 0.5])
    f, h = GroupoidFunction(u, [1, 2, 3]), GroupoidFunction(u, [4, 5, 6j])
    assert convolve(mu, f, h) == GroupoidFunction(u, [4, 10, 18j])


def test_involution_examples():
    g = pair_groupoid(2)
    mg = normalized_haar(g)
    f = GroupoidFunction(g, [1 + 1j, 2, 3j, 4])
    expect = np.conj(f.coeffs[g.inverse])
    assert np.array_equal(involution(mg, f).coeffs, expect)
    for u in g.units:
        d = GroupoidFunction.delta(g, int(u))
        assert involution(mg, d) == d
    mc = counting_haar(g, [1 / 3, 2 / 3])
    a, b = g.morphism_index((2, 1)), g.morphism_index((1, 2))
    out = involution(mc, GroupoidFunction.delta(g, a))
    assert np.flatnonzero(out.coeffs).tolist() == [b]
    assert math.isclose(out.coeffs[b].real, 0.5, rel_tol=1e-15)


def test_state_examples():
    g = pair_groupoid(2)
    mg = normalized_haar(g)
    assert state(mg, GroupoidFunction(g, np.ones(4))) == 1.0
    assert state(mg, GroupoidFunction.zeros(g)) == 0.0
    mc = counting_haar(unit_groupoid(3), [0.2, 0.3, 0.5])
    for j in range(3):
        assert state(mc, GroupoidFunction.delta(mc.groupoid, j)) == [0.2, 0.3, 0.5][j] * mc.fiber_weight[j]


def test_char_fn_and_support():
    g = pair_groupoid(3)
    A = MorphismSet.from_indices(g, [0, 4, 7])
    assert support(char_fn(A), tol=0.5) == A
    assert char_fn(MorphismSet.empty(g)) == GroupoidFunction.zeros(g)


@pytest.mark.parametrize("name", SMALL)
def test_support_law_all_builtins(name, rng):
    g = build(name)
    mg = counting_haar(g, random_lambda(rng, g.n_objects))
    for _ in range(200):
        A = MorphismSet(g, rng.random(g.n_morphisms) < 0.4)
        B = MorphismSet(g, rng.random(g.n_morphisms) < 0.4)
        assert support(convolve(mg, char_fn(A), char_fn(B))) == set_product(g, B, A)


def test_algebra_unit():
    for name in ("pair:3", "units:3", "group:z:3", "pair:2+units:1"):
        g = build(name)
        u = algebra_unit(counting_haar(g))
        expect = np.zeros(g.n_morphisms)
        expect[g.units] = 1.0
        assert np.array_equal(u.coeffs, expect)
    for n in range(1, 5):
        g = pair_groupoid(n)
        mg = normalized_haar(g)
        u = algebra_unit(mg)
        assert np.allclose(u.coeffs[g.units], n, rtol=1e-15)
        assert convolve(mg, u, u).allclose(u, 1e-14)


@pytest.mark.parametrize("name", SMALL)
def test_convolution_matches_oracle(name, rng):
    g = build(name)
    lam = random_lambda(rng, g.n_objects)
    for mg in (normalized_haar(g, lam), counting_haar(g, lam)):
        w = mg.fiber_weight.tolist()
        for _ in range(5):
            f, h = rand_fn(g, rng), rand_fn(g, rng)
            assert np.allclose(convolve(mg, f, h).coeffs, oracles.convolve(g, w, f.coeffs, h.coeffs), atol=1e-13)
            assert np.allclose(involution(mg, f).coeffs, oracles.involution(g, lam, w, f.coeffs), atol=1e-13)
            assert abs(state(mg, f) - oracles.state(g, lam, w, f.coeffs)) <= 1e-13


def test_literal_mode():
    g = pair_groupoid(2)
    mg = normalized_haar(g)
    f = GroupoidFunction(g, [1, 2, 3, 4])
    lit = convolve(mg, f, f, mode="literal")
    pairs = oracles.convolve(g, [1.0] * 4, f.coeffs, f.coeffs)
    assert np.allclose(lit.coeffs, pairs * mg.mu)
    with pytest.raises(ValueError):
        convolve(mg, f, f, mode="other")


def test_bridge_examples():
    g = unit_groupoid(3)
    mg = normalized_haar(g, [0.2, 0.3, 0.5])
    a, b = ObjectSet.from_labels(g, [1, 2]), ObjectSet.from_labels(g, [2, 3])
    assert math.isclose(bridge_decoherence(mg, b, a).real, 0.3, rel_tol=1e-15)
    assert math.isclose(decoherence(mg, b, a), 0.3, rel_tol=1e-15)
    p = pair_groupoid(2)
    mp = normalized_haar(p)
    one = ObjectSet.from_labels(p, [1])
    assert bridge_decoherence(mp, one, one) == 0.25
    assert bridge_decoherence(mp, one, ObjectSet.empty(p)) == 0
    assert bridge_certified(mp) and not bridge_certified(counting_haar(p))


def test_bridge_with_zero_lambda():
    g = pair_groupoid(3)
    mg = normalized_haar(g, [0.25, 0.75, 0.0])
    for a in oracles.subsets(3):
        for b in oracles.subsets(3):
            A, B = ObjectSet.from_indices(g, a), ObjectSet.from_indices(g, b)
            assert abs(bridge_decoherence(mg, B, A) - decoherence(mg, B, A)) <= 1e-15


def test_involution_undefined_delta():
    g = pair_groupoid(2)
    mg = counting_haar(g, [1.0, 0.0])
    f = GroupoidFunction.delta(g, g.morphism_index((2, 1)))
    with pytest.raises(ModularDomainError):
        involution(mg, f)


def test_mismatch():
    mg = normalized_haar(pair_groupoid(2))
    with pytest.raises(MismatchError):
        convolve(mg, GroupoidFunction.zeros(pair_groupoid(2)), GroupoidFunction.zeros(mg.groupoid))
    with pytest.raises(MismatchError):
        GroupoidFunction(mg.groupoid, [1, 2])


def test_function_dict_roundtrip():
    g = pair_groupoid(2)
    f = GroupoidFunction(g, [1, 0, 2j, -1.5])
    assert GroupoidFunction.from_dict(g, f.to_dict()) == f


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2**32 - 1))
def test_star_algebra_laws(name, seed):
    g = build(name)
    r = np.random.default_rng(seed)
    lam = random_lambda(r, g.n_objects)
    # any source-factored weights: the algebra laws do not need unimodularity
    mg = custom_haar(g, lam, r.uniform(0.2, 2.0, g.n_objects)[g.source])
    f, h, k = rand_fn(g, r), rand_fn(g, r), rand_fn(g, r)
    star = lambda x: involution(mg, x)  # noqa: E731
    conv = lambda x, y: convolve(mg, x, y)  # noqa: E731
    scale = max(1.0, *(np.abs(x.coeffs).max() for x in (f, h, k))) ** 3
    assert conv(conv(f, h), k).allclose(conv(f, conv(h, k)), 1e-12 * scale * 10)
    assert star(star(f)).allclose(f, 1e-12)
    assert star(conv(f, h)).allclose(conv(star(h), star(f)), 1e-11 * scale)
    u = algebra_unit(mg)
    assert conv(u, f).allclose(f, 1e-12 * scale) and conv(f, u).allclose(f, 1e-12 * scale)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2**32 - 1))
def test_state_positive_under_normalized_haar(name, seed):
    g = build(name)
    r = np.random.default_rng(seed)
    mg = normalized_haar(g, random_lambda(r, g.n_objects))
    f = rand_fn(g, r)
    val = state(mg, convolve(mg, involution(mg, f), f))
    assert val.real >= -1e-12 and abs(val.imag) <= 1e-12
