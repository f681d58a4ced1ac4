"""Property-based checks with hypothesis."""

from math import gcd

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quadric_lts.classifier import admissible_types, classify, generate, random_cq_automorphism, transform_subspace
from quadric_lts.lie_model import curvature, is_lie_triple
from quadric_lts.linalg_core import subspace_span
from quadric_lts.quadric_geo import PeriodCase, ProjPoint, fs_distance, minimal_period, minimal_period_oracle
from quadric_lts.roots_weyl import characteristic_angle

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def cvec(m):
    return st.lists(st.tuples(finite, finite), min_size=m, max_size=m).map(lambda xs: np.array([complex(a, b) for a, b in xs]))


@st.composite
def triples(draw):
    m = draw(st.integers(2, 6))
    return m, draw(cvec(m)), draw(cvec(m)), draw(cvec(m))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_curvature_modes_agree(data):
    _, u, v, w = data
    a = curvature(u, v, w, mode="formula")
    b = curvature(u, v, w, mode="bracket")
    scale = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
    assert np.linalg.norm(a - b) <= 1e-12 * max(scale, 1e-300)


@settings(max_examples=200, deadline=None)
@given(cvec(4), st.floats(0, 2 * np.pi), st.floats(0.1, 10))
def test_angle_range_and_invariance(v, theta, scale):
    assume(np.linalg.norm(v) > 1e-3)
    phi = characteristic_angle(v)
    assert 0.0 <= phi <= np.pi / 4 + 1e-15
    assert abs(characteristic_angle(scale * np.exp(1j * theta) * v) - phi) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data(), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_classification_congruence_invariant(m, data, seed, aut_seed):
    t = data.draw(st.sampled_from(admissible_types(m)))
    S = generate(t, m, seed=seed)
    S2 = transform_subspace(S, random_cq_automorphism(m, np.random.default_rng(aut_seed)))
    assert classify(S2) == classify(S) == t.canonical()


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.data())
def test_lie_triple_property_is_invariant(m, data):
    d = data.draw(st.integers(1, 2 * m))
    vecs = [data.draw(cvec(m)) for _ in range(d)]
    S = subspace_span(vecs, m)
    assume(S.dim > 0)
    S2 = transform_subspace(S, random_cq_automorphism(m, np.random.default_rng(d)))
    assert bool(is_lie_triple(S)) == bool(is_lie_triple(S2))


@settings(max_examples=100, deadline=None)
@given(cvec(3), cvec(3))
def test_fs_distance_symmetric_bounded(a, b):
    assume(np.linalg.norm(a) > 1e-3 and np.linalg.norm(b) > 1e-3)
    p, q = ProjPoint(a), ProjPoint(b)
    assert abs(fs_distance(p, q) - fs_distance(q, p)) <= 1e-12
    assert 0 <= fs_distance(p, q) <= np.pi / 2 + 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12))
def test_period_symmetric_and_matches_oracle(n1, n2):
    assume(gcd(n1, n2) == 1)
    a, b = PeriodCase(n1, n2), PeriodCase(n2, n1)
    assert minimal_period(a) == minimal_period(b)
    assert abs(minimal_period(a) - minimal_period_oracle(a)) <= 1e-9
