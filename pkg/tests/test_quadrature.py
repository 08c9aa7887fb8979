import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nestquad.distributions import beta, normal, raw_moment, uniform
from nestquad.quadrature import (IllConditionedWarning, QuadratureRule, chebyshev_extrema,
                                 clenshaw_curtis_rule, gauss_rule, is_mirror_symmetric, rule_from_nodes,
                                 verify_degree, weights_from_nodes)

FAMILIES = [uniform(), beta(4, 4), normal()]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_gauss_legendre_matches_root_oracle(oracles, n):
    x, w = oracles["gauss_legendre"][str(n)]
    r = gauss_rule(uniform(), n)
    np.testing.assert_allclose(r.nodes, x, atol=1e-14)
    np.testing.assert_allclose(r.weights, w, rtol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_gauss_hermite_matches_root_oracle(oracles, n):
    x, w = oracles["gauss_hermite"][str(n)]
    r = gauss_rule(normal(), n)
    np.testing.assert_allclose(r.nodes, x, atol=1e-13)
    np.testing.assert_allclose(r.weights, w, rtol=1e-12)


@pytest.mark.parametrize("dist", FAMILIES, ids=str)
def test_gauss_degree_and_symmetry(dist):
    for n in range(1, 21):
        r = gauss_rule(dist, n)
        assert verify_degree(r) >= 2 * n - 1
        assert np.all(r.weights > 0)
        assert is_mirror_symmetric(r)
        assert abs(r.weights.sum() - 1) < 1e-12


def test_gauss_physical_range():
    r = gauss_rule(beta(4, 4, 0.0038, 0.05), 5)
    assert np.all((r.nodes > 0.0038) & (r.nodes < 0.05))
    assert r.integrate(lambda x: x) == pytest.approx(raw_moment(r.distribution, 1), rel=1e-14)


@pytest.mark.parametrize("n", [3, 5, 9])
def test_clenshaw_curtis_uniform_weights(oracles, n):
    x, w = oracles["cc_uniform"][str(n)]
    r = clenshaw_curtis_rule(uniform(), n)
    np.testing.assert_allclose(r.nodes, x, atol=1e-15)
    np.testing.assert_allclose(r.weights, w, rtol=1e-12)


def test_clenshaw_curtis_nesting_and_errors():
    prev = chebyshev_extrema(1)
    for n in (3, 5, 9, 17, 33, 65):
        cur = chebyshev_extrema(n)
        assert np.all(np.isin(prev, cur))
        prev = cur
    assert len(clenshaw_curtis_rule(uniform(), 1)) == 1
    with pytest.raises(ValueError):
        clenshaw_curtis_rule(normal(), 3)
    r = clenshaw_curtis_rule(uniform(), 3)
    assert verify_degree(r) >= 3


def test_weights_from_nodes_examples():
    np.testing.assert_allclose(weights_from_nodes(uniform(), [-1, 0, 1]), [1 / 6, 2 / 3, 1 / 6], rtol=1e-14)
    assert weights_from_nodes(beta(4, 4), [0.5]) == pytest.approx([1.0])
    d = beta(4, 4)
    w = weights_from_nodes(d, [0.25, 0.5, 0.75])
    x = np.array([0.25, 0.5, 0.75])
    for j in range(3):
        assert np.dot(w, x**j) == pytest.approx(raw_moment(d, j), rel=1e-13)


@pytest.mark.parametrize("dist", FAMILIES, ids=str)
def test_weights_from_nodes_reproduce_gauss(dist):
    for n in range(1, 21):
        g = gauss_rule(dist, n)
        np.testing.assert_allclose(weights_from_nodes(dist, g.nodes), g.weights, atol=1e-9)


def test_weights_from_nodes_guards():
    with pytest.raises(ValueError):
        weights_from_nodes(uniform(), np.linspace(-1, 1, 65))
    with pytest.raises(np.linalg.LinAlgError):
        weights_from_nodes(uniform(), [0.0, 0.0, 1.0])
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        weights_from_nodes(uniform(), np.linspace(-1, 1, 80), max_nodes=None)
    assert any(issubclass(r.category, IllConditionedWarning) for r in rec)


def test_verify_degree_small_cases():
    assert verify_degree(gauss_rule(uniform(), 2)) == 3
    one = QuadratureRule([0.0], [1.0], 1, uniform())
    assert verify_degree(one) == 1
    bad = QuadratureRule([0.0], [0.5], 0, uniform())
    assert verify_degree(bad) == -1


def test_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule([0.1, 0.0], [0.5, 0.5], 1, uniform())
    with pytest.raises(ValueError):
        QuadratureRule([0.0], [1.0], 1, uniform(), provenance="magic")
    r = gauss_rule(uniform(), 3)
    with pytest.raises(ValueError):
        r.weights[0] = 1.0


@settings(max_examples=40, deadline=None)
@given(pts=st.lists(st.floats(0.01, 0.99), min_size=1, max_size=12, unique=True))
def test_rule_from_nodes_has_degree_n_minus_one(pts):
    pts = np.sort(np.array(pts))
    if np.min(np.diff(pts), initial=1.0) < 0.02:
        return
    r = rule_from_nodes(beta(2, 5), pts)
    assert verify_degree(r, len(pts) - 1) >= len(pts) - 1
