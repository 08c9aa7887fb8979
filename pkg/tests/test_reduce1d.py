import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nestquad.distributions import beta, normal, uniform
from nestquad.quadrature import QuadratureRule, clenshaw_curtis_rule, gauss_rule, is_mirror_symmetric, verify_degree
from nestquad.reduce1d import (PRIOR, WEIGHT, NestedFamily, ReductionCriterion, ReductionError,
                               caratheodory_branches, nested_family, null_vector_asymmetric,
                               null_vector_symmetric, reduction_step, select_branch, symmetric_half_matrix)


def _vander(x, rows):
    x = np.asarray(x, float)
    return np.vander(x / np.max(np.abs(x)), rows, increasing=True).T


def test_asymmetric_null_vector_examples():
    c = null_vector_asymmetric([0.0, 1.0])
    assert c[0] == pytest.approx(-c[1])
    c = null_vector_asymmetric([-1.0, 0.0, 1.0])
    assert abs(c.sum()) < 1e-14 and abs(np.dot(c, [-1, 0, 1])) < 1e-14
    assert np.any(c > 0) and np.any(c < 0)


def test_asymmetric_null_vector_residual_chebyshev_nodes():
    x = clenshaw_curtis_rule(uniform(), 9).std_nodes
    c = null_vector_asymmetric(x)
    assert np.max(np.abs(_vander(x, 8) @ c)) <= 1e-10 * np.linalg.norm(c)


def test_symmetric_null_vector_examples():
    a, b = 0.9, 0.3
    c = null_vector_symmetric([-a, -b, b, a])
    np.testing.assert_allclose(c / c[0], [1, -1, -1, 1], atol=1e-14)
    c = null_vector_symmetric([-a, 0.0, a])
    np.testing.assert_allclose(c / c[0], [1, -2, 1], atol=1e-14)


def test_half_matrix_textbook_form():
    A = symmetric_half_matrix([-0.5, 0.0, 0.5])
    np.testing.assert_array_equal(A, [[2.0, 1.0]])
    A = symmetric_half_matrix([-0.7, -0.2, 0.2, 0.7])
    np.testing.assert_array_equal(A, [[2.0, 2.0]])


@pytest.mark.parametrize("n", range(3, 34))
def test_symmetric_null_vector_mirrored_exactly(n):
    x = gauss_rule(uniform(), n).std_nodes
    c = null_vector_symmetric(x)
    assert np.array_equal(c, c[::-1])
    assert np.max(np.abs(_vander(x, n - 2) @ c)) <= 1e-10 * np.linalg.norm(c)


def test_symmetric_null_vector_rejects_asymmetric_nodes():
    with pytest.raises(ValueError):
        null_vector_symmetric([-1.0, 0.1, 1.0])


def test_simpson_reduces_to_midpoint():
    r = clenshaw_curtis_rule(uniform(), 3)
    out = reduction_step(r)
    np.testing.assert_array_equal(out.std_nodes, [0.0])
    assert out.weights[0] == pytest.approx(1.0)


def test_gauss8_reduced_once():
    out = reduction_step(gauss_rule(uniform(), 8))
    assert len(out) == 6 and verify_degree(out) >= 5 and out.positive


def test_branches_and_selection():
    w = np.array([0.25, 0.5, 0.25])
    c = np.array([1.0, -2.0, 1.0])
    (w1, z1), (w2, z2) = caratheodory_branches(w, c)
    np.testing.assert_allclose(w1, [0, 1, 0])
    assert list(z1) == [0, 2] and list(z2) == [1]
    assert caratheodory_branches(w, np.array([1.0, 1.0, 1.0]))[1] is None


class _Probe:
    def __init__(self, pdfs, dists):
        self.pdfs, self.dists = pdfs, dists

    def removal_pdf(self, idx):
        return min(self.pdfs[i] for i in idx)

    def removal_distance(self, idx):
        return max(self.dists[i] for i in idx)


def test_select_branch_rules():
    b1 = (np.array([0.0, 0.5, 0.5]), np.array([0]))
    b2 = (np.array([0.3, 0.0, 0.7]), np.array([1]))
    assert select_branch(b1, b2, PRIOR, _Probe([0.1, 0.9, 1.0], [0, 0, 0])) == 1
    assert select_branch(b1, b2, PRIOR, _Probe([0.9, 0.1, 1.0], [0, 0, 0])) == 2
    # equal density: outermost node goes
    assert select_branch(b1, b2, PRIOR, _Probe([0.5, 0.5, 1], [0.2, 0.8, 0])) == 2
    assert select_branch(b1, b2, PRIOR, _Probe([0.5, 0.5, 1], [0.5, 0.5, 0])) == 1
    assert select_branch(b1, b2, WEIGHT, None) == 1
    b3 = (np.array([0.0, 0.3, 0.5]), np.array([0]))
    b4 = (np.array([0.4, 0.0, 0.5]), np.array([1]))
    assert select_branch(b3, b4, WEIGHT, None) == 2
    assert select_branch(b1, b2, ReductionCriterion("explicit_choice", branch=2), None) == 2


def test_families_sizes():
    assert nested_family(gauss_rule(uniform(), 9)).sizes == [9, 7, 5, 3, 1]
    fam = nested_family(gauss_rule(beta(2, 5), 8))
    assert fam.sizes == [8, 7, 6, 5, 4, 3, 2, 1]
    assert fam.is_nested()
    even = nested_family(gauss_rule(uniform(), 8))
    assert even.sizes == [8, 6, 4, 2, 1]


def _check_family(fam, sym):
    for big, small in zip(fam.rules, fam.rules[1:]):
        # bitwise subset
        assert np.all(np.isin(small.std_nodes, big.std_nodes))
        assert small.weights.min() >= -1e-13
        n = len(small)
        if sym and n > 1 and len(big) - n == 2:
            assert is_mirror_symmetric(small)
            assert np.array_equal(small.weights, small.weights[::-1])
            assert verify_degree(small) >= n - 1
        else:
            assert verify_degree(small) >= n - 1
        # preserved moments match the parent
        top = n - 2 if sym else n - 1
        j = np.arange(top + 1)[:, None]
        mu_big = (big.std_nodes**j) @ big.weights
        mu_small = (small.std_nodes**j) @ small.weights
        # rounding scale of each moment: the absolute moment of the parent rule
        scale = np.maximum(1.0, np.abs(big.std_nodes) ** j @ np.abs(big.weights))
        assert np.all(np.abs(mu_small - mu_big) <= 1e-10 * scale)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 33), which=st.sampled_from(["uniform", "beta44", "beta25", "normal"]))
def test_family_contract_random_sizes(n, which):
    dist = {"uniform": uniform(), "beta44": beta(4, 4), "beta25": beta(2, 5), "normal": normal()}[which]
    fam = nested_family(gauss_rule(dist, n))
    _check_family(fam, dist.symmetric)


def test_asymmetric_path_one_node_per_step():
    fam = nested_family(gauss_rule(beta(2, 5), 12))
    assert np.all(np.diff(fam.sizes) == -1)


def test_errors():
    with pytest.raises(ReductionError):
        reduction_step(QuadratureRule([0.0], [1.0], 1, uniform()))
    with pytest.raises(ReductionError):
        reduction_step(QuadratureRule([-1.0, 0.0, 1.0], [-0.1, 1.2, -0.1], 1, uniform()))
    with pytest.raises(ValueError):
        NestedFamily((gauss_rule(uniform(), 3), gauss_rule(uniform(), 5)))
    with pytest.raises(ValueError):
        ReductionCriterion("random")


def test_large_symmetric_null_vector_uniform():
    x = clenshaw_curtis_rule(uniform(), 1025).std_nodes
    c = null_vector_symmetric(x)
    assert np.array_equal(c, c[::-1]) and np.all(np.isfinite(c))
