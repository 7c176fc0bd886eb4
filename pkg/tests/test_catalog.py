import itertools
import math

import numpy as np
import pytest

from jordanbound.catalog import (
    acceptance_catalog,
    block,
    build_entry,
    conjugate_group,
    cyclic,
    default_conjugator,
    make_block_product,
    make_quaternion_q8,
    make_scalar_group,
    make_symmetric_zero_sum,
    scalar,
    sym_zero_sum,
)
from jordanbound.core import jordan_pipeline
from jordanbound.errors import IllConditionedError, InvalidParameters, UnknownCatalogEntry
from jordanbound.groups import close_generators
from jordanbound.linalg import condition_number
from oracles import permutation_matrix_on_zero_sum


@pytest.mark.parametrize("n, m, order, index", [(1, 1, 1, 1), (2, 6, 6, 6), (3, 4, 4, 4)])
def test_scalar_group(n, m, order, index):
    g = close_generators(make_scalar_group(n, m))
    assert g.order == order
    assert jordan_pipeline(g).index == index


@pytest.mark.parametrize("m, index", [(1, 1), (12, 12), (13, 1)])
def test_cyclic_rotation(m, index):
    g = close_generators(cyclic(m).generators)
    assert g.order == m
    assert jordan_pipeline(g).index == index


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetric_zero_sum_orders(n):
    g = close_generators(make_symmetric_zero_sum(n))
    assert g.order == math.factorial(n + 1)
    assert jordan_pipeline(g).index == math.factorial(n + 1)


def test_symmetric_zero_sum_matches_least_squares_restriction():
    n = 3
    gens = make_symmetric_zero_sum(n)
    swap = [1, 0, 2, 3]
    cycle = [1, 2, 3, 0]
    assert np.allclose(gens[0], permutation_matrix_on_zero_sum(swap))
    assert np.allclose(gens[1], permutation_matrix_on_zero_sum(cycle))
    assert all(np.array_equal(g, np.round(g)) for g in gens)


def test_symmetric_zero_sum_is_faithful():
    # every permutation of 4 points gives a distinct element of the closure
    g = close_generators(make_symmetric_zero_sum(3))
    seen = {g.lookup(permutation_matrix_on_zero_sum(list(p))) for p in itertools.permutations(range(4))}
    assert None not in seen and len(seen) == 24


def test_sign_representation():
    gens = make_symmetric_zero_sum(1)
    assert len(gens) == 1 and gens[0][0, 0] == -1


def test_quaternion():
    g = close_generators(make_quaternion_q8())
    assert g.order == 8
    report = jordan_pipeline(g)
    assert (report.a_order, report.index) == (1, 8)
    assert report.min_coset_separation == pytest.approx(math.sqrt(2))


def test_block_products():
    entry = block(cyclic(13), sym_zero_sum(2))
    g = close_generators(entry.generators)
    assert (entry.dim, g.order, entry.expected_order) == (3, 78, 78)
    report = jordan_pipeline(g)
    assert (report.a_order, report.index) == (13, 6)
    assert close_generators(make_block_product([[[1.0]]], [[[1.0]]])).order == 1
    cc = close_generators(block(cyclic(13), cyclic(13)).generators)
    assert cc.order == 169 and jordan_pipeline(cc).index == 1


def test_conjugate_group():
    gens = make_symmetric_zero_sum(2)
    assert all(np.allclose(a, b) for a, b in zip(conjugate_group(gens, np.eye(2)), gens))
    s = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert jordan_pipeline(close_generators(conjugate_group(gens, s))).index == 6
    c13 = cyclic(13).generators
    assert np.allclose(conjugate_group(c13, [[3.0]])[0], c13[0])
    with pytest.raises(IllConditionedError):
        conjugate_group(gens, np.diag([1.0, 100.0]))


def test_default_conjugators_are_well_conditioned():
    for n in (1, 2, 3):
        s = default_conjugator(n)
        assert condition_number(s) <= 10
        assert not np.allclose(s.conj().T @ s, (s.conj().T @ s)[0, 0] * np.eye(n)) or n == 1


def test_catalog_expected_orders_and_indices():
    for entry in acceptance_catalog():
        g = close_generators(entry.generators)
        assert g.order == entry.expected_order, entry.label
        assert jordan_pipeline(g).index == entry.expected_index, entry.label


def test_build_entry():
    assert build_entry("scalar", {"n": 2, "m": 1}).expected_order == 1
    assert build_entry("q8").dim == 2
    entry = build_entry("block", parts=[("cyclic", {"m": 13}), ("sym-zero-sum", {"n": 2})])
    assert entry.expected_order == 78 and entry.expected_index == 6
    with pytest.raises(UnknownCatalogEntry):
        build_entry("e8")
    with pytest.raises(InvalidParameters):
        build_entry("cyclic", {"n": 3})
    with pytest.raises(InvalidParameters):
        build_entry("cyclic", {"m": 0})
    with pytest.raises(InvalidParameters):
        scalar(0, 3)
