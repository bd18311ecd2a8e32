import numpy as np
import pytest

from dqbalance.algebra import DualQuaternion, Quaternion, random_udq
from dqbalance.graphs import (
    Digraph,
    DuplicateArcError,
    InvalidWalkError,
    LoopArcError,
    NonAppreciableWeightError,
    NonUnitWeightError,
    OrientedCycle,
    WeightType,
    WeightTypeMismatchError,
    build,
    enumerate_cycles,
    has_directed_spanning_tree,
    is_weakly_connected,
    laplacian,
    orient_cycle,
    out_degree,
    unweighted_laplacian,
    walk_weight,
    weighted_magnitude_laplacian,
)

from conftest import I, J, K, ONE, cycles_equivalent, make_cycle3, make_tree


def unit_pair(rng):
    return random_udq(rng), random_udq(rng)


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def test_build_tree(rng):
    g = make_tree(*unit_pair(rng))
    assert g.n == 3
    assert g.arcs == ((2, 1), (3, 1))


def test_build_cycle(rng):
    g = make_cycle3(random_udq(rng), random_udq(rng), random_udq(rng))
    assert g.arcs == ((1, 3), (2, 1), (3, 2))


def test_build_rejects_loops_and_duplicates():
    with pytest.raises(LoopArcError):
        Digraph(3, ((1, 1),))
    with pytest.raises(DuplicateArcError):
        Digraph(3, ((1, 2), (1, 2)))


def test_build_rejects_non_unit_weight():
    w = DualQuaternion.from_real(2.0)
    with pytest.raises(NonUnitWeightError):
        build(2, [(1, 2)], {(1, 2): w}, WeightType.UNIT_DUAL_QUATERNION)


def test_build_rejects_non_appreciable_weight():
    w = DualQuaternion(Quaternion(0, 0, 0, 0), Quaternion(1, 0, 0, 0))
    with pytest.raises(NonAppreciableWeightError):
        build(2, [(1, 2)], {(1, 2): w}, WeightType.DUAL_QUATERNION)


def test_build_rejects_embedding_mismatch():
    w = DualQuaternion(Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 0))
    with pytest.raises(WeightTypeMismatchError):
        build(2, [(1, 2)], {(1, 2): w}, WeightType.COMPLEX)
    with pytest.raises(WeightTypeMismatchError):
        build(2, [(1, 2)], {(1, 2): DualQuaternion(Quaternion(1, 0, 0, 0),
                                                   Quaternion(1, 0, 0, 0))},
              WeightType.REAL)


def test_build_requires_all_weights(rng):
    with pytest.raises(ValueError, match="missing"):
        build(3, [(1, 2), (2, 3)], {(1, 2): random_udq(rng)},
              WeightType.UNIT_DUAL_QUATERNION)


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def test_weak_connectivity(rng):
    assert is_weakly_connected(make_tree(*unit_pair(rng)).graph)
    assert not is_weakly_connected(Digraph(4, ((1, 2), (3, 4))))
    assert is_weakly_connected(Digraph(1, ()))


def test_directed_spanning_tree(rng):
    assert has_directed_spanning_tree(make_tree(*unit_pair(rng)).graph)
    assert has_directed_spanning_tree(Digraph(3, ((1, 3), (2, 1), (3, 2))))
    # one source feeding two sinks: neither sink reaches the other
    assert not has_directed_spanning_tree(Digraph(3, ((1, 2), (1, 3))))


def test_directed_spanning_tree_agrees_with_zero_eigenvalue():
    rng = np.random.default_rng(42)
    for _ in range(40):
        n = int(rng.integers(2, 8))
        arcs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
                if i != j and rng.random() < 0.3]
        g = Digraph(n, tuple(arcs))
        L = unweighted_laplacian(g)
        eigs = np.linalg.eigvals(L)
        scale = max(1.0, np.abs(eigs).max())
        simple_zero = int(np.sum(np.abs(eigs) <= 1e-7 * scale)) == 1
        assert np.linalg.norm(L @ np.ones(n)) < 1e-12
        assert has_directed_spanning_tree(g) == simple_zero


# ---------------------------------------------------------------------------
# degrees and Laplacians
# ---------------------------------------------------------------------------

def test_out_degree(rng):
    cycle = make_cycle3(random_udq(rng), random_udq(rng), random_udq(rng))
    assert out_degree(cycle, 1) == 1.0
    tree = make_tree(*unit_pair(rng))
    assert out_degree(tree, 1) == 0.0


def test_out_degree_sums_standard_magnitudes():
    two = DualQuaternion.from_real(2.0)
    three_i = DualQuaternion(Quaternion(0, 3, 0, 0), Quaternion(0, 0, 0, 0))
    g = build(3, [(1, 2), (1, 3)], {(1, 2): two, (1, 3): three_i},
              WeightType.COMPLEX)
    assert out_degree(g, 1) == pytest.approx(5.0)


def test_laplacian_tree_fixture(rng):
    w21, w31 = unit_pair(rng)
    L = laplacian(make_tree(w21, w31))
    expected = np.zeros((3, 3, 8))
    expected[1, 1, 0] = expected[2, 2, 0] = 1.0
    expected[1, 0] = -w21.to_array()
    expected[2, 0] = -w31.to_array()
    assert np.array_equal(L, expected)


def test_laplacian_cycle_fixture(rng):
    w13, w21, w32 = random_udq(rng), random_udq(rng), random_udq(rng)
    L = laplacian(make_cycle3(w13, w21, w32))
    expected = np.zeros((3, 3, 8))
    expected[0, 0, 0] = expected[1, 1, 0] = expected[2, 2, 0] = 1.0
    expected[0, 2] = -w13.to_array()
    expected[1, 0] = -w21.to_array()
    expected[2, 1] = -w32.to_array()
    assert np.array_equal(L, expected)


def test_laplacian_identity_weights_row_sums():
    g = make_cycle3(ONE, ONE, ONE)
    L = laplacian(g)
    assert np.allclose(L.sum(axis=1), 0.0)


def test_unweighted_laplacians(rng):
    cyc = Digraph(3, ((1, 3), (2, 1), (3, 2)))
    assert np.array_equal(unweighted_laplacian(cyc),
                          [[1, 0, -1], [-1, 1, 0], [0, -1, 1]])
    tree = Digraph(3, ((2, 1), (3, 1)))
    assert np.array_equal(unweighted_laplacian(tree),
                          [[0, 0, 0], [-1, 1, 0], [-1, 0, 1]])
    # row sums vanish for every digraph
    arcs = [(i, j) for i in range(1, 7) for j in range(1, 7)
            if i != j and rng.random() < 0.4]
    L = unweighted_laplacian(Digraph(6, tuple(arcs)))
    assert np.allclose(L.sum(axis=1), 0.0)


def test_magnitude_laplacian_matches_unweighted_for_units(rng):
    g = make_cycle3(random_udq(rng), random_udq(rng), random_udq(rng))
    assert np.allclose(weighted_magnitude_laplacian(g),
                       unweighted_laplacian(g.graph), atol=1e-12)


# ---------------------------------------------------------------------------
# cycle enumeration
# ---------------------------------------------------------------------------

def test_enumerate_cycles_three_cycle(rng):
    g = make_cycle3(random_udq(rng), random_udq(rng), random_udq(rng))
    enum = enumerate_cycles(g.graph)
    assert not enum.truncated
    assert len(enum.cycles) == 1
    cyc = enum.cycles[0]
    assert cycles_equivalent(cyc.vertices, (1, 3, 2))
    # every step follows an arc of the graph in its flagged direction
    arcset = set(g.arcs)
    for arc in cyc.arcs():
        assert arc in arcset


def test_enumerate_cycles_tree_empty(rng):
    g = make_tree(*unit_pair(rng))
    assert enumerate_cycles(g.graph).cycles == ()


def test_enumerate_cycles_antiparallel_pair():
    enum = enumerate_cycles(Digraph(2, ((1, 2), (2, 1))))
    assert len(enum.cycles) == 1
    cyc = enum.cycles[0]
    assert cyc.vertices == (1, 2)
    assert cyc.forward == (True, True)


def test_enumerate_cycles_truncation():
    # complete digraph on 5 vertices has far more than 3 simple cycles
    arcs = tuple((i, j) for i in range(1, 6) for j in range(1, 6) if i != j)
    enum = enumerate_cycles(Digraph(5, arcs), max_cycles=3)
    assert enum.truncated
    assert len(enum.cycles) == 3


def test_enumerate_cycles_triangle_with_antiparallel_pair():
    # one 2-cycle from the pair, one triangle (arc choice on the shared step
    # does not multiply the count)
    g = Digraph(3, ((1, 2), (2, 1), (2, 3), (3, 1)))
    enum = enumerate_cycles(g)
    assert [c.vertices for c in enum.cycles] == [(1, 2), (1, 2, 3)]
    assert all(all(c.forward) for c in enum.cycles)


def test_enumerate_cycles_counts_mixed_orientations():
    # square traversable only with one backward step
    g = Digraph(4, ((1, 2), (2, 3), (3, 4), (1, 4)))
    enum = enumerate_cycles(g)
    assert len(enum.cycles) == 1
    assert sorted(enum.cycles[0].vertices) == [1, 2, 3, 4]
    assert sum(1 for f in enum.cycles[0].forward if not f) == 1


# ---------------------------------------------------------------------------
# walk weights
# ---------------------------------------------------------------------------

def test_walk_weight_ijk_cycle():
    g = make_cycle3(I, J, K)
    w = walk_weight(g, [1, 3, 2, 1])
    assert np.allclose(w.to_array(), ONE.to_array(), atol=1e-15)


def test_walk_weight_identity_weights():
    g = make_cycle3(ONE, ONE, ONE)
    assert walk_weight(g, [1, 3, 2, 1]) == ONE


def test_walk_weight_reversal_is_inverse(rng):
    g = make_cycle3(random_udq(rng), random_udq(rng), random_udq(rng))
    fwd = walk_weight(g, [1, 3, 2, 1])
    rev = walk_weight(g, [1, 2, 3, 1])
    prod = fwd * rev
    assert np.allclose(prod.to_array(), ONE.to_array(), atol=1e-12)


def test_walk_weight_backward_steps(rng):
    w = random_udq(rng)
    g = build(2, [(1, 2)], {(1, 2): w}, WeightType.UNIT_DUAL_QUATERNION)
    back = walk_weight(g, [2, 1])
    assert np.allclose(back.to_array(), w.conjugate().to_array())


def test_walk_weight_rejects_invalid(rng):
    g = make_tree(*unit_pair(rng))
    with pytest.raises(InvalidWalkError):
        walk_weight(g, [2, 3])
    with pytest.raises(InvalidWalkError):
        walk_weight(g, OrientedCycle((2, 1), (True, True)))


def test_orient_cycle_prefers_forward():
    g = Digraph(2, ((1, 2), (2, 1)))
    cyc = orient_cycle([1, 2], g)
    assert cyc.forward == (True, True)
