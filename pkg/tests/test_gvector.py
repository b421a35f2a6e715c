"""Stabilized g-vectors: block limits, knitting, braid action."""

import pytest
from hypothesis import given, settings, strategies as st

from clusterqq.gvector import (
    GVec,
    blocks_gvectors,
    block_matrix,
    braid_gvectors,
    green_slice_nodes,
    knit_gvectors,
    mesh_check,
    mesh_pairs,
    slice_matrix,
    stable_block,
    sweep_gvectors,
    theta,
    theta_word,
)
from clusterqq.quiver import build_coxeter_quiver
from clusterqq.rootsys import RootSystem, coxeter_data


def rs(name):
    return RootSystem.from_name(name)


def e(*vs):
    g = GVec.zero()
    for sign, v in vs:
        g = g + GVec.unit(v).scale(sign)
    return g


A2 = coxeter_data(rs("A2"), ["2->1"])
A3 = coxeter_data(rs("A3"), ["2->1", "3->2"])

ORIENTATIONS = {
    "A2": ["2->1"],
    "A3": ["2->1", "3->2"],
    "A3r": ["1->2", "2->3"],
    "D4": ["2->1", "2->3", "2->4"],
    "D5": ["2->1", "3->2", "4->3", "5->3"],
}


def window(key, depth=8):
    name = key.rstrip("r")
    return build_coxeter_quiver(
        rs(name), ORIENTATIONS[key], depth_below=depth
    )


# ---------------------------------------------------------------------------
# slice matrices and blocks
# ---------------------------------------------------------------------------


class TestSliceMatrices:
    def test_a2_green_slices(self):
        assert green_slice_nodes(A2, -1) == [1]
        assert green_slice_nodes(A2, -2) == [2]
        assert green_slice_nodes(A2, -3) == [1]
        assert green_slice_nodes(A2, -4) == []

    def test_a2_elementary_matrices(self):
        assert slice_matrix(A2, -1) == ((-1, 0), (1, 1))
        assert slice_matrix(A2, -2) == ((1, 1), (0, -1))

    def test_a2_products(self):
        assert stable_block(A2, -2) == ((-1, -1), (1, 0))
        assert stable_block(A2, -3) == ((0, -1), (-1, 0))
        # below the last green slice the limit block is constant: minus
        # the permutation matrix of the twist
        assert stable_block(A2, -3) == stable_block(A2, -9)

    def test_a2_sweep_blocks(self):
        T = lambda m: slice_matrix(A2, m)
        # one sweep
        assert block_matrix(A2, 1, -1) == T(-1)
        assert block_matrix(A2, 1, -2) == T(-2)
        assert block_matrix(A2, 1, -3) == T(-3)
        # two sweeps
        assert block_matrix(A2, 2, -1) == T(-1)
        assert block_matrix(A2, 2, -2) == stable_block(A2, -2)
        assert block_matrix(A2, 2, -4) == T(-3)
        # three sweeps
        assert block_matrix(A2, 3, -3) == stable_block(A2, -3)
        assert block_matrix(A2, 3, -5) == T(-3)

    def test_identity_above_band(self):
        for m in (0, 1, 5):
            assert stable_block(A2, m) == ((1, 0), (0, 1))

    def test_a3_slice_one_has_two_greens(self):
        assert green_slice_nodes(A3, -3) == [1, 3]


# ---------------------------------------------------------------------------
# rank-two closed forms
# ---------------------------------------------------------------------------


def a2_expected(v):
    i, r = v
    if i == 1:
        k = r // 2
        if k >= 0:
            return GVec.unit(v)
        if k >= -2:
            return e((-1, (1, 2 * k)), (1, (2, 2 * k + 1)))
        return e((-1, (2, 2 * k + 1)))
    k = (r + 1) // 2
    if k >= 0:
        return GVec.unit(v)
    return e((-1, (1, 2 * k - 2)))


@pytest.fixture(scope="module")
def cw_a2():
    return window("A2", depth=10)


@pytest.fixture(scope="module")
def cw_a3():
    return window("A3", depth=10)


class TestRankTwo:
    @pytest.fixture()
    def cw(self, cw_a2):
        return cw_a2

    def test_knit_matches_closed_form(self, cw):
        g = knit_gvectors(cw.quiver)
        for v in cw.quiver.vertices:
            assert g[v] == a2_expected(v), v

    def test_blocks_match_closed_form(self, cw):
        g = blocks_gvectors(cw)
        for v in cw.quiver.vertices:
            assert g[v] == a2_expected(v), v

    def test_braid_on_greens(self, cw):
        g = braid_gvectors(cw)
        assert set(g) == set(cw.quiver.greens())
        for v in g:
            assert g[v] == a2_expected(v), v


# ---------------------------------------------------------------------------
# rank-three worked values
# ---------------------------------------------------------------------------

A3_STABILIZED = {
    (1, 2): [(1, (1, 2))],
    (3, 2): [(1, (3, 2))],
    (2, 1): [(1, (2, 1))],
    (1, 0): [(1, (1, 0))],
    (3, 0): [(1, (3, 0))],
    (2, -1): [(1, (2, -1))],
    (3, -2): [(1, (3, -2))],
    (1, -2): [(-1, (1, -2)), (1, (2, -1))],
    (2, -3): [(-1, (1, -4)), (1, (3, -2))],
    (1, -4): [(-1, (1, -4)), (1, (2, -3))],
    (1, -6): [(-1, (2, -5)), (1, (3, -4))],
    (3, -4): [(-1, (1, -6))],
    (2, -5): [(-1, (1, -6)), (1, (3, -4))],
    (2, -7): [(-1, (2, -7))],
    (1, -8): [(-1, (2, -7)), (1, (3, -6))],
    (1, -10): [(-1, (3, -8))],
    (3, -6): [(-1, (1, -8))],
    (2, -9): [(-1, (2, -9))],
    (1, -12): [(-1, (3, -10))],
    (3, -8): [(-1, (1, -10))],
}


class TestRankThree:
    @pytest.fixture()
    def cw(self, cw_a3):
        return cw_a3

    def test_knit_values(self, cw):
        g = knit_gvectors(cw.quiver)
        for v, terms in A3_STABILIZED.items():
            assert g[v] == e(*terms), v

    def test_braid_values(self, cw):
        g = braid_gvectors(cw)
        expected = {
            (1, -2): [(-1, (1, -2)), (1, (2, -1))],
            (2, -3): [(-1, (1, -4)), (1, (3, -2))],
            (1, -6): [(-1, (2, -5)), (1, (3, -4))],
            (3, -4): [(-1, (1, -6))],
            (2, -7): [(-1, (2, -7))],
            (1, -10): [(-1, (3, -8))],
        }
        assert set(g) == set(expected)
        for v, terms in expected.items():
            assert g[v] == e(*terms), v

    def test_green_word_is_reduced_longest(self, cw):
        from clusterqq.rootsys import longest_element, weyl_from_word

        word = cw.green_word()
        w = weyl_from_word(rs("A3"), word)
        assert w == longest_element(rs("A3"))
        assert w.length == len(word)


# ---------------------------------------------------------------------------
# cross-validation of the three methods
# ---------------------------------------------------------------------------


class TestAgreement:
    @pytest.mark.parametrize("key", sorted(ORIENTATIONS))
    def test_knit_equals_blocks(self, key):
        cw = window(key)
        knit = knit_gvectors(cw.quiver)
        blocks = blocks_gvectors(cw)
        assert set(knit) == set(blocks)
        for v in knit:
            assert knit[v] == blocks[v], v

    @pytest.mark.parametrize("key", sorted(ORIENTATIONS))
    def test_braid_equals_knit_on_greens(self, key):
        cw = window(key)
        knit = knit_gvectors(cw.quiver)
        braid = braid_gvectors(cw)
        for v, g in braid.items():
            assert knit[v] == g, v

    @pytest.mark.parametrize("key", ["A2", "A3", "D4"])
    def test_sweeps_converge_to_limit(self, key):
        cw = window(key)
        # slice m stabilizes once the sweep count k satisfies m + k > 0,
        # so the deepest window slice controls the convergence time
        k = -min(cw.slice_range()) + 1
        assert sweep_gvectors(cw, k) == blocks_gvectors(cw)
        assert sweep_gvectors(cw, k + 3) == blocks_gvectors(cw)
        assert sweep_gvectors(cw, 1) != blocks_gvectors(cw)

    def test_green_word_reduced_longest_everywhere(self):
        from clusterqq.rootsys import longest_element, weyl_from_word

        for key in sorted(ORIENTATIONS):
            cw = window(key)
            word = cw.green_word()
            w = weyl_from_word(cw.datum.rs, word)
            assert w == longest_element(cw.datum.rs)
            assert w.length == len(word)


# ---------------------------------------------------------------------------
# mesh relation
# ---------------------------------------------------------------------------


class TestMesh:
    @pytest.mark.parametrize("key", sorted(ORIENTATIONS))
    def test_mesh_on_all_eligible_greens(self, key):
        cw = window(key)
        g = knit_gvectors(cw.quiver)
        pairs = mesh_pairs(cw.quiver)
        if cw.datum.rs.n > 1:
            assert pairs  # every non-trivial band has stacked greens
        for v in pairs:
            assert mesh_check(cw.quiver, g, v), v

    def test_a2_explicit_instance(self):
        cw = window("A2")
        g = knit_gvectors(cw.quiver)
        lhs = g[(1, -6)] + g[(1, -2)].shift(-2)
        rhs = g[(2, -3)].shift(-1)
        assert lhs == rhs == e((-1, (1, -6)))


# ---------------------------------------------------------------------------
# braid operators
# ---------------------------------------------------------------------------


@st.composite
def gvecs(draw, name):
    r = RootSystem.from_name(name)
    n_terms = draw(st.integers(1, 4))
    d = {}
    for _ in range(n_terms):
        i = draw(st.integers(1, r.n))
        a = draw(st.integers(-6, 6))
        d[(i, a)] = draw(st.integers(-3, 3))
    return GVec.from_dict(d)


class TestTheta:
    def test_basis_action(self):
        a3 = rs("A3")
        assert theta(a3, 1, GVec.unit((2, 5))) == GVec.unit((2, 5))
        assert theta(a3, 2, GVec.unit((2, -1))) == e(
            (-1, (2, -3)), (1, (1, -2)), (1, (3, -2))
        )

    def test_worked_chain(self):
        a3 = rs("A3")
        out = theta_word(a3, (1, 2, 1, 3, 2, 1), GVec.unit((1, 0))).shift(-2)
        assert out == e((-1, (3, -8)))

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_braid_relations(self, data):
        name = data.draw(st.sampled_from(["A2", "A3", "D4"]))
        r = RootSystem.from_name(name)
        g = data.draw(gvecs(name))
        i = data.draw(st.integers(1, r.n))
        j = data.draw(st.integers(1, r.n))
        if i == j:
            return
        if r.cartan[i - 1][j - 1] == -1:
            assert theta_word(r, (i, j, i), g) == theta_word(r, (j, i, j), g)
        else:
            assert theta_word(r, (i, j), g) == theta_word(r, (j, i), g)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_shift_equivariance(self, data):
        r = rs("A3")
        g = data.draw(gvecs("A3"))
        i = data.draw(st.integers(1, 3))
        s = data.draw(st.integers(-2, 2))
        assert theta(r, i, g.shift(s)) == theta(r, i, g).shift(s)
