import itertools
import math

import numpy as np
import pytest

from qaoa_lab.classical import (
    VectorSolution,
    bm_relax,
    gw_local_search_cut,
    gw_rank,
    hyperplane_round,
    is_locally_optimal,
    local_search,
    random_lo_cut,
    read_cut,
    relaxation_value,
    write_cut,
)
from qaoa_lab.errors import DimensionMismatchError, GraphFormatError, InvalidParameterError
from qaoa_lab.graph import CutAssignment, Graph, generate_regular, max_cut_brute_force

from oracles import enum_cut


def lo_cuts_by_enumeration(g):
    """All locally optimal bitstrings, found by checking every single flip."""
    out = []
    for bits in itertools.product((0, 1), repeat=g.n):
        c = enum_cut(g.edges, bits)
        flips = [enum_cut(g.edges, bits[:j] + (1 - bits[j],) + bits[j + 1:]) for j in range(g.n)]
        if all(c >= f for f in flips):
            out.append((bits, c))
    return out


def test_local_search_keeps_a_local_optimum(k4):
    assert local_search(k4, "0011") == CutAssignment((0, 0, 1, 1), 4.0)


def test_local_search_first_improvement_path(k4):
    # flip 0 (value 3), flip 1 (value 4), then no flip helps
    assert local_search(k4, "0000") == CutAssignment((1, 1, 0, 0), 4.0)


def test_local_search_single_edge(edge):
    res = local_search(edge, "00")
    assert res.value == 1.0 and res.bits in {(0, 1), (1, 0)}


def test_local_search_dimension(k4):
    with pytest.raises(DimensionMismatchError):
        local_search(k4, "000")


def test_all_lo_cuts_of_k4_are_optimal(k4):
    assert {c for _, c in lo_cuts_by_enumeration(k4)} == {4}
    for seed in range(30):
        assert random_lo_cut(k4, seed).value == 4.0


def test_random_lo_cut_deterministic():
    g = generate_regular(12, 3, 1)
    assert random_lo_cut(g, 99) == random_lo_cut(g, 99)


def test_local_search_output_matches_enumerated_lo_set():
    g = generate_regular(10, 3, 4)
    lo = {b for b, _ in lo_cuts_by_enumeration(g)}
    for seed in range(50):
        cut = random_lo_cut(g, seed)
        assert cut.bits in lo
        assert is_locally_optimal(g, cut.bits)


def test_local_search_monotone_and_bounded(rng):
    g = generate_regular(14, 3, 5)
    for _ in range(30):
        start = rng.integers(0, 2, 14)
        res = local_search(g, start)
        assert res.value >= enum_cut(g.edges, tuple(start))


def test_lo_two_thirds_bound():
    for seed in range(20):
        g = generate_regular(12, 3, seed)
        opt = max_cut_brute_force(g).value
        for s in range(5):
            assert random_lo_cut(g, 1000 * seed + s).value >= 2 / 3 * opt


def test_local_search_real_weights():
    g = Graph(4, [(0, 1, 0.5), (1, 2, 1.5), (2, 3, 0.25), (0, 3, 2.0)])
    res = local_search(g, "0000")
    assert is_locally_optimal(g, res.bits)
    assert res.value == pytest.approx(enum_cut(g.edges, res.bits))


# ----------------------------------------------------------------- relaxation


def test_bm_single_edge(edge):
    sol = bm_relax(edge, 2, seed=1)
    assert sol.objective == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(sol.vectors[0], -sol.vectors[1], atol=1e-6)


def test_bm_k4_upper_bounds_integral_optimum(k4):
    # the K4 relaxation optimum is exactly 4 (tetrahedron); the stopping rule
    # leaves a residual of the order of its 1e-7 per-pass tolerance
    for rank in (3, 4):
        sol = bm_relax(k4, rank, seed=rank)
        assert sol.objective >= 4.0 - 1e-6
        assert sol.objective <= 4.0 + 1e-9


def test_bm_invariants():
    g = generate_regular(16, 3, 2)
    sol = bm_relax(g, gw_rank(16), seed=3)
    np.testing.assert_allclose(np.linalg.norm(sol.vectors, axis=1), 1.0, atol=1e-9)
    assert sol.objective == pytest.approx(relaxation_value(g, sol.vectors), abs=1e-9)
    # explicit recomputation of the relaxation formula
    manual = sum(w * (1 - sol.vectors[u] @ sol.vectors[v]) / 2 for u, v, w in g.edges)
    assert sol.objective == pytest.approx(manual, abs=1e-9)
    assert sol.objective >= max_cut_brute_force(g).value - 1e-6


def test_bm_rank_precondition(k4):
    with pytest.raises(InvalidParameterError):
        bm_relax(k4, 1, seed=0)


def test_bm_isolated_vertex_keeps_vector():
    g = Graph(3, [(0, 1, 1.0)])
    sol = bm_relax(g, 3, seed=5)
    start = np.random.default_rng(5).standard_normal((3, 3))
    start /= np.linalg.norm(start, axis=1, keepdims=True)
    np.testing.assert_allclose(sol.vectors[2], start[2])


def test_gw_rank():
    assert gw_rank(4) == 3 and gw_rank(18) == 6 and gw_rank(28) == math.ceil(math.sqrt(56))


def test_hyperplane_round_single_edge(edge):
    sol = bm_relax(edge, 2, seed=0)
    for trials in (1, 5):
        assert hyperplane_round(sol, edge, trials, seed=trials).value == 1.0


def test_hyperplane_round_k4(k4):
    sol = bm_relax(k4, 3, seed=0)
    assert hyperplane_round(sol, k4, 64, seed=0).value >= 3.0


def test_hyperplane_round_trials_precondition(k4):
    sol = bm_relax(k4, 3, seed=0)
    with pytest.raises(InvalidParameterError):
        hyperplane_round(sol, k4, 0, seed=0)


def test_hyperplane_zero_projection_goes_to_side_zero(edge):
    sol = VectorSolution(np.zeros((2, 2)), 0.0)
    assert hyperplane_round(sol, edge, 3, seed=0).bits == (0, 0)


def test_hyperplane_round_deterministic():
    g = generate_regular(12, 3, 0)
    sol = bm_relax(g, 5, seed=1)
    assert hyperplane_round(sol, g, 100, 7) == hyperplane_round(sol, g, 100, 7)


def test_gw_pipeline_small_graphs(k4, k33):
    for seed in range(10):
        assert gw_local_search_cut(k4, seed).value == 4.0
        assert gw_local_search_cut(k33, seed).value == 9.0


def test_gw_pipeline_outputs_lo_cuts():
    rng = np.random.default_rng(0)
    for i in range(100):
        n = int(rng.choice([6, 8, 10, 12, 14, 16]))
        g = generate_regular(n, 3, int(rng.integers(2**32)))
        cut = gw_local_search_cut(g, i)
        assert is_locally_optimal(g, cut.bits)
        assert cut.value == enum_cut(g.edges, cut.bits)


def test_gw_not_worse_than_its_rounding():
    g = generate_regular(16, 3, 9)
    relax_seed, round_seed = np.random.SeedSequence(3).spawn(2)
    rounded = hyperplane_round(bm_relax(g, gw_rank(16), relax_seed), g, 100, round_seed)
    assert gw_local_search_cut(g, 3).value >= rounded.value


# ----------------------------------------------------------------- cut files


def test_cut_file_round_trip(tmp_path, k4):
    cut = CutAssignment.from_bits(k4, "0110")
    write_cut(cut, tmp_path / "c.txt")
    assert (tmp_path / "c.txt").read_text() == "0110\n4\n"
    assert read_cut(tmp_path / "c.txt", k4) == cut
    assert read_cut(tmp_path / "c.txt") == cut


def test_cut_file_value_optional(tmp_path, k4):
    (tmp_path / "c.txt").write_text("0001\n")
    assert read_cut(tmp_path / "c.txt", k4).value == 3.0
    with pytest.raises(GraphFormatError):
        read_cut(tmp_path / "c.txt")


def test_cut_file_wrong_value(tmp_path, k4):
    (tmp_path / "c.txt").write_text("0001\n4\n")
    with pytest.raises(GraphFormatError):
        read_cut(tmp_path / "c.txt", k4)
