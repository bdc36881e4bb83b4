"""Classical warm-start cuts: single-flip local search and a GW-style rounding pipeline.

The semidefinite relaxation is approximated with Burer-Monteiro coordinate
updates on unit vectors of low rank; this is a substitute for an exact SDP
solve, not the Goemans-Williamson algorithm itself.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import GraphFormatError, InvalidParameterError
from .graph import CutAssignment, Graph, as_bits, bits_to_str, cut_value

BM_TOL = 1e-7
BM_MAX_PASSES = 500
GW_TRIALS = 100


def _improves(gain: float, integral: bool) -> bool:
    return gain > 0 if integral else gain > 1e-12


def local_search(g: Graph, start) -> CutAssignment:
    """First-improvement single-flip ascent.

    Scans vertices in ascending order, flipping any vertex whose move strictly
    increases the cut, and repeats until a full pass makes no move.  The result
    is locally optimal: no single flip improves it.
    """
    bits = list(as_bits(start, g.n))
    adj = g.adjacency
    integral = g.weights_integral
    improved = True
    while improved:
        improved = False
        for j in range(g.n):
            # gain of flipping j: uncut incident edges become cut and vice versa
            gain = sum(w if bits[k] == bits[j] else -w for k, w in adj[j])
            if _improves(gain, integral):
                bits[j] ^= 1
                improved = True
    return CutAssignment.from_bits(g, bits)


def is_locally_optimal(g: Graph, bits) -> bool:
    b = as_bits(bits, g.n)
    for j in range(g.n):
        gain = sum(w if b[k] == b[j] else -w for k, w in g.adjacency[j])
        if _improves(gain, g.weights_integral):
            return False
    return True


def random_lo_cut(g: Graph, seed) -> CutAssignment:
    """Local search from a uniformly random bitstring drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    return local_search(g, rng.integers(0, 2, size=g.n))


class VectorSolution(NamedTuple):
    """Unit vectors (one row per vertex) and their relaxation value."""

    vectors: np.ndarray
    objective: float


def relaxation_value(g: Graph, vectors: np.ndarray) -> float:
    u, v, w = g.edge_arrays
    dots = np.einsum("ij,ij->i", vectors[u], vectors[v])
    return float(np.sum(w * (1.0 - dots) / 2.0))


def bm_relax(g: Graph, rank: int, seed, tol: float = BM_TOL, max_passes: int = BM_MAX_PASSES) -> VectorSolution:
    """Low-rank Max-Cut relaxation by block coordinate ascent.

    Each vertex vector is replaced by the negated, normalised weighted sum of
    its neighbours' vectors.  Stops once a full pass improves the objective by
    less than ``tol`` or after ``max_passes`` passes.  A zero neighbour sum
    leaves the vector unchanged.
    """
    if rank < 2:
        raise InvalidParameterError(f"rank must be >= 2, got {rank}")
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((g.n, rank))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    adj = [(np.array([k for k, _ in a], dtype=int), np.array([w for _, w in a])) for a in g.adjacency]
    value = relaxation_value(g, vecs)
    for _ in range(max_passes):
        for i, (nbrs, ws) in enumerate(adj):
            if nbrs.size == 0:
                continue
            s = ws @ vecs[nbrs]
            norm = np.linalg.norm(s)
            if norm > 0.0:
                vecs[i] = -s / norm
        new = relaxation_value(g, vecs)
        done = new - value < tol
        value = new
        if done:
            break
    return VectorSolution(vecs, value)


def hyperplane_round(sol: VectorSolution, g: Graph, trials: int, seed) -> CutAssignment:
    """Best of ``trials`` random-hyperplane roundings.

    A vertex goes to side 1 iff its vector has strictly positive projection on
    the normal; projections of exactly zero go to side 0.  Ties in cut value
    keep the earliest trial.
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    normals = rng.standard_normal((trials, sol.vectors.shape[1]))
    sides = (sol.vectors @ normals.T > 0.0).astype(np.int64)  # (n, trials)
    u, v, w = g.edge_arrays
    values = w @ (sides[u] != sides[v])
    best = int(np.argmax(values))
    return CutAssignment.from_bits(g, sides[:, best])


def gw_rank(n: int) -> int:
    return max(3, math.ceil(math.sqrt(2 * n)))


def gw_local_search_cut(g: Graph, seed, trials: int = GW_TRIALS) -> CutAssignment:
    """Relaxation, hyperplane rounding, then local search to a locally optimal cut."""
    relax_seed, round_seed = np.random.SeedSequence(seed).spawn(2)
    sol = bm_relax(g, gw_rank(g.n), relax_seed)
    rounded = hyperplane_round(sol, g, trials, round_seed)
    return local_search(g, rounded.bits)


# --------------------------------------------------------------------------- cut files


def format_cut(cut: CutAssignment) -> str:
    value = cut.value
    text = str(int(value)) if float(value).is_integer() else repr(float(value))
    return f"{cut.bitstring}\n{text}\n"


def write_cut(cut: CutAssignment, path) -> None:
    Path(path).write_text(format_cut(cut))


def read_cut(path, g: Graph | None = None) -> CutAssignment:
    """Read a cut file: a bitstring line and an optional value line.

    With ``g`` given the value is recomputed and checked against the file.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or len(lines) > 2:
        raise GraphFormatError("cut file must hold a bitstring and an optional value line")
    try:
        bits = as_bits(lines[0])
    except InvalidParameterError as exc:
        raise GraphFormatError(str(exc), 1) from None
    stated = None
    if len(lines) == 2:
        try:
            stated = float(lines[1])
        except ValueError:
            raise GraphFormatError(f"bad cut value {lines[1]!r}", 2) from None
    if g is None:
        if stated is None:
            raise GraphFormatError("cut file has no value line and no graph was given")
        return CutAssignment(bits, stated)
    cut = CutAssignment.from_bits(g, bits)
    if stated is not None and abs(stated - cut.value) > 1e-9 * max(1.0, abs(cut.value)):
        raise GraphFormatError(f"stated value {stated} != recomputed {cut.value} for {bits_to_str(bits)}", 2)
    return cut


__all__ = [
    "VectorSolution",
    "bm_relax",
    "cut_value",
    "gw_local_search_cut",
    "gw_rank",
    "hyperplane_round",
    "is_locally_optimal",
    "local_search",
    "random_lo_cut",
    "read_cut",
    "relaxation_value",
    "write_cut",
]
