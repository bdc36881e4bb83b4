"""Max-Cut instances: storage, random regular generation, exact oracles, file I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    GenerationError,
    GraphFormatError,
    InconsistentHeaderError,
    InvalidParameterError,
    SizeLimitError,
)

#: Largest n accepted by the exhaustive oracle and the cut-value table.
MAX_ENUM_QUBITS = 26

_CHUNK = 1 << 20


def as_bits(bits, n: int | None = None) -> tuple[int, ...]:
    """Normalise a bitstring ("0110"), sequence of 0/1 or array to a tuple of ints.

    Character/element ``j`` is the side of vertex ``j``.
    """
    if isinstance(bits, str):
        if any(c not in "01" for c in bits):
            raise InvalidParameterError(f"not a bitstring: {bits!r}")
        out = tuple(int(c) for c in bits)
    else:
        out = tuple(int(b) for b in np.asarray(bits).ravel())
        if any(b not in (0, 1) for b in out):
            raise InvalidParameterError("bits must be 0 or 1")
    if n is not None and len(out) != n:
        raise DimensionMismatchError(f"expected {n} bits, got {len(out)}")
    return out


def bits_to_str(bits) -> str:
    return "".join(str(b) for b in as_bits(bits))


def bits_to_index(bits) -> int:
    """Basis index with bit ``j`` (least significant first) equal to ``bits[j]``."""
    return sum(b << j for j, b in enumerate(as_bits(bits)))


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(n))


def complement(bits) -> tuple[int, ...]:
    return tuple(1 - b for b in as_bits(bits))


@dataclass(frozen=True)
class Graph:
    """Weighted undirected simple graph on vertices ``0..n-1``.

    Edges are canonicalised to ``u < v`` and sorted, so two graphs with the
    same edge set compare equal regardless of input order.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = field(default=())

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameterError(f"vertex count must be an integer >= 2, got {self.n}")
        canon = []
        seen = set()
        for e in self.edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1.0
            else:
                u, v, w = e
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidParameterError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise InvalidParameterError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v, w))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    def __reduce__(self):
        # keep cached tables out of pickles sent to worker processes
        return (Graph, (self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def weights_integral(self) -> bool:
        return all(float(w).is_integer() for _, _, w in self.edges)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            return (np.zeros(0, dtype=np.int64),) * 2 + (np.zeros(0),)
        u, v, w = zip(*self.edges)
        return np.array(u, dtype=np.int64), np.array(v, dtype=np.int64), np.array(w, dtype=float)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(a) for a in adj)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def neighbors(self, j: int) -> list[int]:
        return [k for k, _ in self.adjacency[j]]

    @cached_property
    def cut_table(self) -> np.ndarray:
        """Cut value of every basis index ``x`` (bit ``j`` of ``x`` = side of vertex ``j``).

        int64 for integral weights so that comparisons are exact.
        """
        if self.n > MAX_ENUM_QUBITS:
            raise SizeLimitError(f"n={self.n} exceeds the enumeration limit {MAX_ENUM_QUBITS}")
        table = _cut_values(self, np.arange(1 << self.n, dtype=np.int64))
        table.flags.writeable = False
        return table


def _cut_values(g: Graph, xs: np.ndarray) -> np.ndarray:
    integral = g.weights_integral
    out = np.zeros(xs.shape, dtype=np.int64 if integral else float)
    for u, v, w in g.edges:
        crossed = ((xs >> u) ^ (xs >> v)) & 1
        out += crossed * (int(w) if integral else w)
    return out


class CutAssignment(NamedTuple):
    """A partition of the vertices with its cached cut value."""

    bits: tuple[int, ...]
    value: float

    @classmethod
    def from_bits(cls, g: Graph, bits) -> "CutAssignment":
        b = as_bits(bits, g.n)
        return cls(b, cut_value(g, b))

    @property
    def bitstring(self) -> str:
        return bits_to_str(self.bits)

    @property
    def index(self) -> int:
        return bits_to_index(self.bits)


class MaxCutResult(NamedTuple):
    value: float
    optima: frozenset


def cut_value(g: Graph, bits) -> float:
    """Total weight of edges whose endpoints lie on opposite sides."""
    b = as_bits(bits, g.n)
    return float(sum(w for u, v, w in g.edges if b[u] != b[v]))


def max_cut_brute_force(g: Graph) -> MaxCutResult:
    """Exact Max-Cut by enumeration of the ``2**(n-1)`` assignments with vertex ``n-1`` on side 0.

    ``optima`` holds every maximising bit tuple together with its complement.
    Integral weights are compared exactly, real weights within 1e-12 relative.
    """
    n = g.n
    if n > MAX_ENUM_QUBITS:
        raise SizeLimitError(f"n={n} exceeds the brute-force limit {MAX_ENUM_QUBITS}")
    total = 1 << (n - 1)
    best = None
    winners: list[int] = []
    for start in range(0, total, _CHUNK):
        xs = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        vals = _cut_values(g, xs)
        top = vals.max()
        if best is None or _better(top, best, g.weights_integral):
            best = top
            winners = []
        winners.extend(xs[_ties(vals, best, g.weights_integral)].tolist())
    full = (1 << n) - 1
    optima = set()
    for x in winners:
        optima.add(index_to_bits(x, n))
        optima.add(index_to_bits(x ^ full, n))
    return MaxCutResult(float(best), frozenset(optima))


def _better(a, b, integral: bool) -> bool:
    if integral:
        return a > b
    return a > b + 1e-12 * max(abs(b), 1.0)


def _ties(vals: np.ndarray, best, integral: bool) -> np.ndarray:
    if integral:
        return vals == best
    return vals >= best - 1e-12 * max(abs(best), 1.0)


def generate_regular(n: int, d: int, seed: int, max_attempts: int = 10_000) -> Graph:
    """Uniform pairing of ``n*d`` stubs, rejecting pairings with loops or repeated edges.

    Deterministic in ``seed``; all weights are 1.0.
    """
    if d < 1 or n <= d or (n * d) % 2:
        raise InvalidParameterError(f"no simple {d}-regular graph on {n} vertices (need n*d even, n > d >= 1)")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_attempts):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        pairs.sort(axis=1)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = pairs[:, 0] * n + pairs[:, 1]
        if np.unique(keys).size != keys.size:
            continue
        return Graph(n, tuple((int(u), int(v), 1.0) for u, v in pairs))
    raise GenerationError(f"no simple {d}-regular pairing on n={n} after {max_attempts} attempts")


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v, 1.0) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((u, a + v, 1.0) for u in range(a) for v in range(b)))


# --------------------------------------------------------------------------- I/O


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {_fmt_weight(w)}")
    return "\n".join(lines) + "\n"


def _fmt_weight(w: float) -> str:
    return str(int(w)) if w.is_integer() else repr(w)


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m``, then ``u v [w]`` per line, ``#`` comments."""
    header = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError("header must be 'n m'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphFormatError(f"bad header {line!r}", lineno) from None
            if header[0] < 2 or header[1] < 0:
                raise GraphFormatError(f"bad header {line!r}", lineno)
            continue
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'u v [w]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"non-numeric field in {line!r}", lineno) from None
        if not math.isfinite(w):
            raise GraphFormatError(f"non-finite weight in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphFormatError(f"vertex out of range [0, {header[0]})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append((u, v, w))
    if header is None:
        raise GraphFormatError("empty graph file")
    if len(edges) != header[1]:
        raise InconsistentHeaderError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], tuple(edges))


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())

