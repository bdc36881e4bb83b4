"""Figures of merit computed from an output statevector."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .errors import InvalidParameterError
from .graph import CutAssignment, Graph, as_bits, bits_to_index
from .sim import _check

#: Margin for "strictly better" when cut values are real rather than integral.
REAL_CUT_MARGIN = 1e-9


def probabilities(state: np.ndarray) -> np.ndarray:
    """Measurement distribution, renormalised so that it sums to one.

    Renormalising removes rounding drift in the norm and makes a basis state
    report its cut value exactly.
    """
    probs = np.abs(state) ** 2
    return probs / probs.sum(axis=-1, keepdims=True)


def expectation(state: np.ndarray, g: Graph) -> float | np.ndarray:
    """Expected cut value ``sum_x |c_x|^2 cut(x)``; batched over leading axes."""
    _check(state, g.n)
    out = probabilities(state) @ g.cut_table
    return float(out) if np.ndim(out) == 0 else out


def approximation_ratio(value: float, max_cut: float) -> float:
    if not max_cut > 0:
        raise InvalidParameterError(f"max_cut must be positive, got {max_cut}")
    return value / max_cut


def gsp(state: np.ndarray, optima) -> float:
    """Ground-state probability: total probability on the given optimal bitstrings."""
    optima = list(optima)
    if not optima:
        raise InvalidParameterError("optima set is empty")
    n = len(as_bits(optima[0]))
    _check(state, n)
    idx = np.fromiter((bits_to_index(b) for b in optima), dtype=np.int64, count=len(optima))
    return float(probabilities(state)[..., np.unique(idx)].sum(axis=-1))


def better_mask(g: Graph, reference: float) -> np.ndarray:
    """Basis states whose cut strictly exceeds ``reference``."""
    table = g.cut_table
    if g.weights_integral:
        return table > round(reference)
    return table > reference + REAL_CUT_MARGIN


def bsp(state: np.ndarray, g: Graph, b) -> float | np.ndarray:
    """Better Solution Probability: mass on cuts strictly larger than ``cut(b)``.

    ``b`` may be a :class:`CutAssignment` or a bit sequence.
    """
    _check(state, g.n)
    cut = b if isinstance(b, CutAssignment) else CutAssignment.from_bits(g, b)
    out = probabilities(state)[..., better_mask(g, cut.value)].sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class MetricReport:
    expectation: float
    bsp: float
    reference_cut: float
    approximation_ratio: float | None = None
    gsp: float | None = None
    max_cut: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def report(state: np.ndarray, g: Graph, b, max_cut: float | None = None, optima=None) -> MetricReport:
    """All metrics at once; ratio and GSP only when the optimum is supplied."""
    cut = b if isinstance(b, CutAssignment) else CutAssignment.from_bits(g, b)
    value = expectation(state, g)
    return MetricReport(
        expectation=value,
        bsp=bsp(state, g, cut),
        reference_cut=cut.value,
        approximation_ratio=approximation_ratio(value, max_cut) if max_cut is not None else None,
        gsp=gsp(state, optima) if optima else None,
        max_cut=max_cut,
    )
