"""Circuit-parameter search: grids, simplex refinement, basin-hopping and region seeds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import metrics
from .errors import InvalidParameterError
from .graph import CutAssignment, Graph
from .lightcone import MAX_CONE_QUBITS, LightConeExpectation, cone_width
from .sim import MIXERS, TWO_PI, CircuitParams, WarmStart, qaoa_state, qaoa_states_p1

OBJECTIVES = ("expectation", "bsp")
STRATEGIES = ("basin_hop", "grid", "grid_then_refine", "region_seeds", "region_seeds_then_refine")

# Representative single-layer (gamma, beta) pairs of the three parameter regions.
TATE_REGIONS = ((0.5634, 0.486), (3.142, 1.5705), (2.5144, 0.3996))

DEFAULT_HOPS = {"expectation": 50, "bsp": 200}


def tate_region_seeds() -> list[CircuitParams]:
    return [CircuitParams((gamma,), (beta,)) for gamma, beta in TATE_REGIONS]


class Objective:
    """Quantity to maximise for a fixed (graph, warm start, mixer, depth).

    Depth-one expectation objectives on graphs with narrow light cones are
    evaluated edge-locally (:mod:`qaoa_lab.lightcone`); everything else runs
    the dense statevector.  Evaluation is deterministic and side-effect free.
    """

    def __init__(self, kind: str, g: Graph, ws: WarmStart, mixer: str = "aligned", p: int = 1,
                 use_lightcone: bool = True):
        if kind not in OBJECTIVES:
            raise InvalidParameterError(f"unknown objective {kind!r}; expected one of {OBJECTIVES}")
        if mixer not in MIXERS:
            raise InvalidParameterError(f"unknown mixer {mixer!r}; expected one of {MIXERS}")
        if p < 1:
            raise InvalidParameterError(f"depth must be >= 1, got {p}")
        self.kind, self.g, self.ws, self.mixer, self.p = kind, g, ws, mixer, p
        self.reference = CutAssignment.from_bits(g, ws.bits)
        self._lightcone = None
        if kind == "expectation" and p == 1 and use_lightcone and cone_width(g) <= MAX_CONE_QUBITS:
            self._lightcone = LightConeExpectation(g, ws, mixer)
        self.wrap_gamma = g.weights_integral

    def __repr__(self):
        return f"Objective({self.kind!r}, n={self.g.n}, theta={self.ws.theta}, mixer={self.mixer!r}, p={self.p})"

    def _score(self, states: np.ndarray):
        if self.kind == "expectation":
            return metrics.expectation(states, self.g)
        return metrics.bsp(states, self.g, self.reference)

    def __call__(self, params) -> float:
        if not isinstance(params, CircuitParams):
            params = CircuitParams.from_vector(params)
        if params.p != self.p:
            raise InvalidParameterError(f"objective has depth {self.p}, params have {params.p}")
        if self._lightcone is not None:
            return self._lightcone(params.gammas[0], params.betas[0])
        return self._score(qaoa_state(self.g, self.ws, params, self.mixer))

    def grid(self, gammas, betas) -> np.ndarray:
        """Values on ``gammas`` x ``betas`` for depth one; shape (len(gammas), len(betas))."""
        if self.p != 1:
            raise InvalidParameterError("grid evaluation is defined for depth 1 only")
        gammas = np.asarray(gammas, dtype=float)
        betas = np.asarray(betas, dtype=float)
        if self._lightcone is not None:
            return self._lightcone.grid(gammas, betas)
        return np.array([self._score(qaoa_states_p1(self.g, self.ws, gm, betas, self.mixer)) for gm in gammas])

    def wrap(self, params: CircuitParams) -> CircuitParams:
        return params.wrapped(self.wrap_gamma)


@dataclass
class OptResult:
    params: CircuitParams
    value: float
    evals: int
    trace: list | None = None
    grid: np.ndarray | None = field(default=None, repr=False)


@dataclass
class OptimizerConfig:
    """Tunable knobs; ``iterations=None`` picks the per-objective basin-hopping default."""

    strategy: str = "grid_then_refine"
    iterations: int | None = None
    grid_gamma: int = 40
    grid_beta: int = 40
    tol: float = 1e-8
    max_evals: int = 2000
    simplex_step: float = 0.05
    sigma_gamma: float = 1.5
    sigma_beta: float = 0.75
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidParameterError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")

    def hops(self, kind: str) -> int:
        return self.iterations if self.iterations is not None else DEFAULT_HOPS[kind]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameterError(f"unknown optimizer settings: {sorted(unknown)}")
        return cls(**data)


def _counted(obj: Objective) -> tuple[Callable[[np.ndarray], float], list[int]]:
    count = [0]

    def f(x):
        count[0] += 1
        value = obj(CircuitParams.from_vector(x))
        if not math.isfinite(value):
            raise FloatingPointError(f"objective returned {value} at {x}")
        return value

    return f, count


def grid_centers(grid_gamma: int, grid_beta: int) -> tuple[np.ndarray, np.ndarray]:
    gammas = (np.arange(grid_gamma) + 0.5) * (TWO_PI / grid_gamma)
    betas = (np.arange(grid_beta) + 0.5) * (math.pi / grid_beta)
    return gammas, betas


def grid_search(obj: Objective, grid_gamma: int = 40, grid_beta: int = 40) -> OptResult:
    """Best cell centre of a uniform grid over one period of (gamma, beta).

    Ties go to the lowest gamma index, then the lowest beta index.  The full
    value grid is attached as ``result.grid``.
    """
    if grid_gamma < 2 or grid_beta < 2:
        raise InvalidParameterError("grid sizes must be >= 2")
    if obj.p != 1:
        raise InvalidParameterError("grid search is defined for depth 1 only")
    gammas, betas = grid_centers(grid_gamma, grid_beta)
    values = obj.grid(gammas, betas)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    params = CircuitParams((gammas[i],), (betas[j],))
    return OptResult(params, float(values[i, j]), values.size, grid=values)


def local_refine(obj: Objective, seed_params: CircuitParams, tol: float = 1e-8, max_evals: int = 2000,
                 step: float = 0.05) -> OptResult:
    """Nelder-Mead ascent from ``seed_params`` (2p+1 simplex vertices).

    Stops once the spread of simplex values drops below ``tol`` or after
    ``max_evals`` evaluations.  The result is never worse than the seed.
    """
    seed_params = obj.wrap(seed_params)
    f, count = _counted(obj)
    x0 = seed_params.to_vector()
    start_value = f(x0)
    simplex = np.vstack([x0, x0 + step * np.eye(x0.size)])
    res = minimize(lambda x: -f(x), x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": np.inf, "fatol": tol,
                            "maxfev": max_evals, "adaptive": False})
    best, best_value = seed_params, start_value
    if -res.fun > start_value:
        best = obj.wrap(CircuitParams.from_vector(res.x))
        best_value = f(best.to_vector())
        if best_value < start_value:
            # wrapping cost more than the gain
            best, best_value = seed_params, start_value
    return OptResult(best, best_value, count[0], trace=[(seed_params, start_value), (best, best_value)])


def _random_params(rng: np.random.Generator, p: int) -> CircuitParams:
    return CircuitParams(tuple(rng.uniform(0.0, TWO_PI, p)), tuple(rng.uniform(0.0, math.pi, p)))


def basin_hop(obj: Objective, iterations: int, seed, config: OptimizerConfig | None = None) -> OptResult:
    """Perturb / refine / Metropolis-accept loop, returning the best point ever seen.

    The first iteration refines a uniformly random start; each later one
    perturbs the current point with Gaussian noise before refining.
    ``trace`` holds the best-so-far after every iteration.
    """
    if iterations < 1:
        raise InvalidParameterError(f"iterations must be >= 1, got {iterations}")
    cfg = config or OptimizerConfig()
    rng = np.random.default_rng(seed)
    p = obj.p
    sigma = np.array([cfg.sigma_gamma] * p + [cfg.sigma_beta] * p)

    def refine(params):
        return local_refine(obj, params, cfg.tol, cfg.max_evals, cfg.simplex_step)

    current = refine(_random_params(rng, p))
    best = current
    evals = current.evals
    trace = [(best.params, best.value)]
    for _ in range(iterations - 1):
        trial = CircuitParams.from_vector(current.params.to_vector() + sigma * rng.standard_normal(2 * p))
        cand = refine(trial)
        evals += cand.evals
        delta = cand.value - current.value
        if delta >= 0 or rng.random() < math.exp(delta / cfg.temperature):
            current = cand
        if cand.value > best.value:
            best = cand
        trace.append((best.params, best.value))
    return OptResult(best.params, best.value, evals, trace=trace)


def optimize(obj: Objective, strategy: str | None = None, config: OptimizerConfig | None = None,
             seed=None) -> OptResult:
    """Run one of the named search pipelines.

    ``basin_hop``; ``grid``; ``grid_then_refine`` (refine the best cell);
    ``region_seeds`` (best of the three fixed region parameters);
    ``region_seeds_then_refine`` (refine each region seed, keep the best).
    ``strategy`` and ``seed`` override the config's values when given.
    """
    cfg = config or OptimizerConfig()
    strategy = strategy or cfg.strategy
    seed = cfg.seed if seed is None else seed
    if strategy not in STRATEGIES:
        raise InvalidParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")

    if strategy == "basin_hop":
        return basin_hop(obj, cfg.hops(obj.kind), seed, cfg)

    if strategy in ("grid", "grid_then_refine"):
        coarse = grid_search(obj, cfg.grid_gamma, cfg.grid_beta)
        if strategy == "grid":
            return coarse
        fine = local_refine(obj, coarse.params, cfg.tol, cfg.max_evals, cfg.simplex_step)
        best = fine if fine.value >= coarse.value else coarse
        return OptResult(best.params, best.value, coarse.evals + fine.evals,
                         trace=[(coarse.params, coarse.value), (best.params, best.value)], grid=coarse.grid)

    if obj.p != 1:
        raise InvalidParameterError("region seeds are single-layer parameters")
    seeds = tate_region_seeds()
    if strategy == "region_seeds":
        values = [obj(s) for s in seeds]
        k = int(np.argmax(values))
        return OptResult(seeds[k], values[k], len(seeds), trace=list(zip(seeds, values)))

    runs = [local_refine(obj, s, cfg.tol, cfg.max_evals, cfg.simplex_step) for s in seeds]
    k = int(np.argmax([r.value for r in runs]))
    return OptResult(runs[k].params, runs[k].value, sum(r.evals for r in runs),
                     trace=[(r.params, r.value) for r in runs])
