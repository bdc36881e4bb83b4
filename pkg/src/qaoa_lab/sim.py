"""Dense statevector simulation of warm-started QAOA circuits.

Basis convention: bit ``j`` of a basis index (least significant first) is the
measured value of qubit ``j``.  States are plain complex128 numpy arrays of
length ``2**n``; a leading batch axis is accepted by the internal kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError, SizeLimitError
from .graph import MAX_ENUM_QUBITS, Graph, as_bits

MIXERS = ("aligned", "pauli_x")

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WarmStart:
    """Classical bitstring plus tilt angle in degrees (0 = basis state, 90 = uniform)."""

    bits: tuple[int, ...]
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "bits", as_bits(self.bits))
        theta = float(self.theta)
        if not 0.0 <= theta <= 180.0 or math.isnan(theta):
            raise InvalidParameterError(f"tilt angle must lie in [0, 180] degrees, got {self.theta}")
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def theta_rad(self) -> float:
        return math.radians(self.theta)

    def axes(self) -> np.ndarray:
        """Bloch axis of every qubit, shape (n, 3)."""
        t = self.theta_rad
        z = np.where(np.array(self.bits) == 0, math.cos(t), -math.cos(t))
        return np.column_stack([np.full(self.n, math.sin(t)), np.zeros(self.n), z])


@dataclass(frozen=True)
class CircuitParams:
    """Cost angles ``gammas`` and mixer angles ``betas``, one of each per layer."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in np.atleast_1d(self.gammas))
        b = tuple(float(x) for x in np.atleast_1d(self.betas))
        if len(g) != len(b) or not g:
            raise InvalidParameterError(f"need equal nonzero numbers of gammas and betas, got {len(g)}/{len(b)}")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "CircuitParams":
        x = np.asarray(x, dtype=float)
        p = x.size // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    def wrapped(self, wrap_gamma: bool = True) -> "CircuitParams":
        """Reduce betas into [0, pi) and, if requested, gammas into [0, 2 pi)."""
        g = tuple(_wrap(x, TWO_PI) for x in self.gammas) if wrap_gamma else self.gammas
        return CircuitParams(g, tuple(_wrap(x, math.pi) for x in self.betas))


def _wrap(x: float, period: float) -> float:
    r = math.fmod(x, period)
    if r < 0.0:
        r += period
    return 0.0 if r >= period else r


def qubit_count(state: np.ndarray) -> int:
    size = state.shape[-1]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise DimensionMismatchError(f"state length {size} is not a power of two")
    return n


def _check(state: np.ndarray, n: int) -> None:
    if qubit_count(state) != n:
        raise DimensionMismatchError(f"state has {qubit_count(state)} qubits, expected {n}")


def basis_state(n: int, index: int) -> np.ndarray:
    if n > MAX_ENUM_QUBITS:
        raise SizeLimitError(f"n={n} exceeds the simulator limit {MAX_ENUM_QUBITS}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


def uniform_state(n: int) -> np.ndarray:
    if n > MAX_ENUM_QUBITS:
        raise SizeLimitError(f"n={n} exceeds the simulator limit {MAX_ENUM_QUBITS}")
    return np.full(1 << n, 1.0 / math.sqrt(1 << n), dtype=complex)


def qubit_amplitudes(bit: int, theta_rad: float) -> np.ndarray:
    """Single-qubit amplitudes of the tilted state for one classical bit."""
    c, s = math.cos(theta_rad / 2), math.sin(theta_rad / 2)
    return np.array([c, s]) if bit == 0 else np.array([s, c])


def warm_start_state(ws: WarmStart) -> np.ndarray:
    """Product state with every qubit tilted ``theta`` away from the pole selected by its bit."""
    if ws.n > MAX_ENUM_QUBITS:
        raise SizeLimitError(f"n={ws.n} exceeds the simulator limit {MAX_ENUM_QUBITS}")
    t = ws.theta_rad
    psi = np.ones(1)
    for b in ws.bits:
        # later qubits are more significant
        psi = np.kron(qubit_amplitudes(b, t), psi)
    return psi.astype(complex)


def _apply_1q(state: np.ndarray, j: int, u: np.ndarray) -> None:
    """In place: apply 2x2 ``u`` (or a batch ``(B, 2, 2)`` matching state's batch axis) to qubit ``j``."""
    n = qubit_count(state)
    lead = state.shape[:-1]
    view = state.reshape(*lead, 1 << (n - 1 - j), 2, 1 << j)
    if u.ndim == 3:
        u = u.reshape(u.shape[0], *([1] * (view.ndim - 3)), 2, 2)
    view[...] = u @ view


def rotation(axis: np.ndarray, beta) -> np.ndarray:
    """``exp(-i beta axis.sigma)`` for a real unit ``axis`` (x, y, z); batched over ``beta``."""
    beta = np.asarray(beta, dtype=float)
    nx, ny, nz = axis
    c, s = np.cos(beta)[..., None, None], np.sin(beta)[..., None, None]
    ndots = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]])
    return c * np.eye(2) - 1j * s * ndots


def apply_cost(state: np.ndarray, g: Graph, gamma) -> np.ndarray:
    """Multiply each amplitude by ``exp(-i gamma cut(x))``.  In place; returns ``state``.

    ``gamma`` may be an array matching a leading batch axis of ``state``.
    """
    _check(state, g.n)
    state *= cost_phases(g, gamma)
    return state


def cost_phases(g: Graph, gamma) -> np.ndarray:
    table = g.cut_table
    gamma = np.asarray(gamma, dtype=float)
    if g.weights_integral:
        levels = np.exp(-1j * gamma[..., None] * np.arange(int(table.max()) + 1))
        if gamma.ndim == 0:
            return levels[table]
        return np.take_along_axis(levels, np.broadcast_to(table, gamma.shape + table.shape), axis=-1)
    return np.exp(-1j * gamma[..., None] * table) if gamma.ndim else np.exp(-1j * float(gamma) * table)


def aligned_mixer_matrices(ws: WarmStart, beta) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit mixer unitaries for bit 0 and bit 1 qubits."""
    t = ws.theta_rad
    u0 = rotation((math.sin(t), 0.0, math.cos(t)), beta)
    u1 = rotation((math.sin(t), 0.0, -math.cos(t)), beta)
    return u0, u1


def apply_aligned_mixer(state: np.ndarray, ws: WarmStart, beta) -> np.ndarray:
    """Rotate every qubit by ``beta`` about its own warm-start Bloch axis.  In place."""
    _check(state, ws.n)
    u0, u1 = aligned_mixer_matrices(ws, beta)
    for j, b in enumerate(ws.bits):
        _apply_1q(state, j, u1 if b else u0)
    return state


def apply_x_mixer(state: np.ndarray, beta) -> np.ndarray:
    """Apply ``exp(-i beta X)`` to every qubit.  In place."""
    u = rotation((1.0, 0.0, 0.0), beta)
    for j in range(qubit_count(state)):
        _apply_1q(state, j, u)
    return state


def apply_mixer(state: np.ndarray, ws: WarmStart, beta, mixer: str) -> np.ndarray:
    if mixer == "aligned":
        return apply_aligned_mixer(state, ws, beta)
    if mixer == "pauli_x":
        _check(state, ws.n)
        return apply_x_mixer(state, beta)
    raise InvalidParameterError(f"unknown mixer {mixer!r}; expected one of {MIXERS}")


def qaoa_state(g: Graph, ws: WarmStart, params: CircuitParams, mixer: str = "aligned") -> np.ndarray:
    """Warm start, then ``p`` layers of cost phase followed by mixer."""
    if ws.n != g.n:
        raise DimensionMismatchError(f"warm start has {ws.n} qubits, graph has {g.n} vertices")
    if mixer not in MIXERS:
        raise InvalidParameterError(f"unknown mixer {mixer!r}; expected one of {MIXERS}")
    psi = warm_start_state(ws)
    for gamma, beta in zip(params.gammas, params.betas):
        apply_cost(psi, g, gamma)
        apply_mixer(psi, ws, beta, mixer)
    return psi


def qaoa_states_p1(g: Graph, ws: WarmStart, gamma: float, betas: np.ndarray, mixer: str = "aligned") -> np.ndarray:
    """Single-layer output states for one ``gamma`` and a vector of ``betas``; shape (len(betas), 2**n)."""
    psi = apply_cost(warm_start_state(ws), g, gamma)
    batch = np.repeat(psi[None, :], len(betas), axis=0)
    return apply_mixer(batch, ws, np.asarray(betas, dtype=float), mixer)


def dump_state_csv(state: np.ndarray, path) -> None:
    """Write ``index,re,im`` rows (diagnostic only)."""
    with open(path, "w") as fh:
        fh.write("index,re,im\n")
        for i, c in enumerate(state):
            fh.write(f"{i},{float(c.real)!r},{float(c.imag)!r}\n")


def load_state_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    psi = np.zeros(int(data[:, 0].max()) + 1, dtype=complex)
    psi[data[:, 0].astype(int)] = data[:, 1] + 1j * data[:, 2]
    return psi
